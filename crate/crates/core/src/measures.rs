//! Entanglement and coherence quantifiers.
//!
//! The general routines work on any state in the product basis; the
//! `HalfSpinAnalytics` and `SpinOneAnalytics` types carry the closed forms for
//! `s = 1/2` and `s = 1` that the general routines are checked against.
//! Entropies are in bits.

use thiserror::Error;

use crate::linalg::{eig_sym_dense, partial_transpose, trace_norm_negativity, SymMatrix};
use crate::model::{build_hamiltonian, DerivedScales, SpinPairParams};
use crate::scalar::{xlog2x, Real};
use crate::thermal::DensityMatrix;

const NORM_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("operation requires 2s = {expected}, got 2s = {found}")]
    WrongSpin { expected: u32, found: u32 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("concurrence {0} outside [0, 1]")]
    ConcurrenceOutOfRange(f64),
    #[error("state is not normalized (squared norm {0})")]
    Unnormalized(f64),
    #[error("density matrix has trace {0}")]
    BadTrace(f64),
    #[error("density matrix is not positive semidefinite (min eigenvalue {0})")]
    NotPositive(f64),
    #[error("temperature must be positive (got {0})")]
    NonPositiveTemperature(f64),
}

fn f64_of<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Von Neumann entropy (bits) of a symmetric matrix, eigenvalues below the
/// clip floor taken as zero.
pub fn von_neumann_entropy<T: Real>(m: &SymMatrix<T>) -> T {
    entropy_of_spectrum(eig_sym_dense(m).eigenvalues())
}

/// Shannon entropy (bits) of a probability vector.
pub fn entropy_of_spectrum<T: Real>(p: &[T]) -> T {
    let floor = T::clip_floor();
    -p.iter()
        .map(|&x| if x < floor { T::zero() } else { xlog2x(x) })
        .sum::<T>()
}

/// Concurrence `J/Δ` of the `M = 0` eigenstates `|Ψ±⟩` of the spin-1/2 pair.
pub fn concurrence_pure_psi<T: Real>(p: &SpinPairParams<T>) -> Result<T, MeasureError> {
    if p.two_s != 1 {
        return Err(MeasureError::WrongSpin { expected: 1, found: p.two_s });
    }
    let s = p.scales();
    Ok(p.j.abs() / s.delta)
}

/// Wootters concurrence of a real two-qubit state.
///
/// With `ρ* = ρ` and `F = σy⊗σy` real symmetric, the `λ_i` are the singular
/// values of `√ρ F √ρ`, i.e. the absolute eigenvalues of a symmetric matrix.
/// This avoids square roots of the tiny eigenvalues of `√ρ ρ̃ √ρ`.
pub fn concurrence_wootters<T: Real>(rho: &DensityMatrix<T>) -> Result<T, MeasureError> {
    if rho.dim() != 4 {
        return Err(MeasureError::DimensionMismatch { expected: 4, found: rho.dim() });
    }
    // σy⊗σy maps |00⟩ ↔ −|11⟩ and |01⟩ ↔ |10⟩.
    let mut flip = SymMatrix::zeros(4);
    flip.set(0, 3, -T::one());
    flip.set(1, 2, T::one());
    let sqrt_rho = eig_sym_dense(rho.matrix()).map(|l| l.max(T::zero()).sqrt());
    let r = sqrt_rho.sandwich(&flip);
    let mut lambdas: Vec<T> = eig_sym_dense(&r).eigenvalues().iter().map(|l| l.abs()).collect();
    lambdas.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    let c = lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3];
    Ok(c.max(T::zero()).min(T::one()))
}

/// Binary entropy of `(1 ± √(1 − C²))/2`.
pub fn eof_from_concurrence<T: Real>(c: T) -> Result<T, MeasureError> {
    let slack = T::lit(1e-12);
    if !(c >= -slack && c <= T::one() + slack) {
        return Err(MeasureError::ConcurrenceOutOfRange(f64_of(c)));
    }
    let c = c.max(T::zero()).min(T::one());
    let root = (T::one() - c * c).sqrt();
    let half = T::lit(0.5);
    let p = half * (T::one() + root);
    let q = half * (T::one() - root);
    Ok(-(xlog2x(p) + xlog2x(q)))
}

fn check_dim<T: Real>(dim: usize, two_s: u32) -> Result<usize, MeasureError> {
    let n = two_s as usize + 1;
    if dim != n * n {
        return Err(MeasureError::DimensionMismatch { expected: n * n, found: dim });
    }
    Ok(n)
}

/// `N = (‖ρ^{t2}‖₁ − 1)/2`, as minus the sum of negative eigenvalues of the
/// partial transpose.
pub fn negativity<T: Real>(rho: &DensityMatrix<T>, two_s: u32) -> Result<T, MeasureError> {
    let n = check_dim::<T>(rho.dim(), two_s)?;
    let pt = partial_transpose(rho.matrix(), n, n).expect("dimension checked");
    Ok(trace_norm_negativity(&pt))
}

/// Squared Schmidt coefficients (eigenvalues of the site-1 marginal).
fn schmidt_probabilities<T: Real>(state: &[T], two_s: u32) -> Result<Vec<T>, MeasureError> {
    let n = check_dim::<T>(state.len(), two_s)?;
    let norm: T = state.iter().map(|&x| x * x).sum();
    if (norm - T::one()).abs() > T::lit(NORM_TOL) {
        return Err(MeasureError::Unnormalized(f64_of(norm)));
    }
    let rho1 = SymMatrix::from_upper_fn(n, |a, a2| {
        (0..n).map(|b| state[a * n + b] * state[a2 * n + b]).sum::<T>()
    });
    Ok(eig_sym_dense(&rho1)
        .eigenvalues()
        .iter()
        .map(|&l| l.max(T::zero()))
        .collect())
}

/// Pure-state negativity `½[(Tr √ρ₁)² − 1]`.
pub fn negativity_pure<T: Real>(state: &[T], two_s: u32) -> Result<T, MeasureError> {
    let p = schmidt_probabilities(state, two_s)?;
    let tr_sqrt: T = p.iter().map(|x| x.sqrt()).sum();
    Ok((T::lit(0.5) * (tr_sqrt * tr_sqrt - T::one())).max(T::zero()))
}

/// Entanglement entropy (bits) of a pure state.
pub fn entanglement_entropy_pure<T: Real>(state: &[T], two_s: u32) -> Result<T, MeasureError> {
    Ok(entropy_of_spectrum(&schmidt_probabilities(state, two_s)?))
}

/// Relative entropy of coherence in the product basis, `S(ρ_diag) − S(ρ)`.
pub fn rel_entropy_coherence<T: Real>(rho: &DensityMatrix<T>) -> Result<T, MeasureError> {
    let tr = rho.trace();
    if (tr - T::one()).abs() > T::lit(NORM_TOL) {
        return Err(MeasureError::BadTrace(f64_of(tr)));
    }
    let spec = eig_sym_dense(rho.matrix());
    let min = spec.eigenvalues()[0];
    if min < -T::lit(PSD_TOL) {
        return Err(MeasureError::NotPositive(f64_of(min)));
    }
    let diag = entropy_of_spectrum(&rho.matrix().diagonal());
    let full = entropy_of_spectrum(spec.eigenvalues());
    Ok((diag - full).max(T::zero()))
}

/// Negativity of each `M = 0` eigenstate of `H(p)`, ascending in energy.
///
/// At `h1 = h2` and `Jz = J` the lowest one is the singlet with `N = s`; at
/// `Jz = −J` (with `J > 0`) it is the highest one.
pub fn m0_eigenstate_negativities<T: Real>(p: &SpinPairParams<T>) -> Result<Vec<T>, MeasureError> {
    let spec = build_hamiltonian(p).spectrum();
    let (block, decomposition) = spec
        .sectors
        .iter()
        .find(|(b, _)| b.magnetization == 0)
        .expect("M = 0 block always exists");
    (0..block.dim())
        .map(|k| negativity_pure(&block.embed(&decomposition.vector(k), p.two_s), p.two_s))
        .collect()
}

/// High-temperature expansion of the coherence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceAsymptotics<T> {
    /// `(s(s+1) J / T)² / (9 ln 2)`, valid for any `s`.
    pub leading: T,
    /// Next-order result where a closed form exists (`s = 1/2`; `s = 1` with
    /// `Jz = 0`).
    pub refined: Option<T>,
}

impl<T: Real> CoherenceAsymptotics<T> {
    pub fn best(&self) -> T {
        self.refined.unwrap_or(self.leading)
    }
}

/// Valid for `T ≫ max(J, |Jz|, |h1|, |h2|)`.
pub fn coherence_asymptotic<T: Real>(p: &SpinPairParams<T>, t: T) -> Result<CoherenceAsymptotics<T>, MeasureError> {
    if !(t > T::zero()) {
        return Err(MeasureError::NonPositiveTemperature(f64_of(t)));
    }
    let s = p.spin();
    let ln2 = T::LN_2();
    let x = s * (s + T::one()) * p.j / t;
    let leading = x * x / (T::lit(9.0) * ln2);
    let jt = p.j / t;
    let sum = p.h1 + p.h2;
    let dif = p.h1 - p.h2;
    let refined = match p.two_s {
        1 => {
            let corr = T::one() + p.jz / (T::lit(4.0) * t)
                - (T::lit(3.0) * (sum * sum + p.j * p.j) + dif * dif) / (T::lit(48.0) * t * t);
            Some(jt * jt / (T::lit(16.0) * ln2) * corr)
        }
        2 if p.jz == T::zero() => {
            let corr = T::one()
                - (T::lit(55.0) * p.j * p.j + T::lit(15.0) * sum * sum + T::lit(9.0) * dif * dif)
                    / (T::lit(144.0) * t * t);
            Some(T::lit(4.0) * jt * jt / (T::lit(9.0) * ln2) * corr)
        }
        _ => None,
    };
    Ok(CoherenceAsymptotics { leading, refined })
}

/// Closed-form thermal quantities of the spin-1/2 pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpinAnalytics<T> {
    pub delta: T,
    pub eta: T,
    /// `tan α± = (h1 − h2 ± Δ)/J`
    pub alpha_plus: T,
    pub alpha_minus: T,
    /// Populations of `|00⟩` and `|11⟩`.
    pub p_plus: T,
    pub p_minus: T,
    /// Populations of `|01⟩` and `|10⟩`.
    pub q_plus: T,
    pub q_minus: T,
    /// `⟨01|ρ|10⟩`
    pub w: T,
    /// Boltzmann weights of `|Ψ+⟩` and `|Ψ−⟩`.
    pub p0_plus: T,
    pub p0_minus: T,
    pub log_z: T,
}

impl<T: Real> HalfSpinAnalytics<T> {
    pub fn new(p: &SpinPairParams<T>, t: T) -> Result<Self, MeasureError> {
        if p.two_s != 1 {
            return Err(MeasureError::WrongSpin { expected: 1, found: p.two_s });
        }
        if !(t > T::zero()) {
            return Err(MeasureError::NonPositiveTemperature(f64_of(t)));
        }
        let DerivedScales { eta, delta, .. } = p.scales();
        let half = T::lit(0.5);
        let quarter_jz = p.jz * T::lit(0.25);
        let sum = p.h1 + p.h2;
        let dh = p.h1 - p.h2;
        let e_up = -half * sum + quarter_jz;
        let e_down = half * sum + quarter_jz;
        let e0_plus = half * delta - quarter_jz;
        let e0_minus = -half * delta - quarter_jz;
        let emin = e_up.min(e_down).min(e0_minus);
        let b = |e: T| (-(e - emin) / t).exp();
        let (bu, bd, bp, bm) = (b(e_up), b(e_down), b(e0_plus), b(e0_minus));
        let zs = bu + bd + bp + bm;
        let ratio = dh / delta;
        Ok(Self {
            delta,
            eta,
            alpha_plus: ((dh + delta) / p.j).atan(),
            alpha_minus: ((dh - delta) / p.j).atan(),
            p_plus: bu / zs,
            p_minus: bd / zs,
            q_plus: half * (bm * (T::one() + ratio) + bp * (T::one() - ratio)) / zs,
            q_minus: half * (bm * (T::one() - ratio) + bp * (T::one() + ratio)) / zs,
            w: -half * (p.j / delta) * (bm - bp) / zs,
            p0_plus: bp / zs,
            p0_minus: bm / zs,
            log_z: -emin / t + zs.ln(),
        })
    }

    /// `C = 2 max(|w| − √(p₊p₋), 0)`
    pub fn concurrence(&self) -> T {
        (T::lit(2.0) * (self.w.abs() - (self.p_plus * self.p_minus).sqrt())).max(T::zero())
    }

    /// `−Σ_ν (q_ν log₂ q_ν − p⁰_ν log₂ p⁰_ν)`
    pub fn coherence(&self) -> T {
        -(xlog2x(self.q_plus) + xlog2x(self.q_minus) - xlog2x(self.p0_plus) - xlog2x(self.p0_minus))
    }

    /// Thermal state in the `|00⟩, |01⟩, |10⟩, |11⟩` basis.
    pub fn thermal_matrix(&self) -> SymMatrix<T> {
        let mut m = SymMatrix::from_diagonal(&[self.p_plus, self.q_plus, self.q_minus, self.p_minus]);
        m.set(1, 2, self.w);
        m
    }
}

/// Closed forms for the spin-1 eigenstates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinOneAnalytics<T> {
    pub eta: T,
    /// `tan α± = ±η/2 − √(1 + η²/4)` for `|Ψ±1⟩`.
    pub alpha_plus: T,
    pub alpha_minus: T,
    /// `M = 0` ground-state amplitudes on `|1,−1⟩, |0,0⟩, |−1,1⟩` (`Jz = 0`).
    pub gamma_plus: T,
    pub gamma_zero: T,
    pub gamma_minus: T,
}

impl<T: Real> SpinOneAnalytics<T> {
    pub fn new(p: &SpinPairParams<T>) -> Result<Self, MeasureError> {
        if p.two_s != 2 {
            return Err(MeasureError::WrongSpin { expected: 2, found: p.two_s });
        }
        let eta = p.scales().eta;
        let half_eta = eta * T::lit(0.5);
        let root = (T::one() + half_eta * half_eta).sqrt();
        let r0 = eta - (T::lit(2.0) + eta * eta).sqrt();
        let rm = T::one() + eta * r0;
        let gamma_plus = (T::one() + r0 * r0 + rm * rm).sqrt().recip();
        Ok(Self {
            eta,
            alpha_plus: (half_eta - root).atan(),
            alpha_minus: (-half_eta - root).atan(),
            gamma_plus,
            gamma_zero: r0 * gamma_plus,
            gamma_minus: rm * gamma_plus,
        })
    }

    /// `|Ψ±1⟩ = cos α± |±1,0⟩ + sin α± |0,±1⟩` in the product basis.
    pub fn psi_pm1(&self, sign: i32) -> Vec<T> {
        let a = if sign >= 0 { self.alpha_plus } else { self.alpha_minus };
        let mut v = vec![T::zero(); 9];
        // index = k1*3 + k2 with k = 1 − m
        if sign >= 0 {
            v[1] = a.cos();
            v[3] = a.sin();
        } else {
            v[7] = a.cos();
            v[5] = a.sin();
        }
        v
    }

    /// `|Ψ0⟩ = γ₊|1,−1⟩ + γ₀|0,0⟩ + γ₋|−1,1⟩` (`Jz = 0`).
    pub fn psi_0(&self) -> Vec<T> {
        let mut v = vec![T::zero(); 9];
        v[2] = self.gamma_plus;
        v[4] = self.gamma_zero;
        v[6] = self.gamma_minus;
        v
    }

    /// `N(|Ψ±1⟩) = ½|sin 2α±| = 1/√(4 + η²)`
    pub fn negativity_pm1(&self) -> T {
        (T::lit(4.0) + self.eta * self.eta).sqrt().recip()
    }

    /// `N(|Ψ0⟩) = |γ₊γ₋| + |γ₀|(|γ₊| + |γ₋|)`, the sum of pairwise Schmidt
    /// coefficient products.
    pub fn negativity_0(&self) -> T {
        let (gp, g0, gm) = (self.gamma_plus.abs(), self.gamma_zero.abs(), self.gamma_minus.abs());
        gp * gm + g0 * (gp + gm)
    }

    /// Same quantity written directly in `η` (`Jz = 0`).
    pub fn negativity_0_closed(&self) -> T {
        let e = self.eta;
        let two = T::lit(2.0);
        let r = (two + e * e).sqrt();
        let sum = (T::one() + e * (e + r)).sqrt() + (T::one() + e * (e - r)).sqrt();
        (T::one() + T::SQRT_2() * sum) / (two * (two + e * e))
    }

    /// `E±2 = ∓(h1+h2) + Jz`
    pub fn energy_pm2(p: &SpinPairParams<T>, sign: i32) -> T {
        let s = if sign >= 0 { -T::one() } else { T::one() };
        s * (p.h1 + p.h2) + p.jz
    }

    /// `E±1 = ∓(h1+h2)/2 − √(J² + ((h1−h2)/2)²)`
    pub fn energy_pm1(p: &SpinPairParams<T>, sign: i32) -> T {
        let s = if sign >= 0 { -T::one() } else { T::one() };
        let half_dh = (p.h1 - p.h2) * T::lit(0.5);
        s * (p.h1 + p.h2) * T::lit(0.5) - p.j.hypot(half_dh)
    }

    /// `E0 = −√(2J² + (h1−h2)²)` (`Jz = 0`)
    pub fn energy_0(p: &SpinPairParams<T>) -> T {
        let dh = p.h1 - p.h2;
        -(T::lit(2.0) * p.j * p.j + dh * dh).sqrt()
    }
}
