//! Phase boundaries, critical temperatures and separability-stripe widths.
//!
//! Root finding is plain bracketed bisection throughout; every target function
//! is monotone in its search variable. Thermal entanglement for `s >= 1` is
//! decided by the sign of the smallest eigenvalue of the partial transpose,
//! evaluated on the diagonally equilibrated matrix so the sign survives at low
//! temperature.

use rayon::prelude::*;
use thiserror::Error;

use crate::linalg::{partial_transpose, LogSymMatrix};
use crate::model::{build_hamiltonian, ModelError, SpinPairParams};
use crate::scalar::{ln_sinh, Real};
use crate::thermal::{gibbs, gibbs_log, ground_state, ground_state_from_spectrum, GroundStateInfo, DEFAULT_TOL_DEG};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PhaseError {
    #[error("temperature must be positive (got {0})")]
    NonPositiveTemperature(f64),
    #[error("no critical point: requires Jz < -J (got Jz = {jz}, J = {j})")]
    NoCriticalPoint { jz: f64, j: f64 },
    #[error("bisection could not bracket a root in [{lo}, {hi}]")]
    NonBracketing { lo: f64, hi: f64 },
    #[error("grid needs at least 2 nodes per axis (got {n1} x {n2})")]
    InvalidGrid { n1: usize, n2: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn f64_of<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn require_positive<T: Real>(t: T) -> Result<(), PhaseError> {
    if !(t > T::zero()) {
        return Err(PhaseError::NonPositiveTemperature(f64_of(t)));
    }
    Ok(())
}

/// Which form of the ground-state boundary decides a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BindingInequality {
    /// `|h1 + h2| < 2s Jz`: inside regardless of the field difference.
    C0Upper,
    /// `h1 + h2 >= 0`: `(h1 − s Jz)(h2 − s Jz) < s² J²`.
    C1Hyperbola,
    /// `h1 + h2 < 0`: `(h1 + s Jz)(h2 + s Jz) < s² J²`.
    C2Hyperbola,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryVerdict<T> {
    pub entangled_gs: bool,
    pub binding: BindingInequality,
    /// `2s Jz + √(4s²J² + (h1−h2)²) − |h1 + h2|`; positive inside.
    pub margin: T,
}

/// Closed-form `T = 0` boundary between the aligned `|M| = 2s` ground state
/// and the entangled sector.
pub fn gs_boundary<T: Real>(p: &SpinPairParams<T>) -> BoundaryVerdict<T> {
    let two_s = T::lit(p.two_s as f64);
    let sum = p.h1 + p.h2;
    let dh = p.h1 - p.h2;
    let rhs = two_s * p.jz + (two_s * p.j).hypot(dh);
    let margin = rhs - sum.abs();
    let binding = if sum.abs() < two_s * p.jz {
        BindingInequality::C0Upper
    } else if sum >= T::zero() {
        BindingInequality::C1Hyperbola
    } else {
        BindingInequality::C2Hyperbola
    };
    BoundaryVerdict {
        entangled_gs: margin > T::zero(),
        binding,
        margin,
    }
}

/// Hyperbola form of the boundary, `(|h1'| − s Jz)(|h2'| − s Jz) − s² J²`
/// on the appropriate half-plane; negative inside.
pub fn hyperbola_residual<T: Real>(p: &SpinPairParams<T>) -> T {
    let s = p.spin();
    let sign = if p.h1 + p.h2 >= T::zero() { T::one() } else { -T::one() };
    (sign * p.h1 - s * p.jz) * (sign * p.h2 - s * p.jz) - s * s * p.j * p.j
}

/// Rectangular lattice in the `(h1, h2)` plane, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldGrid<T> {
    pub h1_min: T,
    pub h1_max: T,
    pub h2_min: T,
    pub h2_max: T,
    pub n1: usize,
    pub n2: usize,
}

impl<T: Real> FieldGrid<T> {
    pub fn square(min: T, max: T, n: usize) -> Self {
        Self {
            h1_min: min,
            h1_max: max,
            h2_min: min,
            h2_max: max,
            n1: n,
            n2: n,
        }
    }

    pub fn validate(&self) -> Result<(), PhaseError> {
        if self.n1 < 2 || self.n2 < 2 {
            return Err(PhaseError::InvalidGrid { n1: self.n1, n2: self.n2 });
        }
        Ok(())
    }

    fn lin(min: T, max: T, n: usize, i: usize) -> T {
        if i + 1 == n {
            max
        } else {
            min + (max - min) * T::lit(i as f64) / T::lit((n - 1) as f64)
        }
    }

    pub fn h1(&self, i: usize) -> T {
        Self::lin(self.h1_min, self.h1_max, self.n1, i)
    }

    pub fn h2(&self, j: usize) -> T {
        Self::lin(self.h2_min, self.h2_max, self.n2, j)
    }

    pub fn h1_axis(&self) -> Vec<T> {
        (0..self.n1).map(|i| self.h1(i)).collect()
    }

    pub fn h2_axis(&self) -> Vec<T> {
        (0..self.n2).map(|j| self.h2(j)).collect()
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major, `h1` outer.
    pub fn node(&self, flat: usize) -> (T, T) {
        (self.h1(flat / self.n2), self.h2(flat % self.n2))
    }
}

/// Ground-state `|M|` at every node of a field grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MagnetizationMap<T> {
    pub grid: FieldGrid<T>,
    /// Row-major (`h1` outer); degenerate nodes report the lowest `|M|`.
    pub abs_magnetization: Vec<u32>,
    pub degeneracy: Vec<usize>,
}

impl<T: Real> MagnetizationMap<T> {
    pub fn at(&self, i: usize, j: usize) -> u32 {
        self.abs_magnetization[i * self.grid.n2 + j]
    }
}

/// `p` supplies spin and couplings; its fields are ignored.
pub fn gs_magnetization_map<T: Real>(
    p: &SpinPairParams<T>,
    grid: &FieldGrid<T>,
    tol_deg: T,
) -> Result<MagnetizationMap<T>, PhaseError> {
    grid.validate()?;
    let cells: Vec<(u32, usize)> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let (h1, h2) = grid.node(k);
            let gs = ground_state(&build_hamiltonian(&p.with_fields(h1, h2)), tol_deg);
            (gs.min_abs_magnetization(), gs.degeneracy)
        })
        .collect();
    let (abs_magnetization, degeneracy) = cells.into_iter().unzip();
    Ok(MagnetizationMap {
        grid: *grid,
        abs_magnetization,
        degeneracy,
    })
}

/// A value with the sign of `λ_min(ρ^{t2})` for the thermal state at the
/// fields stored in `p`.
/// `t` must be positive.
pub fn pt_onset_indicator<T: Real>(p: &SpinPairParams<T>, t: T) -> T {
    log_partial_transpose(p, t).0.min_eigenvalue_sign_proxy()
}

/// Thermal partial transpose in the log domain, with `ln Z`.
fn log_partial_transpose<T: Real>(p: &SpinPairParams<T>, t: T) -> (LogSymMatrix<T>, T) {
    let spec = build_hamiltonian(p).spectrum();
    let (rho, log_z) = gibbs_log(&spec, t).expect("temperature is positive");
    let n = p.local_dim();
    (rho.partial_transpose(n, n).expect("dimension matches"), log_z)
}

fn thermally_entangled<T: Real>(p: &SpinPairParams<T>, t: T) -> bool {
    pt_onset_indicator(p, t) < T::zero()
}

/// Bisection on a predicate that is `true` below the root and `false` above.
fn bisect<T: Real>(mut lo: T, mut hi: T, tol: impl Fn(T, T) -> bool, below: impl Fn(T) -> bool) -> (T, T) {
    let two = T::lit(2.0);
    for _ in 0..400 {
        if tol(lo, hi) {
            break;
        }
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StripeMethod {
    AnalyticHalfSpin,
    BisectionNegativity,
}

/// Half-width data of the separability stripe `|h1 − h2| <= h_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StripeResult<T> {
    pub h_c: T,
    pub t: T,
    pub method: StripeMethod,
    /// Final bisection bracket on `|h1 − h2|`.
    pub bracket: (T, T),
}

/// Stripe width at temperature `t`: closed form for `s = 1/2`, partial
/// transpose bisection otherwise. Fields in `p` are ignored.
pub fn stripe_width<T: Real>(p: &SpinPairParams<T>, t: T) -> Result<StripeResult<T>, PhaseError> {
    if p.two_s == 1 {
        stripe_width_half_spin(p, t)
    } else {
        stripe_width_numeric(p, t)
    }
}

/// `h_c = √(Δc² − J²)`, `Δc = 2T f⁻¹((2T/J) e^{−Jz/2T})`, `f(x) = sinh x / x`.
pub fn stripe_width_half_spin<T: Real>(p: &SpinPairParams<T>, t: T) -> Result<StripeResult<T>, PhaseError> {
    require_positive(t)?;
    let two = T::lit(2.0);
    let ln_target = (two * t / p.j).ln() - p.jz / (two * t);
    let ln_f = |x: T| ln_sinh(x) - x.ln();
    let to_h = |x: T| {
        let dc = two * t * x;
        (dc * dc - p.j * p.j).max(T::zero()).sqrt()
    };
    if ln_target <= T::zero() {
        return Ok(StripeResult {
            h_c: T::zero(),
            t,
            method: StripeMethod::AnalyticHalfSpin,
            bracket: (T::zero(), T::zero()),
        });
    }
    let mut hi = T::one();
    while ln_f(hi) <= ln_target {
        hi = hi * two;
        if !hi.is_finite() {
            return Err(PhaseError::NonBracketing { lo: 0.0, hi: f64::INFINITY });
        }
    }
    let (lo, hi) = bisect(
        T::zero(),
        hi,
        |a, b| b - a <= T::lit(4.0) * T::epsilon() * b,
        |x| x == T::zero() || ln_f(x) <= ln_target,
    );
    let x = (lo + hi) / two;
    Ok(StripeResult {
        h_c: to_h(x),
        t,
        method: StripeMethod::AnalyticHalfSpin,
        bracket: (to_h(lo), to_h(hi)),
    })
}

/// Bisection on `|h1 − h2|` along `h1 = −h2` for the onset of a negative
/// partial-transpose eigenvalue. Valid for every average field, since the onset
/// depends on the field difference only.
pub fn stripe_width_numeric<T: Real>(p: &SpinPairParams<T>, t: T) -> Result<StripeResult<T>, PhaseError> {
    require_positive(t)?;
    p.with_fields(T::zero(), T::zero()).validate()?;
    let half = T::lit(0.5);
    let on_line = |dh: T| p.with_fields(half * dh, -half * dh);
    let entangled = |dh: T| thermally_entangled(&on_line(dh), t);
    if entangled(T::zero()) {
        return Ok(StripeResult {
            h_c: T::zero(),
            t,
            method: StripeMethod::BisectionNegativity,
            bracket: (T::zero(), T::zero()),
        });
    }
    let scale = p.j.max(p.jz.abs());
    let limit = T::lit(20.0) * p.spin() * scale;
    let mut lo = T::zero();
    let mut hi = scale.min(limit);
    while !entangled(hi) {
        if hi >= limit {
            return Err(PhaseError::NonBracketing { lo: f64_of(lo), hi: f64_of(hi) });
        }
        lo = hi;
        hi = (hi * T::lit(2.0)).min(limit);
    }
    let tol = T::lit(1e-10) * p.j;
    let (lo, hi) = bisect(lo, hi, |a, b| b - a <= tol, |dh| !entangled(dh));
    Ok(StripeResult {
        h_c: (lo + hi) * half,
        t,
        method: StripeMethod::BisectionNegativity,
        bracket: (lo, hi),
    })
}

/// Temperature below which the whole field plane is entangled.
///
/// Zero for `Jz <= −J` (the stripe then exists at every `T > 0`). Closed-form
/// criterion `e^{Jz/2T} sinh(J/2T) = 1` for `s = 1/2`, partial-transpose
/// bisection at `h1 = h2 = 0` otherwise.
pub fn critical_temperature<T: Real>(p: &SpinPairParams<T>) -> Result<T, PhaseError> {
    if p.two_s == 1 {
        p.with_fields(T::zero(), T::zero()).validate()?;
        if p.jz <= -p.j {
            return Ok(T::zero());
        }
        let two = T::lit(2.0);
        let g = |beta: T| beta * p.jz / two + ln_sinh(beta * p.j / two);
        // g is increasing in beta; the critical point is g = 0.
        let mut hi = T::one() / p.j;
        while g(hi) <= T::zero() {
            hi = hi * two;
        }
        let (lo, hi) = bisect(T::zero(), hi, |a, b| b - a <= T::lit(1e-13) * b, |b| g(b) <= T::zero());
        Ok(two / (lo + hi))
    } else {
        critical_temperature_numeric(p)
    }
}

/// Partial-transpose bisection in `T` at zero field, for any spin.
pub fn critical_temperature_numeric<T: Real>(p: &SpinPairParams<T>) -> Result<T, PhaseError> {
    let p0 = p.with_fields(T::zero(), T::zero());
    p0.validate()?;
    if p.jz <= -p.j {
        return Ok(T::zero());
    }
    let two = T::lit(2.0);
    let entangled = |t: T| thermally_entangled(&p0, t);
    let mut hi = p.j.max(p.jz.abs());
    let mut guard = 0;
    while entangled(hi) {
        hi = hi * two;
        guard += 1;
        if guard > 60 {
            return Err(PhaseError::NonBracketing { lo: 0.0, hi: f64_of(hi) });
        }
    }
    let floor = T::lit(1e-3) * p.j;
    let mut lo = hi / two;
    while !entangled(lo) {
        hi = lo;
        lo = lo / two;
        if lo < floor {
            return Err(PhaseError::NonBracketing { lo: f64_of(lo), hi: f64_of(hi) });
        }
    }
    let (lo, hi) = bisect(lo, hi, |a, b| b - a <= T::lit(1e-10) * b, entangled);
    Ok((lo + hi) / two)
}

/// Root of `3 + 2 cosh(2βJ) = cosh(2√2 βJ)`, the closed-form critical
/// condition of the spin-1 pair at `Jz = 0`. Returns `kTc`.
pub fn spin_one_critical_temperature<T: Real>(j: T) -> T {
    let two = T::lit(2.0);
    let r = |beta: T| (two * T::SQRT_2() * beta * j).cosh() - T::lit(3.0) - two * (two * beta * j).cosh();
    let mut hi = T::one() / j;
    while r(hi) <= T::zero() {
        hi = hi * two;
    }
    let (lo, hi) = bisect(T::zero(), hi, |a, b| b - a <= T::lit(1e-14) * b, |b| r(b) <= T::zero());
    two / (lo + hi)
}

/// `Jz` threshold for thermal concurrence of the spin-1/2 pair:
/// `2T ln[(Δ/J) / sinh(Δ/2T)]`.
pub fn jz_threshold<T: Real>(t: T, j: T, dh: T) -> Result<T, PhaseError> {
    require_positive(t)?;
    let delta = dh.hypot(j);
    let two = T::lit(2.0);
    Ok(two * t * ((delta / j).ln() - ln_sinh(delta / (two * t))))
}

/// Points where all `4s + 1` magnetization sectors share the ground energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPointInfo<T> {
    /// `2s √(Jz² − J²)`
    pub h_c: T,
    /// `(h_c/2, −h_c/2)` and `(−h_c/2, h_c/2)`.
    pub locations: [(T, T); 2],
    pub degeneracy: usize,
    /// `s² Jz`
    pub energy: T,
}

impl<T: Real> CriticalPointInfo<T> {
    /// Ground manifold at the first location.
    pub fn verify(&self, p: &SpinPairParams<T>, tol_deg: T) -> GroundStateInfo<T> {
        let (h1, h2) = self.locations[0];
        ground_state(&build_hamiltonian(&p.with_fields(h1, h2)), tol_deg)
    }
}

pub fn critical_points<T: Real>(p: &SpinPairParams<T>) -> Result<CriticalPointInfo<T>, PhaseError> {
    if !(p.jz < -p.j) {
        return Err(PhaseError::NoCriticalPoint {
            jz: f64_of(p.jz),
            j: f64_of(p.j),
        });
    }
    let s = p.spin();
    let h_c = T::lit(2.0) * s * (p.jz * p.jz - p.j * p.j).sqrt();
    let half = h_c * T::lit(0.5);
    Ok(CriticalPointInfo {
        h_c,
        locations: [(half, -half), (-half, half)],
        degeneracy: 2 * p.two_s as usize + 1,
        energy: s * s * p.jz,
    })
}

/// Numerical evidence that shifting the average field rescales the thermal
/// partial transpose by a positive congruence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Report<T> {
    /// `max |ρ^{t2}(h) − (Z0/Zh) e^{hSz/2T} ρ^{t2}(0) e^{hSz/2T}|`
    pub identity_max_dev: T,
    /// `|det ρ^{t2}(h) / ((Z0/Zh)^d det ρ^{t2}(0)) − 1|`
    pub det_rel_err: T,
    pub det_sign_match: bool,
    pub indicator_zero: T,
    pub indicator_shift: T,
}

impl<T: Real> Lemma1Report<T> {
    pub fn sign_invariant(&self) -> bool {
        (self.indicator_zero < T::zero()) == (self.indicator_shift < T::zero())
    }

    pub fn passes(&self) -> bool {
        self.identity_max_dev <= T::lit(1e-10)
            && self.det_rel_err <= T::lit(1e-8)
            && self.det_sign_match
            && self.sign_invariant()
    }
}

/// Compares the thermal state at average field `0` and `h_shift` for the field
/// difference `p.h1 − p.h2`.
pub fn lemma1_certificates<T: Real>(p: &SpinPairParams<T>, t: T, h_shift: T) -> Result<Lemma1Report<T>, PhaseError> {
    require_positive(t)?;
    let half = T::lit(0.5);
    let dh = p.h1 - p.h2;
    let p0 = p.with_fields(half * dh, -half * dh);
    let ph = p.with_fields(h_shift + half * dh, h_shift - half * dh);
    let tol = T::lit(DEFAULT_TOL_DEG);
    let (rho0, log_z0) = gibbs(&build_hamiltonian(&p0).spectrum(), t, tol).expect("t > 0");
    let (rhoh, log_zh) = gibbs(&build_hamiltonian(&ph).spectrum(), t, tol).expect("t > 0");
    let n = p.local_dim();
    let pt0 = partial_transpose(rho0.matrix(), n, n).expect("dimension matches");
    let pth = partial_transpose(rhoh.matrix(), n, n).expect("dimension matches");

    // Total Sz of product state k1*n + k2 is 2s − k1 − k2.
    let two_s = p.two_s as i64;
    let mag: Vec<T> = (0..n * n)
        .map(|k| T::half(2 * two_s - 2 * (k / n) as i64 - 2 * (k % n) as i64))
        .collect();
    let log_ratio = log_z0 - log_zh;
    let mut identity_max_dev = T::zero();
    for i in 0..n * n {
        for j in i..n * n {
            let factor = (log_ratio + h_shift * (mag[i] + mag[j]) * half / t).exp();
            let dev = (pth.get(i, j) - factor * pt0.get(i, j)).abs();
            identity_max_dev = identity_max_dev.max(dev);
        }
    }

    // Determinants and signs from the log-domain state: low-temperature
    // weights underflow in the plain one.
    let (lpt0, _) = log_partial_transpose(&p0, t);
    let (lpth, _) = log_partial_transpose(&ph, t);
    let (sign0, ld0) = lpt0.log_abs_det();
    let (signh, ldh) = lpth.log_abs_det();
    let predicted = ld0 + T::lit((n * n) as f64) * log_ratio;
    let det_rel_err = if sign0 == T::zero() || signh == T::zero() {
        T::nan()
    } else {
        ((ldh - predicted).exp() - T::one()).abs()
    };

    Ok(Lemma1Report {
        identity_max_dev,
        det_rel_err,
        det_sign_match: sign0 == signh,
        indicator_zero: lpt0.min_eigenvalue_sign_proxy(),
        indicator_shift: lpth.min_eigenvalue_sign_proxy(),
    })
}

/// Ground-state magnetization agreement between [`gs_boundary`] and exact
/// diagonalization at one field point: `None` when the point sits within
/// `margin_tol` of the boundary.
pub fn boundary_agrees_with_diagonalization<T: Real>(p: &SpinPairParams<T>, margin_tol: T) -> Option<bool> {
    let verdict = gs_boundary(p);
    if verdict.margin.abs() <= margin_tol {
        return None;
    }
    let gs = ground_state_from_spectrum(&build_hamiltonian(p).spectrum(), T::lit(DEFAULT_TOL_DEG));
    let entangled_numeric = gs.min_abs_magnetization() < p.two_s;
    Some(entangled_numeric == verdict.entangled_gs)
}
