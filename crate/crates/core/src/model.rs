//! Spin-s XXZ pair in non-uniform transverse fields,
//!
//! `H = −h1 s1ᶻ − h2 s2ᶻ + J (s1ˣ s2ˣ + s1ʸ s2ʸ) + Jz s1ᶻ s2ᶻ`,
//!
//! assembled per total magnetization `M = m1 + m2`. The exchange term only
//! couples `(m1, m2) ↔ (m1 − 1, m2 + 1)`, so each block is a real symmetric
//! tridiagonal matrix.
//!
//! Single-site states are ordered by descending `m` (`m = s, s−1, …, −s`) and
//! the product basis index of `|m1, m2⟩` is `k1 (2s+1) + k2` with `k = s − m`.

use thiserror::Error;

use crate::linalg::{eig_sym_tridiag, SpectralDecomposition, SymMatrix, SymTridiag};
use crate::measures;
use crate::scalar::Real;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("spin must satisfy 2s >= 1 (got 2s = {0})")]
    InvalidSpin(u32),
    #[error("exchange coupling J must be positive after reduction (got {0})")]
    NonPositiveCoupling(f64),
    #[error("J and D cannot both vanish")]
    ZeroCouplings,
    #[error("parameter {0} is not finite")]
    NonFinite(&'static str),
}

/// Physical parameters of the pair. Energies share one unit; `ħ = k = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinPairParams<T> {
    /// Twice the spin, so half-integer spins stay integral.
    pub two_s: u32,
    pub j: T,
    pub jz: T,
    pub h1: T,
    pub h2: T,
    /// Dzyaloshinskii–Moriya coupling along z.
    pub d: T,
}

impl<T: Real> SpinPairParams<T> {
    pub fn new(two_s: u32, j: T, jz: T, h1: T, h2: T) -> Self {
        Self {
            two_s,
            j,
            jz,
            h1,
            h2,
            d: T::zero(),
        }
    }

    pub fn with_dm(mut self, d: T) -> Self {
        self.d = d;
        self
    }

    pub fn with_fields(mut self, h1: T, h2: T) -> Self {
        self.h1 = h1;
        self.h2 = h2;
        self
    }

    pub fn spin(&self) -> T {
        T::half(self.two_s as i64)
    }

    /// Local dimension `2s + 1`.
    pub fn local_dim(&self) -> usize {
        self.two_s as usize + 1
    }

    pub fn dim(&self) -> usize {
        self.local_dim() * self.local_dim()
    }

    /// Checks the invariants the physics layer relies on (`2s >= 1`, `J > 0`,
    /// `D = 0`, finite values).
    pub fn validate(&self) -> Result<(), ModelError> {
        self.check_finite()?;
        if self.two_s == 0 {
            return Err(ModelError::InvalidSpin(self.two_s));
        }
        if self.j <= T::zero() || self.d != T::zero() {
            return Err(ModelError::NonPositiveCoupling(self.j.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(())
    }

    fn check_finite(&self) -> Result<(), ModelError> {
        for (name, v) in [("J", self.j), ("Jz", self.jz), ("h1", self.h1), ("h2", self.h2), ("D", self.d)] {
            if !v.is_finite() {
                return Err(ModelError::NonFinite(name));
            }
        }
        Ok(())
    }

    /// Removes the DM term and the sign of `J` (both are exact unitary
    /// equivalences for spectrum and entanglement).
    pub fn reduced(&self) -> Result<Self, ModelError> {
        self.check_finite()?;
        if self.two_s == 0 {
            return Err(ModelError::InvalidSpin(self.two_s));
        }
        let r = reduce_couplings(self.j, self.d)?;
        Ok(Self {
            j: r.j_eff,
            d: T::zero(),
            ..*self
        })
    }

    pub fn scales(&self) -> DerivedScales<T> {
        DerivedScales::new(self.j, self.h1, self.h2)
    }
}

/// Field-difference scales used throughout the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedScales<T> {
    /// `(h1 − h2) / J`
    pub eta: T,
    /// `√((h1 − h2)² + J²)`
    pub delta: T,
    /// `(h1 + h2) / 2`
    pub h_avg: T,
}

impl<T: Real> DerivedScales<T> {
    pub fn new(j: T, h1: T, h2: T) -> Self {
        let dh = h1 - h2;
        Self {
            eta: dh / j,
            delta: dh.hypot(j),
            h_avg: (h1 + h2) * T::lit(0.5),
        }
    }
}

/// Single-site spin operators in the descending-`m` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinMatrices<T> {
    pub two_s: u32,
    /// Diagonal of `sᶻ`: `s, s−1, …, −s`.
    pub sz: Vec<T>,
    /// `splus[k] = ⟨m_k| s⁺ |m_{k+1}⟩ = √(s(s+1) − m_{k+1}(m_{k+1}+1))`.
    pub splus: Vec<T>,
}

impl<T: Real> SpinMatrices<T> {
    pub fn dim(&self) -> usize {
        self.sz.len()
    }

    /// Dense `s⁺`, row-major (upper bidiagonal).
    pub fn splus_dense(&self) -> Vec<T> {
        let n = self.dim();
        let mut m = vec![T::zero(); n * n];
        for (k, &v) in self.splus.iter().enumerate() {
            m[k * n + k + 1] = v;
        }
        m
    }

    /// `sˣ = (s⁺ + s⁻)/2`, real symmetric.
    pub fn sx(&self) -> SymMatrix<T> {
        let mut m = SymMatrix::zeros(self.dim());
        for (k, &v) in self.splus.iter().enumerate() {
            m.set(k, k + 1, v * T::lit(0.5));
        }
        m
    }

    pub fn sz_matrix(&self) -> SymMatrix<T> {
        SymMatrix::from_diagonal(&self.sz)
    }
}

pub fn spin_matrices<T: Real>(two_s: u32) -> SpinMatrices<T> {
    let s = T::half(two_s as i64);
    let sz: Vec<T> = (0..=two_s as i64).map(|k| T::half(two_s as i64 - 2 * k)).collect();
    let splus = sz[1..]
        .iter()
        .map(|&m| (s * (s + T::one()) - m * (m + T::one())).sqrt())
        .collect();
    SpinMatrices { two_s, sz, splus }
}

/// Result of folding a DM coupling into the XX exchange.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedCoupling<T> {
    pub j_eff: T,
    /// Rotation angle about z applied to the second spin.
    pub phi: T,
}

pub fn reduce_couplings<T: Real>(j: T, d: T) -> Result<ReducedCoupling<T>, ModelError> {
    if j == T::zero() && d == T::zero() {
        return Err(ModelError::ZeroCouplings);
    }
    Ok(ReducedCoupling {
        j_eff: j.hypot(d),
        phi: d.atan2(j),
    })
}

/// Product-basis label `|m1, m2⟩`, stored as `(2 m1, 2 m2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisState {
    pub two_m1: i32,
    pub two_m2: i32,
}

impl BasisState {
    pub fn m1<T: Real>(&self) -> T {
        T::half(self.two_m1 as i64)
    }

    pub fn m2<T: Real>(&self) -> T {
        T::half(self.two_m2 as i64)
    }

    /// Index in the `(2s+1)²` product basis.
    pub fn product_index(&self, two_s: u32) -> usize {
        let n = two_s as usize + 1;
        let k1 = ((two_s as i32 - self.two_m1) / 2) as usize;
        let k2 = ((two_s as i32 - self.two_m2) / 2) as usize;
        k1 * n + k2
    }
}

/// Fixed-magnetization sector of the Hamiltonian.
#[derive(Debug, Clone)]
pub struct MagnetizationBlock<T> {
    /// Total magnetization `M` (always integral).
    pub magnetization: i32,
    /// Ordered by descending `m1`.
    pub basis: Vec<BasisState>,
    pub matrix: SymTridiag<T>,
}

impl<T: Real> MagnetizationBlock<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Lifts a block-local vector into the product basis.
    pub fn embed(&self, local: &[T], two_s: u32) -> Vec<T> {
        let n = two_s as usize + 1;
        let mut v = vec![T::zero(); n * n];
        for (b, &c) in self.basis.iter().zip(local) {
            v[b.product_index(two_s)] = c;
        }
        v
    }
}

/// Hamiltonian as a direct sum of magnetization blocks, `M = −2s … 2s`.
#[derive(Debug, Clone)]
pub struct BlockHamiltonian<T> {
    pub params: SpinPairParams<T>,
    /// Ordered by ascending `M`.
    pub blocks: Vec<MagnetizationBlock<T>>,
}

impl<T: Real> BlockHamiltonian<T> {
    pub fn two_s(&self) -> u32 {
        self.params.two_s
    }

    pub fn dim(&self) -> usize {
        self.params.dim()
    }

    pub fn block(&self, magnetization: i32) -> Option<&MagnetizationBlock<T>> {
        let idx = magnetization + self.params.two_s as i32;
        usize::try_from(idx).ok().and_then(|i| self.blocks.get(i))
    }

    pub fn to_dense(&self) -> SymMatrix<T> {
        let two_s = self.two_s();
        let mut h = SymMatrix::zeros(self.dim());
        for b in &self.blocks {
            let idx: Vec<usize> = b.basis.iter().map(|s| s.product_index(two_s)).collect();
            for (a, &ia) in idx.iter().enumerate() {
                h.set(ia, ia, b.matrix.diag()[a]);
                if a + 1 < idx.len() {
                    h.set(ia, idx[a + 1], b.matrix.offdiag()[a]);
                }
            }
        }
        h
    }

    /// Diagonalizes every block.
    pub fn spectrum(&self) -> BlockSpectrum<T> {
        BlockSpectrum {
            two_s: self.two_s(),
            sectors: self
                .blocks
                .iter()
                .map(|b| (b.clone(), eig_sym_tridiag(&b.matrix)))
                .collect(),
        }
    }
}

/// Per-block eigendecompositions of a [`BlockHamiltonian`].
#[derive(Debug, Clone)]
pub struct BlockSpectrum<T> {
    pub two_s: u32,
    pub sectors: Vec<(MagnetizationBlock<T>, SpectralDecomposition<T>)>,
}

impl<T: Real> BlockSpectrum<T> {
    pub fn min_energy(&self) -> T {
        self.sectors
            .iter()
            .map(|(_, s)| s.eigenvalues()[0])
            .fold(T::infinity(), T::min)
    }

    /// Whole spectrum, ascending.
    pub fn energies(&self) -> Vec<T> {
        let mut e: Vec<T> = self
            .sectors
            .iter()
            .flat_map(|(_, s)| s.eigenvalues().iter().copied())
            .collect();
        e.sort_by(|a, b| a.partial_cmp(b).expect("finite energies"));
        e
    }

    /// Eigenvector `k` of the block with magnetization `M`, in the product basis.
    pub fn eigenvector(&self, magnetization: i32, k: usize) -> Option<Vec<T>> {
        self.sectors
            .iter()
            .find(|(b, _)| b.magnetization == magnetization)
            .map(|(b, s)| b.embed(&s.vector(k), self.two_s))
    }
}

pub fn build_hamiltonian<T: Real>(p: &SpinPairParams<T>) -> BlockHamiltonian<T> {
    let two_s = p.two_s as i32;
    let s = p.spin();
    let cas = s * (s + T::one());
    let half_j = p.j * T::lit(0.5);
    let blocks = (-two_s..=two_s)
        .map(|m_tot| {
            let two_m = 2 * m_tot;
            let hi = two_s.min(two_m + two_s);
            let lo = (-two_s).max(two_m - two_s);
            let basis: Vec<BasisState> = (lo..=hi)
                .rev()
                .step_by(2)
                .map(|two_m1| BasisState {
                    two_m1,
                    two_m2: two_m - two_m1,
                })
                .collect();
            let diag = basis
                .iter()
                .map(|b| {
                    let (m1, m2) = (b.m1::<T>(), b.m2::<T>());
                    -p.h1 * m1 - p.h2 * m2 + p.jz * m1 * m2
                })
                .collect();
            let offdiag = basis
                .iter()
                .take(basis.len().saturating_sub(1))
                .map(|b| {
                    let (m1, m2) = (b.m1::<T>(), b.m2::<T>());
                    half_j * (cas - m1 * (m1 - T::one())).sqrt() * (cas - m2 * (m2 + T::one())).sqrt()
                })
                .collect();
            MagnetizationBlock {
                magnetization: m_tot,
                basis,
                matrix: SymTridiag::new(diag, offdiag).expect("block dimensions are consistent"),
            }
        })
        .collect();
    BlockHamiltonian { params: *p, blocks }
}

/// Real `2d x 2d` embedding `[[A, −B], [B, A]]` of the Hermitian Hamiltonian
/// with a DM term, `H′ = A + iB`. Its spectrum is that of `H′` with every
/// eigenvalue doubled.
///
/// The DM term equals `(iD/2)(s1⁺s2⁻ − s1⁻s2⁺)`, so `B` is the real
/// antisymmetric matrix `(D/2)(s1⁺s2⁻ − s1⁻s2⁺)`.
pub fn dm_hamiltonian_realified<T: Real>(p: &SpinPairParams<T>) -> SymMatrix<T> {
    let plain = SpinPairParams { d: T::zero(), ..*p };
    let a = build_hamiltonian(&plain).to_dense();
    let ops = spin_matrices::<T>(p.two_s);
    let n = ops.dim();
    let sp = ops.splus_dense();
    let sm: Vec<T> = (0..n * n).map(|k| sp[(k % n) * n + k / n]).collect();
    let kron = |x: &[T], y: &[T]| -> Vec<T> {
        let mut out = vec![T::zero(); n * n * n * n];
        for a1 in 0..n {
            for a2 in 0..n {
                for b1 in 0..n {
                    for b2 in 0..n {
                        out[(a1 * n + b1) * n * n + a2 * n + b2] = x[a1 * n + a2] * y[b1 * n + b2];
                    }
                }
            }
        }
        out
    };
    let pm = kron(&sp, &sm);
    let mp = kron(&sm, &sp);
    let dim = n * n;
    let half_d = p.d * T::lit(0.5);
    let b = |i: usize, j: usize| half_d * (pm[i * dim + j] - mp[i * dim + j]);
    SymMatrix::from_upper_fn(2 * dim, |i, j| match (i < dim, j < dim) {
        (true, true) => a.get(i, j),
        (false, false) => a.get(i - dim, j - dim),
        (true, false) => -b(i, j - dim),
        (false, true) => unreachable!("upper triangle only"),
    })
}

/// Evidence that flipping the sign of `J` leaves the physics unchanged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeCertificate<T> {
    /// Max deviation between the sorted spectra of `H(J)` and `H(−J)`.
    pub spectrum_deviation: T,
    /// Max deviation of per-eigenstate entanglement entropies.
    pub entropy_deviation: T,
}

impl<T: Real> GaugeCertificate<T> {
    pub fn holds(&self) -> bool {
        self.spectrum_deviation <= T::lit(1e-12) && self.entropy_deviation <= T::lit(1e-10)
    }
}

/// Returns the parameters with `|J|`, plus a certificate comparing `H(J)` and
/// `H(−J)` eigenstate by eigenstate (within each block the spectrum is simple,
/// so states pair up unambiguously).
pub fn gauge_flip_j<T: Real>(p: &SpinPairParams<T>) -> (SpinPairParams<T>, GaugeCertificate<T>) {
    let flipped = SpinPairParams { j: -p.j, ..*p };
    let a = build_hamiltonian(p).spectrum();
    let b = build_hamiltonian(&flipped).spectrum();
    let spectrum_deviation = a
        .energies()
        .iter()
        .zip(b.energies())
        .fold(T::zero(), |acc, (x, y)| acc.max((*x - y).abs()));
    let mut entropy_deviation = T::zero();
    for ((blk, sa), (_, sb)) in a.sectors.iter().zip(&b.sectors) {
        for k in 0..blk.dim() {
            let va = blk.embed(&sa.vector(k), p.two_s);
            let vb = blk.embed(&sb.vector(k), p.two_s);
            let ea = measures::entanglement_entropy_pure(&va, p.two_s).expect("normalized eigenvector");
            let eb = measures::entanglement_entropy_pure(&vb, p.two_s).expect("normalized eigenvector");
            entropy_deviation = entropy_deviation.max((ea - eb).abs());
        }
    }
    (
        SpinPairParams { j: p.j.abs(), ..*p },
        GaugeCertificate {
            spectrum_deviation,
            entropy_deviation,
        },
    )
}
