//! Ground states and Gibbs states, assembled block by block.

use thiserror::Error;

use crate::linalg::{eig_sym_dense, signed_log_sum_exp, LogSymMatrix, SymMatrix};
use crate::model::{BlockHamiltonian, BlockSpectrum};
use crate::scalar::Real;

/// Default relative tolerance for grouping degenerate ground states.
pub const DEFAULT_TOL_DEG: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ThermalError {
    #[error("temperature must be non-negative (got {0})")]
    NegativeTemperature(f64),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("a log-domain Gibbs state needs T > 0")]
    ZeroTemperature,
    #[error("site must be 1 or 2 (got {0})")]
    InvalidSite(u8),
}

/// One state of the (possibly degenerate) ground manifold.
#[derive(Debug, Clone)]
pub struct GroundMember<T> {
    pub magnetization: i32,
    /// Index within the block spectrum (ascending energy).
    pub index: usize,
    pub energy: T,
    /// Eigenvector in the product basis.
    pub state: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct GroundStateInfo<T> {
    pub energy: T,
    pub degeneracy: usize,
    pub members: Vec<GroundMember<T>>,
    pub tol_deg: T,
}

impl<T: Real> GroundStateInfo<T> {
    /// Smallest `|M|` in the ground manifold; boundary ties resolve to the
    /// lower-`|M|` phase.
    pub fn min_abs_magnetization(&self) -> u32 {
        self.members
            .iter()
            .map(|m| m.magnetization.unsigned_abs())
            .min()
            .unwrap_or(0)
    }
}

pub fn ground_state<T: Real>(h: &BlockHamiltonian<T>, tol_deg: T) -> GroundStateInfo<T> {
    ground_state_from_spectrum(&h.spectrum(), tol_deg)
}

pub fn ground_state_from_spectrum<T: Real>(spec: &BlockSpectrum<T>, tol_deg: T) -> GroundStateInfo<T> {
    let e0 = spec.min_energy();
    let window = tol_deg * (T::one() + e0.abs());
    let mut members = Vec::new();
    for (block, decomposition) in &spec.sectors {
        for (k, &e) in decomposition.eigenvalues().iter().enumerate() {
            if e - e0 <= window {
                members.push(GroundMember {
                    magnetization: block.magnetization,
                    index: k,
                    energy: e,
                    state: block.embed(&decomposition.vector(k), spec.two_s),
                });
            }
        }
    }
    GroundStateInfo {
        energy: e0,
        degeneracy: members.len(),
        members,
        tol_deg,
    }
}

/// Density matrix in the `(2s+1)²` product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: SymMatrix<T>,
    /// Set when the state commutes with total `Sz`.
    pub block_diagonal: bool,
}

impl<T: Real> DensityMatrix<T> {
    /// Wraps a matrix without checking trace or positivity.
    pub fn from_matrix(matrix: SymMatrix<T>, block_diagonal: bool) -> Self {
        Self { matrix, block_diagonal }
    }

    /// Projector onto a (normalized) pure state.
    pub fn from_pure(state: &[T]) -> Self {
        Self {
            matrix: SymMatrix::outer(state),
            block_diagonal: false,
        }
    }

    pub fn matrix(&self) -> &SymMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> SymMatrix<T> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn trace(&self) -> T {
        self.matrix.trace()
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> T {
        self.matrix.as_slice().iter().map(|&x| x * x).sum()
    }
}

fn check_temperature<T: Real>(t: T) -> Result<(), ThermalError> {
    if !(t >= T::zero()) {
        return Err(ThermalError::NegativeTemperature(t.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// `ρ = e^{−H/T} / Z`; for `T = 0` the uniform mixture over the ground
/// manifold (the `β → ∞` limit).
pub fn thermal_state<T: Real>(h: &BlockHamiltonian<T>, t: T) -> Result<DensityMatrix<T>, ThermalError> {
    thermal_state_from_spectrum(&h.spectrum(), t)
}

pub fn thermal_state_from_spectrum<T: Real>(
    spec: &BlockSpectrum<T>,
    t: T,
) -> Result<DensityMatrix<T>, ThermalError> {
    gibbs(spec, t, T::lit(DEFAULT_TOL_DEG)).map(|(rho, _)| rho)
}

/// `ln Z` for `T > 0`, evaluated with the ground energy factored out.
pub fn log_partition_function<T: Real>(spec: &BlockSpectrum<T>, t: T) -> Result<T, ThermalError> {
    check_temperature(t)?;
    let e0 = spec.min_energy();
    let sum: T = spec
        .sectors
        .iter()
        .flat_map(|(_, s)| s.eigenvalues().iter())
        .map(|&e| (-(e - e0) / t).exp())
        .sum();
    Ok(-e0 / t + sum.ln())
}

/// Gibbs state together with `ln Z` (`NaN` at `T = 0`).
pub fn gibbs<T: Real>(spec: &BlockSpectrum<T>, t: T, tol_deg: T) -> Result<(DensityMatrix<T>, T), ThermalError> {
    check_temperature(t)?;
    let two_s = spec.two_s;
    let n = two_s as usize + 1;
    let e0 = spec.min_energy();
    let weights: Vec<Vec<T>> = if t == T::zero() {
        let window = tol_deg * (T::one() + e0.abs());
        spec.sectors
            .iter()
            .map(|(_, s)| {
                s.eigenvalues()
                    .iter()
                    .map(|&e| if e - e0 <= window { T::one() } else { T::zero() })
                    .collect()
            })
            .collect()
    } else {
        spec.sectors
            .iter()
            .map(|(_, s)| s.eigenvalues().iter().map(|&e| (-(e - e0) / t).exp()).collect())
            .collect()
    };
    let z: T = weights.iter().flatten().copied().sum();
    let log_z = if t == T::zero() { T::nan() } else { -e0 / t + z.ln() };
    let mut rho = SymMatrix::zeros(n * n);
    for ((block, decomposition), w) in spec.sectors.iter().zip(&weights) {
        let scaled: Vec<T> = w.iter().map(|&x| x / z).collect();
        let local = decomposition.weighted_sum(&scaled);
        let idx: Vec<usize> = block.basis.iter().map(|b| b.product_index(two_s)).collect();
        for a in 0..idx.len() {
            for b in a..idx.len() {
                rho.set(idx[a], idx[b], local.get(a, b));
            }
        }
    }
    Ok((DensityMatrix::from_matrix(rho, true), log_z))
}

/// Gibbs state for `T > 0` stored entrywise in the log domain, so that weights
/// far below the smallest normal float are kept. Also returns `ln Z`.
pub fn gibbs_log<T: Real>(spec: &BlockSpectrum<T>, t: T) -> Result<(LogSymMatrix<T>, T), ThermalError> {
    check_temperature(t)?;
    if t == T::zero() {
        return Err(ThermalError::ZeroTemperature);
    }
    let two_s = spec.two_s;
    let n = two_s as usize + 1;
    let e0 = spec.min_energy();
    let z: T = spec
        .sectors
        .iter()
        .flat_map(|(_, s)| s.eigenvalues().iter())
        .map(|&e| (-(e - e0) / t).exp())
        .sum();
    let ln_z_shifted = z.ln();
    let mut rho = LogSymMatrix::zeros(n * n);
    for (block, decomposition) in &spec.sectors {
        let idx: Vec<usize> = block.basis.iter().map(|b| b.product_index(two_s)).collect();
        let energies = decomposition.eigenvalues();
        for a in 0..idx.len() {
            for b in a..idx.len() {
                let terms = (0..energies.len()).map(|k| {
                    let x = decomposition.component(a, k) * decomposition.component(b, k);
                    let sign = if x == T::zero() { T::zero() } else { x.signum() };
                    (sign, -(energies[k] - e0) / t + x.abs().ln())
                });
                let (sign, log_abs) = signed_log_sum_exp(terms);
                rho.set(idx[a], idx[b], sign, log_abs - ln_z_shifted);
            }
        }
    }
    Ok((rho, -e0 / t + ln_z_shifted))
}

/// Partial trace over the other site; `site` is 1 or 2.
pub fn reduced_state<T: Real>(rho: &DensityMatrix<T>, site: u8, two_s: u32) -> Result<SymMatrix<T>, ThermalError> {
    let n = two_s as usize + 1;
    if rho.dim() != n * n {
        return Err(ThermalError::DimensionMismatch {
            expected: n * n,
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    match site {
        1 => Ok(SymMatrix::from_upper_fn(n, |a, a2| {
            (0..n).map(|b| m.get(a * n + b, a2 * n + b)).sum()
        })),
        2 => Ok(SymMatrix::from_upper_fn(n, |b, b2| {
            (0..n).map(|a| m.get(a * n + b, a * n + b2)).sum()
        })),
        other => Err(ThermalError::InvalidSite(other)),
    }
}

/// Smallest eigenvalue of a density matrix.
pub fn min_eigenvalue<T: Real>(rho: &DensityMatrix<T>) -> T {
    eig_sym_dense(rho.matrix()).eigenvalues()[0]
}
