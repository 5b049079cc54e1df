//! Exact diagonalization and thermal entanglement of a spin-s XXZ pair in
//! non-uniform longitudinal fields.
//!
//! The numerical core is generic over [`Real`] (`f32`, `f64`); the aliases
//! below fix the common `f64` instantiation.

pub mod linalg;
pub mod measures;
pub mod model;
pub mod phase;
pub mod scalar;
pub mod thermal;

pub use linalg::{eig_sym_dense, eig_sym_tridiag, partial_transpose, LinalgError, SpectralDecomposition, SymMatrix, SymTridiag};
pub use measures::MeasureError;
pub use model::{build_hamiltonian, BlockHamiltonian, BlockSpectrum, ModelError, SpinPairParams};
pub use phase::PhaseError;
pub use scalar::Real;
pub use thermal::{DensityMatrix, GroundStateInfo, ThermalError};

pub type SymMatrix64 = SymMatrix<f64>;
pub type SymTridiag64 = SymTridiag<f64>;
pub type SpinPairParams64 = SpinPairParams<f64>;
pub type BlockHamiltonian64 = BlockHamiltonian<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type SpinPairParams32 = SpinPairParams<f32>;
