//! Hamiltonian ensembles: GUE, pseudo-GUE spectra in a Haar eigenbasis, and
//! their diagonal variants, plus the dense linear algebra they need.

mod dump;
mod linalg;
mod sample;
mod types;

pub use dump::{read_pchm, write_pchm, MatrixKind};
pub use linalg::{assemble_hamiltonian, eig_hermitian, propagator, Eigensystem};
pub use sample::{
    sample_eigensystem, sample_gue, sample_haar_unitary, sample_hamiltonian, sample_spectrum, KWISE_OUTPUT_BITS,
};
pub use types::{
    BasisMode, EnsembleKind, EnsembleSpec, HermitianMatrix, Provenance, SpectralMode, Spectrum, UnitaryMatrix,
};

use crate::randcore::RandError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EnsembleError {
    #[error("d̃ = {dtilde} does not divide d = {d}")]
    InvalidDegeneracy { d: usize, dtilde: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("matrix is not square: {rows}×{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid ensemble: {0}")]
    InvalidSpec(String),
    #[error("eigensolver did not converge (residual {residual:e})")]
    EigenNotConverged { residual: f64 },
    #[error(transparent)]
    Rand(#[from] RandError),
}
