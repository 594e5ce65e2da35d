//! Statevector simulation of controlled pseudo-GUE time evolution by phase
//! kickback, in an explicit form that carries the ancilla register and an
//! implicit form that applies the kicked-back phases directly.

mod cost;
mod kickback;
mod phase;
mod state;

pub use cost::{fastforward_cost, SimCostReport};
pub use kickback::{
    apply_pseudo_evolution, phase_kickback, simulate_explicit_kickback, MAX_EXPLICIT_ANCILLAS, MAX_EXPLICIT_SYSTEM,
};
pub use phase::{build_phase_table, PhaseTable};
pub use state::{inverse_qft, qft, read_pcsv, write_pcsv, StateVector};

use crate::ensembles::EnsembleError;
use crate::randcore::RandError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),
    #[error("invalid register: {0}")]
    InvalidRegister(String),
    #[error("size limit exceeded: {0}")]
    SizeOverflow(String),
    #[error("invalid phase table: {0}")]
    InvalidTable(String),
    #[error(transparent)]
    Rand(#[from] RandError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
}
