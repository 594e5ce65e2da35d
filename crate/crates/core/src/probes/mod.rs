//! Probes of chaos on evolved states and operators: 2-Rényi entanglement,
//! stabilizer entropy, local operator entanglement and the 4-point OTOC,
//! with the Haar-average reference values they are compared against.

mod entropy;
mod haar;
mod operator;
mod pauli;
mod report;

pub use entropy::{
    renyi2_entanglement, stabilizer_entropy, stabilizer_purity, subsystem_purity, MAX_STABILIZER_QUBITS,
};
pub use haar::{haar_reference, haar_samples, HaarQuantity, HaarSampleConfig, HaarSamples};
pub use operator::{
    heisenberg, local_operator_entanglement, operator_purity, otoc4_exact, otoc4_sampled, MAX_LOE_QUBITS,
};
pub use pauli::PauliLabel;
pub use report::{ProbeKind, ProbeReport};

use crate::circuitsim::SimError;
use crate::ensembles::EnsembleError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbeError {
    #[error("invalid bipartition: {0}")]
    InvalidCut(String),
    #[error("{n} qubits exceeds the enumeration limit of {limit}")]
    EnumerationOverflow { n: u32, limit: u32 },
    #[error("invalid Pauli: {0}")]
    InvalidPauli(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
}

/// Validates `cut` as a nonempty proper subset of n qubits and returns it
/// with its complement.
pub(crate) fn split_cut(n: u32, cut: &[u32]) -> Result<(Vec<u32>, Vec<u32>), ProbeError> {
    let mut mask = 0u64;
    for &q in cut {
        if q >= n || mask & (1 << q) != 0 {
            return Err(ProbeError::InvalidCut(format!("qubit {q} in {cut:?} for n = {n}")));
        }
        mask |= 1 << q;
    }
    if cut.is_empty() || cut.len() as u32 == n {
        return Err(ProbeError::InvalidCut(format!("{cut:?} is not a proper subset of {n} qubits")));
    }
    let mut a = cut.to_vec();
    a.sort_unstable();
    let b = (0..n).filter(|q| mask & (1 << q) == 0).collect();
    Ok((a, b))
}

/// The first ⌊n/2⌋ qubits.
pub fn half_cut(n: u32) -> Vec<u32> {
    (0..n / 2).collect()
}
