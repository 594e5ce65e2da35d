//! Gibbs-state preparation by rejection sampling in the eigenbasis,
//! partition-function statistics, ensemble-level Gibbs distances and the
//! Monte-Carlo average sign of GUE Hamiltonians.

mod partition;
mod sampler;
mod sign;

pub use partition::{
    exact_gibbs_weights, gibbs_ensemble_distance, partition_moments, partition_prediction, profile_distance,
    GibbsDistance, PartitionStats,
};
pub use sampler::{
    acceptance_probability, accepts, accepts_unit, gibbs_batch, gibbs_sample, rejection_constant, ClassMap,
    EnergyOracle, GibbsSampleBatch, ATTEMPT_BUDGET,
};
pub use sign::{average_sign, average_sign_samples, sign_prediction, SignConvention};

use thiserror::Error;

use crate::ensembles::EnsembleError;
use crate::randcore::RandError;

#[derive(Debug, Error)]
pub enum GibbsError {
    #[error("inverse temperature {0} outside the supported range")]
    InvalidBeta(f64),
    #[error("no sample accepted within {attempts} attempts")]
    BudgetExceeded { attempts: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Rand(#[from] RandError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
}
