//! Level spacings, exact GUE marginals and their spoofing distance, the
//! spectral form factor, and the wrapped-phase distribution.

mod marginal;
mod phase;
mod sff;
mod spacing;

pub use marginal::{marginal_density, tv_distance_marginal2, MarginalGrid};
pub use phase::{phase_wrap_cdf, phase_wrap_distance, phase_wrap_distance_exact};
pub use sff::{
    form_factor_series, iid_sff_mean, sff_moment_samples, sff_moments, spectral_form_factor, FormFactorSeries,
};
pub use spacing::{
    bulk_spacings, iid_gap_density_hat, iid_gap_pdf, level_spacings, GapNormalization, GapSample, SpacingHistogram,
};

use crate::ensembles::EnsembleError;
use crate::randcore::RandError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Numerical(#[from] RandError),
    #[error(transparent)]
    Ensemble(#[from] EnsembleError),
}
