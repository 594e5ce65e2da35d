//! Random-matrix and pseudochaos simulation laboratory.
//!
//! The crate builds the Gaussian unitary ensemble (GUE) together with its
//! "pseudo-GUE" imitators, whose spectra are drawn independently (or only
//! k-wise independently) from the Wigner semicircle and may be heavily
//! degenerate. On top of the ensembles it provides:
//!
//! - [`spectral`]: level spacings, exact GUE marginal densities, spoofing
//!   distances, the spectral form factor and its moments;
//! - [`probes`]: OTOCs, 2-Rényi entanglement, local operator entanglement,
//!   stabilizer entropy and the Haar-average reference formulas;
//! - [`circuitsim`]: statevector simulation of controlled pseudo-GUE time
//!   evolution by phase kickback, explicit and implicit;
//! - [`gibbs`]: rejection-sampling Gibbs preparation and partition-function
//!   statistics.
//!
//! Every stochastic routine takes an explicit [`SeededRng`] and splits it into
//! per-draw substreams, so results do not depend on the rayon pool size.

pub mod circuitsim;
pub mod ensembles;
pub mod gibbs;
pub mod probes;
pub mod randcore;
pub mod spectral;
pub mod stats;

pub use circuitsim::StateVector;
pub use ensembles::{EnsembleKind, EnsembleSpec, HermitianMatrix, Spectrum, UnitaryMatrix};
pub use randcore::SeededRng;
pub use stats::Estimate;

pub use num_complex::Complex64;
