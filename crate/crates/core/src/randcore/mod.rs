//! Deterministic randomness, the Wigner semicircle law, k-wise independent
//! function families, quadrature and the Bessel functions the ensemble
//! formulas are written in.

mod kwise;
pub mod quadrature;
mod rng;
mod semicircle;
mod special;

pub use kwise::{is_prime_u64, KWiseFamily};
pub use quadrature::{gauss_kronrod, gauss_legendre, QuadResult};
pub use rng::{par_draws, SeededRng};
pub use semicircle::{semicircle_cdf, semicircle_inv_cdf, semicircle_pdf, SemicircleDist};
pub use special::{bessel, bessel_i1_scaled, bessel_j1_root, early_time_root, BesselKind};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RandError {
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("input {x} is not below the field modulus {modulus}")]
    DomainOverflow { x: u64, modulus: u64 },
    #[error("invalid k-wise family: {0}")]
    InvalidFamily(String),
    #[error("argument {0} is outside the supported range |x| <= 1e4")]
    UnsupportedArgument(f64),
    #[error("I1({0}) overflows f64; use bessel_i1_scaled")]
    Overflow(f64),
    #[error("quadrature did not converge: value {value}, error estimate {abs_error}")]
    QuadratureNotConverged { value: f64, abs_error: f64 },
}
