use std::f64::consts::PI;

use super::{RandError, SeededRng};

/// Absolute tolerance on λ at which the inverse-CDF bisection stops.
const INV_CDF_TOL: f64 = 1e-12;

/// Wigner semicircle density √(4−λ²)/(2π), zero outside [−2, 2].
pub fn semicircle_pdf(lambda: f64) -> f64 {
    if lambda.abs() >= 2.0 {
        0.0
    } else {
        (4.0 - lambda * lambda).sqrt() / (2.0 * PI)
    }
}

/// Closed-form semicircle CDF, clamped to [0, 1].
pub fn semicircle_cdf(x: f64) -> f64 {
    if x <= -2.0 {
        return 0.0;
    }
    if x >= 2.0 {
        return 1.0;
    }
    let v = (x * (4.0 - x * x).sqrt() + 4.0 * (x / 2.0).asin()) / (4.0 * PI) + 0.5;
    v.clamp(0.0, 1.0)
}

/// Inverse CDF by bisection on [−2, 2].
pub fn semicircle_inv_cdf(u: f64) -> Result<f64, RandError> {
    if !(0.0..=1.0).contains(&u) {
        return Err(RandError::InvalidProbability(u));
    }
    if u == 0.0 {
        return Ok(-2.0);
    }
    if u == 1.0 {
        return Ok(2.0);
    }
    let (mut lo, mut hi) = (-2.0_f64, 2.0_f64);
    while hi - lo > INV_CDF_TOL {
        let mid = 0.5 * (lo + hi);
        if semicircle_cdf(mid) < u {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The semicircle law on [−2, 2] (unit variance).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemicircleDist {
    pub support_low: f64,
    pub support_high: f64,
}

impl Default for SemicircleDist {
    fn default() -> Self {
        Self { support_low: -2.0, support_high: 2.0 }
    }
}

impl SemicircleDist {
    pub fn pdf(&self, lambda: f64) -> f64 {
        semicircle_pdf(lambda)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        semicircle_cdf(x)
    }

    pub fn inv_cdf(&self, u: f64) -> Result<f64, RandError> {
        semicircle_inv_cdf(u)
    }

    pub fn sample(&self, rng: &mut SeededRng) -> f64 {
        // uniform() < 1 always, so the inverse cannot fail
        semicircle_inv_cdf(rng.uniform()).expect("uniform draw lies in [0, 1)")
    }

    pub fn sample_n(&self, rng: &mut SeededRng, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}
