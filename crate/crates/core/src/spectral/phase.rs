use std::f64::consts::TAU;

use crate::randcore::{par_draws, semicircle_cdf, SeededRng, SemicircleDist};
use crate::stats::ks_statistic;

/// Grid resolution for the exact distance.
const EXACT_GRID: usize = 4096;

/// KS distance between {λt mod 2π : λ ~ semicircle} and the uniform law on
/// [0, 2π), from `n_samples` draws.
pub fn phase_wrap_distance(t: f64, n_samples: usize, rng: &SeededRng) -> f64 {
    assert!(t > 0.0, "t must be positive");
    let dist = SemicircleDist::default();
    let phases = par_draws(rng, n_samples, |_, r| (dist.sample(r) * t).rem_euclid(TAU));
    ks_statistic(&phases, |x| x / TAU)
}

/// Exact CDF of λt mod 2π at φ ∈ [0, 2π): the semicircle mass of every
/// preimage interval [(2πj)/t, (2πj + φ)/t].
pub fn phase_wrap_cdf(phi: f64, t: f64) -> f64 {
    let lo = (-2.0 * t / TAU).floor() as i64;
    let hi = (2.0 * t / TAU).ceil() as i64;
    let terms: Vec<f64> = (lo..=hi)
        .map(|j| {
            let base = TAU * j as f64;
            semicircle_cdf((base + phi) / t) - semicircle_cdf(base / t)
        })
        .collect();
    crate::stats::pairwise_sum(&terms)
}

/// sup over φ of |P(λt mod 2π ≤ φ) − φ/2π|, evaluated on a uniform grid of
/// φ values plus the left limit at 2π.
pub fn phase_wrap_distance_exact(t: f64) -> f64 {
    use rayon::prelude::*;
    assert!(t > 0.0, "t must be positive");
    let grid: Vec<f64> = (0..=EXACT_GRID)
        .into_par_iter()
        .map(|i| {
            let phi = TAU * i as f64 / EXACT_GRID as f64;
            (phase_wrap_cdf(phi, t) - phi / TAU).abs()
        })
        .collect();
    grid.into_iter().fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_cdf_endpoints() {
        for t in [0.5, 3.0, 250.0] {
            assert!(phase_wrap_cdf(0.0, t).abs() < 1e-14);
            assert!((phase_wrap_cdf(TAU, t) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tiny_time_splits_mass_at_zero() {
        // positive λ lands just above 0, negative λ just below 2π
        let d = phase_wrap_distance_exact(1e-6);
        assert!((d - 0.5).abs() < 1e-3, "{d}");
        let e = phase_wrap_distance(1e-6, 10_000, &SeededRng::new(1, 0));
        assert!((e - 0.5).abs() < 0.02, "{e}");
    }

    #[test]
    fn exact_distance_decreases() {
        let ds: Vec<f64> = [1.0, 10.0, 100.0, 1000.0].iter().map(|&t| phase_wrap_distance_exact(t)).collect();
        assert!(ds.windows(2).all(|w| w[1] < w[0]), "{ds:?}");
    }

    #[test]
    fn empirical_matches_exact_within_dkw_band() {
        // DKW: P(sup|F_n − F| > ε) ≤ 2e^{−2nε²}; ε = 0.0077 at n = 1e5 gives 1e−5
        let n = 100_000;
        let eps = (f64::ln(2.0 / 1e-5) / (2.0 * n as f64)).sqrt();
        for (i, t) in [1.0, 10.0].into_iter().enumerate() {
            let e = phase_wrap_distance(t, n, &SeededRng::new(5, i as u64));
            assert!((e - phase_wrap_distance_exact(t)).abs() <= eps);
        }
    }
}
