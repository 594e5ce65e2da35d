use num_complex::Complex64;

use crate::ensembles::{sample_spectrum, EnsembleSpec};
use crate::randcore::{bessel, par_draws, BesselKind, SeededRng};
use crate::stats::{pairwise_sum, Estimate};

use super::SpectralError;

/// Z(Λt) = (1/d) Σⱼ e^{−iλⱼt}.
pub fn spectral_form_factor(eigenvalues: &[f64], t: f64) -> Complex64 {
    let (cos, sin): (Vec<f64>, Vec<f64>) = eigenvalues
        .iter()
        .map(|&l| {
            let (s, c) = (l * t).sin_cos();
            (c, -s)
        })
        .unzip();
    let d = eigenvalues.len() as f64;
    Complex64::new(pairwise_sum(&cos) / d, pairwise_sum(&sin) / d)
}

/// Z(Λt) along a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FormFactorSeries {
    pub times: Vec<f64>,
    pub z_values: Vec<Complex64>,
}

pub fn form_factor_series(eigenvalues: &[f64], times: &[f64]) -> FormFactorSeries {
    FormFactorSeries {
        times: times.to_vec(),
        z_values: times.iter().map(|&t| spectral_form_factor(eigenvalues, t)).collect(),
    }
}

/// |Z(Λt)|^{2k} for `n_samples` fresh spectra, draw i on substream i.
pub fn sff_moment_samples(
    spec: &EnsembleSpec,
    k: u32,
    t: f64,
    n_samples: usize,
    rng: &SeededRng,
) -> Result<Vec<f64>, SpectralError> {
    if !(1..=4).contains(&k) {
        return Err(SpectralError::InvalidArgument(format!("moment order {k} outside 1..=4")));
    }
    spec.validate()?;
    par_draws(rng, n_samples, |_, r| {
        let s = sample_spectrum(spec, r)?;
        Ok(spectral_form_factor(s.eigenvalues(), t).norm_sqr().powi(k as i32))
    })
    .into_iter()
    .collect()
}

/// Monte-Carlo estimate of E|Z(Λt)|^{2k}.
pub fn sff_moments(
    spec: &EnsembleSpec,
    k: u32,
    t: f64,
    n_samples: usize,
    rng: &SeededRng,
) -> Result<Estimate, SpectralError> {
    if n_samples < 2 {
        return Err(SpectralError::InvalidArgument("need at least two samples".into()));
    }
    Ok(Estimate::from_samples(&sff_moment_samples(spec, k, t, n_samples, rng)?))
}

/// Exact E|Z(Λt)|² for `n` iid semicircle levels:
/// (1 − 1/n)(J₁(2t)/t)² + 1/n. For a degenerate spectrum pass n = d̃.
pub fn iid_sff_mean(t: f64, n: usize) -> Result<f64, SpectralError> {
    let phi = if t == 0.0 { 1.0 } else { bessel(BesselKind::J1, 2.0 * t)? / t };
    let inv = 1.0 / n as f64;
    Ok((1.0 - inv) * phi * phi + inv)
}
