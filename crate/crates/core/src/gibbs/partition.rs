use super::GibbsError;
use crate::ensembles::{sample_spectrum, EnsembleSpec, Spectrum};
use crate::randcore::{bessel, par_draws, BesselKind, SeededRng};
use crate::stats::{pairwise_sum, tv_distance, Estimate};

/// Boltzmann weights e^{−βλ_i}/tr e^{−βΛ}, in spectrum order.
pub fn exact_gibbs_weights(spectrum: &Spectrum, beta: f64) -> Result<Vec<f64>, GibbsError> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(GibbsError::InvalidBeta(beta));
    }
    let ev = spectrum.eigenvalues();
    let lo = ev.iter().copied().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = ev.iter().map(|&l| (-beta * (l - lo)).exp()).collect();
    let z = pairwise_sum(&w);
    Ok(w.into_iter().map(|x| x / z).collect())
}

/// d·I₁(2β)/β, with the β → 0 limit d.
pub fn partition_prediction(d: usize, beta: f64) -> Result<f64, GibbsError> {
    if beta == 0.0 {
        return Ok(d as f64);
    }
    Ok(d as f64 * bessel(BesselKind::I1, 2.0 * beta)? / beta)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionStats {
    pub beta: f64,
    pub mean: f64,
    pub variance: f64,
    pub n_samples: usize,
    pub predicted: f64,
}

impl PartitionStats {
    pub fn std_error(&self) -> f64 {
        (self.variance / self.n_samples as f64).sqrt()
    }

    /// Var/mean².
    pub fn relative_variance(&self) -> f64 {
        self.variance / (self.mean * self.mean)
    }

    pub fn z_score(&self) -> f64 {
        (self.mean - self.predicted) / self.std_error()
    }
}

/// Monte-Carlo moments of tr e^{−βΛ} over fresh spectra of `spec`.
pub fn partition_moments(
    spec: &EnsembleSpec,
    beta: f64,
    n_samples: usize,
    rng: &SeededRng,
) -> Result<PartitionStats, GibbsError> {
    if !(beta > 0.0 && beta <= 16.0) {
        return Err(GibbsError::InvalidBeta(beta));
    }
    if n_samples < 100 {
        return Err(GibbsError::InvalidArgument(format!("n_samples = {n_samples} < 100")));
    }
    let traces = par_draws(rng, n_samples, |_, r| -> Result<f64, GibbsError> {
        let s = sample_spectrum(spec, r)?;
        let w: Vec<f64> = s.eigenvalues().iter().map(|&l| (-beta * l).exp()).collect();
        Ok(pairwise_sum(&w))
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let est = Estimate::from_samples(&traces);
    Ok(PartitionStats {
        beta,
        mean: est.mean,
        variance: est.std_dev().powi(2),
        n_samples,
        predicted: partition_prediction(spec.dim(), beta)?,
    })
}

/// TV distance between ensemble-averaged sorted Gibbs profiles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GibbsDistance {
    pub tv: f64,
    pub bootstrap_se: f64,
}

const BOOTSTRAP_ROUNDS: usize = 200;

fn average_profile(profiles: &[Vec<f64>], pick: impl Iterator<Item = usize>) -> Vec<f64> {
    let d = profiles[0].len();
    let mut acc = vec![0.0; d];
    let mut count = 0usize;
    for i in pick {
        for (a, w) in acc.iter_mut().zip(&profiles[i]) {
            *a += w;
        }
        count += 1;
    }
    acc.iter().map(|a| a / count as f64).collect()
}

fn gibbs_profiles(spec: &EnsembleSpec, beta: f64, n: usize, rng: &SeededRng) -> Result<Vec<Vec<f64>>, GibbsError> {
    par_draws(rng, n, |_, r| exact_gibbs_weights(&sample_spectrum(spec, r)?, beta)).into_iter().collect()
}

/// Distance between two batches of sorted Gibbs profiles, with a bootstrap
/// standard error over draws.
pub fn profile_distance(a: &[Vec<f64>], b: &[Vec<f64>], rng: &SeededRng) -> GibbsDistance {
    let tv = tv_distance(&average_profile(a, 0..a.len()), &average_profile(b, 0..b.len()));
    let boots = par_draws(rng, BOOTSTRAP_ROUNDS, |_, r| {
        let pa = average_profile(a, (0..a.len()).map(|_| r.below(a.len() as u64) as usize));
        let pb = average_profile(b, (0..b.len()).map(|_| r.below(b.len() as u64) as usize));
        tv_distance(&pa, &pb)
    });
    GibbsDistance { tv, bootstrap_se: Estimate::from_samples(&boots).std_dev() }
}

/// TV between the averaged sorted Gibbs weight profiles of GUE and of the
/// degenerate iid pseudo-GUE with d̃ distinct levels, `n_draws` spectra each.
pub fn gibbs_ensemble_distance(
    beta: f64,
    d: usize,
    dtilde: usize,
    n_draws: usize,
    rng: &SeededRng,
) -> Result<GibbsDistance, GibbsError> {
    if !(0.0..=8.0).contains(&beta) {
        return Err(GibbsError::InvalidBeta(beta));
    }
    if !d.is_power_of_two() || !(4..=256).contains(&d) || n_draws < 2 {
        return Err(GibbsError::InvalidArgument(format!("d = {d}, n_draws = {n_draws}")));
    }
    let n = d.trailing_zeros();
    let gue = gibbs_profiles(&EnsembleSpec::gue(n), beta, n_draws, &rng.substream(0))?;
    let pseudo = gibbs_profiles(&EnsembleSpec::pseudo_iid(n, dtilde)?, beta, n_draws, &rng.substream(1))?;
    Ok(profile_distance(&gue, &pseudo, &rng.substream(2)))
}
