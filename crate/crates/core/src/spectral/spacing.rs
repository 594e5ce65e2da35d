use crate::ensembles::Spectrum;
use crate::randcore::{gauss_kronrod, semicircle_cdf, semicircle_pdf, QuadResult};

use super::SpectralError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GapNormalization {
    /// ŝ = d·s.
    TimesD,
    /// s divided by the sample mean gap.
    MeanGap,
}

/// Consecutive spacings of one spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSample {
    pub gaps: Vec<f64>,
    pub normalization: GapNormalization,
}

impl GapSample {
    pub fn mean(&self) -> f64 {
        crate::stats::mean(&self.gaps)
    }
}

fn normalize(raw: Vec<f64>, d: usize, normalization: GapNormalization) -> GapSample {
    let gaps = match normalization {
        GapNormalization::TimesD => raw.into_iter().map(|g| g * d as f64).collect(),
        GapNormalization::MeanGap => {
            let m = crate::stats::mean(&raw);
            if m > 0.0 {
                raw.into_iter().map(|g| g / m).collect()
            } else {
                raw
            }
        }
    };
    GapSample { gaps, normalization }
}

/// All d − 1 consecutive gaps of the sorted spectrum.
pub fn level_spacings(spectrum: &Spectrum, normalization: GapNormalization) -> GapSample {
    let ev = spectrum.eigenvalues();
    let raw = ev.windows(2).map(|w| w[1] - w[0]).collect();
    normalize(raw, ev.len(), normalization)
}

/// Gaps between the levels whose rank lies in the middle `fraction` of the
/// spectrum, which keeps clear of the band edges.
pub fn bulk_spacings(spectrum: &Spectrum, normalization: GapNormalization, fraction: f64) -> GapSample {
    let ev = spectrum.eigenvalues();
    let d = ev.len();
    let cut = ((1.0 - fraction.clamp(0.0, 1.0)) / 2.0 * d as f64).round() as usize;
    let slice = &ev[cut..d - cut];
    let raw = slice.windows(2).map(|w| w[1] - w[0]).collect();
    normalize(raw, d, normalization)
}

/// Density of ŝ = d·s for the gap between neighbouring levels of d iid
/// semicircle eigenvalues:
/// ∫ p(λ) p(λ + s) (1 − F(λ + s) + F(λ))^{d−2} dλ over [−2, 2 − s].
pub fn iid_gap_density_hat(s_hat: f64, d: usize) -> Result<QuadResult, SpectralError> {
    if s_hat.is_nan() || s_hat < 0.0 || d < 2 {
        return Err(SpectralError::InvalidArgument(format!("s = {s_hat}, d = {d}")));
    }
    let s = s_hat / d as f64;
    if s >= 4.0 {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, evaluations: 0 });
    }
    let integrand = |l: f64| {
        let mass = semicircle_cdf(l + s) - semicircle_cdf(l);
        semicircle_pdf(l) * semicircle_pdf(l + s) * (1.0 - mass).max(0.0).powi(d as i32 - 2)
    };
    Ok(gauss_kronrod(integrand, -2.0, 2.0 - s, 1e-10, 1e-8)?)
}

/// Gap density P(s) in unnormalized units (P(s) = d · density of ŝ at d·s).
pub fn iid_gap_pdf(s: f64, d: usize) -> Result<QuadResult, SpectralError> {
    let q = iid_gap_density_hat(s * d as f64, d)?;
    let scale = d as f64;
    Ok(QuadResult { value: q.value * scale, abs_error: q.abs_error * scale, evaluations: q.evaluations })
}

/// Fixed-width histogram of pooled gaps on [0, max). Densities are
/// normalized by the total number of gaps, including any beyond `max`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacingHistogram {
    pub bin_width: f64,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl SpacingHistogram {
    pub fn from_gaps(gaps: &[f64], bin_width: f64, max: f64) -> Result<Self, SpectralError> {
        if bin_width.is_nan() || bin_width <= 0.0 || max.is_nan() || max <= bin_width {
            return Err(SpectralError::InvalidArgument(format!("bin width {bin_width}, range {max}")));
        }
        let bins = (max / bin_width).round() as usize;
        let mut counts = vec![0u64; bins];
        for &g in gaps {
            let b = (g / bin_width).floor();
            if b >= 0.0 && (b as usize) < bins {
                counts[b as usize] += 1;
            }
        }
        Ok(Self { bin_width, counts, total: gaps.len() as u64 })
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|i| (i as f64 + 0.5) * self.bin_width).collect()
    }

    pub fn densities(&self) -> Vec<f64> {
        let norm = self.total as f64 * self.bin_width;
        self.counts.iter().map(|&c| c as f64 / norm).collect()
    }

    /// Extrapolates the density to zero with a least-squares line through
    /// log density over the first `bins` bins, weighted by counts.
    pub fn log_linear_intercept(&self, bins: usize) -> Result<f64, SpectralError> {
        let (xs, dens) = (self.centers(), self.densities());
        let pts: Vec<(f64, f64, f64)> = (0..bins.min(self.counts.len()))
            .filter(|&i| self.counts[i] > 0)
            .map(|i| (xs[i], dens[i].ln(), self.counts[i] as f64))
            .collect();
        if pts.len() < 2 {
            return Err(SpectralError::InvalidArgument("too few occupied bins for a fit".into()));
        }
        let w: f64 = pts.iter().map(|p| p.2).sum();
        let mx = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / w;
        let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / w;
        let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - mx) * (p.1 - my)).sum();
        Ok((my - sxy / sxx * mx).exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::Provenance;
    use std::f64::consts::PI;

    #[test]
    fn histogram_of_exponential_gaps() {
        let gaps: Vec<f64> = (0..20_000).map(|i| -((i as f64 + 0.5) / 20_000.0).ln() / 2.0).collect();
        let h = SpacingHistogram::from_gaps(&gaps, 0.05, 3.0).unwrap();
        assert_eq!(h.counts.len(), 60);
        assert!((h.log_linear_intercept(10).unwrap() - 2.0).abs() < 0.02);
        let mass: f64 = h.densities().iter().sum::<f64>() * 0.05;
        assert!(mass <= 1.0 && mass > 0.99);
    }

    #[test]
    fn spacing_arithmetic() {
        let d = 3.0;
        let s = Spectrum::new(vec![0.0, 1.0 / d, 3.0 / d], Provenance::Iid);
        let g = level_spacings(&s, GapNormalization::TimesD);
        assert!((g.gaps[0] - 1.0).abs() < 1e-12 && (g.gaps[1] - 2.0).abs() < 1e-12);
        let m = level_spacings(&s, GapNormalization::MeanGap);
        assert!((m.mean() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_gaps_vanish() {
        let s = Spectrum::new(vec![0.7; 8], Provenance::Degenerate { dtilde: 1 });
        assert!(level_spacings(&s, GapNormalization::TimesD).gaps.iter().all(|&g| g == 0.0));
        assert!(level_spacings(&s, GapNormalization::MeanGap).gaps.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn bulk_drops_edges() {
        let s = Spectrum::new((0..10).map(|i| i as f64).collect(), Provenance::Iid);
        let g = bulk_spacings(&s, GapNormalization::MeanGap, 0.8);
        assert_eq!(g.gaps.len(), 7);
    }

    #[test]
    fn gap_density_at_zero() {
        for d in [8, 64, 1024] {
            let v = iid_gap_density_hat(0.0, d).unwrap().value;
            assert!((v - 8.0 / (3.0 * PI * PI)).abs() < 1e-9, "d = {d}: {v}");
        }
    }

    #[test]
    fn gap_density_normalized_and_decreasing() {
        let d = 64;
        let q = gauss_kronrod(|s| iid_gap_density_hat(s, d).unwrap().value, 0.0, 4.0 * d as f64, 1e-7, 1e-7).unwrap();
        assert!((q.value - 1.0).abs() < 1e-5, "{}", q.value);
        let mut prev = f64::INFINITY;
        for i in 0..40 {
            let v = iid_gap_density_hat(i as f64 * 0.25, d).unwrap().value;
            assert!(v < prev);
            prev = v;
        }
    }

    #[test]
    fn unnormalized_pdf_scales() {
        let d = 32;
        let a = iid_gap_pdf(0.01, d).unwrap().value;
        let b = iid_gap_density_hat(0.32, d).unwrap().value;
        assert!((a - d as f64 * b).abs() < 1e-9);
    }
}
