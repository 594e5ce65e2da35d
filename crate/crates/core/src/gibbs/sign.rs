use std::f64::consts::PI;

use super::GibbsError;
use crate::ensembles::sample_gue;
use crate::randcore::{par_draws, SeededRng};
use crate::stats::{pairwise_sum, Estimate};

/// Which off-diagonal entries of Re H enter the 1-norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignConvention {
    /// Strict upper triangle i < j; its expectation tends to √d/(4√π).
    #[default]
    UpperTriangle,
    /// Every i ≠ j; exactly twice the upper-triangle value.
    AllOffDiagonal,
}

/// Expected ν₁ at finite d: (d−1)/(4√(πd)) per upper triangle.
pub fn sign_prediction(d: usize, convention: SignConvention) -> f64 {
    let d = d as f64;
    let upper = (d - 1.0) / (4.0 * (PI * d).sqrt());
    match convention {
        SignConvention::UpperTriangle => upper,
        SignConvention::AllOffDiagonal => 2.0 * upper,
    }
}

/// ν₁ = d⁻¹ Σ max(Re H_ij, 0) of one GUE draw per sample.
pub fn average_sign_samples(
    d: usize,
    n_samples: usize,
    convention: SignConvention,
    rng: &SeededRng,
) -> Result<Vec<f64>, GibbsError> {
    if d < 2 {
        return Err(GibbsError::InvalidArgument(format!("d = {d} < 2")));
    }
    Ok(par_draws(rng, n_samples, |_, r| {
        let h = sample_gue(d, r);
        let m = h.matrix();
        let mut pos = Vec::with_capacity(d * (d - 1));
        for j in 0..d {
            for i in 0..d {
                let keep = match convention {
                    SignConvention::UpperTriangle => i < j,
                    SignConvention::AllOffDiagonal => i != j,
                };
                if keep {
                    pos.push(m[(i, j)].re.max(0.0));
                }
            }
        }
        pairwise_sum(&pos) / d as f64
    }))
}

pub fn average_sign(
    d: usize,
    n_samples: usize,
    convention: SignConvention,
    rng: &SeededRng,
) -> Result<Estimate, GibbsError> {
    Ok(Estimate::from_samples(&average_sign_samples(d, n_samples, convention, rng)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conventions_differ_by_two() {
        let rng = SeededRng::new(8, 0);
        let up = average_sign_samples(16, 20, SignConvention::UpperTriangle, &rng).unwrap();
        let all = average_sign_samples(16, 20, SignConvention::AllOffDiagonal, &rng).unwrap();
        for (u, a) in up.iter().zip(&all) {
            assert!(u >= &0.0);
            assert!((2.0 * u - a).abs() < 1e-12);
        }
    }

    #[test]
    fn upper_triangle_mean() {
        let est = average_sign(32, 300, SignConvention::UpperTriangle, &SeededRng::new(2, 0)).unwrap();
        assert!(est.within(sign_prediction(32, SignConvention::UpperTriangle), 3.5), "{est:?}");
    }

    #[test]
    fn prediction_approaches_asymptote() {
        let asym = |d: f64| d.sqrt() / (4.0 * PI.sqrt());
        assert!((sign_prediction(64, SignConvention::UpperTriangle) - 1.1107).abs() < 1e-4);
        let d = 1 << 20;
        assert!((sign_prediction(d, SignConvention::UpperTriangle) / asym(d as f64) - 1.0).abs() < 1e-5);
    }
}
