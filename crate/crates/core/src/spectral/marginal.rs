use std::f64::consts::PI;

use crate::randcore::quadrature::composite_2d;
use crate::randcore::{semicircle_pdf, QuadResult, RandError};

use super::SpectralError;

/// Coincident-point threshold for the sinc kernel.
const SINC_EPS: f64 = 1e-12;
const TV_TOL: f64 = 1e-4;
const TV_ORDER: usize = 8;
const TV_MAX_PANELS: usize = 4096;

fn sinc_kernel(d: f64, delta: f64) -> f64 {
    if delta.abs() < SINC_EPS {
        1.0
    } else {
        (d * delta).sin() / (d * delta)
    }
}

fn half_width(lambda: f64) -> f64 {
    (4.0 - lambda * lambda).max(0.0).sqrt() / 2.0
}

fn marginal2(l1: f64, l2: f64, d: usize) -> f64 {
    let df = d as f64;
    let b = sinc_kernel(df, l1 - l2);
    let det = half_width(l1) * half_width(l2) - b * b;
    (df / ((df - 1.0) * PI * PI) * det).max(0.0)
}

/// k-point marginal of the d×d GUE eigenvalue density for k ∈ {1, 2}:
/// ((d−k)!·(d/π)^k / d!)·det(A + B) with A = diag(√(4−λᵢ²)/2) and
/// B_ij = sin(d(λᵢ−λⱼ))/(d(λᵢ−λⱼ)) off the diagonal.
///
/// Negative determinants, which the large-d kernel produces in a thin band
/// around the diagonal, are clamped to zero.
pub fn marginal_density(lambdas: &[f64], d: usize) -> Result<f64, SpectralError> {
    if lambdas.iter().any(|l| l.is_nan() || l.abs() > 2.0) {
        return Err(SpectralError::InvalidArgument("eigenvalues must lie in [-2, 2]".into()));
    }
    match *lambdas {
        [l] => Ok(semicircle_pdf(l)),
        [l1, l2] if d >= 2 => Ok(marginal2(l1, l2, d)),
        _ => Err(SpectralError::InvalidArgument(format!("order {} with d = {d} is not supported", lambdas.len()))),
    }
}

/// Marginal density tabulated on a midpoint grid of [−2, 2]^k.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalGrid {
    pub order: usize,
    pub dim: usize,
    pub grid: Vec<f64>,
    /// Row-major over `grid`^order.
    pub density: Vec<f64>,
}

impl MarginalGrid {
    pub fn new(order: usize, dim: usize, points: usize) -> Result<Self, SpectralError> {
        if !(1..=2).contains(&order) || points == 0 {
            return Err(SpectralError::InvalidArgument(format!("order {order}, {points} points")));
        }
        let h = 4.0 / points as f64;
        let grid: Vec<f64> = (0..points).map(|i| -2.0 + (i as f64 + 0.5) * h).collect();
        let density = if order == 1 {
            grid.iter().map(|&l| semicircle_pdf(l)).collect()
        } else {
            grid.iter().flat_map(|&a| grid.iter().map(move |&b| marginal2(a, b, dim))).collect()
        };
        Ok(Self { order, dim, grid, density })
    }

    pub fn spacing(&self) -> f64 {
        4.0 / self.grid.len() as f64
    }

    /// Midpoint-rule integral of the tabulated density.
    pub fn integral(&self) -> f64 {
        crate::stats::pairwise_sum(&self.density) * self.spacing().powi(self.order as i32)
    }
}

/// Total variation distance between the GUE two-point marginal and the
/// product of two semicircles, ½∬|p⁽²⁾ − p⁽¹⁾⊗p⁽¹⁾|.
///
/// Integrated in angle coordinates λ = 2 sin θ, which removes the square-root
/// edges, with a tensor Gauss–Legendre rule refined until two successive
/// panel counts agree to 1e−4.
pub fn tv_distance_marginal2(d: usize) -> Result<QuadResult, SpectralError> {
    if d < 4 {
        return Err(SpectralError::InvalidArgument(format!("d = {d} < 4")));
    }
    let integrand = |th: f64, ph: f64| {
        let (l1, l2) = (2.0 * th.sin(), 2.0 * ph.sin());
        let jac = 4.0 * th.cos() * ph.cos();
        0.5 * (marginal2(l1, l2, d) - semicircle_pdf(l1) * semicircle_pdf(l2)).abs() * jac
    };
    let range = (-PI / 2.0, PI / 2.0);
    let mut panels = (d / 4).max(16);
    let mut prev = composite_2d(&integrand, range, range, panels, TV_ORDER);
    let mut evaluations = (panels * TV_ORDER).pow(2);
    loop {
        panels *= 2;
        let next = composite_2d(&integrand, range, range, panels, TV_ORDER);
        evaluations += (panels * TV_ORDER).pow(2);
        let err = (next - prev).abs();
        if err <= TV_TOL {
            return Ok(QuadResult { value: next.clamp(0.0, 1.0), abs_error: err, evaluations });
        }
        if panels >= TV_MAX_PANELS {
            return Err(RandError::QuadratureNotConverged { value: next, abs_error: err }.into());
        }
        prev = next;
    }
}
