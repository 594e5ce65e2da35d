use std::f64::consts::PI;

use super::RandError;

/// Largest |x| accepted by [`bessel`].
pub const BESSEL_MAX_ARG: f64 = 1e4;
const MAX_DOUBLINGS: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselKind {
    I1,
    J1,
}

/// Trapezoid rule over [0, π] for an integrand whose 2π-periodic even
/// extension is smooth, doubling the panel count until two successive
/// values agree to `tol(value)`.
fn periodic_trapezoid<F, T>(f: F, tol: T) -> Result<f64, RandError>
where
    F: Fn(f64) -> f64,
    T: Fn(f64) -> f64,
{
    let mut n = 8usize;
    let mut h = PI / n as f64;
    let mut sum = 0.5 * (f(0.0) + f(PI)) + (1..n).map(|j| f(j as f64 * h)).sum::<f64>();
    let mut value = sum * h / PI;
    for _ in 0..MAX_DOUBLINGS {
        let mids: f64 = (0..n).map(|j| f((j as f64 + 0.5) * h)).sum();
        sum += mids;
        n *= 2;
        h *= 0.5;
        let next = sum * h / PI;
        let diff = (next - value).abs();
        value = next;
        if diff <= tol(value) {
            return Ok(value);
        }
    }
    Err(RandError::QuadratureNotConverged { value, abs_error: f64::NAN })
}

fn check_range(x: f64) -> Result<(), RandError> {
    if !x.is_finite() || x.abs() > BESSEL_MAX_ARG {
        Err(RandError::UnsupportedArgument(x))
    } else {
        Ok(())
    }
}

/// e^{−|x|}·I₁(x), finite over the whole supported range.
pub fn bessel_i1_scaled(x: f64) -> Result<f64, RandError> {
    check_range(x)?;
    let ax = x.abs();
    if ax < 1e-2 {
        // the cos θ weight cancels almost completely here; use the series
        let x2 = ax * ax;
        let v = 0.5 * ax * (1.0 + x2 / 8.0 * (1.0 + x2 / 24.0 * (1.0 + x2 / 48.0)));
        return Ok((-ax).exp() * if x < 0.0 { -v } else { v });
    }
    let v =
        periodic_trapezoid(|th: f64| (ax * (th.cos() - 1.0)).exp() * th.cos(), |v: f64| 1e-14 * v.abs().max(1e-300))?;
    Ok(if x < 0.0 { -v } else { v })
}

/// I₁ or J₁ from their integral representations
/// I₁(x) = (1/π)∫₀^π e^{x cos θ} cos θ dθ and J₁(x) = (1/π)∫₀^π cos(θ − x sin θ) dθ.
pub fn bessel(kind: BesselKind, x: f64) -> Result<f64, RandError> {
    check_range(x)?;
    match kind {
        BesselKind::I1 => {
            if x == 0.0 {
                return Ok(0.0);
            }
            let v = bessel_i1_scaled(x)? * x.abs().exp();
            if v.is_finite() {
                Ok(v)
            } else {
                Err(RandError::Overflow(x))
            }
        }
        BesselKind::J1 => periodic_trapezoid(|th: f64| (th - x * th.sin()).cos(), |_| 1e-14),
    }
}

/// k-th positive root of J₁ (k ≥ 1), bracketed on a 0.1 grid and bisected.
pub fn bessel_j1_root(k: usize) -> Result<f64, RandError> {
    assert!(k >= 1, "roots are numbered from 1");
    let j1 = |x: f64| bessel(BesselKind::J1, x);
    let mut found = 0;
    let mut lo = 0.5;
    let mut f_lo = j1(lo)?;
    loop {
        let hi = lo + 0.1;
        let f_hi = j1(hi)?;
        if f_lo.signum() != f_hi.signum() {
            found += 1;
            if found == k {
                let (mut a, mut b, mut fa) = (lo, hi, f_lo);
                while b - a > 1e-13 {
                    let m = 0.5 * (a + b);
                    let fm = j1(m)?;
                    if fm.signum() == fa.signum() {
                        a = m;
                        fa = fm;
                    } else {
                        b = m;
                    }
                }
                return Ok(0.5 * (a + b));
            }
        }
        lo = hi;
        f_lo = f_hi;
    }
}

/// First time at which J₁(2t)/t vanishes: half the first J₁ root.
pub fn early_time_root() -> f64 {
    bessel_j1_root(1).expect("first root lies well inside the supported range") / 2.0
}
