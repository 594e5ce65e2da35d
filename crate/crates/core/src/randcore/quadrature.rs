//! One- and two-dimensional numerical integration.

use std::f64::consts::PI;

use super::RandError;

/// Value of an integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[allow(clippy::excessive_precision)]
const K15_NODES: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_3,
    0.949_107_912_342_758_524_526_189_684_047_9,
    0.864_864_423_359_769_072_789_712_788_640_9,
    0.741_531_185_599_394_439_863_864_773_280_8,
    0.586_087_235_467_691_130_294_144_845_693_0,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_2,
    0.0,
];

#[allow(clippy::excessive_precision)]
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_5,
    0.140_653_259_715_525_918_745_189_590_510_2,
    0.169_004_726_639_267_902_826_583_426_598_6,
    0.190_350_578_064_785_409_913_256_402_421_0,
    0.204_432_940_075_298_892_414_161_999_234_6,
    0.209_482_141_084_727_828_012_999_174_891_7,
];

/// Gauss weights on the odd-indexed Kronrod nodes (and the centre).
#[allow(clippy::excessive_precision)]
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_1,
    0.279_705_391_489_276_667_901_467_771_423_8,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_3,
];

const MAX_INTERVALS: usize = 4000;

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = K15_WEIGHTS[7] * fc;
    let mut gauss = G7_WEIGHTS[3] * fc;
    for j in 0..7 {
        let dx = h * K15_NODES[j];
        let pair = f(c - dx) + f(c + dx);
        kronrod += K15_WEIGHTS[j] * pair;
        if j % 2 == 1 {
            gauss += G7_WEIGHTS[j / 2] * pair;
        }
    }
    Panel { a, b, value: kronrod * h, error: ((kronrod - gauss) * h).abs() }
}

/// Adaptive G7/K15 quadrature of `f` over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate falls below `max(abs_tol, rel_tol·|I|)`. Fails with the achieved
/// estimate if the interval budget runs out.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<QuadResult, RandError> {
    if a == b {
        return Ok(QuadResult { value: 0.0, abs_error: 0.0, evaluations: 0 });
    }
    let mut panels = vec![kronrod_panel(&f, a, b)];
    let mut evaluations = 15;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(QuadResult { value, abs_error: error, evaluations });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let Panel { a, b, .. } = panels.swap_remove(worst);
        let mid = 0.5 * (a + b);
        if panels.len() + 2 > MAX_INTERVALS || mid <= a || mid >= b {
            return Err(RandError::QuadratureNotConverged { value, abs_error: error });
        }
        panels.push(kronrod_panel(&f, a, mid));
        panels.push(kronrod_panel(&f, mid, b));
        evaluations += 30;
    }
}

/// Gauss–Legendre nodes and weights on [−1, 1], by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite tensor-product Gauss–Legendre rule on a rectangle with
/// `panels × panels` cells of `order²` points each. Rows are evaluated in
/// parallel and reduced in a fixed order.
pub fn composite_2d<F: Fn(f64, f64) -> f64 + Sync>(
    f: &F,
    (ax, bx): (f64, f64),
    (ay, by): (f64, f64),
    panels: usize,
    order: usize,
) -> f64 {
    use rayon::prelude::*;
    let (gx, gw) = gauss_legendre(order);
    let axis = |a: f64, b: f64| -> Vec<(f64, f64)> {
        let h = (b - a) / panels as f64;
        (0..panels)
            .flat_map(|p| {
                let lo = a + p as f64 * h;
                gx.iter().zip(&gw).map(move |(&x, &w)| (lo + 0.5 * h * (x + 1.0), 0.5 * h * w))
            })
            .collect()
    };
    let xs = axis(ax, bx);
    let ys = axis(ay, by);
    let rows: Vec<f64> = xs
        .par_iter()
        .map(|&(x, wx)| {
            let row: Vec<f64> = ys.iter().map(|&(y, wy)| wy * f(x, y)).collect();
            wx * crate::stats::pairwise_sum(&row)
        })
        .collect();
    crate::stats::pairwise_sum(&rows)
}

/// [`composite_2d`] at `panels` and `2·panels`, reporting the finer value
/// and the difference as its error estimate.
pub fn composite_2d_refined<F: Fn(f64, f64) -> f64 + Sync>(
    f: &F,
    x_range: (f64, f64),
    y_range: (f64, f64),
    panels: usize,
    order: usize,
) -> QuadResult {
    let coarse = composite_2d(f, x_range, y_range, panels, order);
    let fine = composite_2d(f, x_range, y_range, 2 * panels, order);
    let evaluations = 5 * (panels * order).pow(2);
    QuadResult { value: fine, abs_error: (fine - coarse).abs(), evaluations }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_weights_sum_to_two() {
        for n in [1, 2, 5, 16, 33] {
            let (_, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13, "n = {n}");
        }
    }

    #[test]
    fn legendre_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(6);
        // ∫ x^10 over [−1, 1] = 2/11
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(10)).sum();
        assert!((v - 2.0 / 11.0).abs() < 1e-14);
        // two-point rule nodes are ±1/√3
        let (x2, _) = gauss_legendre(2);
        assert!((x2[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn kronrod_smooth_integrals() {
        let q = gauss_kronrod(f64::sin, 0.0, PI, 1e-13, 1e-13).unwrap();
        assert!((q.value - 2.0).abs() < 1e-13);
        let q = gauss_kronrod(|x| (-x * x).exp(), -10.0, 10.0, 1e-13, 1e-13).unwrap();
        assert!((q.value - PI.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn kronrod_handles_endpoint_singularity() {
        // ∫₀¹ 1/√x = 2
        let q = gauss_kronrod(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-9, 0.0).unwrap();
        assert!((q.value - 2.0).abs() < 1e-8, "{q:?}");
        assert!(q.abs_error <= 1e-9);
    }

    #[test]
    fn kronrod_reports_non_convergence() {
        let r = gauss_kronrod(|x| if x > 0.3 { 1.0 / (x - 0.3) } else { 0.0 }, 0.0, 1.0, 1e-12, 0.0);
        assert!(matches!(r, Err(RandError::QuadratureNotConverged { .. })));
    }

    #[test]
    fn composite_2d_product_integral() {
        let f = |x: f64, y: f64| x.cos() * (y * y);
        let q = composite_2d_refined(&f, (0.0, PI / 2.0), (0.0, 1.0), 2, 8);
        assert!((q.value - 1.0 / 3.0).abs() < 1e-13);
        assert!(q.abs_error < 1e-12);
    }
}
