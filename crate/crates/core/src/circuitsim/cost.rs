use std::f64::consts::TAU;

/// Resource estimate for fast-forwarded evolution to time t with phase
/// error ε.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimCostReport {
    pub t: f64,
    pub epsilon: f64,
    pub required_m: u32,
    pub op_estimate: u64,
}

/// ⌈log₂ x⌉ for x ≥ 1, read off the binary exponent so that it is exact.
fn ceil_log2(x: f64) -> u32 {
    debug_assert!(x >= 1.0 && x.is_finite());
    let bits = x.to_bits();
    let exponent = ((bits >> 52) & 0x7ff) as i64 - 1023;
    let mantissa = bits & ((1u64 << 52) - 1);
    (exponent + i64::from(mantissa != 0)) as u32
}

/// m = ⌈log₂ t⌉ + ⌈log₂(2π/ε)⌉ phase bits. Each application uses two m-qubit
/// QFTs of m(m+1)/2 gates and an m-bit modular adder of about m² gates.
pub fn fastforward_cost(t: f64, epsilon: f64) -> SimCostReport {
    assert!(t >= 1.0 && t.is_finite(), "t must be at least 1");
    assert!(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
    let required_m = ceil_log2(t) + ceil_log2(TAU / epsilon);
    let m = u64::from(required_m);
    SimCostReport { t, epsilon, required_m, op_estimate: 2 * m * m + m }
}
