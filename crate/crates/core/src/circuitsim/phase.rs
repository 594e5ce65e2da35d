use std::f64::consts::TAU;

use crate::randcore::{semicircle_inv_cdf, KWiseFamily};

use super::SimError;

/// 2π as an unevaluated double-double.
const TAU_HI: f64 = TAU;
const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;

/// Error-free product a·b = hi + lo.
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// round(t·λ·2^m / 2π) mod 2^m, with the product and the division by 2π
/// carried in double-double so the integer is exact well beyond 2^53.
fn fixed_point_phase(t: f64, lambda: f64, m: u32) -> u64 {
    let scale = 2f64.powi(m as i32);
    let (p_hi, p_lo) = two_prod(t, lambda);
    let (a_hi, a_lo) = (p_hi * scale, p_lo * scale);
    let q1 = a_hi / TAU_HI;
    let (s, e) = two_prod(q1, TAU_HI);
    let r = ((a_hi - s) - e) + a_lo - q1 * TAU_LO;
    let q2 = r / TAU_HI;
    let whole = q1.floor();
    let n = whole as i128 + ((q1 - whole) + q2).round() as i128;
    n.rem_euclid(1i128 << m) as u64
}

/// Fixed-point phases round((t/2π)·2^m·λ_c) mod 2^m for the d̃ distinct
/// energy classes of a pseudo-GUE spectrum. Basis state x belongs to the
/// class given by its top ñ = log₂ d̃ bits.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseTable {
    pub m: u32,
    pub t: f64,
    pub energies: Vec<f64>,
    pub entries: Vec<u64>,
    class_bits: u32,
}

impl PhaseTable {
    /// Table for explicitly given class energies; `energies.len()` must be a
    /// power of two.
    pub fn from_energies(t: f64, m: u32, energies: Vec<f64>) -> Result<Self, SimError> {
        if m == 0 || m > 63 {
            return Err(SimError::InvalidTable(format!("m = {m} outside 1..=63")));
        }
        if energies.is_empty() || !energies.len().is_power_of_two() {
            return Err(SimError::InvalidTable(format!("{} classes is not a power of two", energies.len())));
        }
        if !t.is_finite() || (t * 2f64.powi(m as i32)).abs() > 1e35 {
            return Err(SimError::InvalidTable(format!("t = {t} is out of range for m = {m}")));
        }
        let entries = energies.iter().map(|&l| fixed_point_phase(t, l, m)).collect();
        let class_bits = energies.len().trailing_zeros();
        Ok(Self { m, t, energies, entries, class_bits })
    }

    pub fn modulus(&self) -> u64 {
        1u64 << self.m
    }

    pub fn dtilde(&self) -> usize {
        self.entries.len()
    }

    pub fn class_bits(&self) -> u32 {
        self.class_bits
    }

    /// Class of basis state `x` of an `n`-qubit system: its top ñ bits.
    pub fn class_of(&self, x: usize, n: u32) -> usize {
        x >> (n - self.class_bits)
    }

    /// Phase 2π·entries[c]/2^m in [0, 2π).
    pub fn phase(&self, class: usize) -> f64 {
        TAU * (self.entries[class] as f64 / 2f64.powi(self.m as i32))
    }

    /// Per-basis-state energies λ_{class(x)} for an `n`-qubit system.
    pub fn basis_energies(&self, n: u32) -> Vec<f64> {
        (0..1usize << n).map(|x| self.energies[self.class_of(x, n)]).collect()
    }

    /// Same energies and m at time −t.
    pub fn reversed(&self) -> Self {
        Self::from_energies(-self.t, self.m, self.energies.clone()).expect("valid table stays valid")
    }
}

/// Phase table for class energies λ_c = F⁻¹(f(c)/2^{m_f}), c < d̃, where f
/// is the k-wise family with m_f output bits and F⁻¹ the inverse semicircle
/// CDF.
pub fn build_phase_table(t: f64, m: u32, family: &KWiseFamily, dtilde: usize) -> Result<PhaseTable, SimError> {
    let energies =
        (0..dtilde as u64).map(|c| semicircle_inv_cdf(family.eval_unit(c)?)).collect::<Result<Vec<_>, _>>()?;
    PhaseTable::from_energies(t, m, energies)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randcore::SeededRng;
    use proptest::prelude::*;

    fn circular_distance(a: f64, b: f64) -> f64 {
        let d = (a - b).rem_euclid(TAU);
        d.min(TAU - d)
    }

    fn family(seed: u64) -> KWiseFamily {
        KWiseFamily::random(4, 52, &mut SeededRng::new(seed, 0)).unwrap()
    }

    #[test]
    fn zero_time_gives_zero_phases() {
        let t = build_phase_table(0.0, 40, &family(1), 8).unwrap();
        assert!(t.entries.iter().all(|&e| e == 0));
    }

    #[test]
    fn single_class() {
        let t = build_phase_table(3.0, 20, &family(2), 1).unwrap();
        assert_eq!(t.dtilde(), 1);
        assert!((0..16).all(|x| t.class_of(x, 4) == 0));
    }

    #[test]
    fn class_is_top_bits() {
        let t = PhaseTable::from_energies(1.0, 10, vec![0.0; 4]).unwrap();
        assert_eq!(t.class_of(0b0111, 4), 0b01);
        assert_eq!(t.class_of(0b1000, 4), 0b10);
    }

    #[test]
    fn phases_match_float_oracle_at_long_times() {
        // t = 2^16 is a power of two, so t·λ is exact in f64.
        let t = 65_536.0;
        let m = 40;
        let table = build_phase_table(t, m, &family(3), 16).unwrap();
        let step = TAU / 2f64.powi(m as i32);
        for (c, &l) in table.energies.iter().enumerate() {
            let want = (t * l).rem_euclid(TAU);
            assert!(circular_distance(table.phase(c), want) <= 1.5 * step, "class {c}");
        }
    }

    #[test]
    fn known_integer() {
        // λ = 2π/2^10·3, t = 1, m = 10 → exactly 3
        let l = TAU / 1024.0 * 3.0;
        assert_eq!(fixed_point_phase(1.0, l, 10), 3);
        assert_eq!(fixed_point_phase(-1.0, l, 10), 1021);
    }

    #[test]
    fn invalid_tables() {
        assert!(PhaseTable::from_energies(1.0, 64, vec![0.0]).is_err());
        assert!(PhaseTable::from_energies(1.0, 8, vec![0.0; 3]).is_err());
    }

    proptest! {
        #[test]
        fn negated_time_negates_entries(t in -1e4f64..1e4, l in -2.0f64..2.0, m in 1u32..60) {
            let a = fixed_point_phase(t, l, m);
            let b = fixed_point_phase(-t, l, m);
            prop_assert_eq!((a + b) % (1u64 << m), 0);
        }

        #[test]
        fn entries_in_range(t in -1e6f64..1e6, l in -2.0f64..2.0, m in 1u32..64) {
            prop_assert!(fixed_point_phase(t, l, m) < 1u64 << m);
        }
    }
}
