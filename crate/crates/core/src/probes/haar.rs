use num_complex::Complex64;

use super::{half_cut, operator_purity, otoc4_exact, stabilizer_purity, subsystem_purity, PauliLabel, ProbeError};
use crate::circuitsim::StateVector;
use crate::ensembles::{sample_haar_unitary, Eigensystem, Provenance, Spectrum};
use crate::randcore::{par_draws, SeededRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HaarQuantity {
    /// tr(ρ_A²) of U e^{−iΛt} U†|0⟩.
    Purity,
    /// (1/d) Σ_P ⟨ψ|P|ψ⟩⁴ of the same state.
    StabPurity,
    /// Purity of the Choi vector of the evolved operator across A∪A′ (half cut).
    OpPurity,
    /// 4-point OTOC of a commuting pair of non-identity Paulis.
    Otoc4,
}

/// Haar-eigenbasis average predicted from z = Z(Λt) and z2 = Z(2Λt),
/// leading plus first subleading order in 1/d.
pub fn haar_reference(q: HaarQuantity, z: Complex64, z2: Complex64, d: f64, d_a: f64, d_b: f64) -> f64 {
    let a2 = z.norm_sqr();
    let a4 = a2 * a2;
    let a8 = a4 * a4;
    let cross = (z * z * z2.conj()).re;
    match q {
        HaarQuantity::Purity => a4 + (1.0 / d_b + 1.0 / d_a) * (1.0 - a4),
        HaarQuantity::StabPurity => a8 + (12.0 * a4 * cross - 16.0 * a8 + 4.0) / d,
        HaarQuantity::OpPurity => {
            let z4 = z * z * z * z;
            let c2 = z2.conj() * z2.conj();
            a8 + (2.0 * (z4 * c2).re + 2.0 * a4 * z2.norm_sqr() - 2.0 * a8 - 4.0 * a4 * cross + 2.0) / d
        }
        HaarQuantity::Otoc4 => a4,
    }
}

/// Observables evaluated on each Haar eigenbasis draw.
#[derive(Debug, Clone, PartialEq)]
pub struct HaarSampleConfig {
    pub cut: Vec<u32>,
    pub p1: PauliLabel,
    pub p2: PauliLabel,
    pub o1: PauliLabel,
}

impl HaarSampleConfig {
    /// Half cut, OTOC pair (Z₀, Z₁), operator X₀.
    pub fn standard(n: u32) -> Self {
        Self { cut: half_cut(n), p1: PauliLabel::z(0), p2: PauliLabel::z(1), o1: PauliLabel::x(0) }
    }
}

/// Per-draw values of the four Haar-averaged quantities.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HaarSamples {
    pub purity: Vec<f64>,
    pub stab_purity: Vec<f64>,
    pub op_purity: Vec<f64>,
    pub otoc4: Vec<f64>,
}

impl HaarSamples {
    pub fn get(&self, q: HaarQuantity) -> &[f64] {
        match q {
            HaarQuantity::Purity => &self.purity,
            HaarQuantity::StabPurity => &self.stab_purity,
            HaarQuantity::OpPurity => &self.op_purity,
            HaarQuantity::Otoc4 => &self.otoc4,
        }
    }
}

/// Evaluates all four quantities for `n_bases` independent Haar
/// eigenbases V with the spectrum `energies` held fixed, U_t = V e^{−iΛt} V†.
pub fn haar_samples(
    energies: &[f64],
    t: f64,
    n_bases: usize,
    config: &HaarSampleConfig,
    rng: &SeededRng,
) -> Result<HaarSamples, ProbeError> {
    let d = energies.len();
    if !d.is_power_of_two() || d < 4 {
        return Err(ProbeError::DimensionMismatch { expected: d.next_power_of_two().max(4), found: d });
    }
    if !config.p1.commutes_with(&config.p2) {
        return Err(ProbeError::InvalidPauli("the OTOC pair must commute".into()));
    }
    let spectrum = Spectrum::new(energies.to_vec(), Provenance::Iid);
    let rows = par_draws(rng, n_bases, |_, r| -> Result<[f64; 4], ProbeError> {
        let system = Eigensystem::new(spectrum.clone(), sample_haar_unitary(d, r));
        let u_t = system.propagator(t);
        let psi = StateVector::from_amplitudes(u_t.matrix().column(0).iter().copied().collect())?;
        Ok([
            subsystem_purity(&psi, &config.cut)?,
            stabilizer_purity(&psi)?,
            operator_purity(&u_t, &config.o1, &config.cut)?,
            otoc4_exact(&u_t, &config.p1, &config.p2)?,
        ])
    });
    let mut out = HaarSamples::default();
    for row in rows {
        let [a, b, c, e] = row?;
        out.purity.push(a);
        out.stab_purity.push(b);
        out.op_purity.push(c);
        out.otoc4.push(e);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn frozen_dynamics() {
        let one = c(1.0, 0.0);
        for q in [HaarQuantity::Purity, HaarQuantity::StabPurity, HaarQuantity::OpPurity, HaarQuantity::Otoc4] {
            assert!((haar_reference(q, one, one, 64.0, 8.0, 8.0) - 1.0).abs() < 1e-15, "{q:?}");
        }
    }

    #[test]
    fn fully_dephased() {
        let zero = c(0.0, 0.0);
        let p = haar_reference(HaarQuantity::Purity, zero, zero, 64.0, 8.0, 8.0);
        assert_eq!(p, 0.25);
        assert_eq!(haar_reference(HaarQuantity::StabPurity, zero, zero, 64.0, 8.0, 8.0), 4.0 / 64.0);
        assert_eq!(haar_reference(HaarQuantity::Otoc4, c(0.5, 0.5), zero, 64.0, 8.0, 8.0), 0.25);
    }

    #[test]
    fn time_zero_samples_are_trivial() {
        let energies: Vec<f64> = (0..16).map(|i| -1.5 + 0.2 * i as f64).collect();
        let s = haar_samples(&energies, 0.0, 4, &HaarSampleConfig::standard(4), &SeededRng::new(9, 0)).unwrap();
        for q in [HaarQuantity::Purity, HaarQuantity::StabPurity, HaarQuantity::OpPurity, HaarQuantity::Otoc4] {
            assert!(s.get(q).iter().all(|v| (v - 1.0).abs() < 1e-9), "{q:?}");
        }
    }

    #[test]
    fn rejects_anticommuting_pair() {
        let mut cfg = HaarSampleConfig::standard(3);
        cfg.p2 = PauliLabel::x(0);
        assert!(haar_samples(&[0.0; 8], 1.0, 2, &cfg, &SeededRng::new(0, 0)).is_err());
    }
}
