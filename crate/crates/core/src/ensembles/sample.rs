use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use super::linalg::Eigensystem;
use super::{
    BasisMode, EnsembleError, EnsembleKind, EnsembleSpec, HermitianMatrix, Provenance, SpectralMode, Spectrum,
    UnitaryMatrix,
};
use crate::randcore::{semicircle_inv_cdf, KWiseFamily, SeededRng, SemicircleDist};

/// Output width of the k-wise family feeding the inverse semicircle CDF.
pub const KWISE_OUTPUT_BITS: u32 = 52;

fn normal(rng: &mut SeededRng) -> f64 {
    StandardNormal.sample(rng)
}

/// GUE matrix normalized so its spectrum fills [−2, 2]: diagonal entries
/// N(0, 1/d), real and imaginary parts off the diagonal N(0, 1/(2d)).
pub fn sample_gue(d: usize, rng: &mut SeededRng) -> HermitianMatrix {
    assert!(d >= 2, "GUE needs d >= 2");
    let diag_sd = (1.0 / d as f64).sqrt();
    let off_sd = (0.5 / d as f64).sqrt();
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = Complex64::new(diag_sd * normal(rng), 0.0);
        for j in i + 1..d {
            let z = Complex64::new(off_sd * normal(rng), off_sd * normal(rng));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    HermitianMatrix::from_raw(m)
}

/// Haar unitary: QR of a complex Ginibre matrix with the phases of R's
/// diagonal moved into Q.
pub fn sample_haar_unitary(d: usize, rng: &mut SeededRng) -> UnitaryMatrix {
    assert!(d >= 2, "Haar sampling needs d >= 2");
    let sd = 0.5f64.sqrt();
    let g = DMatrix::<Complex64>::from_fn(d, d, |_, _| Complex64::new(sd * normal(rng), sd * normal(rng)));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix::from_raw(q)
}

fn repeat_values(values: &[f64], copies: usize) -> Vec<f64> {
    values.iter().flat_map(|&v| std::iter::repeat_n(v, copies)).collect()
}

/// Spectrum of a fresh draw from `spec`.
///
/// Pseudo-GUE spectra draw d̃ semicircle values (independently, or as the
/// inverse CDF of a fresh k-wise family evaluated at 0..d̃) and repeat each
/// d/d̃ times; d̃ = d with iid sampling gives an iid spectrum.
pub fn sample_spectrum(spec: &EnsembleSpec, rng: &mut SeededRng) -> Result<Spectrum, EnsembleError> {
    spec.validate()?;
    let d = spec.dim();
    match spec.kind {
        EnsembleKind::Gue | EnsembleKind::DiagonalGue => {
            let h = sample_gue(d, rng);
            let ev = h.into_inner().symmetric_eigenvalues();
            Ok(Spectrum::new(ev.iter().copied().collect(), Provenance::Gue))
        }
        EnsembleKind::PseudoGue { dtilde, spectral_mode: SpectralMode::Iid } | EnsembleKind::DiagonalIid { dtilde } => {
            let values = SemicircleDist::default().sample_n(rng, dtilde);
            let provenance = if dtilde == d { Provenance::Iid } else { Provenance::Degenerate { dtilde } };
            Ok(Spectrum::new(repeat_values(&values, d / dtilde), provenance))
        }
        EnsembleKind::PseudoGue { dtilde, spectral_mode: SpectralMode::KWise(k) } => {
            let family = KWiseFamily::random(k, KWISE_OUTPUT_BITS, rng)?;
            let values =
                (0..dtilde as u64).map(|j| semicircle_inv_cdf(family.eval_unit(j)?)).collect::<Result<Vec<_>, _>>()?;
            Ok(Spectrum::new(repeat_values(&values, d / dtilde), Provenance::KWise { dtilde, k }))
        }
    }
}

/// Fresh draw from `spec` in eigendecomposed form. GUE draws are
/// diagonalized; all other kinds combine a sampled spectrum with a Haar or
/// identity eigenbasis.
pub fn sample_eigensystem(spec: &EnsembleSpec, rng: &mut SeededRng) -> Result<Eigensystem, EnsembleError> {
    spec.validate()?;
    let d = spec.dim();
    if spec.kind == EnsembleKind::Gue {
        return super::eig_hermitian(&sample_gue(d, rng));
    }
    let spectrum = sample_spectrum(spec, rng)?;
    let vectors = match spec.basis_mode {
        BasisMode::Haar => sample_haar_unitary(d, rng),
        BasisMode::Identity => UnitaryMatrix::identity(d),
    };
    Ok(Eigensystem::new(spectrum, vectors))
}

/// Dense Hamiltonian of a fresh draw from `spec`.
pub fn sample_hamiltonian(spec: &EnsembleSpec, rng: &mut SeededRng) -> Result<HermitianMatrix, EnsembleError> {
    if spec.kind == EnsembleKind::Gue {
        spec.validate()?;
        return Ok(sample_gue(spec.dim(), rng));
    }
    sample_eigensystem(spec, rng)?.hamiltonian()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randcore::{par_draws, semicircle_cdf};
    use crate::stats::{
        chi2_pvalue, chi2_statistic, ks_pvalue, ks_statistic, ks_two_sample, ks_two_sample_pvalue, Estimate,
    };

    #[test]
    fn gue_is_exactly_hermitian() {
        let h = sample_gue(16, &mut SeededRng::new(1, 0));
        let m = h.matrix();
        assert_eq!(m, &m.adjoint());
    }

    #[test]
    fn gue_second_moment() {
        // E tr H² = d·(1/d) + d(d−1)·(1/d) = d
        let rng = SeededRng::new(5, 0);
        let traces = par_draws(&rng, 1000, |_, r| sample_gue(64, r).frobenius_norm().powi(2));
        let e = Estimate::from_samples(&traces);
        assert!(e.within(64.0, 3.0), "{e:?}");
    }

    #[test]
    fn gue_eigenvalues_follow_semicircle() {
        let rng = SeededRng::new(8, 0);
        let spec = EnsembleSpec::gue(8);
        let all: Vec<f64> = par_draws(&rng, 100, |_, r| sample_spectrum(&spec, r).unwrap())
            .into_iter()
            .flat_map(|s| s.eigenvalues().to_vec())
            .collect();
        let bins = 20;
        let mut counts = vec![0u64; bins];
        let mut expected = vec![0.0; bins];
        for (b, e) in expected.iter_mut().enumerate() {
            let lo = -2.0 + 4.0 * b as f64 / bins as f64;
            let hi = lo + 4.0 / bins as f64;
            *e = all.len() as f64 * (semicircle_cdf(hi) - semicircle_cdf(lo));
        }
        // edge fluctuations beyond ±2 are folded into the outer bins
        for x in &all {
            let b = (((x + 2.0) / 4.0 * bins as f64).floor() as isize).clamp(0, bins as isize - 1);
            counts[b as usize] += 1;
        }
        let p = chi2_pvalue(chi2_statistic(&counts, &expected), bins - 1);
        assert!(p > 0.001, "p = {p}");
    }

    #[test]
    fn haar_is_unitary_with_uniform_columns() {
        let rng = SeededRng::new(3, 0);
        let u = sample_haar_unitary(32, &mut rng.substream(999));
        assert!(u.unitarity_defect() < 1e-10);
        let vals = par_draws(&rng, 10_000, |_, r| sample_haar_unitary(16, r).matrix()[(0, 0)].norm_sqr());
        let e = Estimate::from_samples(&vals);
        assert!(e.within(1.0 / 16.0, 3.0), "{e:?}");
    }

    #[test]
    fn haar_first_column_rotation_invariant() {
        let d = 8;
        let rng = SeededRng::new(4, 0);
        let w = sample_haar_unitary(d, &mut rng.substream(u64::MAX));
        let a = par_draws(&rng.substream(1), 4000, |_, r| sample_haar_unitary(d, r).matrix()[(0, 0)].norm_sqr());
        let b = par_draws(&rng.substream(2), 4000, |_, r| {
            (w.matrix() * sample_haar_unitary(d, r).matrix())[(0, 0)].norm_sqr()
        });
        let p = ks_two_sample_pvalue(ks_two_sample(&a, &b), a.len(), b.len());
        assert!(p > 0.001, "p = {p}");
    }

    #[test]
    fn degenerate_spectra() {
        let mut rng = SeededRng::new(6, 0);
        let one = sample_spectrum(&EnsembleSpec::pseudo_iid(3, 1).unwrap(), &mut rng).unwrap();
        assert_eq!(one.distinct_count(), 1);
        let four = sample_spectrum(&EnsembleSpec::pseudo_iid(6, 4).unwrap(), &mut rng).unwrap();
        assert_eq!(four.distinct_count(), 4);
        assert_eq!(four.provenance(), Provenance::Degenerate { dtilde: 4 });
        for w in four.eigenvalues().chunks(16) {
            assert!(w.iter().all(|&v| v == w[0]));
        }
    }

    #[test]
    fn kwise_spectrum_in_range() {
        let spec =
            EnsembleSpec::new(5, EnsembleKind::PseudoGue { dtilde: 8, spectral_mode: SpectralMode::KWise(4) }).unwrap();
        let s = sample_spectrum(&spec, &mut SeededRng::new(2, 2)).unwrap();
        assert_eq!(s.dim(), 32);
        assert!(s.distinct_count() <= 8);
        assert!(s.eigenvalues().iter().all(|v| v.abs() <= 2.0));
    }

    #[test]
    fn iid_spectrum_marginal_is_semicircle() {
        let spec = EnsembleSpec::pseudo_iid(6, 64).unwrap();
        let rng = SeededRng::new(10, 0);
        // one eigenvalue picked uniformly at random per draw
        let xs = par_draws(&rng, 10_000, |_, r| {
            let s = sample_spectrum(&spec, r).unwrap();
            s.eigenvalues()[r.below(64) as usize]
        });
        let p = ks_pvalue(ks_statistic(&xs, semicircle_cdf), xs.len());
        assert!(p > 0.001, "p = {p}");
    }

    #[test]
    fn invalid_degeneracy_is_reported() {
        let spec = EnsembleSpec {
            n_qubits: 3,
            kind: EnsembleKind::DiagonalIid { dtilde: 3 },
            basis_mode: BasisMode::Identity,
        };
        assert!(matches!(
            sample_spectrum(&spec, &mut SeededRng::new(0, 0)),
            Err(EnsembleError::InvalidDegeneracy { d: 8, dtilde: 3 })
        ));
    }

    #[test]
    fn gue_unitary_invariance() {
        let d = 16;
        let rng = SeededRng::new(12, 0);
        let w = sample_haar_unitary(d, &mut rng.substream(u64::MAX));
        let plain: Vec<f64> = par_draws(&rng.substream(1), 300, |_, r| {
            sample_gue(d, r).into_inner().symmetric_eigenvalues().iter().copied().collect::<Vec<_>>()
        })
        .concat();
        let rotated: Vec<f64> = par_draws(&rng.substream(2), 300, |_, r| {
            let h = sample_gue(d, r);
            let m = w.matrix() * h.matrix() * w.matrix().adjoint();
            HermitianMatrix::hermitize(m)
                .unwrap()
                .into_inner()
                .symmetric_eigenvalues()
                .iter()
                .copied()
                .collect::<Vec<_>>()
        })
        .concat();
        let p = ks_two_sample_pvalue(ks_two_sample(&plain, &rotated), plain.len(), rotated.len());
        assert!(p > 0.001, "p = {p}");
    }
}
