use pseudochaos::ensembles::EnsembleSpec;
use pseudochaos::gibbs::{gibbs_ensemble_distance, partition_moments, profile_distance};
use pseudochaos::randcore::par_draws;
use pseudochaos::SeededRng;

#[test]
fn distance_shrinks_with_dimension() {
    let rng = SeededRng::new(40, 0);
    let tvs: Vec<_> = [64usize, 128, 256]
        .iter()
        .enumerate()
        .map(|(i, &d)| gibbs_ensemble_distance(1.0, d, d, 60, &rng.substream(i as u64)).unwrap())
        .collect();
    for w in tvs.windows(2) {
        assert!(w[1].tv < w[0].tv + 2.0 * (w[0].bootstrap_se + w[1].bootstrap_se), "{tvs:?}");
    }
    assert!(tvs[2].tv < tvs[0].tv, "{tvs:?}");
}

#[test]
fn relative_variance_shrinks_with_dimension() {
    let rng = SeededRng::new(41, 0);
    let rv: Vec<f64> = [6u32, 8, 10]
        .iter()
        .map(|&n| {
            let spec = EnsembleSpec::pseudo_iid(n, 1 << n).unwrap();
            partition_moments(&spec, 1.0, 200, &rng.substream(u64::from(n))).unwrap().relative_variance()
        })
        .collect();
    assert!(rv[0] > rv[1] && rv[1] > rv[2], "{rv:?}");
}

#[test]
#[ignore = "the d̃ = 16 profile differs from GUE by ≈0.04 TV while two GUE batches differ by ≈5e-4; the stated self-calibration does not hold at d = 256"]
fn degenerate_gibbs_profile_matches_gue_noise_floor() {
    let rng = SeededRng::new(42, 0);
    let pseudo = gibbs_ensemble_distance(1.0, 256, 16, 100, &rng.substream(0)).unwrap();
    let spec = EnsembleSpec::gue(8);
    let batch = |s: u64| {
        par_draws(&rng.substream(s), 100, |_, r| {
            let spectrum = pseudochaos::ensembles::sample_spectrum(&spec, r).unwrap();
            pseudochaos::gibbs::exact_gibbs_weights(&spectrum, 1.0).unwrap()
        })
    };
    let floor = profile_distance(&batch(1), &batch(2), &rng.substream(3));
    assert!(pseudo.tv <= floor.tv + 3.0 * floor.bootstrap_se, "{pseudo:?} vs {floor:?}");
}
