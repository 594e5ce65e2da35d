use std::collections::BTreeMap;

use pseudochaos::circuitsim::{apply_pseudo_evolution, fastforward_cost, PhaseTable, StateVector};
use pseudochaos::ensembles::{
    sample_eigensystem, sample_haar_unitary, sample_spectrum, EnsembleSpec, Provenance, Spectrum, UnitaryMatrix,
    KWISE_OUTPUT_BITS,
};
use pseudochaos::gibbs::{
    acceptance_probability, average_sign, exact_gibbs_weights, gibbs_batch, partition_prediction, sign_prediction,
    SignConvention,
};
use pseudochaos::probes::{
    haar_reference, haar_samples, local_operator_entanglement, otoc4_exact, renyi2_entanglement, stabilizer_entropy,
    HaarQuantity, HaarSampleConfig, PauliLabel, MAX_LOE_QUBITS, MAX_STABILIZER_QUBITS,
};
use pseudochaos::randcore::{par_draws, semicircle_inv_cdf, KWiseFamily};
use pseudochaos::spectral::{
    iid_sff_mean, level_spacings, marginal_density, sff_moments, spectral_form_factor, tv_distance_marginal2,
    GapNormalization, SpacingHistogram,
};
use pseudochaos::stats::{ks_two_sample, ks_two_sample_pvalue, tv_distance, Estimate};
use pseudochaos::{Complex64, SeededRng};

use crate::config::{Experiment, ExperimentConfig, ProbeArg};
use crate::svg::{PlotKind, Series};
use crate::table::{Cell, Table};
use crate::CliError;

/// Everything an experiment produces besides the run metadata.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub table: Table,
    pub summary: BTreeMap<String, f64>,
    /// Achieved numerical-error estimates (quadrature errors, tolerances).
    pub error_estimates: BTreeMap<String, f64>,
    pub plot: Option<(Series, PlotKind)>,
}

const SPACING_BIN: f64 = 0.25;
const SPACING_MAX: f64 = 12.0;
/// Declared phase error for fast-forwarded evolution.
const EVOLVE_EPSILON: f64 = 1e-6;
const EVOLVE_MIN_FIDELITY: f64 = 1.0 - 1e-9;

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let rng = SeededRng::new(cfg.seed, 0);
    match cfg.experiment() {
        Experiment::Spacing => spacing(cfg, &rng),
        Experiment::Sff => sff(cfg, &rng),
        Experiment::Probes => probes(cfg, &rng),
        Experiment::Evolve => evolve(cfg, &rng),
        Experiment::Gibbs => gibbs(cfg, &rng),
        Experiment::Marginals => marginals(cfg),
        Experiment::Sign => sign(cfg, &rng),
        Experiment::HaarCheck => haar_check(cfg, &rng),
        Experiment::Distinguish => distinguish(cfg, &rng),
    }
}

fn collect<T, E: Into<CliError>>(v: Vec<Result<T, E>>) -> Result<Vec<T>, CliError> {
    v.into_iter().map(|r| r.map_err(Into::into)).collect()
}

fn spacing(cfg: &ExperimentConfig, rng: &SeededRng) -> Result<Outcome, CliError> {
    let spec = cfg.ensemble_spec()?;
    let gaps = collect(par_draws(rng, cfg.samples, |_, r| {
        sample_spectrum(&spec, r).map(|s| level_spacings(&s, GapNormalization::TimesD).gaps)
    }))?;
    let pooled: Vec<f64> = gaps.concat();
    let hist = SpacingHistogram::from_gaps(&pooled, SPACING_BIN, SPACING_MAX)?;
    let mut table = Table::new(&["s_hat", "count", "density"]);
    let (centers, dens) = (hist.centers(), hist.densities());
    for i in 0..centers.len() {
        table.push(vec![centers[i].into(), Cell::Int(hist.counts[i] as i64), dens[i].into()]);
    }
    let mut out = Outcome { table, ..Default::default() };
    out.summary.insert("n_gaps".into(), pooled.len() as f64);
    out.summary.insert("mean_gap".into(), pseudochaos::stats::mean(&pooled));
    if let Ok(c) = hist.log_linear_intercept(4) {
        out.summary.insert("zero_intercept".into(), c);
    }
    out.plot = Some((
        Series {
            title: format!("level spacings, d = {}", cfg.dim()),
            x_label: "ŝ = d·s".into(),
            y_label: "density".into(),
            x: centers.iter().map(|c| c - SPACING_BIN / 2.0).collect(),
            y: dens,
        },
        PlotKind::Histogram,
    ));
    Ok(out)
}

fn sff(cfg: &ExperimentConfig, rng: &SeededRng) -> Result<Outcome, CliError> {
    let spec = cfg.ensemble_spec()?;
    let times = cfg.time_grid()?;
    let mut table = Table::new(&["t", "sff_mean", "std_error", "iid_prediction"]);
    let mut ys = Vec::new();
    for (i, &t) in times.iter().enumerate() {
        let est = sff_moments(&spec, 1, t, cfg.samples, &rng.substream(i as u64))?;
        table.push(vec![t.into(), est.mean.into(), est.std_error.into(), iid_sff_mean(t, cfg.dim())?.into()]);
        ys.push(est.mean);
    }
    let plot = Series {
        title: format!("E|Z(Λt)|², d = {}", cfg.dim()),
        x_label: "t".into(),
        y_label: "E|Z|²".into(),
        x: times,
        y: ys,
    };
    Ok(Outcome { table, plot: Some((plot, PlotKind::Line)), ..Default::default() })
}

fn column(amps: &UnitaryMatrix) -> Result<StateVector, CliError> {
    Ok(StateVector::from_amplitudes(amps.matrix().column(0).iter().copied().collect())?)
}

/// OTOC pair used by the probe experiments: Z on the first and last qubit.
fn otoc_pair(n: u32) -> (PauliLabel, PauliLabel) {
    (PauliLabel::z(0), PauliLabel::z(n - 1))
}

fn probe_value(probe: ProbeArg, u_t: &UnitaryMatrix, n: u32, cut: &[u32]) -> Result<f64, CliError> {
    Ok(match probe {
        ProbeArg::Otoc4 => {
            let (p1, p2) = otoc_pair(n);
            otoc4_exact(u_t, &p1, &p2)?
        }
        ProbeArg::Renyi2 => renyi2_entanglement(&column(u_t)?, cut)?,
        ProbeArg::Loe => local_operator_entanglement(u_t, &PauliLabel::z(0), cut)?,
        ProbeArg::Stab => stabilizer_entropy(&column(u_t)?, 2.0)?,
    })
}

fn probes(cfg: &ExperimentConfig, rng: &SeededRng) -> Result<Outcome, CliError> {
    let spec = cfg.ensemble_spec()?;
    let cut = cfg.cut_qubits()?;
    let times = cfg.time_grid()?;
    let mut kinds = vec![ProbeArg::Otoc4, ProbeArg::Renyi2];
    if cfg.n <= MAX_LOE_QUBITS {
        kinds.push(ProbeArg::Loe);
    }
    if cfg.n <= MAX_STABILIZER_QUBITS {
        kinds.push(ProbeArg::Stab);
    }
    let rows = collect(par_draws(rng, cfg.samples, |_, r| -> Result<Vec<Vec<f64>>, CliError> {
        let system = sample_eigensystem(&spec, r)?;
        times
            .iter()
            .map(|&t| {
                let u_t = system.propagator(t);
                kinds.iter().map(|&k| probe_value(k, &u_t, cfg.n, &cut)).collect()
            })
            .collect()
    }))?;
    let mut cols = vec!["draw_id", "t"];
    cols.extend(kinds.iter().map(|k| match k {
        ProbeArg::Otoc4 => "otoc4",
        ProbeArg::Renyi2 => "renyi2",
        ProbeArg::Loe => "loe",
        ProbeArg::Stab => "stab_entropy2",
    }));
    let mut table = Table::new(&cols);
    for (draw, per_t) in rows.iter().enumerate() {
        for (t, vals) in times.iter().zip(per_t) {
            let mut row: Vec<Cell> = vec![draw.into(), (*t).into()];
            row.extend(vals.iter().map(|&v| Cell::Float(v)));
            table.push(row);
        }
    }
    let mut out = Outcome { table, ..Default::default() };
    for (j, k) in cols.iter().enumerate().skip(2) {
        let vals: Vec<f64> = rows.iter().flat_map(|per_t| per_t.iter().map(|v| v[j - 2])).collect();
        let est = Estimate::from_samples(&vals);
        out.summary.insert(format!("{k}_mean"), est.mean);
        out.summary.insert(format!("{k}_std_error"), est.std_error);
    }
    Ok(out)
}

fn random_state(n: u32, rng: &mut SeededRng) -> Result<StateVector, CliError> {
    let amps = (0..1usize << n).map(|_| Complex64::new(rng.uniform() - 0.5, rng.uniform() - 0.5)).collect();
    Ok(StateVector::normalized(amps)?)
}

fn evolve(cfg: &ExperimentConfig, rng: &SeededRng) -> Result<Outcome, CliError> {
    if cfg.n > 10 {
        return Err(CliError::Usage(format!("evolve supports n <= 10, got {}", cfg.n)));
    }
    let n = cfg.n;
    let dtilde = cfg.dtilde.unwrap_or(cfg.dim());
    let k = cfg.kwise.unwrap_or(4);
    let times = cfg.time_grid()?;
    let mut table = Table::new(&["draw_id", "t", "m", "op_estimate", "fidelity"]);
    let mut worst: f64 = 1.0;
    for (ti, &t) in times.iter().enumerate() {
        let cost = fastforward_cost(t.max(1.0), EVOLVE_EPSILON);
        let m = cost.required_m.min(63);
        let fids = collect(par_draws(&rng.substream(ti as u64), cfg.samples, |_, r| -> Result<f64, CliError> {
            let family = KWiseFamily::random(k, KWISE_OUTPUT_BITS, r)?;
            let mut energies =
                (0..dtilde as u64).map(|c| semicircle_inv_cdf(family.eval_unit(c)?)).collect::<Result<Vec<_>, _>>()?;
            // ascending classes keep the basis energies sorted, so the dense
            // oracle's eigenvector order matches V
            energies.sort_by(f64::total_cmp);
            let table = PhaseTable::from_energies(t, m, energies)?;
            let v = sample_haar_unitary(1 << n, r);
            let psi = random_state(n, r)?;
            let got = apply_pseudo_evolution(&psi, &table, &v, None)?;
            let oracle = pseudochaos::ensembles::Eigensystem::new(
                Spectrum::new(table.basis_energies(n), Provenance::Degenerate { dtilde }),
                v,
            );
            let want = StateVector::from_amplitudes(oracle.evolve(psi.amplitudes(), t))?;
            Ok(got.fidelity(&want))
        }))?;
        for (draw, f) in fids.into_iter().enumerate() {
            worst = worst.min(f);
            table.push(vec![draw.into(), t.into(), m.into(), Cell::Int(cost.op_estimate as i64), f.into()]);
        }
    }
    let mut out = Outcome { table, ..Default::default() };
    out.summary.insert("min_fidelity".into(), worst);
    out.error_estimates.insert("phase_epsilon".into(), EVOLVE_EPSILON);
    out.error_estimates.insert("infidelity".into(), 1.0 - worst);
    if worst < EVOLVE_MIN_FIDELITY {
        return Err(CliError::Numerical(format!("fidelity {worst} below {EVOLVE_MIN_FIDELITY}")));
    }
    Ok(out)
}

fn gibbs(cfg: &ExperimentConfig, rng: &SeededRng) -> Result<Outcome, CliError> {
    let spec = cfg.ensemble_spec()?;
    let spectrum = sample_spectrum(&spec, &mut rng.substream(0))?;
    let batch = gibbs_batch(&spectrum, cfg.beta, cfg.samples, &rng.substream(1))?;
    let exact = exact_gibbs_weights(&spectrum, cfg.beta)?;
    let d = cfg.dim();
    let empirical = batch.histogram(d);
    let mut table = Table::new(&["x", "energy", "empirical", "exact"]);
    for x in 0..d {
        table.push(vec![x.into(), spectrum.eigenvalues()[x].into(), empirical[x].into(), exact[x].into()]);
    }
    let trace: f64 = spectrum.eigenvalues().iter().map(|l| (-cfg.beta * l).exp()).sum();
    let mut out = Outcome { table, ..Default::default() };
    out.summary.insert("tv_to_exact".into(), tv_distance(&empirical, &exact));
    out.summary.insert("acceptance_rate".into(), batch.acceptance_rate());
    out.summary.insert("acceptance_exact".into(), acceptance_probability(&spectrum, cfg.beta));
    out.summary.insert("partition_trace".into(), trace);
    out.summary.insert("partition_prediction".into(), partition_prediction(d, cfg.beta)?);
    out.plot = Some((
        Series {
            title: format!("Gibbs samples, β = {}", cfg.beta),
            x_label: "eigenstate index".into(),
            y_label: "frequency".into(),
            x: (0..d).map(|x| x as f64).collect(),
            y: empirical,
        },
        PlotKind::Histogram,
    ));
    Ok(out)
}

fn marginals(cfg: &ExperimentConfig) -> Result<Outcome, CliError> {
    let d = cfg.dim();
    let q = tv_distance_marginal2(d)?;
    let bound = 3.0 * 2f64.sqrt() / (d as f64).powf(0.125);
    let mut table = Table::new(&["d", "tv", "abs_error", "bound"]);
    table.push(vec![d.into(), q.value.into(), q.abs_error.into(), bound.into()]);
    let grid: Vec<f64> = (0..=100).map(|i| -2.0 + 0.04 * i as f64).collect();
    let diag = grid.iter().map(|&l| marginal_density(&[l, l], d)).collect::<Result<Vec<_>, _>>()?;
    let mut out = Outcome { table, ..Default::default() };
    out.error_estimates.insert("tv_abs_error".into(), q.abs_error);
    out.summary.insert("max_diagonal_density".into(), diag.iter().copied().fold(0.0, f64::max));
    let cond = grid.iter().map(|&l| marginal_density(&[l, 0.0], d)).collect::<Result<Vec<_>, _>>()?;
    out.plot = Some((
        Series {
            title: format!("two-point marginal p(λ, 0), d = {d}"),
            x_label: "λ".into(),
            y_label: "density".into(),
            x: grid,
            y: cond,
        },
        PlotKind::Line,
    ));
    Ok(out)
}

fn sign(cfg: &ExperimentConfig, rng: &SeededRng) -> Result<Outcome, CliError> {
    let d = cfg.dim();
    let mut table = Table::new(&["convention", "d", "mean", "std_error", "prediction"]);
    for (i, (name, conv)) in
        [("upper", SignConvention::UpperTriangle), ("all", SignConvention::AllOffDiagonal)].into_iter().enumerate()
    {
        let est = average_sign(d, cfg.samples, conv, &rng.substream(i as u64))?;
        table.push(vec![name.into(), d.into(), est.mean.into(), est.std_error.into(), sign_prediction(d, conv).into()]);
    }
    Ok(Outcome { table, ..Default::default() })
}

fn haar_check(cfg: &ExperimentConfig, rng: &SeededRng) -> Result<Outcome, CliError> {
    let d = cfg.dim();
    let cut = cfg.cut_qubits()?;
    let spec = EnsembleSpec::pseudo_iid(cfg.n, d)?;
    let spectrum = sample_spectrum(&spec, &mut rng.substream(0))?;
    let energies = spectrum.eigenvalues();
    let config = HaarSampleConfig { cut: cut.clone(), ..HaarSampleConfig::standard(cfg.n) };
    let samples = haar_samples(energies, cfg.t, cfg.samples, &config, &rng.substream(1))?;
    let z = spectral_form_factor(energies, cfg.t);
    let z2 = spectral_form_factor(energies, 2.0 * cfg.t);
    let d_a = (1usize << cut.len()) as f64;
    let d_b = d as f64 / d_a;
    let mut table = Table::new(&["quantity", "mc_mean", "std_error", "reference", "z_score"]);
    for (name, q) in [
        ("purity", HaarQuantity::Purity),
        ("stab_purity", HaarQuantity::StabPurity),
        ("op_purity", HaarQuantity::OpPurity),
        ("otoc4", HaarQuantity::Otoc4),
    ] {
        let est = Estimate::from_samples(samples.get(q));
        let reference = haar_reference(q, z, z2, d as f64, d_a, d_b);
        table.push(vec![
            name.into(),
            est.mean.into(),
            est.std_error.into(),
            reference.into(),
            est.z_score(reference).into(),
        ]);
    }
    Ok(Outcome { table, ..Default::default() })
}

fn distinguish(cfg: &ExperimentConfig, rng: &SeededRng) -> Result<Outcome, CliError> {
    let cut = cfg.cut_qubits()?;
    let gue = EnsembleSpec::gue(cfg.n);
    let pseudo = cfg.pseudo_spec()?;
    let values = |spec: &EnsembleSpec, stream: u64| -> Result<Vec<f64>, CliError> {
        collect(par_draws(&rng.substream(stream), cfg.samples, |_, r| -> Result<f64, CliError> {
            let system = sample_eigensystem(spec, r)?;
            probe_value(cfg.probe, &system.propagator(cfg.t), cfg.n, &cut)
        }))
    };
    let a = values(&gue, 0)?;
    let b = values(&pseudo, 1)?;
    let mut table = Table::new(&["draw_id", "gue", "pseudo"]);
    for (i, (x, y)) in a.iter().zip(&b).enumerate() {
        table.push(vec![i.into(), (*x).into(), (*y).into()]);
    }
    let (ea, eb) = (Estimate::from_samples(&a), Estimate::from_samples(&b));
    let ks = ks_two_sample(&a, &b);
    let mut out = Outcome { table, ..Default::default() };
    out.summary.insert("gue_mean".into(), ea.mean);
    out.summary.insert("gue_std_error".into(), ea.std_error);
    out.summary.insert("pseudo_mean".into(), eb.mean);
    out.summary.insert("pseudo_std_error".into(), eb.std_error);
    out.summary.insert("ks_statistic".into(), ks);
    out.summary.insert("ks_pvalue".into(), ks_two_sample_pvalue(ks, a.len(), b.len()));
    Ok(out)
}
