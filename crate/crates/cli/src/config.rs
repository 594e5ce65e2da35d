use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use serde::Serialize;

use pseudochaos::ensembles::{EnsembleKind, EnsembleSpec, SpectralMode};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Spacing,
    Sff,
    Probes,
    Evolve,
    Gibbs,
    Marginals,
    Sign,
    HaarCheck,
    Distinguish,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleArg {
    Gue,
    Pseudo,
    DiagGue,
    DiagIid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeArg {
    Otoc4,
    Renyi2,
    Loe,
    Stab,
}

/// Parsed command line; also the echo stored in the run manifest.
#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "pseudochaos", version, about = "GUE and pseudo-GUE experiment runner", args_override_self = true)]
pub struct ExperimentConfig {
    /// Experiment to run.
    #[arg(value_enum)]
    pub experiment: Option<Experiment>,

    /// Number of qubits; d = 2^n.
    #[arg(long, default_value_t = 6)]
    pub n: u32,

    /// Distinct eigenvalues of the pseudo-GUE spectrum (defaults to d).
    #[arg(long)]
    pub dtilde: Option<usize>,

    /// Use a k-wise independent spectrum instead of an iid one.
    #[arg(long)]
    pub kwise: Option<usize>,

    #[arg(long, value_enum, default_value = "gue")]
    pub ensemble: EnsembleArg,

    #[arg(long, default_value_t = 1.0)]
    pub t: f64,

    /// Time grid as start:stop:steps.
    #[arg(long)]
    pub t_grid: Option<String>,

    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,

    #[arg(long, default_value_t = 200)]
    pub samples: usize,

    #[arg(long, default_value_t = 1000)]
    pub shots: usize,

    /// Comma-separated qubits of subsystem A (defaults to the lower half).
    #[arg(long)]
    pub cut: Option<String>,

    #[arg(long, value_enum, default_value = "otoc4")]
    pub probe: ProbeArg,

    #[arg(long, env = "PC_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Worker threads (defaults to the hardware parallelism).
    #[arg(long)]
    #[serde(skip)]
    pub threads: Option<usize>,

    /// Data file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long)]
    pub svg: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,

    /// Line-oriented key=value file; command-line flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    parse_config_text(&text)
}

pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", lineno + 1)))?;
        out.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(out)
}

fn find_config_arg(args: &[String]) -> Option<PathBuf> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

/// Parses `args` (including the program name), merging an optional
/// `--config` file underneath the explicit flags.
pub fn parse_args(args: &[String]) -> Result<ExperimentConfig, CliError> {
    let mut merged: Vec<String> = args.iter().take(1).cloned().collect();
    let mut file_experiment = None;
    if let Some(path) = find_config_arg(args) {
        for (k, v) in read_config_file(&path)? {
            if k == "experiment" {
                file_experiment = Some(v);
            } else {
                merged.push(format!("--{k}={v}"));
            }
        }
    }
    merged.extend(args.iter().skip(1).cloned());
    let mut cfg = ExperimentConfig::try_parse_from(&merged).map_err(CliError::Clap)?;
    if cfg.experiment.is_none() {
        if let Some(name) = file_experiment {
            cfg.experiment =
                Some(Experiment::from_str(&name, true).map_err(|e| CliError::Usage(format!("experiment: {e}")))?);
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

impl ExperimentConfig {
    pub fn experiment(&self) -> Experiment {
        self.experiment.expect("validated")
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    fn validate(&self) -> Result<(), CliError> {
        let usage = |m: String| Err(CliError::Usage(m));
        if self.experiment.is_none() {
            return usage("missing experiment name".into());
        }
        if !(2..=12).contains(&self.n) {
            return usage(format!("--n {}: expected 2..=12", self.n));
        }
        if let Some(dt) = self.dtilde {
            if !dt.is_power_of_two() || dt > self.dim() {
                return usage(format!("--dtilde {dt}: expected a power of two dividing 2^{}", self.n));
            }
        }
        if let Some(k) = self.kwise {
            if k < 1 {
                return usage("--kwise must be at least 1".into());
            }
        }
        if !self.t.is_finite() || self.t < 0.0 {
            return usage(format!("--t {}: expected a finite non-negative time", self.t));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return usage(format!("--beta {}: expected a finite non-negative value", self.beta));
        }
        if self.samples < 2 {
            return usage("--samples must be at least 2".into());
        }
        if self.threads == Some(0) {
            return usage("--threads must be positive".into());
        }
        self.time_grid()?;
        self.cut_qubits()?;
        Ok(())
    }

    /// `--t-grid` if given, otherwise the single time `--t`.
    pub fn time_grid(&self) -> Result<Vec<f64>, CliError> {
        let Some(spec) = &self.t_grid else {
            return Ok(vec![self.t]);
        };
        let bad = || CliError::Usage(format!("--t-grid {spec}: expected start:stop:steps"));
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let a: f64 = parts[0].parse().map_err(|_| bad())?;
        let b: f64 = parts[1].parse().map_err(|_| bad())?;
        let steps: usize = parts[2].parse().map_err(|_| bad())?;
        if steps < 1 || !a.is_finite() || !b.is_finite() || a < 0.0 || b < a {
            return Err(bad());
        }
        if steps == 1 {
            return Ok(vec![a]);
        }
        Ok((0..steps).map(|i| a + (b - a) * i as f64 / (steps - 1) as f64).collect())
    }

    pub fn cut_qubits(&self) -> Result<Vec<u32>, CliError> {
        let Some(spec) = &self.cut else {
            return Ok((0..self.n / 2).collect());
        };
        let mut cut = spec
            .split(',')
            .map(|s| s.trim().parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| CliError::Usage(format!("--cut {spec}: expected comma-separated qubit indices")))?;
        cut.sort_unstable();
        cut.dedup();
        if cut.is_empty() || cut.len() as u32 >= self.n || cut.iter().any(|&q| q >= self.n) {
            return Err(CliError::Usage(format!("--cut {spec}: need a proper nonempty subset of 0..{}", self.n)));
        }
        Ok(cut)
    }

    /// Ensemble selected by `--ensemble`, `--dtilde` and `--kwise`.
    pub fn ensemble_spec(&self) -> Result<EnsembleSpec, CliError> {
        let dtilde = self.dtilde.unwrap_or(self.dim());
        let mode = self.kwise.map_or(SpectralMode::Iid, SpectralMode::KWise);
        let kind = match self.ensemble {
            EnsembleArg::Gue => EnsembleKind::Gue,
            EnsembleArg::Pseudo => EnsembleKind::PseudoGue { dtilde, spectral_mode: mode },
            EnsembleArg::DiagGue => EnsembleKind::DiagonalGue,
            EnsembleArg::DiagIid => EnsembleKind::DiagonalIid { dtilde },
        };
        EnsembleSpec::new(self.n, kind).map_err(|e| CliError::Usage(e.to_string()))
    }

    /// Pseudo-GUE counterpart used by two-ensemble experiments.
    pub fn pseudo_spec(&self) -> Result<EnsembleSpec, CliError> {
        let mut c = self.clone();
        c.ensemble = EnsembleArg::Pseudo;
        c.ensemble_spec()
    }

    /// Canonical JSON of everything that determines the numeric output.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        c.out = None;
        c.svg = None;
        serde_json::to_string(&c).expect("config serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        std::iter::once("pseudochaos").chain(s.split_whitespace()).map(String::from).collect()
    }

    #[test]
    fn grid_parsing() {
        let c = parse_args(&args("sff --t-grid 0:4:5")).unwrap();
        assert_eq!(c.time_grid().unwrap(), vec![0.0, 1.0, 2.0, 3.0, 4.0]);
        assert!(parse_args(&args("sff --t-grid 4:0:5")).is_err());
        assert!(parse_args(&args("sff --t-grid 0:4")).is_err());
    }

    #[test]
    fn cut_parsing() {
        let c = parse_args(&args("probes --n 4 --cut 2,0")).unwrap();
        assert_eq!(c.cut_qubits().unwrap(), vec![0, 2]);
        assert_eq!(parse_args(&args("probes --n 5")).unwrap().cut_qubits().unwrap(), vec![0, 1]);
        assert!(parse_args(&args("probes --n 4 --cut 0,1,2,3")).is_err());
        assert!(parse_args(&args("probes --n 4 --cut 7")).is_err());
    }

    #[test]
    fn config_text() {
        let m = parse_config_text("# comment\nexperiment = sign\nn=5 # trailing\n\nt_grid = 0:1:3\n").unwrap();
        assert_eq!(m["experiment"], "sign");
        assert_eq!(m["n"], "5");
        assert_eq!(m["t-grid"], "0:1:3");
        assert!(parse_config_text("oops").is_err());
    }

    #[test]
    fn explicit_flag_beats_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        fs::write(&path, "experiment=sign\nn=5\nsamples=10\n").unwrap();
        let p = path.to_str().unwrap();
        let c = parse_args(&args(&format!("--config {p} --n 4"))).unwrap();
        assert_eq!(c.experiment(), Experiment::Sign);
        assert_eq!(c.n, 4);
        assert_eq!(c.samples, 10);
    }

    #[test]
    fn missing_experiment_is_usage_error() {
        assert!(matches!(parse_args(&args("--n 4")), Err(CliError::Usage(_))));
    }

    #[test]
    fn ensemble_selection() {
        let c = parse_args(&args("spacing --ensemble pseudo --n 4 --dtilde 4 --kwise 3")).unwrap();
        let spec = c.ensemble_spec().unwrap();
        assert_eq!(spec.kind, EnsembleKind::PseudoGue { dtilde: 4, spectral_mode: SpectralMode::KWise(3) });
        assert!(parse_args(&args("spacing --n 4 --dtilde 3")).is_err());
    }
}
