//! Command-line experiment runner for the `pseudochaos` library.
//!
//! `pseudochaos <experiment> [flags]` writes a CSV (or JSON) data file, a
//! JSON manifest next to it, and optionally an SVG plot.

pub mod config;
pub mod experiments;
pub mod svg;
pub mod table;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use config::{parse_args, Experiment, ExperimentConfig, Format};
pub use experiments::{run_experiment, Outcome};
pub use svg::{emit_svg, PlotKind, Series};
pub use table::{Cell, Table};

use pseudochaos::circuitsim::SimError;
use pseudochaos::ensembles::EnsembleError;
use pseudochaos::gibbs::GibbsError;
use pseudochaos::probes::ProbeError;
use pseudochaos::randcore::RandError;
use pseudochaos::spectral::SpectralError;

pub const MANIFEST_SCHEMA: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Clap(#[from] clap::Error),
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Clap(e) if !e.use_stderr() => 0,
            CliError::Clap(_) | CliError::Usage(_) | CliError::Io(_) | CliError::Csv(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Budget(_) => 4,
        }
    }
}

impl From<RandError> for CliError {
    fn from(e: RandError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<EnsembleError> for CliError {
    fn from(e: EnsembleError) -> Self {
        match e {
            EnsembleError::InvalidDegeneracy { .. } | EnsembleError::InvalidSpec(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::InvalidArgument(m) => CliError::Usage(m),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<ProbeError> for CliError {
    fn from(e: ProbeError) -> Self {
        match e {
            ProbeError::Sim(s) => s.into(),
            ProbeError::Ensemble(s) => s.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<GibbsError> for CliError {
    fn from(e: GibbsError) -> Self {
        match e {
            GibbsError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            GibbsError::InvalidBeta(_) | GibbsError::InvalidArgument(_) => CliError::Usage(e.to_string()),
            GibbsError::Rand(r) => r.into(),
            GibbsError::Ensemble(r) => r.into(),
        }
    }
}

/// Run manifest written next to the data file.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub schema: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub status: &'static str,
    pub error: Option<String>,
    pub config: serde_json::Value,
    pub config_hash: String,
    pub threads: usize,
    pub wall_time_s: f64,
    pub data_sha256: Option<String>,
    pub data_path: Option<PathBuf>,
    pub svg_path: Option<PathBuf>,
    pub summary: std::collections::BTreeMap<String, f64>,
    pub error_estimates: std::collections::BTreeMap<String, f64>,
}

pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let digest = Sha256::digest(cfg.canonical_json().as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// `spacing.csv` ↦ `spacing.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    out.with_extension("manifest.json")
}

fn render_data(cfg: &ExperimentConfig, table: &Table) -> Result<Vec<u8>, CliError> {
    Ok(match cfg.format {
        Format::Csv => table.to_csv_string()?.into_bytes(),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&table.to_json()).expect("rows serialize");
            s.push('\n');
            s.into_bytes()
        }
    })
}

/// Runs one configured experiment and writes its outputs.
pub fn execute(cfg: &ExperimentConfig) -> Result<RunRecord, CliError> {
    let threads = cfg.threads.unwrap_or_else(rayon::current_num_threads);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let start = Instant::now();
    let result = pool.install(|| run_experiment(cfg));
    let hash = config_hash(cfg);
    let mut record = RunRecord {
        schema: MANIFEST_SCHEMA,
        tool: "pseudochaos",
        version: env!("CARGO_PKG_VERSION"),
        status: "ok",
        error: None,
        config: serde_json::to_value(cfg).expect("config serializes"),
        config_hash: hash.clone(),
        threads,
        wall_time_s: 0.0,
        data_sha256: None,
        data_path: cfg.out.clone(),
        svg_path: None,
        summary: Default::default(),
        error_estimates: Default::default(),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            record.status = "failed";
            record.error = Some(e.to_string());
            record.wall_time_s = start.elapsed().as_secs_f64();
            write_manifest(cfg, &record)?;
            return Err(e);
        }
    };
    let data = render_data(cfg, &outcome.table)?;
    record.data_sha256 = Some(Sha256::digest(&data).iter().map(|b| format!("{b:02x}")).collect());
    match &cfg.out {
        Some(path) => fs::write(path, &data)?,
        None => io::stdout().write_all(&data)?,
    }
    if let Some(svg_path) = &cfg.svg {
        let (series, kind) =
            outcome.plot.clone().unwrap_or_else(|| (first_numeric_series(&outcome.table), PlotKind::Line));
        fs::write(svg_path, emit_svg(&series, kind, &hash)?)?;
        record.svg_path = Some(svg_path.clone());
    }
    record.summary = outcome.summary;
    record.error_estimates = outcome.error_estimates;
    record.wall_time_s = start.elapsed().as_secs_f64();
    write_manifest(cfg, &record)?;
    Ok(record)
}

/// Fallback plot: the last numeric column against the row index.
fn first_numeric_series(table: &Table) -> Series {
    let y = table
        .columns
        .iter()
        .rev()
        .find_map(|c| table.column_f64(c).filter(|v| v.iter().all(|x| x.is_finite())))
        .unwrap_or_default();
    Series {
        title: table.columns.join(", "),
        x_label: "row".into(),
        y_label: table.columns.last().cloned().unwrap_or_default(),
        x: (0..y.len()).map(|i| i as f64).collect(),
        y,
    }
}

fn write_manifest(cfg: &ExperimentConfig, record: &RunRecord) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(record).expect("manifest serializes");
    match &cfg.out {
        Some(out) => fs::write(manifest_path(out), text + "\n")?,
        None => eprintln!("{text}"),
    }
    Ok(())
}

/// Entry point shared by the binary and the tests; returns the exit code.
pub fn main_with_args(args: &[String]) -> i32 {
    let result = parse_args(args).and_then(|cfg| execute(&cfg).map(|_| ()));
    match result {
        Ok(()) => 0,
        Err(CliError::Clap(e)) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            code
        }
        Err(e) => {
            eprintln!("pseudochaos: {e}");
            e.exit_code()
        }
    }
}
