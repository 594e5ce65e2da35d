use super::GibbsError;
use crate::ensembles::{Provenance, Spectrum};
use crate::randcore::{par_draws, SeededRng};

/// Attempts allowed per sample before giving up.
pub const ATTEMPT_BUDGET: u64 = 1_000_000;

/// C = max((2β)^{3/2}/2, 12).
pub fn rejection_constant(beta: f64) -> f64 {
    ((2.0 * beta).powf(1.5) / 2.0).max(12.0)
}

/// Energy of a computational-basis label in the eigenbasis frame.
pub trait EnergyOracle: Sync {
    fn dim(&self) -> usize;
    fn energy(&self, x: usize) -> f64;
    fn provenance(&self) -> Option<Provenance> {
        None
    }
}

impl EnergyOracle for Spectrum {
    fn dim(&self) -> usize {
        Spectrum::dim(self)
    }

    fn energy(&self, x: usize) -> f64 {
        self.eigenvalues()[x]
    }

    fn provenance(&self) -> Option<Provenance> {
        Some(Spectrum::provenance(self))
    }
}

/// Degenerate spectrum stored by class: label x on n qubits has energy
/// `class_energies[x >> (n − log₂ d̃)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassMap {
    n: u32,
    class_energies: Vec<f64>,
}

impl ClassMap {
    pub fn new(n: u32, class_energies: Vec<f64>) -> Result<Self, GibbsError> {
        let dt = class_energies.len();
        if !dt.is_power_of_two() || dt > 1usize << n {
            return Err(GibbsError::InvalidArgument(format!("{dt} classes on {n} qubits")));
        }
        Ok(Self { n, class_energies })
    }

    pub fn class_energies(&self) -> &[f64] {
        &self.class_energies
    }
}

impl EnergyOracle for ClassMap {
    fn dim(&self) -> usize {
        1 << self.n
    }

    fn energy(&self, x: usize) -> f64 {
        let bits = self.class_energies.len().trailing_zeros();
        self.class_energies[x >> (self.n - bits)]
    }

    fn provenance(&self) -> Option<Provenance> {
        Some(Provenance::Degenerate { dtilde: self.class_energies.len() })
    }
}

/// Acceptance rule: α = u·e^{2β} with u ∈ [0, 1], accept iff e^{−βλ}/C ≥ α.
pub fn accepts(energy: f64, beta: f64, c: f64, u: f64) -> bool {
    (-beta * energy).exp() / c >= u * (2.0 * beta).exp()
}

/// Same rule with both sides divided by e^{2β}.
pub fn accepts_unit(energy: f64, beta: f64, c: f64, u: f64) -> bool {
    (-beta * (energy + 2.0)).exp() / c >= u
}

/// Exact per-attempt acceptance probability (1/d) Σ_x min(1, e^{−β(λ_x+2)}/C).
pub fn acceptance_probability<O: EnergyOracle + ?Sized>(oracle: &O, beta: f64) -> f64 {
    let c = rejection_constant(beta);
    let d = oracle.dim();
    let p: Vec<f64> = (0..d).map(|x| ((-beta * (oracle.energy(x) + 2.0)).exp() / c).min(1.0)).collect();
    crate::stats::pairwise_sum(&p) / d as f64
}

/// Draws one basis label from the Gibbs distribution of `oracle`.
/// Returns the label and the number of attempts used.
pub fn gibbs_sample<O: EnergyOracle + ?Sized>(
    oracle: &O,
    beta: f64,
    rng: &mut SeededRng,
) -> Result<(usize, u64), GibbsError> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(GibbsError::InvalidBeta(beta));
    }
    let d = oracle.dim() as u64;
    let c = rejection_constant(beta);
    let alpha_max = (2.0 * beta).exp();
    for attempt in 1..=ATTEMPT_BUDGET {
        let x = rng.below(d) as usize;
        let alpha = rng.uniform() * alpha_max;
        if (-beta * oracle.energy(x)).exp() / c >= alpha {
            return Ok((x, attempt));
        }
    }
    Err(GibbsError::BudgetExceeded { attempts: ATTEMPT_BUDGET })
}

/// Accepted labels and attempt counts of a batch of independent samples.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsSampleBatch {
    pub beta: f64,
    pub accepted: Vec<usize>,
    pub attempts: Vec<u64>,
    pub provenance: Option<Provenance>,
}

impl GibbsSampleBatch {
    pub fn len(&self) -> usize {
        self.accepted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.accepted.is_empty()
    }

    pub fn total_attempts(&self) -> u64 {
        self.attempts.iter().sum()
    }

    /// Accepted samples per attempt.
    pub fn acceptance_rate(&self) -> f64 {
        self.len() as f64 / self.total_attempts() as f64
    }

    pub fn histogram(&self, d: usize) -> Vec<f64> {
        let mut counts = vec![0u64; d];
        for &x in &self.accepted {
            counts[x] += 1;
        }
        let n = self.len() as f64;
        counts.into_iter().map(|c| c as f64 / n).collect()
    }
}

/// `n` independent samples, sample `i` on substream `i`.
pub fn gibbs_batch<O: EnergyOracle + ?Sized>(
    oracle: &O,
    beta: f64,
    n: usize,
    rng: &SeededRng,
) -> Result<GibbsSampleBatch, GibbsError> {
    let draws = par_draws(rng, n, |_, r| gibbs_sample(oracle, beta, r));
    let mut accepted = Vec::with_capacity(n);
    let mut attempts = Vec::with_capacity(n);
    for draw in draws {
        let (x, a) = draw?;
        accepted.push(x);
        attempts.push(a);
    }
    Ok(GibbsSampleBatch { beta, accepted, attempts, provenance: oracle.provenance() })
}
