//! Seeded Monte Carlo of the five-setup three-qubit experiment, the CH
//! estimator with normal-approximation confidence intervals, and white-noise
//! robustness sweeps.
//!
//! Randomness comes from `ChaCha8Rng` only. A table drawn with
//! [`sample_counts`] uses `seed_from_u64(seed)` on stream 0; a full
//! experiment uses stream `s` for the `s`-th setup in
//! [`MeasurementSetup::five_setups`] order; sweep point `i` uses base seed
//! `seed + i` (wrapping).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scenario::{born_distribution, MeasurementSetup, OutcomeDistribution, QuantumState};
use crate::selection::{ch_lower_bound, ChTerms};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.96;

/// Coincidence counts for one setup, in outcome-index order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountsTable {
    setup: MeasurementSetup,
    counts: Vec<u64>,
    shots: u64,
}

impl CountsTable {
    pub fn new(setup: MeasurementSetup, counts: Vec<u64>) -> Result<Self> {
        let expected = 1usize << setup.num_qubits();
        if counts.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: counts.len(),
            });
        }
        let shots = counts.iter().sum();
        Ok(Self {
            setup,
            counts,
            shots,
        })
    }

    /// Pseudo-counts `round(P(o)·scale)`, with no sampling involved.
    pub fn from_probabilities(dist: &OutcomeDistribution, scale: u64) -> Result<Self> {
        let counts = dist
            .probabilities()
            .iter()
            .map(|&p| (p.max(0.0) * scale as f64).round() as u64)
            .collect();
        Self::new(dist.setup().clone(), counts)
    }

    pub fn setup(&self) -> &MeasurementSetup {
        &self.setup
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    /// Empirical frequency of outcomes satisfying `event`.
    fn frequency(&self, event: impl Fn(&[i8]) -> bool) -> f64 {
        let n = self.setup.num_qubits();
        let hits: u64 = self
            .counts
            .iter()
            .enumerate()
            .filter(|(i, _)| event(&crate::scenario::outcome_from_index(n, *i)))
            .map(|(_, &c)| c)
            .sum();
        hits as f64 / self.shots as f64
    }
}

/// Multinomial draw by sequential conditional binomials in outcome-index
/// order. Negative rounding residue in probabilities is treated as zero.
fn multinomial(probabilities: &[f64], shots: u64, rng: &mut ChaCha8Rng) -> Result<Vec<u64>> {
    let mut remaining = shots;
    let mut mass_left: f64 = probabilities.iter().map(|p| p.max(0.0)).sum();
    let mut counts = Vec::with_capacity(probabilities.len());
    for (idx, &p) in probabilities.iter().enumerate() {
        let p = p.max(0.0);
        let c = if idx + 1 == probabilities.len() || remaining == 0 {
            remaining
        } else if mass_left <= 0.0 {
            0
        } else {
            let q = (p / mass_left).clamp(0.0, 1.0);
            Binomial::new(remaining, q)
                .map_err(|e| Error::InvalidArgument(e.to_string()))?
                .sample(rng)
        };
        counts.push(c);
        remaining -= c;
        mass_left -= p;
    }
    Ok(counts)
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn sample_on_stream(
    state: &QuantumState,
    setup: &MeasurementSetup,
    shots: u64,
    seed: u64,
    stream: u64,
) -> Result<CountsTable> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be ≥ 1".into()));
    }
    let dist = born_distribution(state, setup)?;
    let counts = multinomial(dist.probabilities(), shots, &mut stream_rng(seed, stream))?;
    CountsTable::new(setup.clone(), counts)
}

/// Draws `shots` joint outcomes of `setup` on `state`.
pub fn sample_counts(
    state: &QuantumState,
    setup: &MeasurementSetup,
    shots: u64,
    seed: u64,
) -> Result<CountsTable> {
    sample_on_stream(state, setup, shots, seed, 0)
}

/// One table per setup of [`MeasurementSetup::five_setups`], `shots` each.
pub fn simulate_experiment(
    state: &QuantumState,
    shots: u64,
    seed: u64,
) -> Result<Vec<CountsTable>> {
    MeasurementSetup::five_setups()
        .iter()
        .enumerate()
        .map(|(s, setup)| sample_on_stream(state, setup, shots, seed, s as u64))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChEstimate {
    pub value: f64,
    pub sigma: f64,
    pub ci95: [f64; 2],
    /// The three aggregated frequencies the estimate is built from.
    pub terms: ChTerms,
}

impl ChEstimate {
    pub fn ci_contains(&self, x: f64) -> bool {
        self.ci95[0] <= x && x <= self.ci95[1]
    }
}

fn find<'a>(tables: &'a [CountsTable], letters: &str) -> Result<&'a CountsTable> {
    let setup = MeasurementSetup::parse(letters)?;
    let table = tables
        .iter()
        .find(|t| t.setup == setup)
        .ok_or_else(|| Error::MissingSetup(letters.into()))?;
    if table.shots == 0 {
        return Err(Error::InvalidArgument(format!(
            "setup {letters} has zero shots"
        )));
    }
    Ok(table)
}

/// Point estimate `f_ZZ − Σ f_middle − f_XXsame` from empirical frequencies.
///
/// Setups are independent, so the variance is the sum of binomial variances
/// `f(1−f)/N` of the five aggregated frequencies (one per table).
pub fn estimate_ch(tables: &[CountsTable]) -> Result<ChEstimate> {
    let zzz = find(tables, "ZZZ")?;
    let mixed = [
        find(tables, "ZXX")?,
        find(tables, "XZX")?,
        find(tables, "XXZ")?,
    ];
    let xxx = find(tables, "XXX")?;

    let binomial_var = |f: f64, n: u64| f * (1.0 - f) / n as f64;

    let f_zz = zzz.frequency(|o| o.iter().filter(|&&s| s == -1).count() >= 2);
    let mut variance = binomial_var(f_zz, zzz.shots);

    let mut f_middle = 0.0;
    for (q, table) in mixed.iter().enumerate() {
        let (r, s) = match q {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let f = table.frequency(|o| o[q] == -1 && o[r] != o[s]);
        f_middle += f;
        variance += binomial_var(f, table.shots);
    }

    let f_xx = xxx.frequency(|o| o.iter().all(|&s| s == o[0]));
    variance += binomial_var(f_xx, xxx.shots);

    let terms = ChTerms::new(f_zz, f_middle, f_xx);
    let sigma = variance.sqrt();
    Ok(ChEstimate {
        value: terms.ch_lower,
        sigma,
        ci95: [terms.ch_lower - Z_95 * sigma, terms.ch_lower + Z_95 * sigma],
        terms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepMode {
    Exact,
    Sampled { shots: u64, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub p: f64,
    pub ch_lower_exact: f64,
    pub estimate: Option<f64>,
    pub sigma: Option<f64>,
}

pub const SWEEP_CSV_HEADER: [&str; 4] = ["p", "ch_lower_exact", "estimate", "sigma"];

/// `ch_lower_bound` of `white_noise(|W⟩, p)` on an evenly spaced grid from
/// `p_from` to `p_to` inclusive.
pub fn noise_sweep(p_from: f64, p_to: f64, steps: usize, mode: SweepMode) -> Result<Vec<SweepRow>> {
    if !(0.0 <= p_from && p_from <= p_to && p_to <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "invalid noise range [{p_from}, {p_to}]"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidArgument("steps must be ≥ 2".into()));
    }
    if let SweepMode::Sampled { shots: 0, .. } = mode {
        return Err(Error::InvalidArgument("shots must be ≥ 1".into()));
    }
    let w = QuantumState::w();
    (0..steps)
        .into_par_iter()
        .map(|i| {
            let p = if i + 1 == steps {
                p_to
            } else {
                p_from + (p_to - p_from) * i as f64 / (steps - 1) as f64
            };
            let state = w.white_noise(p)?;
            let ch_lower_exact = ch_lower_bound(&state)?;
            let (estimate, sigma) = match mode {
                SweepMode::Exact => (None, None),
                SweepMode::Sampled { shots, seed } => {
                    let tables = simulate_experiment(&state, shots, seed.wrapping_add(i as u64))?;
                    let est = estimate_ch(&tables)?;
                    (Some(est.value), Some(est.sigma))
                }
            };
            Ok(SweepRow {
                p,
                ch_lower_exact,
                estimate,
                sigma,
            })
        })
        .collect()
}

/// Width of the final bisection bracket in [`noise_threshold`].
pub const THRESHOLD_TOL: f64 = 1e-10;

/// Noise level `p ∈ [0, 1]` at which the exact `ch_lower` of the noisy W
/// state equals `target`, by bisection (the curve is decreasing in `p`).
pub fn noise_threshold(target: f64) -> Result<f64> {
    let w = QuantumState::w();
    let curve = |p: f64| -> Result<f64> { ch_lower_bound(&w.white_noise(p)?) };
    let (hi_val, lo_val) = (curve(0.0)?, curve(1.0)?);
    if !(lo_val <= target && target <= hi_val) {
        return Err(Error::TargetOutOfRange {
            target,
            min: lo_val,
            max: hi_val,
        });
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo >= THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        if curve(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
