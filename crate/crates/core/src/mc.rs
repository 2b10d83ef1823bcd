//! Seeded Monte Carlo sampling of detector outcomes.
//!
//! Each trial is one categorical draw by inverse CDF from the analytic
//! distribution of the chosen experiment. The generator is ChaCha8
//! (`rand_chacha`), seeded with `seed_from_u64(seed)`; trial `t` always
//! consumes keystream words `2t` and `2t + 1`, so a tally does not depend on
//! how the trials are split into parallel chunks. Changing [`GENERATOR`]
//! invalidates every golden tally.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::mzi::{MziConfig, MziOutcome};
use crate::rto::{self, CoincidenceDist, RtoPhases};
use crate::{Error, Result};

/// Pinned generator algorithm, echoed into CLI output.
pub const GENERATOR: &str = "chacha8-word-seek";

/// Trials per parallel chunk.
pub const CHUNK_TRIALS: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", content = "phases", rename_all = "lowercase")]
pub enum Experiment {
    Mz(MziConfig),
    Rto(RtoPhases),
}

impl Experiment {
    pub fn labels(&self) -> &'static [&'static str] {
        match self {
            Experiment::Mz(_) => &MziOutcome::LABELS,
            Experiment::Rto(_) => &CoincidenceDist::LABELS,
        }
    }

    pub fn distribution(&self) -> Vec<f64> {
        match self {
            Experiment::Mz(cfg) => cfg.outcome().as_array().to_vec(),
            Experiment::Rto(ph) => rto::coincidence_probabilities(ph).as_array().to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    n_trials: u64,
    seed: u64,
    experiment: Experiment,
}

impl RunSpec {
    pub fn new(n_trials: u64, seed: u64, experiment: Experiment) -> Result<Self> {
        if n_trials == 0 {
            return Err(Error::NoTrials);
        }
        Ok(RunSpec {
            n_trials,
            seed,
            experiment,
        })
    }

    pub fn n_trials(&self) -> u64 {
        self.n_trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn experiment(&self) -> &Experiment {
        &self.experiment
    }
}

/// Outcome counts of a run; exactly one outcome per trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialTally {
    outcomes: Vec<String>,
    counts: Vec<u64>,
    n: u64,
}

impl TrialTally {
    pub fn empty(outcomes: &[&str]) -> Self {
        TrialTally {
            outcomes: outcomes.iter().map(|s| s.to_string()).collect(),
            counts: vec![0; outcomes.len()],
            n: 0,
        }
    }

    pub fn from_counts(outcomes: &[&str], counts: Vec<u64>) -> Result<Self> {
        if outcomes.len() != counts.len() {
            return Err(Error::DimensionMismatch {
                expected: outcomes.len(),
                found: counts.len(),
            });
        }
        let n = counts.iter().sum();
        Ok(TrialTally {
            outcomes: outcomes.iter().map(|s| s.to_string()).collect(),
            counts,
            n,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, outcome: &str) -> Option<u64> {
        self.outcomes
            .iter()
            .position(|o| o == outcome)
            .map(|i| self.counts[i])
    }

    /// Adds the counts of `other`; both tallies must list the same outcomes.
    pub fn merge(&mut self, other: &TrialTally) -> Result<()> {
        if self.outcomes != other.outcomes {
            return Err(Error::BasisMismatch);
        }
        for (c, o) in self.counts.iter_mut().zip(&other.counts) {
            *c += o;
        }
        self.n += other.n;
        Ok(())
    }
}

/// A point estimate with its standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// SplitMix64 finalizer; gives independent seeds for related runs.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws `n` outcomes from `probs` and returns per-outcome counts.
pub fn sample_counts(probs: &[f64], n: u64, seed: u64) -> Vec<u64> {
    sample_counts_chunked(probs, n, seed, CHUNK_TRIALS)
}

/// [`sample_counts`] with an explicit chunk size. The result does not depend
/// on `chunk`.
pub fn sample_counts_chunked(probs: &[f64], n: u64, seed: u64, chunk: u64) -> Vec<u64> {
    let chunk = chunk.max(1);
    let cdf = cumulative(probs);
    let fallback = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let n_chunks = n.div_ceil(chunk);
    (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            let len = chunk.min(n - start);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_word_pos(u128::from(start) * 2);
            let mut counts = vec![0u64; probs.len()];
            for _ in 0..len {
                let u: f64 = rng.gen();
                let k = cdf.iter().position(|&f| u < f).unwrap_or(fallback);
                counts[k] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; probs.len()],
            |mut acc, part| {
                for (a, p) in acc.iter_mut().zip(part) {
                    *a += p;
                }
                acc
            },
        )
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    probs
        .iter()
        .scan(0.0, |acc, &p| {
            *acc += p.max(0.0);
            Some(*acc)
        })
        .collect()
}

pub fn sample_run(spec: &RunSpec) -> TrialTally {
    let exp = spec.experiment();
    let counts = sample_counts(&exp.distribution(), spec.n_trials, spec.seed);
    TrialTally::from_counts(exp.labels(), counts).expect("one count per label")
}

/// `Ĉ = (n_same − n_different)/n` with `se = √((1 − Ĉ²)/n)`.
pub fn estimate_c(tally: &TrialTally) -> Result<Estimate> {
    if tally.n == 0 {
        return Err(Error::EmptyTally);
    }
    let get = |label: &str| {
        tally
            .count(label)
            .ok_or_else(|| Error::MissingOutcome(label.to_string()))
    };
    let same = get("A1B1")? + get("A2B2")?;
    let different = get("A1B2")? + get("A2B1")?;
    let n = tally.n as f64;
    let value = (same as f64 - different as f64) / n;
    Ok(Estimate {
        value,
        std_error: ((1.0 - value * value).max(0.0) / n).sqrt(),
    })
}

/// `p̂ = count/n` with the binomial standard error `√(p̂(1 − p̂)/n)`.
pub fn estimate_probability(tally: &TrialTally, outcome: &str) -> Result<Estimate> {
    if tally.n == 0 {
        return Err(Error::EmptyTally);
    }
    let count = tally
        .count(outcome)
        .ok_or_else(|| Error::MissingOutcome(outcome.to_string()))?;
    let n = tally.n as f64;
    let p = count as f64 / n;
    Ok(Estimate {
        value: p,
        std_error: (p * (1.0 - p) / n).sqrt(),
    })
}
