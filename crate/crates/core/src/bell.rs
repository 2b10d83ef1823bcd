//! CHSH test on the two-photon interferometer.
//!
//! The correlation function is the degree of correlation of the calibrated
//! layout, `E(a, b) = C(φA = a, φB = b)`, and
//! `S = E(a1,b1) − E(a1,b2) + E(a2,b1) + E(a2,b2)`.
//! Sampled significance is quoted as `(Ŝ − 2)/σ_S`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use crate::mc::{derive_seed, estimate_c, sample_run, Estimate, Experiment, RunSpec};
use crate::phase::PHASE_TOL;
use crate::rto::{correlation, RtoPhases};
use crate::{Error, Phase, Result};

/// Largest `|S|` any local deterministic strategy can reach.
pub const CLASSICAL_BOUND: f64 = 2.0;

const SIGNS: [f64; 4] = [1.0, -1.0, 1.0, 1.0];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshSettings {
    pub a1: Phase,
    pub a2: Phase,
    pub b1: Phase,
    pub b2: Phase,
}

impl ChshSettings {
    /// Validated settings; each station needs two distinct phases.
    pub fn new(a1: f64, a2: f64, b1: f64, b2: f64) -> Result<Self> {
        let s = ChshSettings::unchecked(a1, a2, b1, b2);
        if s.a1.approx_eq(s.a2, PHASE_TOL) {
            return Err(Error::DegenerateSettings("a1 == a2".into()));
        }
        if s.b1.approx_eq(s.b2, PHASE_TOL) {
            return Err(Error::DegenerateSettings("b1 == b2".into()));
        }
        Ok(s)
    }

    /// No distinctness check; degenerate settings are useful as reference
    /// points for the analytic formula.
    pub fn unchecked(a1: f64, a2: f64, b1: f64, b2: f64) -> Self {
        ChshSettings {
            a1: a1.into(),
            a2: a2.into(),
            b1: b1.into(),
            b2: b2.into(),
        }
    }

    /// `a = (0, π/2)`, `b = (π/4, 3π/4)`: reaches `2√2`.
    pub fn optimal() -> Self {
        ChshSettings::unchecked(0.0, FRAC_PI_2, FRAC_PI_4, 3.0 * FRAC_PI_4)
    }

    /// The four `(φA, φB)` pairs in CHSH term order.
    pub fn pairs(&self) -> [(Phase, Phase); 4] {
        [
            (self.a1, self.b1),
            (self.a1, self.b2),
            (self.a2, self.b1),
            (self.a2, self.b2),
        ]
    }
}

impl Default for ChshSettings {
    fn default() -> Self {
        ChshSettings::optimal()
    }
}

/// Analytic `S` from the interferometer pipeline.
pub fn chsh_s(settings: &ChshSettings) -> f64 {
    settings
        .pairs()
        .iter()
        .zip(SIGNS)
        .map(|(&(a, b), sign)| sign * correlation(&RtoPhases::calibrated(a, b)).c)
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshEstimate {
    pub s_hat: f64,
    pub sigma_s: f64,
    /// `(Ŝ − 2)/σ_S`; infinite when `σ_S = 0` and `Ŝ ≠ 2`.
    pub n_sigmas_violation: f64,
    /// Per-term estimates of `E`, in CHSH term order.
    pub terms: [Estimate; 4],
}

/// Four independent sampled runs, one per setting pair, each seeded with
/// [`derive_seed`]`(seed, k)`.
pub fn chsh_mc(settings: &ChshSettings, n_per_setting: u64, seed: u64) -> Result<ChshEstimate> {
    let mut terms = [Estimate {
        value: 0.0,
        std_error: 0.0,
    }; 4];
    for (k, (a, b)) in settings.pairs().into_iter().enumerate() {
        let spec = RunSpec::new(
            n_per_setting,
            derive_seed(seed, k as u64),
            Experiment::Rto(RtoPhases::calibrated(a, b)),
        )?;
        terms[k] = estimate_c(&sample_run(&spec))?;
    }
    let s_hat = terms
        .iter()
        .zip(SIGNS)
        .map(|(e, s)| s * e.value)
        .sum::<f64>();
    let sigma_s = terms
        .iter()
        .map(|e| e.std_error.powi(2))
        .sum::<f64>()
        .sqrt();
    let excess = s_hat - CLASSICAL_BOUND;
    let n_sigmas_violation = if sigma_s > 0.0 {
        excess / sigma_s
    } else if excess == 0.0 {
        0.0
    } else {
        excess.signum() * f64::INFINITY
    };
    Ok(ChshEstimate {
        s_hat,
        sigma_s,
        n_sigmas_violation,
        terms,
    })
}

/// `S` for every deterministic local strategy: each station answers ±1 as a
/// fixed function of its own setting, giving 16 strategies.
pub fn deterministic_strategy_values() -> Vec<i32> {
    (0u8..16)
        .map(|bits| {
            let out = |k: u8| if bits >> k & 1 == 1 { 1 } else { -1 };
            let (x1, x2, y1, y2) = (out(0), out(1), out(2), out(3));
            x1 * y1 - x1 * y2 + x2 * y1 + x2 * y2
        })
        .collect()
}

/// Maximum `|S|` over all deterministic local strategies.
pub fn classical_bound() -> f64 {
    deterministic_strategy_values()
        .into_iter()
        .map(i32::abs)
        .max()
        .map_or(0.0, f64::from)
}
