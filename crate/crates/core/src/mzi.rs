//! Single-photon Mach-Zehnder interferometer.
//!
//! The photon enters the first beam splitter in path mode `A1`, picks up
//! `φ1` on path 1 and `φ2` on path 2, and is recombined on a second splitter.
//! The output port that receives the photon with certainty at `φ2 − φ1 = 0`
//! is named `D1`; with the symmetric splitter convention that is output mode
//! `A2`, and `D2` is output mode `A1`. Then `P(D1) = [1 + cos(φ2 − φ1)]/2`.
//!
//! Note on the commonly printed comparison table: its `π/4` and `3π/4` rows
//! list 71%/29%, which is `cos(π/4)` rather than the Born probability
//! `[1 + cos(π/4)]/2 ≈ 0.854` computed here.

use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::optics::{beam_splitter, compose, mirror, phase_shifter};
use crate::qcore::{ModeBasis, Operator, StateVector};
use crate::Phase;

/// Output-mode index read by detector D1.
const D1_PORT: usize = 1;
/// Output-mode index read by detector D2.
const D2_PORT: usize = 0;

/// Path labels: `A1` is path 1, `A2` is path 2.
pub fn path_basis() -> ModeBasis {
    ModeBasis::new(["A1", "A2"]).expect("static labels are valid")
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Blocked {
    #[default]
    None,
    Path1,
    Path2,
}

impl Blocked {
    fn label(self) -> Option<&'static str> {
        match self {
            Blocked::None => None,
            Blocked::Path1 => Some("A1"),
            Blocked::Path2 => Some("A2"),
        }
    }
}

impl FromStr for Blocked {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(Blocked::None),
            "path1" => Ok(Blocked::Path1),
            "path2" => Ok(Blocked::Path2),
            other => Err(format!("expected none, path1 or path2, got `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MziConfig {
    pub phi1: Phase,
    pub phi2: Phase,
    #[serde(default)]
    pub blocked: Blocked,
}

impl MziConfig {
    pub fn open(phi1: impl Into<Phase>, phi2: impl Into<Phase>) -> Self {
        MziConfig {
            phi1: phi1.into(),
            phi2: phi2.into(),
            blocked: Blocked::None,
        }
    }

    pub fn with_blocked(self, blocked: Blocked) -> Self {
        MziConfig { blocked, ..self }
    }

    pub fn outcome(&self) -> MziOutcome {
        match self.blocked {
            Blocked::None => mz_probabilities(self.phi1, self.phi2),
            b => mz_blocked(self.phi1, self.phi2, b),
        }
    }
}

/// Unconditional detection probabilities for one photon.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MziOutcome {
    pub p_d1: f64,
    pub p_d2: f64,
    pub p_absorbed: f64,
}

impl MziOutcome {
    pub const LABELS: [&'static str; 3] = ["D1", "D2", "absorbed"];

    pub fn as_array(&self) -> [f64; 3] {
        [self.p_d1, self.p_d2, self.p_absorbed]
    }

    /// `(P(D1|detected), P(D2|detected))`, or `None` if nothing reaches a
    /// detector.
    pub fn conditional(&self) -> Option<(f64, f64)> {
        let detected = self.p_d1 + self.p_d2;
        (detected > 0.0).then(|| (self.p_d1 / detected, self.p_d2 / detected))
    }
}

/// State on the two paths right after the first splitter:
/// `(|A1⟩ + i|A2⟩)/√2`.
pub fn prepare_superposition() -> StateVector {
    let basis = path_basis();
    let input = StateVector::basis_state(basis.clone(), "A1").expect("A1 in basis");
    beam_splitter(&basis)
        .and_then(|bs| bs.apply(&input))
        .expect("splitter acts on its own basis")
}

/// Operator between the two splitters: mirror, then `φ1` on path 1 and `φ2`
/// on path 2.
fn arms(phi1: Phase, phi2: Phase) -> Operator {
    let basis = path_basis();
    compose(&[
        mirror(&basis),
        phase_shifter(phi1, "A1", &basis).expect("A1 in basis"),
        phase_shifter(phi2, "A2", &basis).expect("A2 in basis"),
    ])
    .expect("common basis")
}

/// The complete interferometer `BS2 · arms · BS1` as one unitary.
pub fn pipeline(phi1: impl Into<Phase>, phi2: impl Into<Phase>) -> Operator {
    let basis = path_basis();
    let bs = beam_splitter(&basis).expect("two-mode basis");
    compose(&[bs.clone(), arms(phi1.into(), phi2.into()), bs]).expect("common basis")
}

/// Both paths open.
pub fn mz_probabilities(phi1: impl Into<Phase>, phi2: impl Into<Phase>) -> MziOutcome {
    let basis = path_basis();
    let input = StateVector::basis_state(basis, "A1").expect("A1 in basis");
    let out = pipeline(phi1, phi2)
        .apply(&input)
        .expect("pipeline acts on the path basis");
    let amps = out.amplitudes();
    MziOutcome {
        p_d1: unit(amps[D1_PORT].norm_sqr()),
        p_d2: unit(amps[D2_PORT].norm_sqr()),
        p_absorbed: 0.0,
    }
}

/// One path blocked: its amplitude is absorbed right after the first
/// splitter and the unnormalized remainder propagates to the detectors.
/// Passing [`Blocked::None`] is the same as [`mz_probabilities`].
pub fn mz_blocked(phi1: impl Into<Phase>, phi2: impl Into<Phase>, blocked: Blocked) -> MziOutcome {
    let Some(label) = blocked.label() else {
        return mz_probabilities(phi1, phi2);
    };
    let basis = path_basis();
    let split = prepare_superposition();
    let absorber = Operator::absorber(basis.clone(), label).expect("label in basis");
    let surviving = absorber.act(split.amplitudes()).expect("dimension 2");
    let p_absorbed = 1.0 - surviving.iter().map(Complex64::norm_sqr).sum::<f64>();

    let rest = compose(&[
        arms(phi1.into(), phi2.into()),
        beam_splitter(&basis).expect("two-mode basis"),
    ])
    .expect("common basis");
    let out = rest.act(&surviving).expect("dimension 2");
    MziOutcome {
        p_d1: unit(out[D1_PORT].norm_sqr()),
        p_d2: unit(out[D2_PORT].norm_sqr()),
        p_absorbed: unit(p_absorbed),
    }
}

/// Clears round-off excursions such as `1 + 4e-16`.
pub(crate) fn unit(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// `(max − min)/(max + min)` of a fringe; 0 for an empty or all-zero curve.
pub fn fringe_visibility(samples: &[f64]) -> f64 {
    let max = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = samples.iter().copied().fold(f64::INFINITY, f64::min);
    if samples.is_empty() || max + min <= 0.0 {
        0.0
    } else {
        (max - min) / (max + min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::phase_grid;
    use crate::qcore::{DensityMatrix, TOL};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    /// Independent oracle: multiply the 2×2 matrices by hand.
    fn hand_p_d1(phi1: f64, phi2: f64) -> f64 {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bs = [
            [Complex64::new(s, 0.0), Complex64::new(0.0, s)],
            [Complex64::new(0.0, s), Complex64::new(s, 0.0)],
        ];
        let v = [bs[0][0], bs[1][0]];
        let v = [v[0] * Complex64::cis(phi1), v[1] * Complex64::cis(phi2)];
        let d1 = bs[1][0] * v[0] + bs[1][1] * v[1];
        d1.norm_sqr()
    }

    #[test]
    fn superposition_is_even() {
        let s = prepare_superposition();
        let p = s.probabilities();
        assert!((p.get("A1").unwrap() - 0.5).abs() < TOL);
        assert!((p.get("A2").unwrap() - 0.5).abs() < TOL);
        assert!((s.norm_sqr() - 1.0).abs() < TOL);
        let rho = DensityMatrix::from_pure(&s).unwrap();
        assert!((rho.purity() - 1.0).abs() < TOL);
    }

    #[test]
    fn table_rows() {
        let o = mz_probabilities(0.0, 0.0);
        assert!((o.p_d1 - 1.0).abs() < TOL && o.p_d2.abs() < TOL);
        let o = mz_probabilities(0.0, FRAC_PI_2);
        assert!((o.p_d1 - 0.5).abs() < TOL && (o.p_d2 - 0.5).abs() < TOL);
        let o = mz_probabilities(0.0, PI);
        assert!(o.p_d1.abs() < TOL && (o.p_d2 - 1.0).abs() < TOL);
        assert_eq!(o.p_absorbed, 0.0);
    }

    #[test]
    fn matches_hand_oracle_and_closed_form() {
        let o = mz_probabilities(0.3, 1.0);
        assert!((o.p_d1 - hand_p_d1(0.3, 1.0)).abs() < TOL);
        assert!((o.p_d1 - 0.882_421_093_642_244_3).abs() < 1e-12);
        assert!((o.p_d1 - (1.0 + 0.7f64.cos()) / 2.0).abs() < TOL);
    }

    #[test]
    fn blocked_path_gives_quarter_split() {
        for (phi1, phi2) in [(0.0, 0.0), (0.4, 2.9), (5.0, 1.0)] {
            let o = mz_blocked(phi1, phi2, Blocked::Path2);
            assert!((o.p_d1 - 0.25).abs() < TOL);
            assert!((o.p_d2 - 0.25).abs() < TOL);
            assert!((o.p_absorbed - 0.5).abs() < TOL);
            let (c1, c2) = o.conditional().unwrap();
            assert!((c1 - 0.5).abs() < TOL && (c2 - 0.5).abs() < TOL);
        }
    }

    #[test]
    fn either_blocked_path_looks_the_same() {
        let a = mz_blocked(0.0, FRAC_PI_3, Blocked::Path1);
        let b = mz_blocked(0.0, FRAC_PI_3, Blocked::Path2);
        for (x, y) in a.as_array().iter().zip(b.as_array()) {
            assert!((x - y).abs() < TOL);
        }
    }

    #[test]
    fn blocked_curve_is_flat() {
        let curve: Vec<f64> = phase_grid(64)
            .into_iter()
            .map(|d| mz_blocked(0.0, d, Blocked::Path1).p_d1)
            .collect();
        let spread = curve.iter().copied().fold(f64::NEG_INFINITY, f64::max)
            - curve.iter().copied().fold(f64::INFINITY, f64::min);
        assert!(spread < TOL);
        assert!(fringe_visibility(&curve) < TOL);
    }

    #[test]
    fn open_visibility_is_one() {
        let curve: Vec<f64> = phase_grid(64)
            .into_iter()
            .map(|d| mz_probabilities(0.0, d).p_d1)
            .collect();
        assert!((fringe_visibility(&curve) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn config_dispatch_and_parsing() {
        let cfg = MziConfig::open(0.0, 1.0);
        assert_eq!(cfg.outcome(), mz_probabilities(0.0, 1.0));
        let cfg = cfg.with_blocked("path1".parse().unwrap());
        assert_eq!(cfg.outcome(), mz_blocked(0.0, 1.0, Blocked::Path1));
        assert!("path3".parse::<Blocked>().is_err());
        assert_eq!(
            mz_blocked(0.0, 1.0, Blocked::None),
            mz_probabilities(0.0, 1.0)
        );
    }

    #[test]
    fn probabilities_stay_in_unit_interval() {
        for d in phase_grid(256) {
            for b in [Blocked::None, Blocked::Path1, Blocked::Path2] {
                for p in mz_blocked(0.0, d, b).as_array() {
                    assert!((0.0..=1.0).contains(&p));
                }
            }
        }
    }

    #[test]
    fn outcomes_sum_to_one() {
        for b in [Blocked::None, Blocked::Path1, Blocked::Path2] {
            let o = mz_blocked(1.1, 0.2, b);
            assert!((o.as_array().iter().sum::<f64>() - 1.0).abs() < TOL);
        }
    }
}
