//! Momentum-entangled two-photon interferometer.
//!
//! A source emits the biphoton `(|A1B1⟩ + |A2B2⟩)/√2`, where index 1 is the
//! solid branch and index 2 the dashed branch. Each station has a mirror,
//! fixed layout phases on both of its paths, one adjustable phase shifter and
//! a 50-50 splitter in front of detectors `{A1, A2}` or `{B1, B2}`:
//!
//! | path        | fixed | adjustable |
//! |-------------|-------|------------|
//! | A, solid    | `φw`  |            |
//! | B, solid    | `φx`  | `φB`       |
//! | A, dashed   | `φy`  | `φA`       |
//! | B, dashed   | `φz`  |            |
//!
//! Every quantity here is read off the final state of that matrix pipeline;
//! the cosine closed forms are only used as test oracles.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::optics::{beam_splitter, compose, lift_into, mirror, phase_shifter};
use crate::phase::PHASE_TOL;
use crate::qcore::{DensityMatrix, ModeBasis, Operator, StateVector, Subsystem};
use crate::{Error, Phase, Result};

pub fn a_basis() -> ModeBasis {
    static BASIS: OnceLock<ModeBasis> = OnceLock::new();
    BASIS
        .get_or_init(|| ModeBasis::new(["A1", "A2"]).expect("static labels are valid"))
        .clone()
}

pub fn b_basis() -> ModeBasis {
    static BASIS: OnceLock<ModeBasis> = OnceLock::new();
    BASIS
        .get_or_init(|| ModeBasis::new(["B1", "B2"]).expect("static labels are valid"))
        .clone()
}

/// `[A1B1, A1B2, A2B1, A2B2]`.
pub fn pair_basis() -> ModeBasis {
    static BASIS: OnceLock<ModeBasis> = OnceLock::new();
    BASIS
        .get_or_init(|| ModeBasis::product(&a_basis(), &b_basis()).expect("disjoint labels"))
        .clone()
}

/// Constant phase offsets contributed by mirrors and splitters along the four
/// single-photon paths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPhases {
    pub w: Phase,
    pub x: Phase,
    pub y: Phase,
    pub z: Phase,
}

impl FixedPhases {
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        FixedPhases {
            w: w.into(),
            x: x.into(),
            y: y.into(),
            z: z.into(),
        }
    }

    /// Default layout: a quarter-wave offset on each solid path, none on the
    /// dashed paths. This puts perfect correlation (`φ_u = 0`) at
    /// `φB − φA = 0`.
    pub fn calibrated() -> Self {
        FixedPhases::new(FRAC_PI_2, FRAC_PI_2, 0.0, 0.0)
    }

    /// Keeps `w`, `x`, `y` and picks `z` so that `φ_u = 0`.
    pub fn calibrated_with(w: f64, x: f64, y: f64) -> Self {
        FixedPhases::new(w, x, y, w + x - y - PI)
    }
}

impl Default for FixedPhases {
    fn default() -> Self {
        FixedPhases::calibrated()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RtoPhases {
    pub phi_a: Phase,
    pub phi_b: Phase,
    #[serde(default)]
    pub fixed: FixedPhases,
}

impl RtoPhases {
    pub fn new(phi_a: impl Into<Phase>, phi_b: impl Into<Phase>, fixed: FixedPhases) -> Self {
        RtoPhases {
            phi_a: phi_a.into(),
            phi_b: phi_b.into(),
            fixed,
        }
    }

    /// Station phases on the default calibrated layout.
    pub fn calibrated(phi_a: impl Into<Phase>, phi_b: impl Into<Phase>) -> Self {
        RtoPhases::new(phi_a, phi_b, FixedPhases::calibrated())
    }

    /// `φB − φA`, wrapped.
    pub fn difference(&self) -> Phase {
        self.phi_b - self.phi_a
    }
}

/// Joint detection probabilities for `(A1,B1), (A1,B2), (A2,B1), (A2,B2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoincidenceDist {
    pub p11: f64,
    pub p12: f64,
    pub p21: f64,
    pub p22: f64,
}

impl CoincidenceDist {
    pub const LABELS: [&'static str; 4] = ["A1B1", "A1B2", "A2B1", "A2B2"];

    pub fn as_array(&self) -> [f64; 4] {
        [self.p11, self.p12, self.p21, self.p22]
    }

    pub fn total(&self) -> f64 {
        self.as_array().iter().sum()
    }
}

/// Single-detector probabilities obtained by summing coincidences.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Marginals {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
}

impl Marginals {
    pub fn as_array(&self) -> [f64; 4] {
        [self.a1, self.a2, self.b1, self.b2]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub p_same: f64,
    pub p_different: f64,
    /// Degree of correlation `P(same) − P(different)`.
    pub c: f64,
}

/// `(|A1B1⟩ + |A2B2⟩)/√2`.
pub fn prepare_entangled() -> StateVector {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    StateVector::new(pair_basis(), vec![h, z, z, h]).expect("normalized by construction")
}

/// Everything one station does to its photon, as a 2×2 unitary.
fn station(side: Subsystem, ph: &RtoPhases) -> Operator {
    let f = &ph.fixed;
    let (basis, ops) = match side {
        Subsystem::A => (a_basis(), [(f.w, "A1"), (f.y, "A2"), (ph.phi_a, "A2")]),
        Subsystem::B => (b_basis(), [(f.x, "B1"), (f.z, "B2"), (ph.phi_b, "B1")]),
    };
    let mut chain = vec![mirror(&basis)];
    for (phase, label) in ops {
        chain.push(phase_shifter(phase, label, &basis).expect("label in station basis"));
    }
    chain.push(beam_splitter(&basis).expect("two-mode basis"));
    compose(&chain).expect("common basis")
}

/// The full two-station unitary on the pair basis.
pub fn pipeline(ph: &RtoPhases) -> Operator {
    let pair = pair_basis();
    let a = lift_into(&station(Subsystem::A, ph), Subsystem::A, &pair).expect("A factor");
    let b = lift_into(&station(Subsystem::B, ph), Subsystem::B, &pair).expect("B factor");
    compose(&[a, b]).expect("common basis")
}

/// Biphoton state at the four coincidence detectors.
pub fn final_state(ph: &RtoPhases) -> StateVector {
    pipeline(ph)
        .apply(&prepare_entangled())
        .expect("pipeline acts on the pair basis")
}

/// Two-path amplitude `Ψ(Ai, Bj)` for `i, j ∈ {1, 2}`.
///
/// # Panics
/// If `i` or `j` is not 1 or 2.
pub fn nonlocal_amplitude(i: u8, j: u8, ph: &RtoPhases) -> Complex64 {
    assert!(
        matches!(i, 1 | 2) && matches!(j, 1 | 2),
        "detector index must be 1 or 2"
    );
    let idx = usize::from(i - 1) * 2 + usize::from(j - 1);
    final_state(ph).amplitudes()[idx]
}

pub fn coincidence_probabilities(ph: &RtoPhases) -> CoincidenceDist {
    let s = final_state(ph);
    let p: Vec<f64> = s
        .amplitudes()
        .iter()
        .map(|a| crate::mzi::unit(a.norm_sqr()))
        .collect();
    CoincidenceDist {
        p11: p[0],
        p12: p[1],
        p21: p[2],
        p22: p[3],
    }
}

pub fn marginals(ph: &RtoPhases) -> Marginals {
    let d = coincidence_probabilities(ph);
    Marginals {
        a1: d.p11 + d.p12,
        a2: d.p21 + d.p22,
        b1: d.p11 + d.p21,
        b2: d.p12 + d.p22,
    }
}

/// "Same" is `(A1,B1)` or `(A2,B2)`; "different" is the other two pairs.
pub fn correlation(ph: &RtoPhases) -> Correlation {
    let d = coincidence_probabilities(ph);
    let p_same = d.p11 + d.p22;
    let p_different = d.p12 + d.p21;
    Correlation {
        p_same,
        p_different,
        c: p_same - p_different,
    }
}

/// Reduced state of one photon after both stations.
pub fn reduced_density(ph: &RtoPhases, keep: Subsystem) -> DensityMatrix {
    DensityMatrix::from_pure(&final_state(ph))
        .and_then(|rho| rho.partial_trace(keep))
        .expect("pipeline output is a normalized composite state")
}

/// Extracts the offsets `(φ_u, φ_v)` of
/// `P(A1,B1) = [1 + cos(φB − φA + φ_u)]/4` and
/// `P(A1,B2) = [1 + cos(φB − φA + φ_v)]/4` from the pipeline.
///
/// Probes `φB = 0` for the cosine and `φB = π/2` for the sine of each offset,
/// takes `atan2`, and confirms the fit with a third probe at `φB = π/4`.
pub fn derive_fixed(fixed: &FixedPhases) -> Result<(Phase, Phase)> {
    let probe = |phi_b: f64| coincidence_probabilities(&RtoPhases::new(0.0, phi_b, *fixed));
    let at0 = probe(0.0);
    let at90 = probe(FRAC_PI_2);
    let at45 = probe(FRAC_PI_4);
    let u = fit_offset(at0.p11, at90.p11, at45.p11)?;
    let v = fit_offset(at0.p12, at90.p12, at45.p12)?;
    Ok((u, v))
}

fn fit_offset(p0: f64, p90: f64, p45: f64) -> Result<Phase> {
    let cos = 4.0 * p0 - 1.0;
    let sin = 1.0 - 4.0 * p90;
    let radius = cos.hypot(sin);
    if (radius - 1.0).abs() > PHASE_TOL {
        return Err(Error::DegenerateFit((radius - 1.0).abs()));
    }
    let offset = sin.atan2(cos);
    let residual = ((1.0 + (FRAC_PI_4 + offset).cos()) / 4.0 - p45).abs();
    if residual > PHASE_TOL {
        return Err(Error::DegenerateFit(residual));
    }
    Ok(Phase::new(offset))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::TOL;
    use std::f64::consts::{FRAC_1_SQRT_2, TAU};

    /// Eq.-level two-term amplitude for (A1, B2), evaluated literally.
    fn two_term_a1b2(ph: &RtoPhases) -> Complex64 {
        let f = &ph.fixed;
        let solid =
            Complex64::cis(f.w.radians()) * Complex64::cis(f.x.radians() + ph.phi_b.radians());
        let dashed =
            Complex64::cis(f.y.radians() + ph.phi_a.radians()) * Complex64::cis(f.z.radians());
        (solid + dashed) / (2.0 * 2f64.sqrt())
    }

    #[test]
    fn entangled_state() {
        let s = prepare_entangled();
        let p = s.probabilities();
        assert!((p.get("A1B1").unwrap() - 0.5).abs() < TOL);
        assert_eq!(p.get("A1B2"), Some(0.0));
        assert_eq!(p.get("A2B1"), Some(0.0));
        assert!((p.get("A2B2").unwrap() - 0.5).abs() < TOL);
        let rho = DensityMatrix::from_pure(&s).unwrap();
        let ra = rho.partial_trace(Subsystem::A).unwrap();
        assert!((ra.entry("A1", "A1").unwrap().re - 0.5).abs() < TOL);
        assert!((ra.entry("A2", "A2").unwrap().re - 0.5).abs() < TOL);
        assert!(ra.entry("A1", "A2").unwrap().norm() < TOL);
        assert!((ra.purity() - 0.5).abs() < TOL);
    }

    #[test]
    fn amplitude_matches_two_term_formula() {
        let zero = RtoPhases::new(0.0, 0.0, FixedPhases::new(0.0, 0.0, 0.0, 0.0));
        let amp = nonlocal_amplitude(1, 2, &zero);
        let (_, v) = derive_fixed(&zero.fixed).unwrap();
        assert!((amp.norm_sqr() - (1.0 + v.radians().cos()) / 4.0).abs() < TOL);
        assert!((amp.norm_sqr() - two_term_a1b2(&zero).norm_sqr()).abs() < TOL);

        let ph = RtoPhases::new(0.9, 2.3, FixedPhases::new(0.1, 1.7, 4.0, 0.6));
        let amp = nonlocal_amplitude(1, 2, &ph);
        assert!((amp.norm_sqr() - two_term_a1b2(&ph).norm_sqr()).abs() < TOL);
    }

    #[test]
    fn amplitudes_are_bounded_and_complete() {
        let ph = RtoPhases::new(1.2, 0.4, FixedPhases::new(0.3, 2.0, 5.1, 0.2));
        let mut total = 0.0;
        for i in 1..=2 {
            for j in 1..=2 {
                let a = nonlocal_amplitude(i, j, &ph);
                assert!(a.norm() <= FRAC_1_SQRT_2 + TOL);
                total += a.norm_sqr();
            }
        }
        assert!((total - 1.0).abs() < TOL);
    }

    #[test]
    #[should_panic(expected = "detector index")]
    fn bad_detector_index() {
        nonlocal_amplitude(3, 1, &RtoPhases::calibrated(0.0, 0.0));
    }

    #[test]
    fn calibrated_layout_offsets() {
        let (u, v) = derive_fixed(&FixedPhases::calibrated()).unwrap();
        assert!(u.approx_eq(Phase::ZERO, PHASE_TOL));
        assert!(v.approx_eq(Phase::new(PI), PHASE_TOL));
        let d = coincidence_probabilities(&RtoPhases::calibrated(0.0, 0.0));
        assert!((d.p11 - 0.5).abs() < TOL);
    }

    #[test]
    fn calibrated_with_solves_for_z() {
        let fixed = FixedPhases::calibrated_with(0.4, 2.2, 5.0);
        let (u, _) = derive_fixed(&fixed).unwrap();
        assert!(u.approx_eq(Phase::ZERO, PHASE_TOL));
    }

    #[test]
    fn coincidence_table() {
        let cases = [
            (0.0, [0.5, 0.0, 0.0, 0.5]),
            (FRAC_PI_2, [0.25; 4]),
            (PI, [0.0, 0.5, 0.5, 0.0]),
        ];
        for (dphi, want) in cases {
            let d = coincidence_probabilities(&RtoPhases::calibrated(0.0, dphi));
            for (got, w) in d.as_array().iter().zip(want) {
                assert!((got - w).abs() < TOL, "Δφ={dphi}: {got} vs {w}");
            }
        }
        let d = coincidence_probabilities(&RtoPhases::calibrated(0.0, FRAC_PI_4));
        assert!((d.p11 - 0.426_776_695_296_636_87).abs() < TOL);
    }

    #[test]
    fn marginals_are_flat() {
        for k in 0..16 {
            let a = TAU * k as f64 / 16.0;
            for l in 0..16 {
                let b = TAU * l as f64 / 16.0;
                let ph = RtoPhases::calibrated(a, b);
                for m in marginals(&ph).as_array() {
                    assert!((m - 0.5).abs() < TOL);
                }
                let d = coincidence_probabilities(&ph);
                assert!((marginals(&ph).a1 - (d.p11 + d.p12)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn correlation_table() {
        let c = correlation(&RtoPhases::calibrated(0.0, 0.0));
        assert!((c.c - 1.0).abs() < TOL);
        let c = correlation(&RtoPhases::calibrated(0.0, FRAC_PI_2));
        assert!(c.c.abs() < TOL);
        assert!((c.p_same - 0.5).abs() < TOL && (c.p_different - 0.5).abs() < TOL);
        let c = correlation(&RtoPhases::calibrated(0.0, PI));
        assert!((c.c + 1.0).abs() < TOL);
        let c = correlation(&RtoPhases::calibrated(0.0, FRAC_PI_4));
        assert!((c.c - FRAC_1_SQRT_2).abs() < TOL);
        assert!((c.p_same - 0.853_553_390_593_273_7).abs() < TOL);
    }

    #[test]
    fn reduced_states_stay_mixed() {
        for (a, b) in [(0.0, 0.0), (0.3, 2.0), (4.0, 1.0)] {
            let ph = RtoPhases::calibrated(a, b);
            for keep in [Subsystem::A, Subsystem::B] {
                let r = reduced_density(&ph, keep);
                assert!((r.purity() - 0.5).abs() < TOL);
            }
        }
    }

    #[test]
    fn non_cosine_probabilities_are_rejected() {
        assert!(matches!(
            fit_offset(0.3, 0.3, 0.3),
            Err(Error::DegenerateFit(_))
        ));
        // on the unit circle but inconsistent third probe
        assert!(matches!(
            fit_offset(0.5, 0.25, 0.1),
            Err(Error::DegenerateFit(_))
        ));
    }
}
