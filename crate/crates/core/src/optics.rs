//! Unitary optical elements and their composition.
//!
//! Beam splitters use the symmetric convention: transmission `1/√2`,
//! reflection `i/√2`. Every layout-dependent phase is carried explicitly by
//! phase shifters rather than hidden in the splitter matrix.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::qcore::{CMatrix, ModeBasis, Operator, Subsystem};
use crate::{Error, Phase, Result};

/// Global phase picked up at a mirror unless configured otherwise.
pub const DEFAULT_MIRROR_PHASE: f64 = FRAC_PI_2;

/// Declarative description of a single optical element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ElementSpec {
    BeamSplitter,
    PhaseShifter { phase: Phase, target: String },
    Mirror { phase: Phase },
}

impl ElementSpec {
    pub fn phase_shifter(phase: impl Into<Phase>, target: impl Into<String>) -> Self {
        ElementSpec::PhaseShifter {
            phase: phase.into(),
            target: target.into(),
        }
    }

    pub fn mirror() -> Self {
        ElementSpec::Mirror {
            phase: Phase::new(DEFAULT_MIRROR_PHASE),
        }
    }

    pub fn build(&self, basis: &ModeBasis) -> Result<Operator> {
        match self {
            ElementSpec::BeamSplitter => beam_splitter(basis),
            ElementSpec::PhaseShifter { phase, target } => phase_shifter(*phase, target, basis),
            ElementSpec::Mirror { phase } => Ok(mirror_with_phase(*phase, basis)),
        }
    }
}

/// 50-50 beam splitter on a two-mode basis.
pub fn beam_splitter(basis: &ModeBasis) -> Result<Operator> {
    if basis.dim() != 2 {
        return Err(Error::NotTwoMode(basis.dim()));
    }
    let t = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let r = Complex64::new(0.0, FRAC_1_SQRT_2);
    Ok(Operator::with_flag(
        basis.clone(),
        CMatrix::from_rows([[t, r], [r, t]]),
        true,
    ))
}

/// Multiplies the amplitude of `target` by `e^{iφ}`.
pub fn phase_shifter(phi: impl Into<Phase>, target: &str, basis: &ModeBasis) -> Result<Operator> {
    let idx = basis.require_index(target)?;
    let phase = Complex64::from_polar(1.0, phi.into().radians());
    let diag: Vec<Complex64> = (0..basis.dim())
        .map(|i| {
            if i == idx {
                phase
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
        .collect();
    Ok(Operator::with_flag(
        basis.clone(),
        CMatrix::diagonal(&diag),
        true,
    ))
}

/// Mirror with the default phase; see [`mirror_with_phase`].
pub fn mirror(basis: &ModeBasis) -> Operator {
    mirror_with_phase(Phase::new(DEFAULT_MIRROR_PHASE), basis)
}

/// A mirror keeps every mode label and multiplies the whole state by a
/// global phase, so it never changes a probability.
pub fn mirror_with_phase(phase: impl Into<Phase>, basis: &ModeBasis) -> Operator {
    let z = Complex64::from_polar(1.0, phase.into().radians());
    Operator::with_flag(
        basis.clone(),
        CMatrix::diagonal(&vec![z; basis.dim()]),
        true,
    )
}

/// Embeds a single-station operator into the A-major two-station space:
/// `U ⊗ I` for [`Subsystem::A`], `I ⊗ U` for [`Subsystem::B`].
pub fn lift(op: &Operator, side: Subsystem, partner: &ModeBasis) -> Result<Operator> {
    let composite = match side {
        Subsystem::A => ModeBasis::product(op.basis(), partner)?,
        Subsystem::B => ModeBasis::product(partner, op.basis())?,
    };
    lift_into(op, side, &composite)
}

/// [`lift`] onto an existing composite basis whose `side` factor must be the
/// operator's basis.
pub fn lift_into(op: &Operator, side: Subsystem, composite: &ModeBasis) -> Result<Operator> {
    let factor = composite.factor(side).ok_or(Error::NotComposite)?;
    if factor != op.basis() {
        return Err(Error::BasisMismatch);
    }
    let (a, b) = composite.factors().expect("checked composite");
    let matrix = match side {
        Subsystem::A => op.matrix().kron(&CMatrix::identity(b.dim())),
        Subsystem::B => CMatrix::identity(a.dim()).kron(op.matrix()),
    };
    Ok(Operator::with_flag(
        composite.clone(),
        matrix,
        op.is_unitary(),
    ))
}

/// Sequential composition: the first element of `ops` acts first, so the
/// result is `ops[n-1] · … · ops[1] · ops[0]`.
pub fn compose(ops: &[Operator]) -> Result<Operator> {
    let (first, rest) = ops.split_first().ok_or(Error::EmptyComposition)?;
    rest.iter().try_fold(first.clone(), |acc, op| acc.then(op))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{tensor, StateVector, TOL};
    use std::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn ab(a: &str, b: &str) -> (ModeBasis, ModeBasis) {
        (
            ModeBasis::new([format!("{a}1"), format!("{a}2")]).unwrap(),
            ModeBasis::new([format!("{b}1"), format!("{b}2")]).unwrap(),
        )
    }

    fn close(s: &StateVector, expected: &[Complex64]) -> bool {
        s.amplitudes()
            .iter()
            .zip(expected)
            .all(|(a, b)| (a - b).norm() < TOL)
    }

    #[test]
    fn splitter_on_first_mode() {
        let (a, _) = ab("A", "B");
        let bs = beam_splitter(&a).unwrap();
        assert!(bs.is_unitary());
        let out = bs
            .apply(&StateVector::basis_state(a.clone(), "A1").unwrap())
            .unwrap();
        assert!(close(&out, &[c(FRAC_1_SQRT_2, 0.), c(0., FRAC_1_SQRT_2)]));
        let p = out.probabilities();
        assert!((p.get("A1").unwrap() - 0.5).abs() < TOL);
        assert!((p.get("A2").unwrap() - 0.5).abs() < TOL);
    }

    #[test]
    fn splitter_twice_routes_to_second_mode() {
        // [[1,i],[i,1]]²/2 = [[0,i],[i,0]]
        let (a, _) = ab("A", "B");
        let bs = beam_splitter(&a).unwrap();
        let twice = compose(&[bs.clone(), bs]).unwrap();
        let out = twice
            .apply(&StateVector::basis_state(a, "A1").unwrap())
            .unwrap();
        assert!(close(&out, &[c(0., 0.), c(0., 1.)]));
    }

    #[test]
    fn splitter_requires_two_modes() {
        let b = ModeBasis::new(["x", "y", "z"]).unwrap();
        assert_eq!(beam_splitter(&b), Err(Error::NotTwoMode(3)));
    }

    #[test]
    fn phase_shifter_examples() {
        let (a, _) = ab("A", "B");
        let zero = phase_shifter(0.0, "A1", &a).unwrap();
        assert_eq!(zero, Operator::identity(a.clone()));

        let h = c(FRAC_1_SQRT_2, 0.);
        let plus = StateVector::new(a.clone(), vec![h, h]).unwrap();
        let out = phase_shifter(PI, "A2", &a).unwrap().apply(&plus).unwrap();
        assert!(close(&out, &[h, -h]));

        let one = StateVector::basis_state(a.clone(), "A1").unwrap();
        let out = phase_shifter(PI / 2.0, "A1", &a)
            .unwrap()
            .apply(&one)
            .unwrap();
        assert!(close(&out, &[c(0., 1.), c(0., 0.)]));

        assert_eq!(
            phase_shifter(1.0, "B1", &a),
            Err(Error::UnknownLabel("B1".into()))
        );
    }

    #[test]
    fn phase_shifters_add_modulo_two_pi() {
        let (a, _) = ab("A", "B");
        let (x, y) = (4.0, 5.5);
        let combined = compose(&[
            phase_shifter(x, "A2", &a).unwrap(),
            phase_shifter(y, "A2", &a).unwrap(),
        ])
        .unwrap();
        let direct = phase_shifter((x + y) % TAU, "A2", &a).unwrap();
        assert!(combined.matrix().max_abs_diff(direct.matrix()) < TOL);
    }

    #[test]
    fn mirror_is_a_global_phase() {
        let (a, _) = ab("A", "B");
        let m = mirror(&a);
        assert!(m.is_unitary());
        let h = c(FRAC_1_SQRT_2, 0.);
        let plus = StateVector::new(a.clone(), vec![h, h]).unwrap();
        let out = m.apply(&plus).unwrap();
        assert!(close(&out, &[c(0., FRAC_1_SQRT_2), c(0., FRAC_1_SQRT_2)]));
        for (_, p) in out.probabilities().iter() {
            assert!((p - 0.5).abs() < TOL);
        }
        let mm = compose(&[m.clone(), m]).unwrap();
        let expected = Complex64::from_polar(1.0, 2.0 * DEFAULT_MIRROR_PHASE);
        assert!((mm.matrix()[(0, 0)] - expected).norm() < TOL);
        assert!((mm.matrix()[(1, 1)] - expected).norm() < TOL);
    }

    #[test]
    fn lift_into_checks_factor() {
        let (a, b) = ab("A", "B");
        let pair = ModeBasis::product(&a, &b).unwrap();
        let bs = beam_splitter(&a).unwrap();
        assert_eq!(
            lift_into(&bs, Subsystem::A, &pair).unwrap(),
            lift(&bs, Subsystem::A, &b).unwrap()
        );
        assert_eq!(
            lift_into(&bs, Subsystem::B, &pair),
            Err(Error::BasisMismatch)
        );
        assert_eq!(lift_into(&bs, Subsystem::A, &a), Err(Error::NotComposite));
    }

    #[test]
    fn lift_identity_and_splitter() {
        let (a, b) = ab("A", "B");
        let id = lift(&Operator::identity(a.clone()), Subsystem::A, &b).unwrap();
        assert_eq!(id.matrix(), &CMatrix::identity(4));
        assert_eq!(id.basis().labels(), ["A1B1", "A1B2", "A2B1", "A2B2"]);
        let bs = lift(&beam_splitter(&a).unwrap(), Subsystem::A, &b).unwrap();
        assert!(bs.is_unitary());
        assert!(bs.unitarity_defect() < TOL);
    }

    #[test]
    fn lifted_phase_on_b2_flips_second_branch() {
        let (a, b) = ab("A", "B");
        let h = c(FRAC_1_SQRT_2, 0.);
        let z = c(0., 0.);
        let basis = ModeBasis::product(&a, &b).unwrap();
        let bell = StateVector::new(basis, vec![h, z, z, h]).unwrap();
        let ps = lift(&phase_shifter(PI, "B2", &b).unwrap(), Subsystem::B, &a).unwrap();
        let out = ps.apply(&bell).unwrap();
        assert!(close(&out, &[h, z, z, -h]));
    }

    #[test]
    fn lift_commutes_with_tensor_example() {
        let (a, b) = ab("A", "B");
        let sa = StateVector::normalized(a.clone(), vec![c(0.2, 0.4), c(-0.5, 0.1)]).unwrap();
        let sb = StateVector::normalized(b.clone(), vec![c(0.9, 0.0), c(0.3, -0.3)]).unwrap();
        let u = compose(&[
            beam_splitter(&a).unwrap(),
            phase_shifter(0.7, "A1", &a).unwrap(),
        ])
        .unwrap();
        let lhs = lift(&u, Subsystem::A, &b)
            .unwrap()
            .apply(&tensor(&sa, &sb).unwrap())
            .unwrap();
        let rhs = tensor(&u.apply(&sa).unwrap(), &sb).unwrap();
        assert!(lhs.max_abs_diff(&rhs) < TOL);
    }

    #[test]
    fn compose_order_first_acts_first() {
        let (a, _) = ab("A", "B");
        let bs = beam_splitter(&a).unwrap();
        let ps = phase_shifter(PI / 2.0, "A1", &a).unwrap();
        let one = StateVector::basis_state(a.clone(), "A1").unwrap();
        let composed = compose(&[bs.clone(), ps.clone()])
            .unwrap()
            .apply(&one)
            .unwrap();
        let stepwise = ps.apply(&bs.apply(&one).unwrap()).unwrap();
        assert!(composed.max_abs_diff(&stepwise) < TOL);
        // PS then BS gives a different state
        let reversed = compose(&[ps, bs]).unwrap().apply(&one).unwrap();
        assert!(reversed.max_abs_diff(&stepwise) > 0.1);
    }

    #[test]
    fn compose_with_adjoint_is_identity() {
        let (a, _) = ab("A", "B");
        let u = compose(&[
            beam_splitter(&a).unwrap(),
            phase_shifter(1.3, "A2", &a).unwrap(),
            beam_splitter(&a).unwrap(),
        ])
        .unwrap();
        let id = compose(&[u.clone(), u.adjoint()]).unwrap();
        assert!(id.matrix().max_abs_diff(&CMatrix::identity(2)) < TOL);
        assert_eq!(compose(&[]), Err(Error::EmptyComposition));
    }

    #[test]
    fn element_specs_build() {
        let (a, _) = ab("A", "B");
        assert_eq!(
            ElementSpec::BeamSplitter.build(&a).unwrap(),
            beam_splitter(&a).unwrap()
        );
        let spec = ElementSpec::phase_shifter(-PI / 2.0, "A2");
        match &spec {
            ElementSpec::PhaseShifter { phase, .. } => {
                assert!((phase.radians() - 1.5 * PI).abs() < 1e-15)
            }
            _ => unreachable!(),
        }
        assert!(spec.build(&a).unwrap().is_unitary());
        assert_eq!(ElementSpec::mirror().build(&a).unwrap(), mirror(&a));
    }
}
