use num_complex::Complex64;

use super::{ModeBasis, TOL};
use crate::{Error, Result};

/// A normalized pure state over a [`ModeBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: ModeBasis,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Rejects amplitudes whose squared norm differs from 1 by more than
    /// [`TOL`]. Use [`StateVector::normalized`] to rescale instead.
    pub fn new(basis: ModeBasis, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(&basis, amplitudes.len())?;
        let n2 = norm_sqr(&amplitudes);
        if (n2 - 1.0).abs() > TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(StateVector { basis, amplitudes })
    }

    pub fn normalized(basis: ModeBasis, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_dim(&basis, amplitudes.len())?;
        let n = norm_sqr(&amplitudes).sqrt();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroVector);
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / n).collect();
        Ok(StateVector { basis, amplitudes })
    }

    /// The basis state with amplitude 1 on `label`.
    pub fn basis_state(basis: ModeBasis, label: &str) -> Result<Self> {
        let idx = basis.require_index(label)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); basis.dim()];
        amplitudes[idx] = Complex64::new(1.0, 0.0);
        Ok(StateVector { basis, amplitudes })
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, label: &str) -> Option<Complex64> {
        self.basis.index_of(label).map(|i| self.amplitudes[i])
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// Born-rule probabilities per label.
    pub fn probabilities(&self) -> Probabilities {
        Probabilities {
            basis: self.basis.clone(),
            values: self.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
        }
    }

    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        tensor(self, other)
    }

    /// Largest amplitude-wise modulus of the difference to `other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub(crate) fn from_parts_unchecked(basis: ModeBasis, amplitudes: Vec<Complex64>) -> Self {
        StateVector { basis, amplitudes }
    }
}

/// `a ⊗ b` over the A-major product basis.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let basis = ModeBasis::product(&a.basis, &b.basis)?;
    let amplitudes = a
        .amplitudes
        .iter()
        .flat_map(|x| b.amplitudes.iter().map(move |y| x * y))
        .collect();
    Ok(StateVector { basis, amplitudes })
}

/// Detection probabilities indexed by mode label.
#[derive(Clone, Debug, PartialEq)]
pub struct Probabilities {
    basis: ModeBasis,
    values: Vec<f64>,
}

impl Probabilities {
    pub fn get(&self, label: &str) -> Option<f64> {
        self.basis.index_of(label).map(|i| self.values[i])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.basis
            .labels()
            .iter()
            .map(String::as_str)
            .zip(self.values.iter().copied())
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

fn check_dim(basis: &ModeBasis, len: usize) -> Result<()> {
    if basis.dim() != len {
        return Err(Error::DimensionMismatch {
            expected: basis.dim(),
            found: len,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn a_basis() -> ModeBasis {
        ModeBasis::new(["A1", "A2"]).unwrap()
    }

    fn b_basis() -> ModeBasis {
        ModeBasis::new(["B1", "B2"]).unwrap()
    }

    #[test]
    fn constructor_rejects_unnormalized() {
        let err = StateVector::new(a_basis(), vec![c(1., 0.), c(1., 0.)]).unwrap_err();
        assert!(matches!(err, Error::NotNormalized(n) if (n - 2.0).abs() < 1e-15));
        let s = StateVector::normalized(a_basis(), vec![c(1., 0.), c(1., 0.)]).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < TOL);
        assert_eq!(
            StateVector::normalized(a_basis(), vec![c(0., 0.); 2]),
            Err(Error::ZeroVector)
        );
        assert!(matches!(
            StateVector::new(a_basis(), vec![c(1., 0.)]),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 1
            })
        ));
    }

    #[test]
    fn tensor_of_basis_states() {
        let a = StateVector::basis_state(a_basis(), "A1").unwrap();
        let b = StateVector::basis_state(b_basis(), "B1").unwrap();
        let ab = tensor(&a, &b).unwrap();
        assert_eq!(ab.amplitude("A1B1"), Some(c(1., 0.)));
        for l in ["A1B2", "A2B1", "A2B2"] {
            assert_eq!(ab.amplitude(l), Some(c(0., 0.)));
        }
    }

    #[test]
    fn tensor_distributes_over_superposition() {
        let a =
            StateVector::new(a_basis(), vec![c(FRAC_1_SQRT_2, 0.), c(FRAC_1_SQRT_2, 0.)]).unwrap();
        let b = StateVector::basis_state(b_basis(), "B1").unwrap();
        let ab = tensor(&a, &b).unwrap();
        let expected = [
            c(FRAC_1_SQRT_2, 0.),
            c(0., 0.),
            c(FRAC_1_SQRT_2, 0.),
            c(0., 0.),
        ];
        for (got, want) in ab.amplitudes().iter().zip(expected) {
            assert!((got - want).norm() < TOL);
        }
    }

    #[test]
    fn tensor_with_complex_phases() {
        // (|A1⟩ + i|A2⟩)/√2 ⊗ (|B1⟩ − |B2⟩)/√2, multiplied out by hand
        let a =
            StateVector::new(a_basis(), vec![c(FRAC_1_SQRT_2, 0.), c(0., FRAC_1_SQRT_2)]).unwrap();
        let b =
            StateVector::new(b_basis(), vec![c(FRAC_1_SQRT_2, 0.), c(-FRAC_1_SQRT_2, 0.)]).unwrap();
        let ab = tensor(&a, &b).unwrap();
        let expected = [c(0.5, 0.), c(-0.5, 0.), c(0., 0.5), c(0., -0.5)];
        for (got, want) in ab.amplitudes().iter().zip(expected) {
            assert!((got - want).norm() < TOL);
        }
        assert!((ab.norm_sqr() - 1.0).abs() < TOL);
        for (_, p) in ab.probabilities().iter() {
            assert!((p - 0.25).abs() < TOL);
        }
    }

    #[test]
    fn tensor_rejects_shared_labels() {
        let a = StateVector::basis_state(a_basis(), "A1").unwrap();
        assert_eq!(tensor(&a, &a), Err(Error::BasisConflict("A1".into())));
    }

    #[test]
    fn probabilities_of_simple_states() {
        let s = StateVector::basis_state(a_basis(), "A1").unwrap();
        let p = s.probabilities();
        assert_eq!(p.get("A1"), Some(1.0));
        assert_eq!(p.get("A2"), Some(0.0));
        assert_eq!(p.get("B1"), None);

        let s =
            StateVector::new(a_basis(), vec![c(FRAC_1_SQRT_2, 0.), c(FRAC_1_SQRT_2, 0.)]).unwrap();
        let p = s.probabilities();
        assert!((p.get("A1").unwrap() - 0.5).abs() < TOL);
        assert!((p.get("A2").unwrap() - 0.5).abs() < TOL);
        assert!((p.total() - 1.0).abs() < TOL);
    }

    #[test]
    fn unknown_basis_label() {
        assert_eq!(
            StateVector::basis_state(a_basis(), "A3"),
            Err(Error::UnknownLabel("A3".into()))
        );
    }
}
