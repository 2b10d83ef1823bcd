use num_complex::Complex64;

use super::{CMatrix, ModeBasis, StateVector, TOL};
use crate::{Error, Result};

/// A square complex matrix acting on a [`ModeBasis`].
///
/// The unitary flag is computed once at construction: an operator is flagged
/// unitary iff every entry of `U†U − I` is below [`TOL`] in modulus.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    basis: ModeBasis,
    matrix: CMatrix,
    unitary: bool,
}

impl Operator {
    pub fn new(basis: ModeBasis, matrix: CMatrix) -> Result<Self> {
        if matrix.dim() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: matrix.dim(),
            });
        }
        let unitary = matrix.unitarity_defect() < TOL;
        Ok(Operator {
            basis,
            matrix,
            unitary,
        })
    }

    /// Skips the unitarity check when the flag is already known, e.g. for
    /// products and Kronecker products of unitaries.
    pub(crate) fn with_flag(basis: ModeBasis, matrix: CMatrix, unitary: bool) -> Self {
        debug_assert_eq!(basis.dim(), matrix.dim());
        Operator {
            basis,
            matrix,
            unitary,
        }
    }

    pub fn identity(basis: ModeBasis) -> Self {
        let matrix = CMatrix::identity(basis.dim());
        Operator {
            basis,
            matrix,
            unitary: true,
        }
    }

    /// Orthogonal projector that removes the amplitude of `label`.
    pub fn absorber(basis: ModeBasis, label: &str) -> Result<Self> {
        let idx = basis.require_index(label)?;
        let diag: Vec<Complex64> = (0..basis.dim())
            .map(|i| Complex64::new(if i == idx { 0.0 } else { 1.0 }, 0.0))
            .collect();
        Operator::new(basis, CMatrix::diagonal(&diag))
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.matrix.unitarity_defect()
    }

    pub fn adjoint(&self) -> Operator {
        Operator {
            basis: self.basis.clone(),
            matrix: self.matrix.adjoint(),
            unitary: self.unitary,
        }
    }

    /// Matrix-vector product on a normalized state.
    ///
    /// Non-unitary operators are accepted only if they happen to preserve the
    /// norm of this particular input; otherwise use [`Operator::act`].
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.basis() != &self.basis {
            return Err(Error::BasisMismatch);
        }
        let out = self.matrix.mul_vec(state.amplitudes());
        if self.unitary {
            Ok(StateVector::from_parts_unchecked(self.basis.clone(), out))
        } else {
            StateVector::new(self.basis.clone(), out)
        }
    }

    /// Raw matrix-vector product on unnormalized amplitudes.
    pub fn act(&self, amplitudes: &[Complex64]) -> Result<Vec<Complex64>> {
        if amplitudes.len() != self.basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.basis.dim(),
                found: amplitudes.len(),
            });
        }
        Ok(self.matrix.mul_vec(amplitudes))
    }

    /// `next · self`: the operator that applies `self` and then `next`.
    pub fn then(&self, next: &Operator) -> Result<Operator> {
        if self.basis != next.basis {
            return Err(Error::BasisMismatch);
        }
        let matrix = &next.matrix * &self.matrix;
        if self.unitary && next.unitary {
            Ok(Operator::with_flag(self.basis.clone(), matrix, true))
        } else {
            Operator::new(self.basis.clone(), matrix)
        }
    }
}
