use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::{CMatrix, ModeBasis, StateVector, Subsystem, EIGEN_TOL, TOL};
use crate::{Error, Result};

/// A density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    basis: ModeBasis,
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity and trace to [`TOL`] and eigenvalues to
    /// [`EIGEN_TOL`].
    pub fn new(basis: ModeBasis, matrix: CMatrix) -> Result<Self> {
        if matrix.dim() != basis.dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.dim(),
                found: matrix.dim(),
            });
        }
        let herm = matrix.hermiticity_defect();
        if herm > TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TOL || tr.im.abs() > TOL {
            return Err(Error::BadTrace(tr.re));
        }
        let rho = DensityMatrix { basis, matrix };
        let min = rho.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < EIGEN_TOL {
            return Err(Error::NegativeEigenvalue(min));
        }
        Ok(rho)
    }

    /// `|s⟩⟨s|`.
    pub fn from_pure(state: &StateVector) -> Result<Self> {
        let n2 = state.norm_sqr();
        if (n2 - 1.0).abs() > TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(DensityMatrix {
            basis: state.basis().clone(),
            matrix: CMatrix::outer(state.amplitudes()),
        })
    }

    pub fn basis(&self) -> &ModeBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn entry(&self, row: &str, col: &str) -> Option<Complex64> {
        let r = self.basis.index_of(row)?;
        let c = self.basis.index_of(col)?;
        Some(self.matrix[(r, c)])
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.matrix.dim();
        let m = DMatrix::from_row_slice(n, n, self.matrix.as_slice());
        let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Reduced density matrix of the `keep` factor of a composite basis.
    pub fn partial_trace(&self, keep: Subsystem) -> Result<DensityMatrix> {
        let (a, b) = self.basis.factors().ok_or(Error::NotComposite)?;
        let (da, db) = (a.dim(), b.dim());
        let rho = &self.matrix;
        let (kept, dim) = match keep {
            Subsystem::A => (a, da),
            Subsystem::B => (b, db),
        };
        let mut out = CMatrix::zeros(dim);
        match keep {
            Subsystem::A => {
                for i in 0..da {
                    for k in 0..da {
                        out[(i, k)] = (0..db).map(|j| rho[(i * db + j, k * db + j)]).sum();
                    }
                }
            }
            Subsystem::B => {
                for j in 0..db {
                    for l in 0..db {
                        out[(j, l)] = (0..da).map(|i| rho[(i * db + j, i * db + l)]).sum();
                    }
                }
            }
        }
        Ok(DensityMatrix {
            basis: kept.clone(),
            matrix: out,
        })
    }
}
