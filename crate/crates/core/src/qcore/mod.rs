//! Minimal complex linear algebra for few-mode optical systems.
//!
//! Composite bases are always ordered A-major: for subsystems with labels
//! `[A1, A2]` and `[B1, B2]` the product basis is `[A1B1, A1B2, A2B1, A2B2]`.

mod basis;
mod density;
mod matrix;
mod operator;
mod state;

pub use basis::{ModeBasis, Subsystem};
pub use density::DensityMatrix;
pub use matrix::CMatrix;
pub use operator::Operator;
pub use state::{tensor, Probabilities, StateVector};

/// Tolerance for analytic (non-sampled) numerical paths.
pub const TOL: f64 = 1e-12;

/// Lower bound accepted for density-matrix eigenvalues.
pub const EIGEN_TOL: f64 = -1e-10;
