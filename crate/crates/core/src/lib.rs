//! Linear-optics simulation of single-photon Mach-Zehnder interference and
//! entangled two-photon (biphoton) interferometry.
//!
//! Everything is built from unitary optical elements acting on complex state
//! vectors:
//!
//! * [`qcore`]: mode bases, state vectors, operators, density matrices and
//!   partial trace.
//! * [`optics`]: beam splitters, phase shifters, mirrors, lifting onto the
//!   two-photon space and composition.
//! * [`mzi`]: the single-photon Mach-Zehnder interferometer, with and without
//!   a blocked path.
//! * [`rto`]: the momentum-entangled two-photon interferometer, coincidence
//!   probabilities, marginals and the degree of correlation.
//! * [`mc`]: seeded Monte Carlo sampling of detector outcomes and estimators.
//! * [`bell`]: CHSH evaluation, analytic and sampled.
//! * [`checks`]: the built-in invariant suite used by the CLI `check` command.

pub mod bell;
pub mod checks;
mod error;
pub mod mc;
pub mod mzi;
pub mod optics;
pub mod phase;
pub mod qcore;
pub mod rto;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use phase::Phase;
