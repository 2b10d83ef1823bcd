//! Command-line front end for `biphoton-core`: analytic sweeps, Monte Carlo
//! columns and CHSH reports as CSV or JSON.

pub mod commands;
pub mod config;
pub mod format;
