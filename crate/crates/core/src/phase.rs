//! Angles wrapped to `[0, 2π)`.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Tolerance used when comparing derived phases modulo 2π.
pub const PHASE_TOL: f64 = 1e-9;

/// A phase in radians, always stored wrapped to `[0, 2π)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct Phase(f64);

impl Phase {
    pub const ZERO: Phase = Phase(0.0);

    pub fn new(radians: f64) -> Self {
        Phase(wrap(radians))
    }

    pub fn from_degrees(degrees: f64) -> Self {
        Phase::new(degrees.to_radians())
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// Shortest angular distance to `other`, in `[0, π]`.
    pub fn distance(self, other: Phase) -> f64 {
        let d = (self.0 - other.0).abs();
        d.min(TAU - d)
    }

    pub fn approx_eq(self, other: Phase, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn wrap(radians: f64) -> f64 {
    let w = radians.rem_euclid(TAU);
    // rem_euclid of a tiny negative number rounds up to exactly 2π
    if w >= TAU {
        0.0
    } else {
        w
    }
}

impl From<f64> for Phase {
    fn from(radians: f64) -> Self {
        Phase::new(radians)
    }
}

impl From<Phase> for f64 {
    fn from(p: Phase) -> f64 {
        p.0
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase::new(self.0 + rhs.0)
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase::new(self.0 - rhs.0)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::new(-self.0)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} rad", self.0)
    }
}

/// `n` equally spaced phases covering `[0, 2π)` (the endpoint is excluded).
pub fn phase_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| TAU * k as f64 / n as f64).collect()
}
