//! Built-in invariant suite. Each check compares the matrix pipeline against
//! a closed form or a structural property and reports the worst deviation.

use std::f64::consts::{PI, SQRT_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bell::{chsh_s, classical_bound, ChshSettings};
use crate::mzi::{self, Blocked};
use crate::optics::{beam_splitter, lift, mirror, phase_shifter};
use crate::phase::{phase_grid, PHASE_TOL};
use crate::qcore::{DensityMatrix, Subsystem, TOL};
use crate::rto::{self, FixedPhases, RtoPhases};
use crate::Phase;

/// Seed for the randomized layouts used by [`run_all`].
pub const LAYOUT_SEED: u64 = 0x5EED_1A70;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed deviation.
    pub deviation: f64,
    pub tolerance: f64,
}

impl CheckResult {
    fn new(name: &'static str, deviation: f64, tolerance: f64) -> Self {
        CheckResult {
            name,
            passed: deviation.is_finite() && deviation < tolerance,
            deviation,
            tolerance,
        }
    }
}

/// `n` random fixed layouts from a seeded generator.
pub fn random_layouts(n: usize, seed: u64) -> Vec<FixedPhases> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            FixedPhases::new(
                rng.gen_range(0.0..TAU),
                rng.gen_range(0.0..TAU),
                rng.gen_range(0.0..TAU),
                rng.gen_range(0.0..TAU),
            )
        })
        .collect()
}

pub fn element_unitarity() -> CheckResult {
    let a = rto::a_basis();
    let b = rto::b_basis();
    let mut worst: f64 = 0.0;
    let mut ops = vec![beam_splitter(&a).expect("two modes"), mirror(&a)];
    for phi in phase_grid(16) {
        ops.push(phase_shifter(phi, "A1", &a).expect("label"));
        ops.push(phase_shifter(phi, "A2", &a).expect("label"));
    }
    for op in &ops {
        worst = worst.max(op.unitarity_defect());
        let lifted = lift(op, Subsystem::A, &b).expect("disjoint");
        worst = worst.max(lifted.unitarity_defect());
    }
    CheckResult::new("element unitarity", worst, TOL)
}

pub fn mz_closed_form() -> CheckResult {
    let worst = phase_grid(100)
        .into_iter()
        .map(|d| {
            let o = mzi::mz_probabilities(0.0, d);
            (o.p_d1 - (1.0 + d.cos()) / 2.0)
                .abs()
                .max((o.p_d2 - (1.0 - d.cos()) / 2.0).abs())
        })
        .fold(0.0, f64::max);
    CheckResult::new("mz closed form", worst, TOL)
}

pub fn mz_visibility() -> Vec<CheckResult> {
    let grid = phase_grid(64);
    let open: Vec<f64> = grid
        .iter()
        .map(|&d| mzi::mz_probabilities(0.0, d).p_d1)
        .collect();
    let mut out = vec![CheckResult::new(
        "mz open visibility",
        (mzi::fringe_visibility(&open) - 1.0).abs(),
        PHASE_TOL,
    )];
    for (name, path) in [
        ("mz path1 blocked flat", Blocked::Path1),
        ("mz path2 blocked flat", Blocked::Path2),
    ] {
        let cond: Vec<f64> = grid
            .iter()
            .map(|&d| {
                mzi::mz_blocked(0.0, d, path)
                    .conditional()
                    .map_or(f64::NAN, |c| c.0)
            })
            .collect();
        let worst = cond.iter().map(|c| (c - 0.5).abs()).fold(0.0, f64::max);
        out.push(CheckResult::new(name, worst, TOL));
    }
    out
}

/// Marginals stay at one half over a `grid × grid` phase grid for each layout.
pub fn no_signaling(name: &'static str, grid: usize, layouts: &[FixedPhases]) -> CheckResult {
    let phases = phase_grid(grid);
    let mut worst: f64 = 0.0;
    for fixed in layouts {
        for &a in &phases {
            for &b in &phases {
                let m = rto::marginals(&RtoPhases::new(a, b, *fixed));
                for p in m.as_array() {
                    worst = worst.max((p - 0.5).abs());
                }
            }
        }
    }
    CheckResult::new(name, worst, TOL)
}

/// `φ_v − φ_u ≡ π (mod 2π)` for every layout.
pub fn fixed_phase_relation(layouts: &[FixedPhases]) -> CheckResult {
    let worst = layouts
        .iter()
        .map(|f| match rto::derive_fixed(f) {
            Ok((u, v)) => (v - u).distance(Phase::new(PI)),
            Err(_) => f64::INFINITY,
        })
        .fold(0.0, f64::max);
    CheckResult::new("fixed-phase relation", worst, PHASE_TOL)
}

pub fn improper_mixture() -> CheckResult {
    let rho = DensityMatrix::from_pure(&rto::prepare_entangled()).expect("normalized");
    let mut worst: f64 = 0.0;
    for keep in [Subsystem::A, Subsystem::B] {
        let r = rho.partial_trace(keep).expect("composite");
        let m = r.matrix().as_slice();
        let expected = [0.5, 0.0, 0.0, 0.5];
        for (z, e) in m.iter().zip(expected) {
            worst = worst.max((z.re - e).abs()).max(z.im.abs());
        }
        worst = worst.max((r.purity() - 0.5).abs());
    }
    CheckResult::new("improper mixture", worst, TOL)
}

/// Coincidence and correlation closed forms on the calibrated layout.
pub fn rto_closed_forms(grid: usize) -> CheckResult {
    let mut worst: f64 = 0.0;
    for d in phase_grid(grid) {
        let ph = RtoPhases::calibrated(0.0, d);
        let p = rto::coincidence_probabilities(&ph);
        let same = (1.0 + d.cos()) / 4.0;
        let diff = (1.0 - d.cos()) / 4.0;
        for (got, want) in p.as_array().iter().zip([same, diff, diff, same]) {
            worst = worst.max((got - want).abs());
        }
        let c = rto::correlation(&ph);
        worst = worst
            .max((c.p_same - 2.0 * same).abs())
            .max((c.p_different - 2.0 * diff).abs())
            .max((c.c - d.cos()).abs());
    }
    CheckResult::new("rto closed forms", worst, TOL)
}

pub fn chsh_bounds() -> Vec<CheckResult> {
    vec![
        CheckResult::new(
            "chsh analytic 2√2",
            (chsh_s(&ChshSettings::optimal()) - 2.0 * SQRT_2).abs(),
            1e-6,
        ),
        CheckResult::new(
            "chsh classical bound",
            (classical_bound() - 2.0).abs(),
            f64::EPSILON,
        ),
    ]
}

/// Runs every check with the default grids and 100 random layouts.
pub fn run_all() -> Vec<CheckResult> {
    let mut layouts = vec![FixedPhases::calibrated()];
    layouts.extend(random_layouts(100, LAYOUT_SEED));
    let mut out = vec![element_unitarity(), mz_closed_form()];
    out.extend(mz_visibility());
    out.push(no_signaling(
        "no-signaling 16x16 random layouts",
        16,
        &layouts,
    ));
    out.push(no_signaling(
        "no-signaling 64x64 calibrated",
        64,
        &layouts[..1],
    ));
    out.push(fixed_phase_relation(&layouts));
    out.push(improper_mixture());
    out.push(rto_closed_forms(64));
    out.extend(chsh_bounds());
    out
}
