//! Subcommand bodies. Each returns the rendered output text.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use anyhow::{bail, Context};
use biphoton_core::bell::{chsh_mc, chsh_s, ChshSettings};
use biphoton_core::checks::{self, CheckResult};
use biphoton_core::mc::{
    derive_seed, estimate_c, estimate_probability, sample_run, Experiment, RunSpec, GENERATOR,
};
use biphoton_core::mzi::{Blocked, MziConfig};
use biphoton_core::rto::{self, FixedPhases, RtoPhases};
use serde_json::{Map, Value};

use crate::config::{Config, Format};
use crate::format::{envelope, json_num, to_json, Table};

/// `n ≥ 2` equally spaced phase differences from 0 to 2π inclusive.
pub fn sweep_grid(n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|k| {
            if k + 1 == n {
                TAU
            } else {
                TAU * k as f64 / last
            }
        })
        .collect()
}

/// Phase differences of the printed comparison table.
pub const TABLE1_PHASES: [f64; 5] = [0.0, FRAC_PI_4, FRAC_PI_2, 3.0 * FRAC_PI_4, PI];

/// Correlated fractions as printed in the comparison table.
const TABLE1_CORR: [f64; 5] = [1.0, 0.71, 0.5, 0.29, 0.0];

fn mc_extra(cfg: &Config) -> Map<String, Value> {
    let mut m = Map::new();
    if cfg.trials.is_some() {
        m.insert("generator".into(), GENERATOR.into());
    }
    m
}

pub fn mz_table(cfg: &Config) -> anyhow::Result<Table> {
    let blocked = cfg.mz.block != Blocked::None;
    let mut columns = vec!["dphi", "p_d1", "p_d2"];
    if blocked {
        columns.extend(["p_absorbed", "p_d1_cond", "p_d2_cond"]);
    }
    if cfg.trials.is_some() {
        columns.extend(["p_d1_hat", "se"]);
    }
    let mut table = Table::new(columns);
    for (row, dphi) in sweep_grid(cfg.grid).into_iter().enumerate() {
        let mz = MziConfig::open(cfg.mz.phi1, cfg.mz.phi1 + dphi).with_blocked(cfg.mz.block);
        let o = mz.outcome();
        let mut r = vec![dphi, o.p_d1, o.p_d2];
        if blocked {
            let (c1, c2) = o.conditional().context("no photon reaches a detector")?;
            r.extend([o.p_absorbed, c1, c2]);
        }
        if let Some(n) = cfg.trials {
            let spec = RunSpec::new(n, derive_seed(cfg.seed, row as u64), Experiment::Mz(mz))?;
            let est = estimate_probability(&sample_run(&spec), "D1")?;
            r.extend([est.value, est.std_error]);
        }
        table.push(r);
    }
    Ok(table)
}

pub fn mz(cfg: &Config) -> anyhow::Result<String> {
    let table = mz_table(cfg)?;
    Ok(table.render(cfg.format, "mz", cfg, mc_extra(cfg)))
}

pub fn rto_table(cfg: &Config) -> anyhow::Result<Table> {
    let mut columns = vec![
        "dphi", "p11", "p12", "p21", "p22", "p_same", "p_diff", "C", "pA1", "pB1",
    ];
    if cfg.rto.table1 {
        columns.extend(["table_corr", "table_anticorr"]);
    }
    if cfg.trials.is_some() {
        columns.extend(["C_hat", "C_se"]);
    }
    let dphis: Vec<f64> = if cfg.rto.table1 {
        TABLE1_PHASES.to_vec()
    } else {
        sweep_grid(cfg.grid)
    };
    let [w, x, y, z] = cfg.rto.layout;
    let fixed = FixedPhases::new(w, x, y, z);
    let mut table = Table::new(columns);
    for (row, &dphi) in dphis.iter().enumerate() {
        let ph = RtoPhases::new(cfg.rto.phi_a, cfg.rto.phi_a + dphi, fixed);
        let d = rto::coincidence_probabilities(&ph);
        let c = rto::correlation(&ph);
        let m = rto::marginals(&ph);
        let mut r = vec![
            dphi,
            d.p11,
            d.p12,
            d.p21,
            d.p22,
            c.p_same,
            c.p_different,
            c.c,
            m.a1,
            m.b1,
        ];
        if cfg.rto.table1 {
            r.extend([TABLE1_CORR[row], 1.0 - TABLE1_CORR[row]]);
        }
        if let Some(n) = cfg.trials {
            let spec = RunSpec::new(n, derive_seed(cfg.seed, row as u64), Experiment::Rto(ph))?;
            let est = estimate_c(&sample_run(&spec))?;
            r.extend([est.value, est.std_error]);
        }
        table.push(r);
    }
    if cfg.rto.table1 {
        table.notes = vec![
            "p_same/p_diff are Born-rule values [1 +/- cos(dphi)]/2.".into(),
            "table_corr/table_anticorr are the fractions printed in the comparison table.".into(),
            "At dphi = pi/4 and 3pi/4 the printed 71%/29% equals C = cos(dphi), not p_same.".into(),
        ];
    }
    Ok(table)
}

pub fn rto(cfg: &Config) -> anyhow::Result<String> {
    let table = rto_table(cfg)?;
    Ok(table.render(cfg.format, "rto", cfg, mc_extra(cfg)))
}

pub const DEFAULT_BELL_TRIALS: u64 = crate::config::DEFAULT_BELL_TRIALS;

pub fn bell(cfg: &Config) -> anyhow::Result<String> {
    if cfg.format == Format::Csv && cfg.format_explicit {
        bail!("bell emits a JSON report; --format csv is not supported");
    }
    let b = &cfg.bell;
    let settings = ChshSettings::new(b.a1, b.a2, b.b1, b.b2)?;
    let n = cfg.trials.unwrap_or(DEFAULT_BELL_TRIALS);
    let est = chsh_mc(&settings, n, cfg.seed)?;

    let echoed = Config {
        format: Format::Json,
        ..cfg.clone()
    };
    let mut doc = envelope("bell", &echoed);
    doc.insert(
        "settings".into(),
        serde_json::to_value(settings).expect("settings serialize"),
    );
    doc.insert("S_analytic".into(), json_num(chsh_s(&settings)));
    doc.insert("S_hat".into(), json_num(est.s_hat));
    doc.insert("sigma_S".into(), json_num(est.sigma_s));
    doc.insert(
        "n_sigmas_violation".into(),
        json_num(est.n_sigmas_violation),
    );
    doc.insert("seed".into(), cfg.seed.into());
    doc.insert("n_per_setting".into(), n.into());
    doc.insert("generator".into(), GENERATOR.into());
    Ok(to_json(&Value::Object(doc)))
}

pub fn render_checks(results: &[CheckResult], format: Format, cfg: &Config) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("check,passed,deviation,tolerance\n");
            for r in results {
                out.push_str(&format!(
                    "{},{},{:e},{:e}\n",
                    r.name, r.passed, r.deviation, r.tolerance
                ));
            }
            out
        }
        Format::Json => {
            let mut doc = envelope("check", cfg);
            doc.insert(
                "checks".into(),
                serde_json::to_value(results).expect("results serialize"),
            );
            to_json(&Value::Object(doc))
        }
    }
}

pub fn run_checks() -> Vec<CheckResult> {
    checks::run_all()
}
