use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use biphoton_cli::commands;
use biphoton_cli::config::{
    BellOverrides, Config, Format, Layout, MzOverrides, Overrides, RtoOverrides, SEED_ENV,
};
use biphoton_core::mzi::Blocked;
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "biphoton",
    version,
    about = "Single-photon and entangled two-photon interferometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mach-Zehnder fringe P(D1), P(D2) over the phase difference
    Mz(MzArgs),
    /// Two-photon coincidences, marginals and degree of correlation
    Rto(RtoArgs),
    /// CHSH report, analytic and sampled
    Bell(BellArgs),
    /// Run the built-in invariant suite
    Check(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Number of sweep points from 0 to 2π inclusive (≥ 2)
    #[arg(long)]
    grid: Option<usize>,
    /// Monte Carlo trials per row (per setting for `bell`)
    #[arg(long)]
    trials: Option<u64>,
    /// Generator seed; defaults to $BIPHOTON_SEED, then 42
    #[arg(long)]
    seed: Option<u64>,
    /// Write output here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<Format>,
    /// TOML file with default values; flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
    /// Read every angle in degrees
    #[arg(long)]
    degrees: bool,
    /// Run the invariant suite after the command and fail on violations
    #[arg(long)]
    check: bool,
}

#[derive(Args, Debug)]
struct MzArgs {
    #[command(flatten)]
    common: Common,
    /// Phase on path 1; path 2 gets phi1 + dphi
    #[arg(long, allow_hyphen_values = true)]
    phi1: Option<f64>,
    /// Block one path: path1 or path2
    #[arg(long)]
    block: Option<Blocked>,
}

#[derive(Args, Debug)]
struct RtoArgs {
    #[command(flatten)]
    common: Common,
    /// Station A phase; station B gets phi_a + dphi
    #[arg(long = "phi-a", allow_hyphen_values = true)]
    phi_a: Option<f64>,
    /// Fixed layout phases w,x,y,z (default: calibrated layout)
    #[arg(long, allow_hyphen_values = true)]
    layout: Option<Layout>,
    /// Emit only the five comparison-table rows
    #[arg(long)]
    table1: bool,
}

#[derive(Args, Debug)]
struct BellArgs {
    #[command(flatten)]
    common: Common,
    /// First station A setting (default 0)
    #[arg(long, allow_hyphen_values = true)]
    a1: Option<f64>,
    /// Second station A setting (default π/2)
    #[arg(long, allow_hyphen_values = true)]
    a2: Option<f64>,
    /// First station B setting (default π/4)
    #[arg(long, allow_hyphen_values = true)]
    b1: Option<f64>,
    /// Second station B setting (default 3π/4)
    #[arg(long, allow_hyphen_values = true)]
    b2: Option<f64>,
}

impl Common {
    fn overrides(&self) -> Overrides {
        Overrides {
            grid: self.grid,
            trials: self.trials,
            seed: self.seed,
            format: self.format,
            out: self.out.clone(),
            degrees: self.degrees.then_some(true),
            ..Default::default()
        }
    }
}

enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

fn resolve(common: &Common, flags: Overrides) -> Result<Config, Failure> {
    let file = match &common.config {
        Some(path) => Some(Overrides::from_file(path).map_err(Failure::Usage)?),
        None => None,
    };
    let env_seed = std::env::var(SEED_ENV).ok();
    Config::resolve(&flags, file.as_ref(), env_seed.as_deref()).map_err(Failure::Usage)
}

fn emit(cfg: &Config, text: &str) -> anyhow::Result<()> {
    match &cfg.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn post_check(enabled: bool) -> Result<(), Failure> {
    if !enabled {
        return Ok(());
    }
    let failed: Vec<_> = commands::run_checks()
        .into_iter()
        .filter(|r| !r.passed)
        .collect();
    if failed.is_empty() {
        return Ok(());
    }
    for r in &failed {
        eprintln!(
            "check failed: {} (deviation {:e}, tolerance {:e})",
            r.name, r.deviation, r.tolerance
        );
    }
    Err(Failure::Runtime(anyhow::anyhow!(
        "{} invariant check(s) failed",
        failed.len()
    )))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Mz(args) => {
            let mut flags = args.common.overrides();
            flags.mz = MzOverrides {
                phi1: args.phi1,
                block: args.block,
            };
            let cfg = resolve(&args.common, flags)?;
            let text = commands::mz(&cfg).map_err(Failure::Runtime)?;
            post_check(args.common.check)?;
            emit(&cfg, &text).map_err(Failure::Runtime)
        }
        Command::Rto(args) => {
            let mut flags = args.common.overrides();
            flags.rto = RtoOverrides {
                phi_a: args.phi_a,
                layout: args.layout.map(|l| l.0),
                table1: args.table1.then_some(true),
            };
            let cfg = resolve(&args.common, flags)?;
            let text = commands::rto(&cfg).map_err(Failure::Runtime)?;
            post_check(args.common.check)?;
            emit(&cfg, &text).map_err(Failure::Runtime)
        }
        Command::Bell(args) => {
            let mut flags = args.common.overrides();
            flags.bell = BellOverrides {
                a1: args.a1,
                a2: args.a2,
                b1: args.b1,
                b2: args.b2,
            };
            let cfg = resolve(&args.common, flags)?;
            let text = commands::bell(&cfg).map_err(Failure::Usage)?;
            post_check(args.common.check)?;
            emit(&cfg, &text).map_err(Failure::Runtime)
        }
        Command::Check(common) => {
            let cfg = resolve(&common, common.overrides())?;
            let results = commands::run_checks();
            let text = commands::render_checks(&results, cfg.format, &cfg);
            emit(&cfg, &text).map_err(Failure::Runtime)?;
            let failed = results.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                return Err(Failure::Runtime(anyhow::anyhow!(
                    "{failed} invariant check(s) failed"
                )));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
