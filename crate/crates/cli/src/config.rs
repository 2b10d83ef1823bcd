//! Effective run configuration: flags override the config file, which
//! overrides `BIPHOTON_SEED`, which overrides built-in defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use biphoton_core::mzi::Blocked;
use biphoton_core::rto::FixedPhases;
use serde::{Deserialize, Serialize};

pub const SEED_ENV: &str = "BIPHOTON_SEED";
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_GRID: usize = 64;
pub const DEFAULT_BELL_TRIALS: u64 = 10_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("expected csv or json, got `{other}`")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

/// Fixed layout phases `w,x,y,z`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layout(pub [f64; 4]);

impl FromStr for Layout {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("layout must be four comma-separated numbers: {e}"))?;
        let arr: [f64; 4] = parts
            .try_into()
            .map_err(|_| "layout must have exactly four phases w,x,y,z".to_string())?;
        if arr.iter().any(|x| !x.is_finite()) {
            return Err("layout phases must be finite".into());
        }
        Ok(Layout(arr))
    }
}

impl Layout {
    pub fn fixed(&self) -> FixedPhases {
        let [w, x, y, z] = self.0;
        FixedPhases::new(w, x, y, z)
    }
}

/// Values the user may supply, either as flags or in the config file. Angles
/// are in the effective unit (`degrees`) until [`Config::resolve`] converts
/// them.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    pub grid: Option<usize>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub degrees: Option<bool>,
    #[serde(default)]
    pub mz: MzOverrides,
    #[serde(default)]
    pub rto: RtoOverrides,
    #[serde(default)]
    pub bell: BellOverrides,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MzOverrides {
    pub phi1: Option<f64>,
    pub block: Option<Blocked>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RtoOverrides {
    pub phi_a: Option<f64>,
    pub layout: Option<[f64; 4]>,
    pub table1: Option<bool>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BellOverrides {
    pub a1: Option<f64>,
    pub a2: Option<f64>,
    pub b1: Option<f64>,
    pub b2: Option<f64>,
}

impl Overrides {
    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Fully resolved configuration; every angle in radians. Echoed into JSON
/// output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    pub grid: usize,
    pub trials: Option<u64>,
    pub seed: u64,
    pub format: Format,
    /// Whether `format` was chosen by the user rather than defaulted.
    #[serde(skip)]
    pub format_explicit: bool,
    pub out: Option<PathBuf>,
    pub degrees: bool,
    pub mz: MzParams,
    pub rto: RtoParams,
    pub bell: BellParams,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MzParams {
    pub phi1: f64,
    pub block: Blocked,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RtoParams {
    pub phi_a: f64,
    pub layout: [f64; 4],
    pub table1: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BellParams {
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
}

impl Config {
    /// Merges flags over the file over the environment seed over defaults,
    /// then validates.
    pub fn resolve(
        flags: &Overrides,
        file: Option<&Overrides>,
        env_seed: Option<&str>,
    ) -> anyhow::Result<Config> {
        let empty = Overrides::default();
        let file = file.unwrap_or(&empty);
        // one unit for every user-supplied angle, wherever it came from
        let degrees = flags.degrees.or(file.degrees).unwrap_or(false);
        let to_rad = |v: f64| if degrees { v.to_radians() } else { v };
        let pick = |flag: Option<f64>, from_file: Option<f64>, default: f64| {
            flag.or(from_file).map(to_rad).unwrap_or(default)
        };

        let env_seed = match env_seed {
            Some(s) => Some(
                s.trim()
                    .parse::<u64>()
                    .with_context(|| format!("{SEED_ENV} must be an unsigned 64-bit integer"))?,
            ),
            None => None,
        };
        let calibrated = FixedPhases::calibrated();
        let default_layout =
            [calibrated.w, calibrated.x, calibrated.y, calibrated.z].map(|p| p.radians());
        let layout = flags
            .rto
            .layout
            .or(file.rto.layout)
            .map_or(default_layout, |l| l.map(to_rad));
        let optimal = biphoton_core::bell::ChshSettings::optimal();

        let cfg = Config {
            grid: flags.grid.or(file.grid).unwrap_or(DEFAULT_GRID),
            trials: flags.trials.or(file.trials),
            seed: flags
                .seed
                .or(file.seed)
                .or(env_seed)
                .unwrap_or(DEFAULT_SEED),
            format: flags.format.or(file.format).unwrap_or_default(),
            format_explicit: flags.format.or(file.format).is_some(),
            out: flags.out.clone().or_else(|| file.out.clone()),
            degrees,
            mz: MzParams {
                phi1: pick(flags.mz.phi1, file.mz.phi1, 0.0),
                block: flags.mz.block.or(file.mz.block).unwrap_or_default(),
            },
            rto: RtoParams {
                phi_a: pick(flags.rto.phi_a, file.rto.phi_a, 0.0),
                layout,
                table1: flags.rto.table1.or(file.rto.table1).unwrap_or(false),
            },
            bell: BellParams {
                a1: pick(flags.bell.a1, file.bell.a1, optimal.a1.radians()),
                a2: pick(flags.bell.a2, file.bell.a2, optimal.a2.radians()),
                b1: pick(flags.bell.b1, file.bell.b1, optimal.b1.radians()),
                b2: pick(flags.bell.b2, file.bell.b2, optimal.b2.radians()),
            },
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.grid < 2 {
            bail!("--grid must be at least 2, got {}", self.grid);
        }
        if self.trials == Some(0) {
            bail!("--trials must be at least 1");
        }
        let angles = [
            self.mz.phi1,
            self.rto.phi_a,
            self.bell.a1,
            self.bell.a2,
            self.bell.b1,
            self.bell.b2,
        ];
        if angles
            .iter()
            .chain(&self.rto.layout)
            .any(|a| !a.is_finite())
        {
            bail!("angles must be finite");
        }
        Ok(())
    }
}
