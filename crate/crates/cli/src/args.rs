use std::collections::HashMap;
use std::path::{Path, PathBuf};

use catsim::{CatSign, ExperimentConfig, Mode};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "catsim",
    version,
    about = "Cat-state decoherence against a squeezed environment mode"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate every metric of both modes at one rescaled time.
    Point(PointArgs),
    /// Tabulate metrics over a grid of rescaled times and squeezing parameters.
    Sweep(SweepArgs),
    /// Simulate the atomic-probe estimate of a Wigner function value.
    ProbeSim(ProbeArgs),
    /// Compare the closed forms with the Fock-space oracle.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Physical parameters shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// Initial coherent amplitude of the cat.
    #[arg(long)]
    pub xi0: Option<f64>,
    /// Squeezing parameter of the environment mode (sweep accepts a comma list).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub r: Option<Vec<f64>>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub gamma_s: Option<f64>,
    #[arg(long)]
    pub gamma_e: Option<f64>,
    /// Mean thermal occupation of the system reservoir.
    #[arg(long)]
    pub n_s: Option<f64>,
    #[arg(long)]
    pub n_e: Option<f64>,
    #[arg(long)]
    pub sign: Option<CatSign>,
    /// Flat `key = value` file mirroring the flags; flags win.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Explicit rescaled times G = κt (comma list).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub g: Option<Vec<f64>>,
    #[arg(long)]
    pub g_max: Option<f64>,
    /// Number of intervals between 0 and --g-max.
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PointArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    /// Evaluate with the Fock-space oracle instead of the closed forms.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Metrics to tabulate, in order (R, D, Dalt, O, N, RD, P, S, F).
    #[arg(long, value_delimiter = ',')]
    pub metrics: Option<Vec<String>>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProbeTarget {
    /// The configured cat.
    Cat,
    /// Vacuum sent through the same channel.
    Vacuum,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub g: Option<f64>,
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    #[arg(long, value_enum)]
    pub state: Option<ProbeTarget>,
    /// Phase-space point in the cat frame; the origin by default.
    #[arg(long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Repeat on independent streams and report coverage.
    #[arg(long)]
    pub replications: Option<u64>,
    /// Detection efficiency in (0, 1].
    #[arg(long)]
    pub efficiency: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct OracleArgs {
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Largest accepted deviation.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Total photon-number truncation (derived from the state tails by default).
    #[arg(long)]
    pub n_max: Option<usize>,
    /// Also write the reduced density matrices here.
    #[arg(long)]
    pub dump_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: catsim::Error| e.to_string())
}

/// Key/value pairs read from a `--config` file.
#[derive(Debug, Default)]
pub struct FileValues(HashMap<String, String>);

const KNOWN_KEYS: &[&str] = &[
    "xi0",
    "r",
    "kappa",
    "gamma-s",
    "gamma-e",
    "n-s",
    "n-e",
    "sign",
    "g",
    "g-max",
    "steps",
    "shots",
    "seed",
    "replications",
    "efficiency",
    "tol",
    "n-max",
    "format",
    "out",
    "mode",
    "state",
    "q",
    "p",
    "metrics",
];

impl FileValues {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read config file {}: {e}", path.display()))
        })?;
        let mut map = HashMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!(
                    "{}:{}: expected key = value",
                    path.display(),
                    n + 1
                ))
            })?;
            let key = k.trim().trim_start_matches("--").replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "{}:{}: unknown key '{key}'",
                    path.display(),
                    n + 1
                )));
            }
            map.insert(key, v.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.0
            .get(key)
            .map(|v| {
                v.parse::<T>().map_err(|e| {
                    CliError::Usage(format!("config key '{key}': cannot parse '{v}': {e}"))
                })
            })
            .transpose()
    }

    pub fn list(&self, key: &str) -> Result<Option<Vec<f64>>, CliError> {
        self.0
            .get(key)
            .map(|v| {
                v.split(',')
                    .map(|x| {
                        x.trim().parse::<f64>().map_err(|e| {
                            CliError::Usage(format!("config key '{key}': cannot parse '{x}': {e}"))
                        })
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn strings(&self, key: &str) -> Option<Vec<String>> {
        self.0
            .get(key)
            .map(|v| v.split(',').map(|s| s.trim().to_string()).collect())
    }
}

/// Pick the flag, then the file value, then the default.
pub fn pick<T: std::str::FromStr>(
    flag: Option<T>,
    file: &FileValues,
    key: &str,
    default: T,
) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    Ok(match flag {
        Some(v) => v,
        None => file.get(key)?.unwrap_or(default),
    })
}

pub fn pick_opt<T: std::str::FromStr>(
    flag: Option<T>,
    file: &FileValues,
    key: &str,
) -> Result<Option<T>, CliError>
where
    T::Err: std::fmt::Display,
{
    match flag {
        Some(v) => Ok(Some(v)),
        None => file.get(key),
    }
}

impl ConfigArgs {
    pub fn file(&self) -> Result<FileValues, CliError> {
        FileValues::load(self.config.as_deref())
    }

    /// Squeezing values from the flag or the file, defaulting to the canonical `r = 2`.
    pub fn r_values(&self, file: &FileValues) -> Result<Vec<f64>, CliError> {
        Ok(match &self.r {
            Some(v) => v.clone(),
            None => file
                .list("r")?
                .unwrap_or_else(|| vec![ExperimentConfig::default().r]),
        })
    }

    /// Configuration with `r` left at its default; callers set it.
    pub fn base(&self, file: &FileValues) -> Result<ExperimentConfig, CliError> {
        let d = ExperimentConfig::default();
        Ok(ExperimentConfig {
            xi0: pick(self.xi0, file, "xi0", d.xi0)?,
            r: d.r,
            kappa: pick(self.kappa, file, "kappa", d.kappa)?,
            gamma_s: pick(self.gamma_s, file, "gamma-s", d.gamma_s)?,
            gamma_e: pick(self.gamma_e, file, "gamma-e", d.gamma_e)?,
            n_s: pick(self.n_s, file, "n-s", d.n_s)?,
            n_e: pick(self.n_e, file, "n-e", d.n_e)?,
            sign: pick(self.sign, file, "sign", d.sign)?,
        })
    }

    /// A single configuration; more than one `r` is a usage error.
    pub fn single(&self, file: &FileValues) -> Result<ExperimentConfig, CliError> {
        let rs = self.r_values(file)?;
        if rs.len() != 1 {
            return Err(CliError::Usage(
                "this subcommand takes a single --r value".into(),
            ));
        }
        let mut cfg = self.base(file)?;
        cfg.r = rs[0];
        cfg.validate()?;
        Ok(cfg)
    }
}

impl GridArgs {
    /// Explicit `--g` list, or `steps + 1` evenly spaced points on `[0, g_max]`.
    pub fn values(
        &self,
        file: &FileValues,
        default_max: f64,
        default_steps: usize,
    ) -> Result<Vec<f64>, CliError> {
        let explicit = match &self.g {
            Some(g) => Some(g.clone()),
            None => file.list("g")?,
        };
        let grid = match explicit {
            Some(g) => g,
            None => {
                let g_max: f64 = pick(self.g_max, file, "g-max", default_max)?;
                let steps: usize = pick(self.steps, file, "steps", default_steps)?;
                if steps == 0 {
                    return Err(CliError::Usage("--steps must be >= 1".into()));
                }
                (0..=steps)
                    .map(|i| g_max * i as f64 / steps as f64)
                    .collect()
            }
        };
        check_grid("G", &grid)?;
        Ok(grid)
    }
}

pub fn check_grid(name: &str, v: &[f64]) -> Result<(), CliError> {
    if v.is_empty() {
        return Err(CliError::Usage(format!("{name} grid is empty")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Usage(format!(
            "{name} grid has non-finite values"
        )));
    }
    if v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::Usage(format!(
            "{name} grid must be strictly increasing"
        )));
    }
    Ok(())
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}

impl std::str::FromStr for ProbeTarget {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, true)
    }
}
