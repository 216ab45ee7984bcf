//! Command-line grammar.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fmac_core::{McConfig, Method, Scenario};

#[derive(Debug, Parser)]
#[command(name = "fmac", version, about = "Outage and capacity of Fisher-Snedecor F fading MACs")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Outage probability versus the mean SNR of link 1.
    Op(SweepArgs),
    /// Average capacity versus the mean SNR of link 1.
    Ac(SweepArgs),
    /// Pearson correlation of Clayton-coupled SNRs.
    Corr(CorrArgs),
    /// Coupled SNR pairs for scatter plots.
    Scatter(ScatterArgs),
    /// Cross-check suite; exits 1 if any check fails.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScenarioArg {
    Clean,
    Dirty,
}

impl From<ScenarioArg> for Scenario {
    fn from(s: ScenarioArg) -> Self {
        match s {
            ScenarioArg::Clean => Scenario::Clean,
            ScenarioArg::Dirty => Scenario::DoublyDirty,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DependenceArg {
    Independent,
    Clayton,
}

/// `start:stop:step` in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl SnrRange {
    /// Grid points `start + k·step` up to `stop`, inclusive.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

impl FromStr for SnrRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(format!("expected start:stop:step, got '{s}'"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
        let r = SnrRange {
            start: num(a)?,
            stop: num(b)?,
            step: num(c)?,
        };
        if !(r.start.is_finite() && r.stop.is_finite()) {
            return Err("range ends must be finite".into());
        }
        if !(r.step > 0.0 && r.step.is_finite()) {
            return Err(format!("step must be positive, got {}", r.step));
        }
        if r.stop < r.start {
            return Err(format!("stop {} is below start {}", r.stop, r.start));
        }
        Ok(r)
    }
}

/// Mean SNR of link 2 relative to the swept link 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Link2 {
    Equal,
    FixedDb(f64),
    OffsetDb(f64),
}

impl Link2 {
    pub fn snr_db(&self, snr1_db: f64) -> f64 {
        match *self {
            Link2::Equal => snr1_db,
            Link2::FixedDb(d) => d,
            Link2::OffsetDb(d) => snr1_db + d,
        }
    }
}

impl FromStr for Link2 {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |x: &str| {
            x.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("bad dB value '{x}'"))
        };
        match s.split_once(':') {
            None if s == "equal" => Ok(Link2::Equal),
            Some(("fixed", v)) => Ok(Link2::FixedDb(num(v)?)),
            Some(("offset", v)) => Ok(Link2::OffsetDb(num(v)?)),
            _ => Err(format!("expected equal, fixed:<dB> or offset:<dB>, got '{s}'")),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Base seed; sweep points derive their own streams from it.
    #[arg(long, env = "FMAC_SEED", default_value_t = 1)]
    pub seed: u64,
    /// Monte Carlo sample count per point.
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    /// Samples per random stream block.
    #[arg(long, default_value_t = McConfig::DEFAULT_BATCH)]
    pub batch: u64,
    /// Worker threads; output does not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct DependenceArgs {
    #[arg(long, value_enum, default_value_t = DependenceArg::Independent)]
    pub dependence: DependenceArg,
    /// Clayton parameter, required with `--dependence clayton`.
    #[arg(long)]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = ScenarioArg::Clean)]
    pub scenario: ScenarioArg,
    #[command(flatten)]
    pub dependence: DependenceArgs,
    #[arg(long)]
    pub m1: f64,
    #[arg(long)]
    pub ms1: f64,
    #[arg(long)]
    pub m2: f64,
    #[arg(long)]
    pub ms2: f64,
    /// Target rate in bits per channel use; required by `op`, unused by `ac`.
    #[arg(long)]
    pub rate: Option<f64>,
    /// Mean SNR of link 1 in dB as start:stop:step.
    #[arg(long, default_value = "0:30:5")]
    pub snr: SnrRange,
    /// equal, fixed:<dB> or offset:<dB>.
    #[arg(long, default_value = "equal")]
    pub link2: Link2,
    /// Comma-separated: closed, quadrature, series, mc.
    #[arg(long, value_delimiter = ',', default_value = "quadrature")]
    pub methods: Vec<Method>,
    /// Quadrature tolerance, applied as max(tol, tol * |value|).
    #[arg(long, default_value = "1e-9")]
    pub tol: f64,
    /// Term cap for the series method.
    #[arg(long, default_value_t = 200)]
    pub series_terms: usize,
    /// Add a column with the capacity divided by its AWGN value.
    #[arg(long)]
    pub normalize_awgn: bool,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CorrArgs {
    /// Link parameters; all four or none (none runs the default grid).
    #[arg(long)]
    pub m1: Option<f64>,
    #[arg(long)]
    pub ms1: Option<f64>,
    #[arg(long)]
    pub m2: Option<f64>,
    #[arg(long)]
    pub ms2: Option<f64>,
    /// Comma-separated Clayton parameters.
    #[arg(long, value_delimiter = ',', default_value = "10,25,40")]
    pub thetas: Vec<f64>,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScatterArgs {
    #[arg(long, default_value_t = 3.0)]
    pub m1: f64,
    #[arg(long, default_value_t = 5.0)]
    pub ms1: f64,
    #[arg(long, default_value_t = 3.0)]
    pub m2: f64,
    #[arg(long, default_value_t = 5.0)]
    pub ms2: f64,
    #[arg(long, default_value_t = 0.0)]
    pub snr1_db: f64,
    #[arg(long, default_value_t = 0.0)]
    pub snr2_db: f64,
    /// Comma-separated Clayton parameters; 0 means independent.
    #[arg(long, value_delimiter = ',', default_value = "0,10,25,40")]
    pub thetas: Vec<f64>,
    /// Pairs per parameter.
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, env = "FMAC_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub workers: Option<usize>,
}

/// Extracts `--config <file>` (or `--config=<file>`) from the arguments.
pub fn take_config(argv: &mut Vec<String>) -> Result<Option<PathBuf>, String> {
    let mut found = None;
    let mut i = 0;
    while i < argv.len() {
        if argv[i] == "--config" {
            if i + 1 >= argv.len() {
                return Err("--config needs a file".into());
            }
            found = Some(PathBuf::from(argv.remove(i + 1)));
            argv.remove(i);
        } else if let Some(p) = argv[i].strip_prefix("--config=") {
            found = Some(PathBuf::from(p));
            argv.remove(i);
        } else {
            i += 1;
        }
    }
    Ok(found)
}
