use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::output::{ser_num, ser_opt_num};
use susy_painleve::jets::DEFAULT_ORDER;
use susy_painleve::oscillator::Parity;
use susy_painleve::residual::{DEFAULT_TOLERANCE, MIN_VALID_POINTS};

/// Sample, verify and transform Painleve IV/V solutions built from SUSY
/// partners of the truncated oscillator.
#[derive(Debug, Parser)]
#[command(name = "susyp", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a solution with its first derivative.
    Sample(SolutionArgs),
    /// Check a solution against its equation and infer its parameters.
    Verify(VerifyArgs),
    /// Run the five PIV Backlund links at one seed.
    Chain(ChainArgs),
    /// Evaluate the PV Backlund catalog at one seed energy.
    Catalog(CatalogArgs),
    /// Print the built-in defaults.
    Defaults(OutputArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to PATH instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SolutionArgs {
    /// g1..g3, G1..G3, w1a..w1f, w2a, w2d, w2f, or ext:<name> for the
    /// extremal-state construction (ext:g2, ext:w2b, ...).
    pub selector: Option<String>,
    #[arg(long, conflicts_with = "selector")]
    pub family: Option<String>,
    /// Seed energy for H1 families.
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: Option<f64>,
    /// Seed energy for H2 families; falls back to --epsilon.
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon1: Option<f64>,
    #[arg(long, value_parser = parse_parity)]
    pub parity: Option<Parity>,
    /// lo:hi:n, in x for PIV and z for PV.
    #[arg(long)]
    pub grid: Option<GridSpec>,
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub jet_order: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub solution: SolutionArgs,
    /// Add 1 to b before verifying (negative control).
    #[arg(long)]
    pub corrupt_b: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: f64,
    #[arg(long, value_parser = parse_parity)]
    pub parity: Option<Parity>,
    #[arg(long)]
    pub grid: Option<GridSpec>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CatalogArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub epsilon: f64,
    /// Test one parity only (default: both).
    #[arg(long, value_parser = parse_parity)]
    pub parity: Option<Parity>,
    #[arg(long)]
    pub grid: Option<GridSpec>,
    /// List non-applicable rows as well.
    #[arg(long)]
    pub all_rows: bool,
    /// Report applicability only, without function tests.
    #[arg(long)]
    pub windows_only: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_parity(s: &str) -> Result<Parity, String> {
    s.parse().map_err(|_| format!("expected odd or even, got {s:?}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl GridSpec {
    pub const X_DEFAULT: GridSpec = GridSpec {
        lo: 0.2,
        hi: 4.0,
        count: 40,
    };
    pub const Z_DEFAULT: GridSpec = GridSpec {
        lo: 0.1,
        hi: 8.0,
        count: 40,
    };

    pub fn points(&self) -> Vec<f64> {
        susy_painleve::residual::linspace(self.lo, self.hi, self.count)
    }
}

impl FromStr for GridSpec {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [lo, hi, n] = parts[..] else {
            return Err(format!("expected lo:hi:n, got {s:?}"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
        let g = GridSpec {
            lo: num(lo)?,
            hi: num(hi)?,
            count: n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?,
        };
        if !(g.lo > 0.0 && g.hi > g.lo && g.hi.is_finite()) {
            return Err(format!("grid needs 0 < lo < hi, got {s:?}"));
        }
        if g.count < MIN_VALID_POINTS {
            return Err(format!(
                "grid needs at least {MIN_VALID_POINTS} points, got {}",
                g.count
            ));
        }
        Ok(g)
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.count)
    }
}

impl Serialize for GridSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Everything a run depends on, echoed into JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub family: Option<String>,
    #[serde(serialize_with = "ser_opt_num")]
    pub epsilon: Option<f64>,
    #[serde(serialize_with = "ser_opt_num")]
    pub epsilon1: Option<f64>,
    #[serde(serialize_with = "ser_parity")]
    pub parity: Option<Parity>,
    pub grid: Option<GridSpec>,
    #[serde(serialize_with = "ser_num")]
    pub tolerance: f64,
    pub jet_order: usize,
    pub format: Format,
    pub corrupt_b: bool,
}

fn ser_parity<S: serde::Serializer>(p: &Option<Parity>, s: S) -> Result<S::Ok, S::Error> {
    match p {
        Some(p) => s.collect_str(p),
        None => s.serialize_none(),
    }
}

pub const MAX_JET_ORDER: usize = 24;

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.tolerance > 0.0) {
            return Err(format!("--tol must be positive, got {}", self.tolerance));
        }
        if !(1..=MAX_JET_ORDER).contains(&self.jet_order) {
            return Err(format!(
                "--jet-order must be in 1..={MAX_JET_ORDER}, got {}",
                self.jet_order
            ));
        }
        for (name, v) in [("--epsilon", self.epsilon), ("--epsilon1", self.epsilon1)] {
            if v.is_some_and(|e| !e.is_finite()) {
                return Err(format!("{name} must be finite"));
            }
        }
        Ok(())
    }
}
