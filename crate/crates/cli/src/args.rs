use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "subent",
    version,
    about = "Random-state averages of entropy, subentropy and coherence",
    propagate_version = true
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, global = true, env = "SUBENT_FORMAT", value_enum)]
    pub format: Option<Format>,
    /// Write records to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Worker threads for sampling (default: logical CPUs). Never changes results.
    #[arg(long, global = true, env = "SUBENT_WORKERS")]
    pub workers: Option<usize>,
    /// key=value file with defaults for any long flag.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact closed-form averages for (m, n) or a grid of them.
    Formula(FormulaArgs),
    /// Monte Carlo estimates of functional averages against closed forms.
    Estimate(EstimateArgs),
    /// Empirical tail fractions of the coherence versus the concentration bound.
    Concentration(ConcentrationArgs),
    /// Exact combinatorial identity sweep, optionally with quadrature oracles.
    Identities(IdentitiesArgs),
    /// Entanglement of maximally correlated states built from random sources.
    Entangle(EntangleArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Formula(_) => "formula",
            Command::Estimate(_) => "estimate",
            Command::Concentration(_) => "concentration",
            Command::Identities(_) => "identities",
            Command::Entangle(_) => "entangle",
        }
    }
}

#[derive(Debug, Args)]
pub struct SamplingArgs {
    /// Number of sampled states.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Base seed; chunk c draws from stream (seed, c).
    #[arg(long, env = "SUBENT_SEED")]
    pub seed: Option<u64>,
    /// Samples per chunk.
    #[arg(long)]
    pub chunk: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FormulaArgs {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Inclusive range A..B of m values.
    #[arg(long, value_name = "A..B")]
    pub m_range: Option<RangeArg>,
    /// Inclusive range A..B of n values.
    #[arg(long, value_name = "A..B")]
    pub n_range: Option<RangeArg>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// entropy, subentropy, coherence, all, or a comma list of functional names.
    #[arg(long)]
    pub which: Option<String>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Args)]
pub struct ConcentrationArgs {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Sweep m over an inclusive range at n = m and report the spread.
    #[arg(long, value_name = "A..B")]
    pub m_range: Option<RangeArg>,
    /// Comma-separated deviations.
    #[arg(long, value_name = "LIST")]
    pub eps: Option<EpsList>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    #[arg(long)]
    pub max_m: Option<usize>,
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Also run the quadrature oracles.
    #[arg(long)]
    pub quadrature: bool,
}

#[derive(Debug, Args)]
pub struct EntangleArgs {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_name = "LIST")]
    pub eps: Option<EpsList>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

/// Inclusive integer range written `A..B` or `A..=B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeArg {
    pub start: usize,
    pub end: usize,
}

impl RangeArg {
    pub fn values(self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }
}

impl FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected A..B, got `{s}`"))?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad range bound `{t}`: {e}"))
        };
        Ok(Self {
            start: parse(a)?,
            end: parse(b)?,
        })
    }
}

impl fmt::Display for RangeArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Nonempty comma-separated list of positive deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsList(pub Vec<f64>);

impl FromStr for EpsList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let values = s
            .split(',')
            .map(|t| {
                let v: f64 = t.trim().parse().map_err(|e| format!("bad eps `{t}`: {e}"))?;
                if v > 0.0 && v.is_finite() {
                    Ok(v)
                } else {
                    Err(format!("eps must be positive and finite, got {v}"))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self(values))
    }
}

impl fmt::Display for EpsList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        <Format as ValueEnum>::from_str(s, true)
    }
}
