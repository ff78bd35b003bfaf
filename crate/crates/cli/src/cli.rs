use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "quanta-stats", version, about = "Exact statistics of energy quanta shared among particles")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One-particle distribution p(k) from both counting routes.
    Dist {
        #[arg(long = "N", value_name = "N")]
        n: u64,
        #[arg(long = "s", value_name = "S")]
        s: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Level states with configuration counts and probabilities.
    Enumerate {
        #[arg(long = "N", value_name = "N")]
        n: u64,
        #[arg(long = "s", value_name = "S")]
        s: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact partition number next to its harmonic-integral evaluation.
    Partition {
        #[arg(long = "s", value_name = "S")]
        s: u64,
        /// Equal sub-panels per gap between denominator zeros.
        #[arg(long, default_value_t = 1)]
        panels: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Uniform sampling of quanta states with a pooled histogram.
    Sample {
        #[arg(long = "N", value_name = "N")]
        n: u64,
        #[arg(long = "s", value_name = "S")]
        s: u64,
        #[arg(long, default_value_t = 1_000_000)]
        draws: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Total-variation distance to the geometric limit along a doubling ladder.
    Limit {
        /// Mean quanta per particle, integer or "p/q".
        #[arg(long, default_value = "1")]
        mean: String,
        /// Base particle count of the first rung.
        #[arg(long = "N", value_name = "N", default_value_t = 10)]
        n: u64,
        /// Number of rungs.
        #[arg(long, default_value_t = 4)]
        ladder: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Finite-N energy density against the Boltzmann law.
    Continuum {
        #[arg(long = "N", value_name = "N")]
        n: u64,
        /// Total energy.
        #[arg(long = "E", value_name = "E")]
        energy: Option<f64>,
        /// Mean energy per particle.
        #[arg(long)]
        mean: Option<f64>,
        /// Grid points on [0, 3<e>].
        #[arg(long, default_value_t = 61)]
        points: usize,
        /// Simplex samples for a Kolmogorov-Smirnov check (0 to skip).
        #[arg(long, default_value_t = 0)]
        draws: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep every identity over 1 <= N <= max, 0 <= s <= max.
    Check {
        #[arg(long = "N", value_name = "N", default_value_t = 12)]
        n: u64,
        #[arg(long = "s", value_name = "S", default_value_t = 12)]
        s: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

impl Command {
    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Dist { output, .. }
            | Command::Enumerate { output, .. }
            | Command::Partition { output, .. }
            | Command::Sample { output, .. }
            | Command::Limit { output, .. }
            | Command::Continuum { output, .. }
            | Command::Check { output, .. } => output,
        }
    }
}
