use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jsr_core::{BoundMode, Budget, CertifyOptions, NormKind};

#[derive(Debug, Parser)]
#[command(name = "jsr", version, about = "Certified enclosures of the spectral radius and the joint spectral radius")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enclose ρ(𝒜) using products of length n.
    Certify {
        /// JSON matrix-set document.
        file: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Certify every n in 1..=n-max and report the best bounds.
    Sweep {
        file: PathBuf,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Check a single matrix against the eigenvalue oracle.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        /// Largest k in the ω_{d^k} check.
        #[arg(long, default_value_t = 2)]
        k_max: u32,
        /// Relative slack for the enclosure checks.
        #[arg(long, default_value_t = 1e-8)]
        slack: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Mean width ratio upper/lower over seeded random ensembles.
    Bench {
        #[arg(long)]
        seed: u64,
        /// Dimensions to sample, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3])]
        dims: Vec<usize>,
        /// Matrices per set.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        r: u64,
        /// Instances per dimension.
        #[arg(long, default_value_t = 50)]
        size: usize,
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = NormArg::Two)]
    pub norm: NormArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    /// Maximum number of word extensions per enumeration.
    #[arg(long, default_value_t = 10_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    /// Entry tolerance for the reported nilpotency test.
    #[arg(long, default_value_t = 0.0, value_parser = parse_tol)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Use the multi-matrix constant d^{3d/2} even for one matrix.
    #[arg(long)]
    pub force_multi_constant: bool,
}

impl Common {
    pub fn options(&self) -> CertifyOptions {
        CertifyOptions {
            norm: self.norm.into(),
            mode: self.mode.into(),
            budget: Budget::with_nodes(self.budget),
            force_multi_constant: self.force_multi_constant,
        }
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x >= 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err("tolerance must be finite and nonnegative".into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    One,
    Inf,
    Two,
}

impl From<NormArg> for NormKind {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::One => NormKind::InducedOne,
            NormArg::Inf => NormKind::InducedInf,
            NormArg::Two => NormKind::InducedTwo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Closed,
}

impl From<ModeArg> for BoundMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => BoundMode::ExactDigits,
            ModeArg::Closed => BoundMode::ClosedForm,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}
