use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gbgen::dataset::sparse_sigma;
use gbgen::{BuchbergerOptions, DegreeDistribution, FieldSpec, GenerationConfig, PairSelection, TermOrder};

#[derive(Debug, Parser)]
#[command(name = "gbgen", version, about = "Generate and check (non-Groebner set, Groebner basis) datasets")]
#[command(after_help = "Exit codes: 0 success, 1 a check failed, 2 bad input or usage.")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Worker threads for generation and verification (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a dataset: <out>.jsonl, <out>.tokens.txt and <out>.meta.json.
    Generate {
        #[command(flatten)]
        gen: GenArgs,
        /// Output base path.
        #[arg(long)]
        out: PathBuf,
        /// Fraction of samples checked inline with Buchberger.
        #[arg(long, default_value_t = 0.01)]
        verify_fraction: f64,
    },
    /// Recompute every G from F with Buchberger and compare.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
        /// Per-sample budget in seconds; 0 disables it.
        #[arg(long, default_value_t = 60.0)]
        timeout: f64,
        /// Print only the samples that did not pass.
        #[arg(long)]
        failures_only: bool,
    },
    /// Size, degree, term, token and coefficient statistics of a dataset.
    Profile {
        #[arg(long)]
        input: PathBuf,
    },
    /// Time backward generation against forward Buchberger on the same F.
    Bench {
        #[command(flatten)]
        gen: GenArgs,
        /// Extra values of n, each benchmarked with the same flags.
        #[arg(long, value_delimiter = ',')]
        also_n: Vec<usize>,
        /// Per-instance forward timeout in seconds.
        #[arg(long, default_value_t = 5.0)]
        timeout: f64,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Write prefix tokens for a dataset and check that they parse back.
    Tokenize {
        #[arg(long)]
        input: PathBuf,
        /// Destination (default: the input with `.tokens.txt` in place of `.jsonl`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert the G column to another term order.
    Fglm {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_order)]
        from: TermOrder,
        #[arg(long, value_parser = parse_order)]
        to: TermOrder,
        /// Destination (default: rewrite the input).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate the solutions of every sample over its prime field.
    Solve {
        #[arg(long)]
        input: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HDistribution {
    UniformMonomial,
    UniformDegree,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value = "f7", value_parser = parse_field)]
    pub field: FieldSpec,
    #[arg(long, default_value_t = 1000)]
    pub m: u64,
    #[arg(long, env = "GBGEN_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Maximum degree of h.
    #[arg(long, default_value_t = 5)]
    pub d: u32,
    /// Maximum degree of the transform entries.
    #[arg(long, default_value_t = 3)]
    pub d_prime: u32,
    /// Maximum size of F (default n + 2).
    #[arg(long)]
    pub s_max: Option<usize>,
    /// Density of the triangular factors (default 1, or the sparse value with --sparse).
    #[arg(long, conflicts_with = "sparse")]
    pub sigma: Option<f64>,
    /// Use the low-density setting: sigma 1.0, 0.6, 0.3, 0.2 for n = 2..5.
    #[arg(long)]
    pub sparse: bool,
    /// Term order of the output.
    #[arg(long, default_value = "lex", value_parser = parse_order)]
    pub order: TermOrder,
    /// Remove zero polynomials from F.
    #[arg(long)]
    pub drop_zeros: bool,
    /// How deg h is drawn.
    #[arg(long, value_enum, default_value_t = HDistribution::UniformMonomial)]
    pub h_distribution: HDistribution,
}

impl GenArgs {
    pub fn config(&self, n: usize) -> GenerationConfig {
        let sigma = match (self.sigma, self.sparse) {
            (Some(s), _) => s,
            (None, true) => sparse_sigma(n),
            (None, false) => 1.0,
        };
        let mut cfg = GenerationConfig::new(n, self.field).with_sigma(sigma);
        cfg.m = self.m;
        cfg.seed = self.seed;
        cfg.d = self.d;
        cfg.d_prime = self.d_prime;
        cfg.s_max = self.s_max.unwrap_or(n + 2);
        cfg.order = self.order;
        cfg.drop_zeros = self.drop_zeros;
        cfg.degree_distribution = match self.h_distribution {
            HDistribution::UniformMonomial => DegreeDistribution::UniformMonomial,
            HDistribution::UniformDegree => DegreeDistribution::UniformDegree,
        };
        cfg
    }
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Disable the chain criterion.
    #[arg(long)]
    pub no_chain: bool,
    /// Select pairs by sugar degree instead of the normal strategy.
    #[arg(long)]
    pub sugar: bool,
}

impl OracleArgs {
    pub fn options(&self, timeout_secs: f64) -> BuchbergerOptions {
        BuchbergerOptions {
            timeout: (timeout_secs > 0.0).then(|| Duration::from_secs_f64(timeout_secs)),
            chain_criterion: !self.no_chain,
            selection: if self.sugar { PairSelection::Sugar } else { PairSelection::Normal },
        }
    }
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    s.parse().map_err(|e: gbgen::FieldError| e.to_string())
}

fn parse_order(s: &str) -> Result<TermOrder, String> {
    s.parse()
}
