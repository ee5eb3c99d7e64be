use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use vsi_core::{DimVector, FieldSpec, Quiver};

mod commands;
mod selftest;

/// Compiled prime moduli; `--field fp:P` must name one of these.
pub const PRIMES: &[u64] = &[2, 3, 5, 7, 11, 13, 101, 1009, 32003, 65521, 1_000_003, 2_147_483_647];

const EXIT_DOMAIN: u8 = 1;
const EXIT_VERIFY: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(name = "vsi", version, about = "Quiver semi-invariants, generic decompositions and cluster tilting complexes")]
struct Cli {
    /// Quiver file (JSON or `u -> v` lines).
    #[arg(long, global = true, conflicts_with = "builtin")]
    quiver: Option<PathBuf>,

    /// Built-in quiver: example, A<n>, D<n>, E6, E7, E8.
    #[arg(long, global = true)]
    builtin: Option<String>,

    /// Field: `q` for the rationals or `fp:P` for a compiled prime P.
    #[arg(long, global = true, default_value = "fp:32003")]
    field: String,

    #[arg(long, global = true, env = "VSI_SEED", default_value_t = 0)]
    seed: u64,

    /// Random samples per generic value.
    #[arg(long, global = true, default_value_t = 3)]
    trials: usize,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Print E, E^-1 and (E^t)^-1.
    Euler,
    /// Positive roots of a Dynkin quiver.
    Roots,
    /// Generic decomposition of a virtual dimension vector.
    Decompose {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
    },
    /// Canonical and minimal projective decompositions.
    Canres {
        #[arg(allow_hyphen_values = true)]
        alpha: String,
    },
    /// Sample C_V on a general presentation of `alpha` for general V of dimension `beta`.
    Cv {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
    },
    /// Membership of `alpha` in the support cone D(beta).
    Support {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        /// Also print the half-space description.
        #[arg(long)]
        halfspaces: bool,
    },
    /// Cluster tilting complex of a Dynkin quiver.
    Complex {
        #[command(subcommand)]
        action: ComplexAction,
    },
    /// Run the built-in golden checks.
    Selftest,
}

#[derive(Subcommand, Debug, Clone)]
pub enum ComplexAction {
    Build,
    Verify {
        /// Random points in the covering test.
        #[arg(long, default_value_t = vsi_core::cluster::COVERING_SAMPLES)]
        samples: usize,
        /// Decide ext with fixed indecomposable representatives from the start.
        #[arg(long)]
        certified: bool,
    },
    Walls {
        /// Compare each D(beta) with its labeled ridges on a grid.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 4)]
        radius: i64,
    },
    Export {
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Depth-bounded complex for quivers that are not Dynkin.
    Truncate {
        #[arg(long, default_value_t = 2)]
        depth: i64,
    },
}

/// Parsed and validated run settings.
pub struct RunConfig {
    pub quiver: Arc<Quiver>,
    pub field: FieldSpec,
    pub seed: u64,
    pub trials: usize,
    pub output: OutputFormat,
}

/// Result of a command: a JSON document, its text rendering, and whether all checks passed.
pub struct Output {
    pub json: serde_json::Value,
    pub text: String,
    pub verified: bool,
}

#[derive(Debug)]
pub enum CliError {
    Domain(vsi_core::Error),
    Usage(String),
}

impl From<vsi_core::Error> for CliError {
    fn from(e: vsi_core::Error) -> Self {
        CliError::Domain(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Usage(s) => write!(f, "{s}"),
        }
    }
}

pub fn parse_vector(quiver: &Quiver, s: &str) -> Result<DimVector, CliError> {
    let v = DimVector::parse(s)?;
    quiver.check_len(&v)?;
    Ok(v)
}

fn load_quiver(cli: &Cli) -> Result<Quiver, CliError> {
    if let Some(path) = &cli.quiver {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        return Ok(Quiver::parse(&text)?);
    }
    let name = cli.builtin.as_deref().unwrap_or("example");
    Quiver::builtin(name).ok_or_else(|| CliError::Usage(format!("unknown built-in quiver {name:?}")))
}

fn config(cli: &Cli) -> Result<RunConfig, CliError> {
    let field: FieldSpec = cli.field.parse().map_err(|e: vsi_core::Error| CliError::Usage(e.to_string()))?;
    if let FieldSpec::Prime(p) = field {
        if !PRIMES.contains(&p) {
            return Err(CliError::Usage(format!("prime {p} is not compiled in; choose one of {PRIMES:?}")));
        }
    }
    Ok(RunConfig {
        quiver: Arc::new(load_quiver(cli)?),
        field,
        seed: cli.seed,
        trials: cli.trials.max(1),
        output: cli.output,
    })
}

macro_rules! with_field {
    ($spec:expr, $f:ident => $body:expr, [$($p:literal),*]) => {
        match $spec {
            FieldSpec::Rationals => {
                type $f = vsi_core::Rational;
                $body
            }
            $(FieldSpec::Prime($p) => {
                type $f = vsi_core::Fp<$p>;
                $body
            })*
            FieldSpec::Prime(p) => Err(CliError::Usage(format!("prime {p} is not compiled in"))),
        }
    };
}

fn dispatch(cfg: &RunConfig, cmd: &Command) -> Result<Output, CliError> {
    with_field!(cfg.field, F => commands::run::<F>(cfg, cmd),
        [2, 3, 5, 7, 11, 13, 101, 1009, 32003, 65521, 1000003, 2147483647])
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = config(&cli).and_then(|cfg| dispatch(&cfg, &cli.command).map(|o| (o, cfg.output)));
    match result {
        Ok((out, format)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = match format {
                OutputFormat::Json => writeln!(stdout, "{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
                OutputFormat::Text => write!(stdout, "{}", out.text),
            };
            if out.verified {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VERIFY)
            }
        }
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_DOMAIN)
        }
        Err(CliError::Usage(s)) => {
            eprintln!("usage error: {s}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
