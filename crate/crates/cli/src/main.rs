//! `gapped`: command-line front end for gapped persistence computations.

mod commands;
mod document;
mod error;
mod render;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Format, ReportFormat, RestrictArgs};
use document::{CosphereRequest, Num, Raw};
use error::CliError;

#[derive(Parser)]
#[command(name = "gapped", version, about = "Gapped persistence modules, barcodes and spectral invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate a document.
    Validate {
        file: String,
        /// Print the canonical form instead of a summary.
        #[arg(long)]
        canonical: bool,
    },
    /// Barcode of a persistence module (or re-render a barcode document).
    Barcode {
        file: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Bottleneck distance between two barcodes or persistence modules.
    Bottleneck { first: String, second: String },
    /// Interleaving distance of two persistence modules, or certificate
    /// verification for two gapped modules.
    Interleave {
        first: String,
        second: String,
        certificate: Option<String>,
        /// Also compare spectral invariants of this limit class.
        #[arg(long)]
        class: Option<String>,
    },
    /// Restrictions of a gapped module.
    Restrict {
        file: String,
        /// Progression step; defaults to the gap.
        #[arg(long, allow_hyphen_values = true)]
        step: Option<String>,
        /// Include non-normalized restrictions.
        #[arg(long)]
        all: bool,
        /// Compare all normalized restrictions pairwise.
        #[arg(long)]
        stability: bool,
        /// Print restriction K as a persistence module document.
        #[arg(long, value_name = "K")]
        emit: Option<usize>,
    },
    /// Spectral invariant of a limit-slot class in a persistence module.
    Spectral {
        file: String,
        #[arg(long)]
        class: String,
    },
    /// Spectral invariant of a limit class in a gapped module.
    GappedSpectral {
        file: String,
        #[arg(long)]
        class: String,
        #[arg(long)]
        generalized: bool,
        #[arg(long)]
        eternal: bool,
    },
    /// Dual of a module, or reflection of a barcode.
    Dual { file: String },
    /// Move every index by `u`.
    Translate {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        by: String,
    },
    /// Symbolic contact models.
    Contact {
        #[command(subcommand)]
        model: ContactCommand,
    },
    /// Axiom report on the cosphere model, with the triangle entry for u, u.
    Axioms {
        #[arg(long, default_value_t = 3)]
        n: i64,
        #[arg(long, default_value_t = 6)]
        mmax: i64,
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',', default_value = "-2,0,1/2,3")]
        constants: Vec<String>,
    },
    /// Randomized property suite.
    Suite {
        /// Overridden by GAPPED_SEED when set.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = gapped_core::suite::DEFAULT_CASES)]
        cases: usize,
    },
}

#[derive(Subcommand)]
enum ContactCommand {
    /// Unit cosphere bundle of the n-sphere, one degree slice.
    Cosphere {
        #[arg(long, required_unless_present = "request")]
        n: Option<i64>,
        #[arg(long, required_unless_present = "request")]
        mmax: Option<i64>,
        #[arg(long, required_unless_present = "request", allow_hyphen_values = true)]
        degree: Option<i64>,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        mmin: i64,
        /// Constant Hamiltonians to evaluate.
        #[arg(long = "h", allow_hyphen_values = true, value_delimiter = ',')]
        hamiltonians: Vec<String>,
        /// Read the model parameters from a cosphere_request document.
        #[arg(long, conflicts_with_all = ["n", "mmax", "degree"])]
        request: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
        /// Print the model as a gapped module document.
        #[arg(long)]
        emit_model: bool,
    },
}

fn rationals(values: &[String]) -> Result<Vec<gapped_core::Rational>, CliError> {
    values.iter().map(|v| commands::parse_value(v)).collect()
}

fn seed_from_env(flag: u64) -> Result<u64, CliError> {
    match std::env::var("GAPPED_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Input(format!("GAPPED_SEED \"{v}\" is not an unsigned integer"))),
        Err(_) => Ok(flag),
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Validate { file, canonical } => commands::validate(&file, canonical),
        Command::Barcode { file, format } => commands::barcode(&file, format),
        Command::Bottleneck { first, second } => commands::bottleneck(&first, &second),
        Command::Interleave {
            first,
            second,
            certificate,
            class,
        } => commands::interleave(&first, &second, certificate.as_deref(), class.as_deref()),
        Command::Restrict {
            file,
            step,
            all,
            stability,
            emit,
        } => commands::restrict(
            &file,
            &RestrictArgs {
                step: step.as_deref(),
                all,
                stability,
                emit,
            },
        ),
        Command::Spectral { file, class } => commands::spectral(&file, &class),
        Command::GappedSpectral {
            file,
            class,
            generalized,
            eternal,
        } => commands::gapped_spectral(&file, &class, generalized, eternal),
        Command::Dual { file } => commands::dual(&file),
        Command::Translate { file, by } => commands::translate(&file, &by),
        Command::Contact {
            model:
                ContactCommand::Cosphere {
                    n,
                    mmax,
                    degree,
                    mmin,
                    hamiltonians,
                    request,
                    format,
                    emit_model,
                },
        } => {
            let mut req = match request {
                Some(path) => match document::read_document(&path)? {
                    Raw::Cosphere(r) => r,
                    other => return Err(CliError::Input(format!("expected cosphere_request, found {}", other.kind()))),
                },
                None => CosphereRequest {
                    n: n.expect("required by clap"),
                    m_max: mmax.expect("required by clap"),
                    degree: degree.expect("required by clap"),
                    m_min: mmin,
                    offsets: None,
                    hamiltonians: None,
                },
            };
            if !hamiltonians.is_empty() {
                req.hamiltonians = Some(rationals(&hamiltonians)?.into_iter().map(Num::Rational).collect());
            }
            commands::cosphere(&req, format, emit_model)
        }
        Command::Axioms { n, mmax, constants } => commands::axioms(n, mmax, &rationals(&constants)?),
        Command::Suite { seed, cases } => commands::suite(seed_from_env(seed)?, cases),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Failed { report, .. } = &e {
                print!("{report}");
            }
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
