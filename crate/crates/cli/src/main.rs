//! `gbord`: batch front end for gbord-core.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when a verification fails.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gbord_core::Error;

#[derive(Parser, Debug)]
#[command(name = "gbord", version, about = "Exact computations with formal group laws, Weyl groups and torsion indices")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct GroupArgs {
    /// Preset root datum, e.g. SL2, SL(3), GL2, PGL2, Sp4, G2, Torus(2).
    #[arg(long)]
    pub group: Option<String>,

    /// JSON file with {name, rank, simple_roots, simple_coroots}.
    #[arg(long, value_name = "FILE")]
    pub root_datum: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LawArg {
    Additive,
    Multiplicative,
    Universal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LazardWhat {
    Ranks,
    Basis,
    Pn,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Integral bases of the Lazard ring by degree.
    Lazard {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_degree: u32,
        #[arg(long, value_enum, default_value_t = LazardWhat::Ranks)]
        what: LazardWhat,
    },
    /// A truncated formal group law, its inverse and axiom residuals.
    Fgl {
        #[arg(long, value_enum)]
        law: LawArg,
        #[arg(long, value_parser = clap::value_parser!(u32).range(2..))]
        order: u32,
    },
    /// Weyl group of a root datum.
    Weyl {
        #[command(flatten)]
        group: GroupArgs,
        /// Omit the element list.
        #[arg(long)]
        summary: bool,
    },
    /// Torsion index via the characteristic homomorphism.
    TorsionIndex {
        #[command(flatten)]
        group: GroupArgs,
        /// Number of connected components (multiplies the index).
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        components: u64,
    },
    /// Weyl action on the twisted group algebra and its invariants.
    Twisted {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value_t = LawArg::Universal)]
        law: LawArg,
        /// Truncation order in the t-variables.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        order: u32,
        /// Largest coefficient degree of the reported invariants.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        degree_bound: i32,
    },
    /// Pairing matrix between t-monomials and the basis p_m, and the dual basis.
    Btpair {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        rank: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_degree: u32,
    },
    /// Weyl coinvariants of the degree-n lattice.
    Coinv {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        degree: u32,
    },
    /// Compare coinvariants with invariants through the pairing, degree by degree.
    VerifyDuality {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_degree: u32,
        /// Integer to invert for the secondary verdict; defaults to the torsion index.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        invert_tau: Option<u64>,
    },
}

/// Errors caused by the invocation rather than by a failed computation.
fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::UnknownPreset(_)
            | Error::InvalidRootDatum(_)
            | Error::TruncationTooSmall { .. }
            | Error::DegreeOverflow { .. }
            | Error::IndexOutOfRange { .. }
            | Error::Context(_)
    )
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli.command) {
        Ok(report) => {
            let out = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            print!("{out}");
            if report.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("gbord: verification failed");
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if is_usage_error(&e) {
                eprintln!("\nFor more information, try '--help'.");
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
