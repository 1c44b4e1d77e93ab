//! Command-line front end: argument parsing, exit codes and output.

pub mod commands;
pub mod format;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
use commands::RouteArg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_VERIFY: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "chordinv",
    version,
    about = "Chordal completion, local inverses and their verification"
)]
pub struct Cli {
    /// Verification tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Print the report as JSON (verify always does).
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Chordality, elimination ordering or chordless cycle, clique tree.
    Analyze {
        /// Partial matrix ("pmatrix n" file).
        input: PathBuf,
    },
    /// Write the maximum-determinant completion.
    Complete {
        /// Partial matrix ("pmatrix n" file).
        input: PathBuf,
        /// Where to write the completed matrix.
        output: PathBuf,
        #[arg(long, value_enum, default_value = "recursive")]
        route: RouteArg,
    },
    /// Write the inverse assembled from clique and separator blocks.
    Localinv {
        /// Partial matrix ("pmatrix n" file).
        input: PathBuf,
        /// Where to write the inverse of the completion.
        output: PathBuf,
    },
    /// Write A, C, F and G and check the factorization identities.
    Factor {
        /// Partial or full matrix ("pmatrix n" file).
        input: PathBuf,
        /// Directory receiving A.txt, C.txt, F.txt and G.txt.
        out_dir: PathBuf,
    },
    /// Complete a banded Toeplitz symbol, e.g. --band=-1,2,-1.
    Symbol {
        /// Coefficients a_{-p}..a_p, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        band: String,
        /// Truncation order of the completed symbol.
        #[arg(long = "K", default_value_t = 32)]
        k: usize,
        /// Number of grid points on the circle (a power of two, at least 8K).
        #[arg(long, default_value_t = 1024)]
        grid: usize,
    },
    /// Verify a completion; exit 0 iff every check passes.
    Verify {
        /// Partial matrix ("pmatrix n" file).
        input: PathBuf,
        /// Run every applicable check, not just the completion checks.
        #[arg(long)]
        all: bool,
        /// Verify this completion instead of computing one.
        #[arg(long)]
        completion: Option<PathBuf>,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } | Error::Io(_) => EXIT_PARSE,
        Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

/// Parses `args`, runs the command and writes its report. Returns the exit code.
pub fn run(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let tol = cli.tol;
    let mut json = cli.json;
    let result = match &cli.command {
        Command::Analyze { input } => commands::analyze(input),
        Command::Complete { input, output, route } => commands::complete(input, output, *route, tol),
        Command::Localinv { input, output } => commands::localinv(input, output, tol),
        Command::Factor { input, out_dir } => commands::factor(input, out_dir, tol),
        Command::Symbol { band, k, grid } => commands::symbol(band, *k, *grid, tol),
        Command::Verify { input, all, completion } => {
            json = true;
            commands::verify(input, completion.as_deref(), *all, tol)
        }
    };
    match result {
        Ok((report, code)) => {
            let text = if json { report.to_json() } else { report.to_text() };
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
