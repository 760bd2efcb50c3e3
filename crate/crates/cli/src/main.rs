//! `lagmult`: batch front end over the verification harness.
//!
//! Exit codes: 0 success or consistent, 2 violated, 3 inconclusive,
//! 64 usage error, 1 I/O failure.

mod args;
mod commands;
mod emit;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATED: u8 = 2;
pub const EXIT_INCONCLUSIVE: u8 = 3;
pub const EXIT_USAGE: u8 = 64;
pub const EXIT_IO: u8 = 1;

/// A message plus the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<lagmult_core::Error> for Failure {
    fn from(e: lagmult_core::Error) -> Self {
        use lagmult_core::Error::*;
        let code = match e {
            Domain(_) | Parameter(_) | Undeclarable(_) => EXIT_USAGE,
            NonConvergence(_) | InsufficientData(_) => EXIT_INCONCLUSIVE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (kind, flags) = cli.command.split();
    match commands::run(kind, flags) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("lagmult: {f}");
            ExitCode::from(f.code)
        }
    }
}
