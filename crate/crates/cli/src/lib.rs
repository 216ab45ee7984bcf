//! Command-line front end for `fmac-core`: SNR sweeps of outage probability
//! and average capacity, correlation tables, scatter samples and a
//! validation suite. Output is CSV or JSON lines and is byte-identical for a
//! given seed regardless of the worker count.
//!
//! Exit codes: 0 success, 1 validation failure, 2 invalid arguments,
//! 3 at least one row did not converge.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;
pub mod reference;
pub mod validate;

use clap::Parser;
use fmac_core::metrics::Quantity;

use crate::args::{take_config, Cli, Command};
use crate::commands::{Report, SpecError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn usage(msg: impl std::fmt::Display) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
            code: EXIT_USAGE,
        }
    }
}

/// Runs the CLI on `argv` (program name first) and captures its output.
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let config = match take_config(&mut argv) {
        Ok(c) => c,
        Err(e) => return Outcome::usage(e),
    };
    if let Some(path) = config {
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => return Outcome::usage(format!("{}: {e}", path.display())),
        };
        let extra = match config::to_args(&text) {
            Ok(a) => a,
            Err(e) => return Outcome::usage(format!("{}: {e}", path.display())),
        };
        // Settings go right after the subcommand so later flags override them.
        let at = argv.len().min(2);
        argv.splice(at..at, extra);
    }
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            };
        }
    };
    let workers = match &cli.command {
        Command::Op(a) | Command::Ac(a) => a.run.workers,
        Command::Corr(a) => a.run.workers,
        Command::Scatter(a) => a.run.workers,
        Command::Validate(a) => a.workers,
    };
    match workers {
        Some(0) => Outcome::usage("--workers must be positive"),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command)),
            Err(e) => Outcome::usage(e),
        },
        None => dispatch(&cli.command),
    }
}

fn dispatch(cmd: &Command) -> Outcome {
    let (report, format) = match cmd {
        Command::Op(a) => (commands::sweep(Quantity::Op, a), a.run.format),
        Command::Ac(a) => (commands::sweep(Quantity::Ac, a), a.run.format),
        Command::Corr(a) => (commands::corr(a), a.run.format),
        Command::Scatter(a) => (commands::scatter_pairs(a), a.run.format),
        Command::Validate(a) => {
            let r = validate::run(a.seed);
            let mut stdout = serde_json::to_string_pretty(&r).expect("report serializes");
            stdout.push('\n');
            return Outcome {
                stdout,
                stderr: String::new(),
                code: if r.pass { EXIT_OK } else { EXIT_VALIDATION },
            };
        }
    };
    match report {
        Ok(Report { table, all_ok }) => Outcome {
            stdout: table.render(format),
            stderr: if all_ok {
                String::new()
            } else {
                "warning: some rows did not converge\n".into()
            },
            code: if all_ok { EXIT_OK } else { EXIT_NOT_CONVERGED },
        },
        Err(SpecError(msg)) => Outcome::usage(msg),
    }
}
