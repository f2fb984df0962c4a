//! `kinlayer` command-line driver.

mod args;
mod boundary_spec;
mod commands;
mod config;
mod error;
mod invariants;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, ProbeKind, VariantArg};
use config::{RunConfig, OUT_DIR_ENV};
use error::{CliError, Result};
use output::Output;

fn run(cli: Cli) -> Result<Vec<String>> {
    let env_out = std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from);
    let (cfg, file) = RunConfig::resolve(&cli.command, env_out)?;
    let mut out = Output::new(&cfg.out)?;
    let mut lines = match &cli.command {
        Command::Milne(_) => commands::milne::run(&cfg, &mut out)?,
        Command::Disk(_) => commands::disk::run(&cfg, &mut out)?,
        Command::Expand(a) => {
            let variant = a.variant.or(file.variant).unwrap_or(VariantArg::Both);
            let order = a.order.or(file.order).unwrap_or(0);
            commands::expand::run(&cfg, variant, order, &mut out)?
        }
        Command::Verify(a) => {
            let suite = a.suite.or(file.suite).ok_or_else(|| CliError::config("verify needs --suite"))?;
            commands::verify::run(&cfg, suite, a.input.as_deref(), &mut out)?
        }
        Command::Probe(a) => {
            let kind = a.kind.or(file.probe).unwrap_or(ProbeKind::Grazing);
            let levels = a.levels.or(file.levels).unwrap_or(5);
            commands::probe::run(&cfg, kind, levels, &mut out)?
        }
    };
    lines.extend(out.written().iter().map(|p| format!("wrote {}", p.display())));
    Ok(lines)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(lines) => {
            let mut stdout = std::io::stdout().lock();
            for l in lines {
                // a closed pipe is not an error of the run
                if writeln!(stdout, "{l}").is_err() {
                    break;
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

