//! The `dca-forge` command line. [`run`] parses arguments, dispatches the
//! subcommand and writes the run metadata; it returns the process exit code.

pub mod args;
pub mod commands;
pub mod metadata;
pub mod probe;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};
use serde_json::Value;

use crate::args::Cli;
use crate::commands::{dispatch, CliError, RunLog};
use crate::metadata::{default_path, RunMetadata};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            if e.kind() == ErrorKind::InvalidSubcommand {
                eprintln!("\n{}", Cli::command().render_help());
            }
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };

    let mut log = RunLog::default();
    let result = dispatch(&cli.command, &mut log);
    let (mut code, error) = match &result {
        Ok(()) => (EXIT_OK, None),
        Err(CliError::Usage(msg)) => (EXIT_USAGE, Some(msg.clone())),
        Err(CliError::Data(msg)) => (EXIT_DATA, Some(msg.clone())),
    };

    for line in &log.stdout {
        println!("{line}");
    }
    if let Some(msg) = &error {
        eprintln!("error: {msg}");
    }

    let path = cli.metadata.clone().unwrap_or_else(|| default_path(&cli.command));
    let meta = RunMetadata {
        tool: "dca-forge",
        version: env!("CARGO_PKG_VERSION"),
        subcommand: cli.command.name(),
        status: if code == EXIT_OK { "ok" } else { "error" },
        exit_code: code,
        error,
        parameters: &cli.command,
        inputs: log.inputs,
        outputs: log.outputs,
        summary: Value::Object(log.summary),
    };
    if let Err(e) = meta.write(&path) {
        eprintln!("error: writing run metadata {}: {e}", path.display());
        if code == EXIT_OK {
            code = EXIT_DATA;
        }
    } else if !cli.quiet && code == EXIT_OK {
        eprintln!("{}: done, metadata in {}", cli.command.name(), path.display());
    }
    code
}
