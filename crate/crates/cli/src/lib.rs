//! Command-line driver: argument handling, artifact output and run manifests.

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod repro;

use std::ffi::OsString;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;

use args::{Cli, Command};
use commands::Run;
use error::{CliError, CliResult};
use manifest::{write_file, ReproManifest};

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit status. Failures are reported on stderr as a JSON object.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let command_line: Vec<String> = argv.iter().map(|s| s.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind as K;
            if matches!(e.kind(), K::DisplayHelp | K::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let rendered = e.to_string();
            let message = rendered
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ")
                .to_string();
            return report(&CliError::usage(message));
        }
    };
    match execute(&cli, command_line) {
        Ok(()) => 0,
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> i32 {
    eprintln!("{}", e.to_json());
    e.code
}

fn execute(cli: &Cli, command_line: Vec<String>) -> CliResult<()> {
    let started_unix_ms = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis());
    let run = match &cli.command {
        Command::GenerateBasis(a) => commands::generate_basis(a)?,
        Command::EnumerateLambdas(a) => commands::enumerate(a)?,
        Command::Search(a) => commands::search(a)?,
        Command::Verify(a) => commands::verify(a)?,
        Command::Complexity(a) => commands::complexity(a)?,
        Command::Repro(a) => commands::repro_cmd(a)?,
    };
    for a in &run.artifacts {
        a.write()?;
    }
    write_manifest(cli, &run, command_line, started_unix_ms)?;
    match run.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn write_manifest(cli: &Cli, run: &Run, command_line: Vec<String>, started_unix_ms: u128) -> CliResult<()> {
    let Some(path) = cli.manifest.clone().or_else(|| commands::default_manifest_path(run)) else {
        return Ok(());
    };
    let outcome = if run.failure.is_some() { "failed" } else { "ok" };
    let m = ReproManifest::new(
        command_line,
        run.config.clone(),
        started_unix_ms,
        run.timing_ms.clone(),
        &run.artifacts,
        outcome,
    );
    let mut bytes = serde_json::to_vec_pretty(&m).map_err(|e| CliError::io(e.to_string()))?;
    bytes.push(b'\n');
    write_file(&path, &bytes)
}
