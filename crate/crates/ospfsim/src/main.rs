//! Command-line front end: `run` executes a scenario file, `verify`
//! re-authenticates a capture offline. All logic lives in the library.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ospfsim::runner::{self, RunnerError};

/// Print without panicking when stdout is a pipe that closed early
/// (`ospfsim run ... | head`).
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

#[derive(Parser)]
#[command(
    name = "ospfsim",
    about = "Deterministic OSPFv2 authentication simulator",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a scenario file; write the capture and report next to it.
    Run {
        /// Scenario JSON file.
        scenario: PathBuf,
        /// Replace the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Capture output path (default: <scenario>.capture.jsonl).
        #[arg(long)]
        capture: Option<PathBuf>,
        /// Report output path (default: <scenario>.report.json).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Re-apply authentication to a capture file, offline.
    Verify {
        /// Capture in JSON Lines form, as written by `run`.
        capture: PathBuf,
        /// Key chain JSON file to verify cryptographic frames against.
        #[arg(long)]
        keys: PathBuf,
        /// Wall-clock time of capture instant zero (ISO-8601 UTC).
        #[arg(long)]
        start_time: Option<String>,
    },
}

fn derived_path(scenario: &Path, suffix: &str) -> PathBuf {
    let stem = scenario
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".to_string());
    scenario.with_file_name(format!("{}.{}", stem, suffix))
}

fn write_file(path: &Path, contents: &str) -> Result<(), RunnerError> {
    std::fs::write(path, contents).map_err(|source| RunnerError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn run(command: Command) -> Result<(), RunnerError> {
    match command {
        Command::Run {
            scenario,
            seed,
            capture,
            report,
        } => {
            let capture_path = capture.unwrap_or_else(|| derived_path(&scenario, "capture.jsonl"));
            let report_path = report.unwrap_or_else(|| derived_path(&scenario, "report.json"));
            let mut artifacts = runner::run_scenario_file(&scenario, seed)?;
            artifacts.report.capture_path = Some(capture_path.display().to_string());
            write_file(&capture_path, &runner::capture_to_jsonl(&artifacts.capture))?;
            write_file(&report_path, &artifacts.report.to_json())?;
            emit(&artifacts.report.to_text());
            emit(&format!(
                "capture: {}\nreport:  {}\n",
                capture_path.display(),
                report_path.display()
            ));
            Ok(())
        }
        Command::Verify {
            capture,
            keys,
            start_time,
        } => {
            let summary = runner::verify_capture_file(&capture, &keys, start_time.as_deref())?;
            emit(&format!("{}\n", summary));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {}", error);
            ExitCode::from(error.exit_code() as u8)
        }
    }
}
