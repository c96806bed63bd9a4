//! The whole story in one table: every technique against every defense.
//!
//! Executes `scenarios/matrix.json` — a two-router link attacked seven ways
//! under each of the three authentication modes, plus guard-enabled re-runs
//! of the flood — and prints the resulting verdict matrix. Expected shape:
//!
//! - eavesdropping succeeds everywhere (authentication is not secrecy),
//!   though only the password mode actually leaks a credential;
//! - replay, injection, modification and man-in-the-middle succeed against
//!   null and simple authentication and die against keyed MD5;
//! - deletion succeeds everywhere — you cannot authenticate an absence;
//! - the 1000 pps flood kills the adjacency under every mode, and only the
//!   rate guard (not cryptography) contains it.
//!
//! The run is fully deterministic: same seed, same bytes, same table.
//!
//! Run with: `cargo run --release --example attack_matrix`
//! (release recommended: the flood runs push ~500k frames through the world)

use std::path::Path;

use ospfsim::runner::run_scenario_file;

fn main() {
    let scenario = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/matrix.json");
    println!("running {} ...\n", scenario.display());
    match run_scenario_file(&scenario, None) {
        Ok(artifacts) => {
            print!("{}", artifacts.report.to_text());
            println!(
                "\n{} capture records across {} isolated runs (one per mode x attack,",
                artifacts.capture.len(),
                artifacts.report.runs.len()
            );
            println!("every run from the same seed — only the defense differs).");
        }
        Err(error) => {
            eprintln!("error: {}", error);
            std::process::exit(error.exit_code());
        }
    }
}
