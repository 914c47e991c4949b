//! Runs the full acceptance checklist, one line per criterion.

use std::process::ExitCode;

use slowdec_cli::acceptance::{run_suite, Suite};

fn main() -> ExitCode {
    // `cargo test -- --list` and similar probes expect no work to be done.
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    println!("acceptance: running the full suite");
    let outcomes = run_suite(Suite::Full, |o| println!("{}", o.line()));
    let failed: Vec<u32> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    println!(
        "acceptance: {} of {} passed",
        outcomes.len() - failed.len(),
        outcomes.len()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
