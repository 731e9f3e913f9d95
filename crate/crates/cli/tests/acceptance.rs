//! Runs the acceptance battery and prints one line per criterion.

use std::process::ExitCode;

use sumset_cli::harness::acceptance_checks;

fn main() -> ExitCode {
    // `cargo test -- <filter>` passes arguments; run everything unless one
    // of them names a criterion id.
    let wanted: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    let mut ran = 0;
    for (id, check) in acceptance_checks() {
        if !wanted.is_empty() && !wanted.iter().any(|w| w == id) {
            continue;
        }
        ran += 1;
        match check() {
            Ok(result) => {
                println!("{}", result.line());
                if !result.passed_in_time() {
                    failed += 1;
                }
            }
            Err(e) => {
                println!("FAIL [{id}] error: {e:#}");
                failed += 1;
            }
        }
    }
    println!("acceptance: {}/{ran} criteria passed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
