//! Runs every acceptance criterion and prints one verdict line each.
//!
//! Built with `harness = false` so the lines show up in `cargo test` output.
//! Exits nonzero when any criterion fails.

use std::process::ExitCode;

use regretlab::harness::acceptance::run_criterion;

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for id in 1..=10 {
        let result = run_criterion(id);
        println!("{}", result.line());
        if !result.pass {
            failed.push(format!("C{id}"));
        }
    }
    if failed.is_empty() {
        println!("acceptance: 10/10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing criteria {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
