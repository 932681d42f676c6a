//! Runs every acceptance criterion and prints one verdict line each.

use std::process::ExitCode;
use std::time::Instant;

use oddtrans::suite::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let mut failed = 0;
    for (id, _, _) in CRITERIA {
        let start = Instant::now();
        let outcome = run_criterion(id).expect("listed criterion");
        println!("{} ({:.1}s)", outcome.line(), start.elapsed().as_secs_f64());
        for d in &outcome.details {
            println!("    {d}");
        }
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria pass", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
