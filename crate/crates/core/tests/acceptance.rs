//! Runs the twelve acceptance criteria and prints one line per criterion.

use std::process::ExitCode;

use kltgeom::verify::{run_all, VerifyOptions};

fn main() -> ExitCode {
    let results = run_all(&VerifyOptions::default());
    let mut failed = 0;
    for r in &results {
        println!(
            "criterion {:>2}  {:<42} {}  ({:.2?})",
            r.id,
            r.title,
            if r.pass { "pass" } else { "FAIL" },
            r.elapsed
        );
        if !r.pass {
            failed += 1;
            println!("    details: {}", r.details);
        }
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 && results.len() == 12 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
