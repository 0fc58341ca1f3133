//! Runs every acceptance criterion at its stated tolerance and prints one
//! pass/fail line per criterion.

use burgers_lab::cli::verify::{run_suite, Suite};
use std::process::ExitCode;
use std::time::Instant;

fn main() -> ExitCode {
    let mut failed = 0;
    let mut total = 0;
    for suite in Suite::ALL {
        let start = Instant::now();
        let results = run_suite(suite);
        let elapsed = start.elapsed().as_secs_f64();
        for r in &results {
            println!("{r}");
        }
        println!("  suite {} finished in {elapsed:.2}s", suite.id());
        total += results.len();
        failed += results.iter().filter(|r| !r.passed).count();
    }
    println!("acceptance: {}/{total} criteria passed", total - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
