//! Acceptance suite on generated instances: one PASS/FAIL line per criterion,
//! each part indented beneath it. Seed with `LABELCAST_SEED`.

use std::process::ExitCode;

use labelcast::selftest::{render, run_selftest, seed_from_env, SelftestConfig};

fn main() -> ExitCode {
    let seed = match seed_from_env() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::FAILURE;
        }
    };
    println!("acceptance suite, seed {seed}");
    let reports = run_selftest(&SelftestConfig::with_seed(seed));
    print!("{}", render(&reports));
    let failed: Vec<u8> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.id)
        .collect();
    if failed.is_empty() {
        println!("all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
