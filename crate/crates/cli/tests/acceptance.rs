//! Runs every verification criterion and prints one pass/fail line each.

use std::process::{Command, ExitCode};

use hecke_moments::verify::{self, VerifyContext};

const SEED: u64 = 1;

fn verify_all_binary() -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_hecke-moments"))
        .args(["verify-all", "--seed", &SEED.to_string()])
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("exit status {:?}", out.status.code()));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let mut ctx = VerifyContext::new(SEED);
    let mut reports = Vec::new();
    let mut failures = 0;
    for id in verify::CRITERIA {
        match verify::run_criterion(id, &mut ctx) {
            Ok(report) => {
                if !report.passed {
                    failures += 1;
                    for d in &report.details {
                        println!("    {d}");
                    }
                }
                println!("{}", report.headline());
                reports.push(report);
            }
            Err(e) => {
                failures += 1;
                println!("criterion {id} [FAIL] error: {e}");
            }
        }
    }

    let title = "reproducibility: verify-all --seed 1 twice gives identical bytes";
    let line = match (verify_all_binary(), verify_all_binary()) {
        (Ok(first), Ok(second)) => {
            let in_process = verify::render(SEED, &reports);
            let same = first == second && first == in_process;
            if !same {
                failures += 1;
            }
            format!(
                "criterion 10 [{}] {title} ({} bytes, matches in-process report: {})",
                if same { "PASS" } else { "FAIL" },
                first.len(),
                first == in_process
            )
        }
        (Err(e), _) | (_, Err(e)) => {
            failures += 1;
            format!("criterion 10 [FAIL] {title}: {e}")
        }
    };
    println!("{line}");
    println!("acceptance: {}/10 criteria passed", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
