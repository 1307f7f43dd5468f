//! Acceptance suite: runs each desk-tier criterion through `verify-all`
//! and prints one PASS/FAIL line apiece. Exits non-zero on any failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use serde_json::Value;

/// Numeric tolerance used by every bound comparison in the library
/// (`actual >= bound - 1e-9 * max(1, |bound|)`); echoed here for the record.
const BOUND_SLACK: f64 = 1e-9;

const WORKERS: &str = "4";

/// Wall-clock limit per criterion.
fn time_limit(id: u8) -> Duration {
    Duration::from_secs(match id {
        1 => 60,
        4 => 120,
        _ => 300,
    })
}

fn main() -> ExitCode {
    assert_eq!(container_lab::isoperimetry::BOUND_SLACK, BOUND_SLACK);
    let mut failures = 0;
    for id in 1..=11u8 {
        let start = Instant::now();
        let out = Command::new(env!("CARGO_BIN_EXE_container-lab"))
            .args(["verify-all", "--tier", "desk", "--workers", WORKERS, "--only", &id.to_string()])
            .env_remove("CONTAINER_LAB_SEED")
            .output()
            .expect("container-lab runs");
        let elapsed = start.elapsed();
        let report: Option<Value> = serde_json::from_slice(&out.stdout).ok();
        let criterion = report.as_ref().map(|r| &r["criteria"][0]);
        let name = criterion.and_then(|c| c["name"].as_str()).unwrap_or("?");
        let detail = criterion
            .and_then(|c| c["detail"].as_str())
            .map(str::to_string)
            .unwrap_or_else(|| String::from_utf8_lossy(&out.stderr).trim().to_string());
        let passed_check = criterion.and_then(|c| c["passed"].as_bool()).unwrap_or(false) && out.status.success();
        let in_time = elapsed <= time_limit(id);
        let passed = passed_check && in_time;
        if !passed {
            failures += 1;
        }
        println!(
            "{} criterion {id:>2} ({name}): {detail} [{:.2}s of {}s{}]",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            time_limit(id).as_secs(),
            if in_time { "" } else { ", over time" }
        );
    }
    println!("acceptance: {} of 11 criteria passed", 11 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
