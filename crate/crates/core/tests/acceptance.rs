//! Acceptance run: one line per criterion, nonzero exit when any fails.
//!
//! Time budgets apply to criteria 1 to 3; the others are exact checks with no
//! budget of their own.

use std::process::ExitCode;
use std::time::Duration;

use tstruct_core::suites::{run_suite, SuiteConfig};

const CRITERIA: &[(&str, Option<u64>)] = &[
    ("criterion1", Some(10)),
    ("criterion2", Some(30)),
    ("criterion3", Some(300)),
    ("criterion4", None),
    ("criterion5", None),
    ("criterion6", None),
    ("criterion7", None),
    ("criterion8", None),
    ("criterion9", None),
];

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut failures = 0;
    for (i, (id, budget)) in CRITERIA.iter().enumerate() {
        let line = match run_suite(id, &cfg) {
            Ok(report) => {
                let in_time = budget.map_or(true, |s| report.elapsed <= Duration::from_secs(s));
                let ok = report.passed() && in_time;
                if !ok {
                    failures += 1;
                }
                let mut line = format!(
                    "criterion {}: {} {} ({} checks, {} failed, {:.2}s",
                    i + 1,
                    if ok { "PASS" } else { "FAIL" },
                    report.title,
                    report.tally.checked,
                    report.tally.failed,
                    report.elapsed.as_secs_f64(),
                );
                if let Some(s) = budget {
                    line.push_str(&format!(", budget {s}s"));
                }
                line.push(')');
                for ex in &report.tally.examples {
                    line.push_str(&format!("\n    {ex}"));
                }
                line
            }
            Err(e) => {
                failures += 1;
                format!("criterion {}: FAIL {id} ({e})", i + 1)
            }
        };
        println!("{line}");
    }
    println!("acceptance: {} of {} criteria passed", CRITERIA.len() - failures, CRITERIA.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
