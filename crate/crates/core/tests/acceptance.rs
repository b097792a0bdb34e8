//! Acceptance battery: one PASS/FAIL line per criterion.
//!
//! Criterion 9 runs the whole battery a second time and compares the
//! serialized reports byte for byte.

use ppdual_core::pp::DEFAULT_BOUND;
use ppdual_core::suite::battery::{battery_report, Battery, CriterionOutcome, TITLES};
use ppdual_core::suite::Suite;

fn run() -> (Vec<CriterionOutcome>, String) {
    let battery = Battery::new(Suite::standard().expect("suite builds"), DEFAULT_BOUND);
    let outcomes = battery.run_all().expect("battery runs");
    let text = battery_report(&outcomes).to_jsonl(None);
    (outcomes, text)
}

fn line(id: usize, pass: bool, summary: &str) -> String {
    format!(
        "criterion {id} [{}]: {} ({summary})",
        TITLES[id - 1],
        if pass { "PASS" } else { "FAIL" }
    )
}

fn main() {
    let (outcomes, first) = run();
    let (_, second) = run();
    let mut failed = Vec::new();
    for o in &outcomes {
        println!("{}", line(o.id, o.pass, &o.summary));
        if !o.pass {
            failed.push(o.id);
        }
    }
    let deterministic = first == second;
    println!(
        "{}",
        line(9, deterministic, &format!("{} report lines compared", first.lines().count()))
    );
    if !deterministic {
        failed.push(9);
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
