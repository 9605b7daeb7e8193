//! Runs the `paper-core` suite and prints one line per criterion.

use std::io::Write;
use std::time::{Duration, Instant};

use convalg::suite::{self, RunConfig};

/// Whole-suite wall time limit.
const TIME_LIMIT: Duration = Duration::from_secs(300);
const CRITERIA: usize = 12;

#[test]
fn acceptance() {
    let spec = suite::paper_core();
    let start = Instant::now();
    let results = suite::run(&spec, &RunConfig::default()).expect("suite runs");
    let elapsed = start.elapsed();

    assert_eq!(results.len(), CRITERIA);
    // Written to the raw handle so the lines survive the harness's output capture.
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    for r in &results {
        let mark = if r.passed { "PASS" } else { "FAIL" };
        writeln!(out, "[{mark}] criterion {:>2} {:<24} {}", r.criterion, r.name, r.detail).unwrap();
        if !r.passed {
            failed.push(r.criterion);
            for rep in r.reports.iter().filter(|rep| !rep.passed()).take(3) {
                writeln!(out, "       {}", rep.to_json_line()).unwrap();
            }
        }
    }
    writeln!(out, "suite time: {:.1}s (limit {}s)", elapsed.as_secs_f64(), TIME_LIMIT.as_secs()).unwrap();
    drop(out);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
    assert!(elapsed < TIME_LIMIT, "suite took {elapsed:?}");
}
