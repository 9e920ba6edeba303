//! Full acceptance battery; prints one line per criterion.

use std::io::Write;

use restriction_core::acceptance::{run_criterion, SuiteOptions, CRITERIA};

#[test]
fn acceptance_battery() {
    let opts = SuiteOptions::default();
    let mut failed = Vec::new();
    for &(id, _, _) in CRITERIA.iter() {
        let o = run_criterion(id, &opts).expect("known criterion");
        // Written to the stdout handle directly so the line survives test output capture.
        writeln!(
            std::io::stdout(),
            "criterion {} ({}): {} in {:.2}s (budget {:.0}s)",
            o.id,
            o.name,
            if o.pass { "PASS" } else { "FAIL" },
            o.seconds,
            o.budget_seconds
        )
        .expect("stdout");
        println!("  {}", o.detail);
        if !o.pass {
            failed.push(o.id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
