//! Runs the full verification suite and reports one line per criterion.
//!
//! This target uses its own `main` instead of the libtest harness so that the
//! per-criterion lines are printed even when everything passes.  The process
//! exits nonzero if any criterion fails, which is what `cargo test` keys on.

use std::process::exit;

use multex_core::verify::{theorem_suite, SuiteConfig};

fn main() {
    let report = match theorem_suite(&SuiteConfig::default()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("acceptance suite aborted: {e}");
            exit(2);
        }
    };
    for c in &report.entries {
        println!(
            "criterion {:2}: {} — {} [expected {}; got {}; {} ms]",
            c.id,
            if c.pass { "pass" } else { "FAIL" },
            c.description,
            c.expected,
            c.actual,
            c.runtime_ms,
        );
    }
    let failed = report.entries.iter().filter(|c| !c.pass).count();
    if report.passed {
        println!("acceptance: all {} criteria pass", report.entries.len());
    } else {
        println!(
            "acceptance: {} of {} criteria FAILED",
            failed,
            report.entries.len()
        );
        exit(1);
    }
}
