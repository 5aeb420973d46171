//! The acceptance gate: one line per criterion, nonzero exit on any failure.

mod kernel;
mod oracles;
mod parity;
mod reasoning;

#[path = "../../../core/tests/common/discover_oracle.rs"]
mod discover_oracle;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

pub type Outcome = Result<String, String>;

type Criterion = (&'static str, fn() -> Outcome);

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus"))
}

pub fn corpus_source(name: &str) -> String {
    std::fs::read_to_string(corpus_dir().join(format!("{name}.geo"))).unwrap_or_else(|e| panic!("{name}.geo: {e}"))
}

/// Turns a false condition into an error.
pub fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("kernel correctness", kernel::criterion),
        ("theorem corpus", reasoning::theorem_corpus),
        ("relation exactness", reasoning::relation_exactness),
        ("locus", reasoning::locus),
        ("compare conjecture", reasoning::compare_conjecture),
        ("discover determinism and soundness", reasoning::discover_soundness),
        ("envelope", reasoning::envelopes),
        ("service parity", parity::criterion),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail} ({secs:.1} s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail} ({secs:.1} s)");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
