//! Run the named property suites and print their checks.

use twistkit::suite::{run_suite, suite_names, SuiteConfig};

fn main() -> twistkit::Result<()> {
    let quick = ["conjugation", "alexander-chain", "relations", "lower-genus", "pipeline", "window-oracles"];
    println!("registered: {:?}", suite_names());
    for name in quick {
        let report = run_suite(&SuiteConfig::new(name))?;
        for c in &report.checks {
            println!("{:<16} {:<60} {:>6} cases, {} failed", report.suite, c.name, c.cases, c.failed);
        }
    }
    Ok(())
}
