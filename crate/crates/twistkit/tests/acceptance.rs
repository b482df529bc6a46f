//! Acceptance criteria: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use twistkit::suite::{run_suite, SuiteConfig, SuiteReport};

struct Criterion {
    id: u8,
    title: &'static str,
    suite: &'static str,
    /// Wall-clock limit, if the criterion sets one.
    limit: Option<Duration>,
    /// Minimum case counts for named checks.
    minimum: &'static [(&'static str, usize)],
}

const fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

const CRITERIA: [Criterion; 10] = [
    Criterion {
        id: 1,
        title: "twist conjugation and fixes-iff-disjoint at stages <= 3",
        suite: "conjugation",
        limit: secs(10),
        minimum: &[("f t_a f^-1 = t_f(a)", 100), ("t_a(b) = b iff i(a, b) = 0", 100)],
    },
    Criterion {
        id: 2,
        title: "multitwists commute iff supports are disjoint, supports <= 3 over A_3",
        suite: "commuting-twists",
        limit: secs(60),
        minimum: &[("commutes iff supports disjoint", 51_040)],
    },
    Criterion {
        id: 3,
        title: "infinite products converge iff locally finite, N = 6",
        suite: "infinite-products",
        limit: None,
        minimum: &[
            ("locally finite streams evaluate, shuffle-invariant", 20),
            ("non-locally-finite streams give a divergence certificate", 20),
        ],
    },
    Criterion {
        id: 4,
        title: "Alexander chain audit at stages <= 6 in three families",
        suite: "alexander-chain",
        limit: secs(30),
        minimum: &[("A_n is tree-like", 21), ("A_n fills", 21)],
    },
    Criterion {
        id: 5,
        title: "lantern on template windows at stages <= 4, braided iff i = 1",
        suite: "relations",
        limit: None,
        minimum: &[("lantern relation on template windows", 1), ("single twists braided iff i = 1", 1)],
    },
    Criterion {
        id: 6,
        title: "lower genus = n + 1 = stage genus, tree DP = brute force",
        suite: "lower-genus",
        limit: None,
        minimum: &[("lower_genus(A_n) = n + 1 = stage_genus(n)", 21)],
    },
    Criterion {
        id: 7,
        title: "braided multitwist witnesses found exactly for braided pairs",
        suite: "braided-multitwists",
        limit: secs(300),
        minimum: &[("braided pairs have a verified witness", 1)],
    },
    Criterion {
        id: 8,
        title: "pipeline round trip and documented failures, N = 4",
        suite: "pipeline",
        limit: None,
        minimum: &[("identity and involution tables pass with the expected map", 3)],
    },
    Criterion {
        id: 9,
        title: "infinite multiplicativity gate and twist-product decomposition, N = 4",
        suite: "multiplicative",
        limit: None,
        minimum: &[
            ("homeomorphism-induced tables keep streams locally finite", 10),
            ("the accumulating table fails with a certificate", 1),
            ("decomposition reproduces coherent families", 15),
        ],
    },
    Criterion {
        id: 10,
        title: "window formulas agree with the torus and annulus oracles",
        suite: "window-oracles",
        limit: None,
        minimum: &[("coordinate twists = annulus strand routing", 200)],
    },
];

fn judge(c: &Criterion, report: &SuiteReport, took: Duration) -> Vec<String> {
    let mut problems = Vec::new();
    for check in &report.checks {
        if check.failed > 0 {
            problems.push(format!("{}: {} of {} failed, e.g. {:?}", check.name, check.failed, check.cases, check.witnesses.first()));
        }
    }
    for &(name, min) in c.minimum {
        match report.checks.iter().find(|k| k.name == name) {
            Some(k) if k.cases >= min => {}
            Some(k) => problems.push(format!("{name}: {} cases, need {min}", k.cases)),
            None => problems.push(format!("{name}: missing")),
        }
    }
    if let Some(limit) = c.limit {
        if took > limit {
            problems.push(format!("took {took:.1?}, limit {limit:?}"));
        }
    }
    problems
}

fn main() -> ExitCode {
    let mut failed = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let result = run_suite(&SuiteConfig::new(c.suite));
        let took = start.elapsed();
        let problems = match &result {
            Ok(r) => judge(c, r, took),
            Err(e) => vec![format!("error: {e}")],
        };
        let cases = result.as_ref().map(|r| r.cases()).unwrap_or(0);
        let status = if problems.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} {:>2} {} [{} cases, {:.2?}]", c.id, c.title, cases, took);
        for p in &problems {
            println!("        {p}");
        }
        failed += usize::from(!problems.is_empty());
    }
    println!("acceptance: {} of {} criteria pass", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
