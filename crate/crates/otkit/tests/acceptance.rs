//! Acceptance runner: one pass/fail line per criterion.
//!
//! Each criterion runs one or more named suites, requires zero failures,
//! checks that enough cases were exercised per property and, where a
//! budget is given, that the runs finished inside it.

use otkit::suites::{run_suite, SuiteReport, SuiteSpec};
use std::process::ExitCode;
use std::time::Duration;

struct Criterion {
    id: u32,
    title: &'static str,
    runs: Vec<(&'static str, SuiteSpec)>,
    /// (suite, property, minimum cases)
    minimums: Vec<(&'static str, &'static str, usize)>,
    budget: Option<Duration>,
}

fn spec(levels: usize, max_len: Option<usize>, count: Option<usize>) -> SuiteSpec {
    SuiteSpec { seed: 20240611, count, max_len, levels, slice: None }
}

fn criteria() -> Vec<Criterion> {
    let secs = |s| Some(Duration::from_secs(s));
    vec![
        Criterion {
            id: 1,
            title: "order linearity on all terms of length <= 7 and <= 12 (N=3)",
            runs: vec![
                ("order-linearity", spec(3, Some(7), Some(100_000))),
                ("order-linearity", spec(3, Some(12), Some(100_000))),
            ],
            minimums: vec![("order-linearity", "transitive", 200_000), ("order-linearity", "trichotomy", 1)],
            budget: secs(60),
        },
        Criterion {
            id: 2,
            title: "compare = EQ iff identical on the same fragments",
            runs: vec![("uniqueness", spec(3, Some(7), None)), ("uniqueness", spec(3, Some(12), None))],
            minimums: vec![("uniqueness", "eq-iff-identical", 1)],
            budget: None,
        },
        Criterion {
            id: 3,
            title: "coefficient sets: antitone, bounded, hull agrees with the closure oracle",
            runs: vec![("k-calculus", spec(3, None, Some(10_000)))],
            minimums: vec![
                ("k-calculus", "antitone", 10_000),
                ("k-calculus", "bounded", 10_000),
                ("k-calculus", "hull", 1_000),
            ],
            budget: None,
        },
        Criterion {
            id: 4,
            title: "o and o_n strictly increasing on irreducible vector pairs",
            runs: vec![("o-monotonicity", spec(3, None, Some(10_000)))],
            minimums: vec![("o-monotonicity", "o-increasing", 10_000), ("o-monotonicity", "o-n-increasing", 10_000)],
            budget: secs(120),
        },
        Criterion {
            id: 5,
            title: "head comparison, tail bound and <_tl upward closure",
            runs: vec![("head-tail", spec(3, None, Some(10_000)))],
            minimums: vec![
                ("head-tail", "head", 10_000),
                ("head-tail", "tail-bound", 10_000),
                ("head-tail", "tl-upward", 10_000),
            ],
            budget: None,
        },
        Criterion {
            id: 6,
            title: "predecessor identities on generated chains, N in {4,5}",
            runs: vec![("pd-identities", spec(4, None, Some(500)))],
            minimums: vec![("pd-identities", "chain-identities", 500)],
            budget: None,
        },
        Criterion {
            id: 7,
            title: "tower embedding along every pd-step of those chains",
            runs: vec![("tower-embedding", spec(4, None, Some(500)))],
            minimums: vec![("tower-embedding", "embedding", 500)],
            budget: None,
        },
        Criterion {
            id: 8,
            title: "strongly irreducible implies irreducible; extension stays strongly irreducible",
            runs: vec![("strong-irreducibility", spec(3, None, Some(10_000)))],
            minimums: vec![
                ("strong-irreducibility", "implies-irreducible", 10_000),
                ("strong-irreducibility", "extension", 1_000),
            ],
            budget: None,
        },
        Criterion {
            id: 9,
            title: "closure toolkit: key sets, wellfounded part, V persistence, 0 in distinguished sets",
            runs: vec![
                ("closure", spec(3, None, None)),
                ("wf-part", spec(3, Some(6), Some(1_000_000))),
                ("v-persistence", spec(4, None, None)),
                ("distinguished", spec(3, None, None)),
            ],
            minimums: vec![
                ("closure", "key-sets", 1),
                ("wf-part", "naive-agrees", 1 << 25),
                ("wf-part", "edge-removal", 1),
                ("v-persistence", "persistent", 1),
                ("distinguished", "contains-zero", 1),
            ],
            budget: None,
        },
        Criterion {
            id: 10,
            title: "terms below psi_Om(w_n) lie in slice n, n in {1,2}",
            runs: vec![("slice-soundness", spec(3, Some(12), None))],
            minimums: vec![("slice-soundness", "in-slice", 1)],
            budget: None,
        },
    ]
}

fn cases_of(reports: &[SuiteReport], suite: &str, property: &str) -> usize {
    reports
        .iter()
        .filter(|r| r.name == suite)
        .flat_map(|r| r.properties.iter())
        .filter(|(p, _)| p == property)
        .map(|(_, n)| n)
        .sum()
}

fn main() -> ExitCode {
    let mut all_ok = true;
    // criteria 6 and 7 share one budget
    let mut chain_time = Duration::ZERO;
    for c in criteria() {
        let mut reports = Vec::new();
        for (name, spec) in &c.runs {
            reports.push(run_suite(name, spec).expect("known suite"));
        }
        let elapsed: Duration = reports.iter().map(|r| r.elapsed).sum();
        let mut problems = Vec::new();
        for r in &reports {
            for f in r.failures.iter().take(3) {
                problems.push(format!("{}/{}: {}", r.name, f.property, f.case));
            }
            if r.failures.len() > 3 {
                problems.push(format!("{}: {} failures in total", r.name, r.failures.len()));
            }
        }
        for (suite, property, min) in &c.minimums {
            let n = cases_of(&reports, suite, property);
            if n < *min {
                problems.push(format!("{suite}/{property}: {n} cases, need {min}"));
            }
        }
        if let Some(b) = c.budget {
            if elapsed > b {
                problems.push(format!("took {:.1}s, budget {}s", elapsed.as_secs_f64(), b.as_secs()));
            }
        }
        if c.id == 6 || c.id == 7 {
            chain_time += elapsed;
            if c.id == 7 && chain_time > Duration::from_secs(300) {
                problems.push(format!("criteria 6-7 took {:.1}s, budget 300s", chain_time.as_secs_f64()));
            }
        }
        let ok = problems.is_empty();
        all_ok &= ok;
        let cases: usize = reports.iter().map(|r| r.cases).sum();
        println!(
            "{} criterion {:>2}: {} [{} cases, {:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            cases,
            elapsed.as_secs_f64()
        );
        for r in &reports {
            for n in &r.notes {
                println!("      {}: {n}", r.name);
            }
        }
        for p in problems {
            println!("      problem: {p}");
        }
    }
    if all_ok {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
