//! Acceptance criteria. Each criterion runs a fixed set of verification
//! properties at fixed trial counts and must finish within its time budget.
//!
//! Runs without the libtest harness so the criteria execute one after
//! another and every PASS/FAIL line is printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use drwk::verify::{run_named, PropertyReport, Suite};

const SEED: u64 = 42;

struct Criterion {
    id: usize,
    title: &'static str,
    suite: Suite,
    /// (property, trials, minimum number of non-skipped trials)
    checks: &'static [(&'static str, usize, usize)],
    limit: Duration,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const CRITERIA: &[Criterion] = &[
    Criterion {
        id: 1,
        title: "ghost and gamma coherence",
        suite: Suite::Witt,
        checks: &[
            ("gamma_homomorphism", 300, 300),
            ("gamma_inverse", 300, 300),
            ("ghost_ring_homomorphism", 300, 300),
            ("log_derivative", 300, 300),
            ("unghost_ghost", 300, 300),
        ],
        limit: secs(10),
    },
    Criterion {
        id: 2,
        title: "exp/log isomorphism",
        suite: Suite::Trunc,
        checks: &[("exp_log_inverse", 500, 500), ("exp_log_homomorphism", 500, 500)],
        limit: secs(5),
    },
    Criterion {
        id: 3,
        title: "normal form kills exact forms",
        suite: Suite::Forms,
        // 200 per (n, m) over n = 1..4, m = 1..6
        checks: &[("reduce_kills_exact", 200 * 24, 200 * 24), ("d_injective_on_canon", 100, 100)],
        limit: secs(30),
    },
    Criterion {
        id: 4,
        title: "relative Milnor normal form well-defined",
        suite: Suite::Relmilnor,
        checks: &[
            ("principal_entry_independence", 200, 200),
            ("bilinearity", 200, 200),
            ("antisymmetry", 200, 200),
            ("steinberg", 200, 200),
        ],
        limit: secs(30),
    },
    Criterion {
        id: 5,
        title: "theta roundtrip",
        suite: Suite::Relmilnor,
        // 100 per (n, m) over n = 1..3, m = 1..6
        checks: &[("theta_roundtrip", 100 * 18, 100 * 18)],
        limit: secs(20),
    },
    Criterion {
        id: 6,
        title: "cycle class isomorphism",
        suite: Suite::CycleIso,
        checks: &[
            ("dictionary_coherence", 300, 300),
            ("diagonal_invertible", 100, 100),
            ("v_compatibility", 100, 100),
        ],
        limit: secs(60),
    },
    Criterion {
        id: 7,
        title: "restriction towers",
        suite: Suite::CycleIso,
        checks: &[("tower_compat", 100, 100)],
        limit: secs(10),
    },
    Criterion {
        id: 8,
        title: "de Rham-Witt relations",
        suite: Suite::Drw,
        checks: &[
            ("frobenius_d_verschiebung", 100, 100),
            ("projection_formula", 100, 100),
            ("d_squared_zero", 100, 100),
            ("leibniz", 100, 100),
            ("v_dlog_identity", 100, 100),
        ],
        limit: secs(30),
    },
    Criterion {
        id: 9,
        title: "symbol identities under realizations",
        suite: Suite::Rewriting,
        checks: &[
            ("identity_generic_branch", 60, 50),
            ("identity_degenerate_branch", 60, 50),
            ("filtration_rewrite_z", 60, 50),
            ("filtration_rewrite_q", 60, 50),
        ],
        limit: secs(60),
    },
    Criterion {
        id: 10,
        title: "Weil reciprocity and boundary vanishing",
        suite: Suite::Reciprocity,
        checks: &[("weil_reciprocity", 60, 50)],
        limit: secs(120),
    },
];

fn problem(r: &PropertyReport, min_checked: usize) -> Option<String> {
    if let Some(c) = &r.counterexample {
        return Some(format!("{} failed at trial {}: {}", r.name, c.trial, c.detail));
    }
    if r.failed > 0 {
        return Some(format!("{}: {} failures", r.name, r.failed));
    }
    if r.passed < min_checked {
        return Some(format!("{}: only {} of {} trials checked", r.name, r.passed, r.trials));
    }
    None
}

fn run(c: &Criterion) -> (bool, String) {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut extra: Vec<(Suite, &str, usize, usize)> = Vec::new();
    if c.id == 10 {
        // boundary vanishing lives with the cycle properties
        extra.push((Suite::CycleIso, "boundary_vanishing", 40, 30));
    }
    let all = c.checks.iter().map(|&(p, n, k)| (c.suite, p, n, k)).chain(extra);
    let mut trials = 0;
    for (suite, name, n, min_checked) in all {
        match run_named(suite, name, SEED, Some(n)) {
            Ok(r) => {
                trials += r.trials;
                problems.extend(problem(&r, min_checked));
            }
            Err(e) => problems.push(format!("{name}: {e}")),
        }
    }
    let elapsed = start.elapsed();
    if elapsed > c.limit {
        problems.push(format!("took {elapsed:.2?}, limit {:?}", c.limit));
    }
    let summary = format!("{trials} trials in {elapsed:.2?} (limit {:?})", c.limit);
    if problems.is_empty() {
        (true, summary)
    } else {
        (false, format!("{summary}; {}", problems.join("; ")))
    }
}

fn main() -> ExitCode {
    let mut failures = 0;
    for c in CRITERIA {
        let (ok, detail) = run(c);
        if !ok {
            failures += 1;
        }
        println!("{} criterion {:>2} {}: {detail}", if ok { "PASS" } else { "FAIL" }, c.id, c.title);
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failures, CRITERIA.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
