//! Acceptance gate: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use loopalg::algebra::{eigengrading, validate_algebra};
use loopalg::lie::{chevalley_algebra, CartanType, FiniteCartanMatrix, RootSystem};
use loopalg::suite::{verify_all, verify_selected, AutoSource, FixtureSet, SuiteReport};

struct Line {
    id: u8,
    name: &'static str,
    elapsed: Duration,
    failure: Option<String>,
}

fn from_suite(report: &SuiteReport, id: u8) -> Option<String> {
    match report.criteria.iter().find(|c| c.id == id) {
        None => Some("criterion missing from the report".into()),
        Some(c) if !c.passed => c.first_failure(),
        Some(_) => None,
    }
}

fn within(elapsed: Duration, limit: Option<Duration>) -> Option<String> {
    limit
        .filter(|l| elapsed > *l)
        .map(|l| format!("took {:.1}s, limit {:.0}s", elapsed.as_secs_f64(), l.as_secs_f64()))
}

fn run(id: u8, name: &'static str, limit: Option<Duration>, f: impl FnOnce() -> Option<String>) -> Line {
    let start = Instant::now();
    let failure = f();
    let elapsed = start.elapsed();
    Line {
        id,
        name,
        elapsed,
        failure: failure.or_else(|| within(elapsed, limit)),
    }
}

/// Dimension from the root count and rank, compared with the built table.
fn construction_oracle() -> Option<String> {
    for (label, dim) in [("A1", 3), ("A2", 8), ("A3", 15), ("B2", 10), ("C3", 21), ("D4", 28), ("G2", 14)] {
        let t: CartanType = label.parse().unwrap();
        let rs = RootSystem::new(&FiniteCartanMatrix::of_type(t)).unwrap();
        let ch = chevalley_algebra(&rs).unwrap();
        if rs.len() + rs.rank() != dim || ch.dim() != dim || t.root_count() != rs.len() {
            return Some(format!("{label}: dimension {} expected {dim}", ch.dim()));
        }
        let report = validate_algebra(ch.algebra());
        if report.triples_checked != dim * dim * dim || !report.is_valid() {
            return Some(format!("{label}: validation failed"));
        }
    }
    None
}

fn named_dims() -> Option<String> {
    let cases = [
        (AutoSource::lie("A1", &[1], &[1], 2), vec![1, 2]),
        (AutoSource::lie("A2", &[2, 1], &[0, 0], 1), vec![3, 5]),
        (AutoSource::lie("D4", &[3, 2, 4, 1], &[0, 0, 0, 0], 1), vec![14, 7, 7]),
    ];
    for (src, want) in cases {
        let (alg, sigma) = src.build().unwrap();
        let dims = eigengrading(&alg, &sigma).unwrap().dims();
        if dims != want {
            return Some(format!("{src:?}: dims {dims:?}, expected {want:?}"));
        }
    }
    None
}

fn toral_coverage(f: &FixtureSet) -> Option<String> {
    let names: Vec<&str> = f.toral.iter().map(|t| t.name.as_str()).collect();
    let covered = ["sl2", "sl3", "D4", "M2", "M3"].iter().all(|p| names.iter().any(|n| n.starts_with(p)));
    if f.toral.len() < 5 || !covered {
        return Some(format!("toral fixtures {names:?} do not cover sl2, sl3, D4, M2, M3"));
    }
    None
}

fn main() -> ExitCode {
    let fixtures = FixtureSet::standard().expect("standard fixtures build");
    let secs = Duration::from_secs;
    let single = |id: u8| verify_selected(&FixtureSet { determinism: false, ..fixtures.clone() }, &[id]);

    let lines = vec![
        run(1, "construction soundness", Some(secs(30)), || {
            from_suite(&single(1), 1).or_else(construction_oracle)
        }),
        run(2, "grading laws", Some(secs(60)), || from_suite(&single(2), 2).or_else(named_dims)),
        run(3, "galois descent", None, || from_suite(&single(3), 3)),
        run(4, "triviality witnesses", Some(secs(120)), || {
            toral_coverage(&fixtures).or_else(|| from_suite(&single(4), 4))
        }),
        run(5, "untwisting onto diagram automorphisms", None, || from_suite(&single(5), 5)),
        run(6, "classification", None, || from_suite(&single(6), 6)),
        run(7, "affine cartan matrices", None, || from_suite(&single(7), 7)),
        run(8, "determinism", None, || {
            let once = FixtureSet { determinism: false, ..fixtures.clone() };
            let a = verify_all(&once).to_json();
            let b = verify_all(&once).to_json();
            (a != b).then(|| "verify_all reports differ between runs".to_string())
        }),
    ];

    let mut ok = true;
    for l in &lines {
        let status = if l.failure.is_none() { "PASS" } else { "FAIL" };
        println!("criterion {}: {status}  {}  ({:.2}s)", l.id, l.name, l.elapsed.as_secs_f64());
        if let Some(f) = &l.failure {
            println!("    {f}");
            ok = false;
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
