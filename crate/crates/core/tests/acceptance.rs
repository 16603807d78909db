//! Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use clustertube::cc::{verify_bijection, verify_denominators, verify_exchange_relations, CcMap};
use clustertube::cluster::DEFAULT_CAP;
use clustertube::example::reproduce_example;
use clustertube::report::Report;
use clustertube::tube::{MaximalRigid, Tube};
use clustertube::verify::{objects, verify_b_matrices, verify_quiver, Scope};
use clustertube::{amod, grassmannian, Result};

/// Runs `f` on every object of each `(n, scope)` sweep and folds the reports.
fn sweep<F>(name: &str, cases: &[(usize, Scope)], f: F) -> Result<Report>
where
    F: Fn(&Tube, &MaximalRigid) -> Result<Report>,
{
    let mut total = Report::new(name);
    for &(n, scope) in cases {
        let tube = Tube::new(n)?;
        for t in objects(&tube, scope) {
            total.merge(f(&tube, &t)?);
        }
    }
    Ok(total)
}

/// Objects of the bijection sweep: every object for rank 3, 4 and 5,
/// and one per orbit for rank 6.
const BIJECTION_CASES: &[(usize, Scope)] = &[(2, Scope::All), (3, Scope::All), (4, Scope::All), (5, Scope::Orbits)];

fn upto(max: usize) -> Vec<(usize, Scope)> {
    (2..=max).map(|n| (n, Scope::All)).collect()
}

fn criterion(id: usize, title: &str, run: impl FnOnce() -> Result<Report>) -> bool {
    let start = Instant::now();
    let outcome = run();
    let elapsed = start.elapsed();
    let (ok, detail) = match &outcome {
        Ok(r) => (r.passed(), format!("{} checks, {} failures", r.checks, r.failures.len())),
        Err(e) => (false, format!("error: {e}")),
    };
    println!(
        "criterion {id}: {} {title} ({detail}, {:.2}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    if let Ok(r) = &outcome {
        for f in r.failures.iter().take(10) {
            println!("    {f}");
        }
    }
    ok
}

fn main() -> ExitCode {
    let results = [
        criterion(1, "worked rank-3 example reproduced exactly", || {
            let start = Instant::now();
            let o = reproduce_example()?;
            let mut r = o.report;
            r.check(o.rows.len() == 9, || format!("{} values, expected 9", o.rows.len()));
            let took = start.elapsed();
            r.check(took < Duration::from_secs(10), || format!("took {took:?}"));
            Ok(r)
        }),
        criterion(2, "values on rigid objects are exactly the cluster variables", || {
            sweep("bijection", BIJECTION_CASES, |_, t| Ok(verify_bijection(&CcMap::new(t)?, DEFAULT_CAP)?.0))
        }),
        criterion(3, "denominator vectors equal rank vectors", || {
            sweep("denominators", BIJECTION_CASES, |_, t| verify_denominators(&CcMap::new(t)?))
        }),
        criterion(4, "exchange-relation identities", || {
            sweep("exchange relations", &upto(4), |_, t| verify_exchange_relations(&CcMap::new(t)?))
        }),
        criterion(5, "matrix mutation compatibility and agreement of the three B_T", || {
            sweep("exchange matrices", &upto(4), verify_b_matrices)
        }),
        criterion(6, "coordinate counting agrees with the point-count oracle", || {
            sweep("oracle", &upto(3), |_, t| grassmannian::verify_oracle(&amod::ModuleCategory::new(t)?))
        }),
        criterion(7, "index and coindex identities", || {
            sweep("index suite", &upto(4), |_, t| amod::verify_index_suite(&amod::ModuleCategory::new(t)?))
        }),
        criterion(8, "recursion on AR sequences", || {
            sweep("AR recursion", &upto(4), |_, t| grassmannian::verify_ar_sequences(&amod::ModuleCategory::new(t)?))
        }),
        criterion(9, "quiver class, single loop and relations", || sweep("quivers", &upto(5), verify_quiver)),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
