//! Batch verification over all (or representative) maximal rigid objects.

use serde::{Deserialize, Serialize};

use crate::amod::{verify_index_suite, ModuleCategory};
use crate::cc::{
    tau_orbit_representatives, verify_bijection, verify_denominators, verify_exchange_relations, CcMap,
};
use crate::endo::{b_matrix_arrows, build_endomorphism_algebra, gabriel_quiver, qn_violations, verify_relations};
use crate::error::Result;
use crate::grassmannian::{verify_ar_sequences, verify_oracle};
use crate::report::Report;
use crate::tube::{MaximalRigid, Tube};

/// Which maximal rigid objects a sweep covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scope {
    All,
    /// One object per orbit of the shift.
    Orbits,
}

pub fn objects(tube: &Tube, scope: Scope) -> Vec<MaximalRigid> {
    match scope {
        Scope::All => tube.enumerate_maximal_rigid(),
        Scope::Orbits => tau_orbit_representatives(tube),
    }
}

/// The Gabriel quiver of `End(T)` lies in the quiver class with exactly
/// one loop, and the defining relations hold in the multiplication table.
pub fn verify_quiver(tube: &Tube, t: &MaximalRigid) -> Result<Report> {
    let mut r = Report::new(format!("quiver of {t}"));
    let alg = build_endomorphism_algebra(tube, t)?;
    let q = gabriel_quiver(&alg);
    let bad = qn_violations(&q);
    r.check(bad.is_empty(), || format!("quiver {q} violates {bad:?}"));
    r.check(q.loops().len() == 1, || format!("quiver {q} has {} loops", q.loops().len()));
    r.attempt("relations", verify_relations(&alg, &q));
    Ok(r)
}

/// The three descriptions of `B_T` agree, and `B_T` is compatible with
/// mutation at every summand.
pub fn verify_b_matrices(tube: &Tube, t: &MaximalRigid) -> Result<Report> {
    let mut r = Report::new(format!("exchange matrix of {t}"));
    let alg = build_endomorphism_algebra(tube, t)?;
    let q = gabriel_quiver(&alg);
    let b = tube.b_matrix_triangles(t)?;
    let ba = b_matrix_arrows(&q)?;
    r.check(b == ba, || format!("triangle B {b} differs from arrow B {ba}"));
    if let Some(mc) = r.attempt("module category", ModuleCategory::new(t)) {
        let be = mc.b_matrix_euler()?;
        r.check(b == be, || format!("triangle B {b} differs from Euler B {be}"));
    }
    for k in 0..t.n() {
        let mu = tube.mutate_rigid(t, k)?;
        let lhs = tube.b_matrix_triangles(&mu.result)?;
        let rhs = b.mutate(k + 1)?;
        r.check(lhs == rhs, || format!("B of the mutation at {} is {lhs}, mutated B is {rhs}", k + 1));
    }
    Ok(r)
}

/// Which suites a sweep runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suites {
    pub structure: bool,
    pub bijection: bool,
    pub denominators: bool,
    pub exchange: bool,
    pub index: bool,
    pub ar: bool,
    pub oracle: bool,
}

impl Suites {
    pub fn all(oracle: bool) -> Self {
        Suites {
            structure: true,
            bijection: true,
            denominators: true,
            exchange: true,
            index: true,
            ar: true,
            oracle,
        }
    }

    pub fn none() -> Self {
        Suites {
            structure: false,
            bijection: false,
            denominators: false,
            exchange: false,
            index: false,
            ar: false,
            oracle: false,
        }
    }
}

/// Runs the selected suites on one object.
pub fn verify_object(tube: &Tube, t: &MaximalRigid, suites: Suites, cap: usize) -> Result<Vec<Report>> {
    let mut out = Vec::new();
    if suites.structure {
        out.push(verify_quiver(tube, t)?);
        out.push(verify_b_matrices(tube, t)?);
    }
    let needs_cc = suites.bijection || suites.denominators || suites.exchange;
    let needs_mc = suites.index || suites.ar || suites.oracle;
    if needs_cc {
        let cm = CcMap::new(t)?;
        if suites.bijection {
            out.push(verify_bijection(&cm, cap)?.0);
        }
        if suites.denominators {
            out.push(verify_denominators(&cm)?);
        }
        if suites.exchange {
            out.push(verify_exchange_relations(&cm)?);
        }
    }
    if needs_mc {
        let mc = ModuleCategory::new(t)?;
        if suites.index {
            out.push(verify_index_suite(&mc)?);
        }
        if suites.ar {
            out.push(verify_ar_sequences(&mc)?);
        }
        if suites.oracle {
            out.push(verify_oracle(&mc)?);
        }
    }
    Ok(out)
}

/// Runs the selected suites over a sweep and folds the results per suite.
pub fn verify_sweep(n: usize, scope: Scope, suites: Suites, cap: usize) -> Result<Vec<Report>> {
    let tube = Tube::new(n)?;
    let mut totals: Vec<Report> = Vec::new();
    for t in objects(&tube, scope) {
        for rep in verify_object(&tube, &t, suites, cap)? {
            let key = rep.name.split(" for ").next().unwrap_or(&rep.name).split(" of ").next().unwrap_or("").to_string();
            let pos = match totals.iter().position(|x| x.name == key) {
                Some(p) => p,
                None => {
                    totals.push(Report::new(key.clone()));
                    totals.len() - 1
                }
            };
            let checks = rep.checks;
            let name = rep.name.clone();
            totals[pos].checks += checks;
            totals[pos].failures.extend(rep.failures.into_iter().map(|f| format!("{name}: {f}")));
        }
    }
    for r in &mut totals {
        r.name = format!("{} (n={n})", r.name);
    }
    Ok(totals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_holds_for_rank_three() {
        let tube = Tube::new(2).unwrap();
        for t in tube.enumerate_maximal_rigid() {
            for r in [verify_quiver(&tube, &t).unwrap(), verify_b_matrices(&tube, &t).unwrap()] {
                assert!(r.passed(), "{:?}", r.failures);
            }
        }
    }

    #[test]
    fn orbit_representatives_are_fewer() {
        let tube = Tube::new(3).unwrap();
        let all = objects(&tube, Scope::All).len();
        let reps = objects(&tube, Scope::Orbits).len();
        assert_eq!(all, reps * tube.rank());
    }
}
