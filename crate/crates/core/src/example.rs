//! Reproduction of the worked rank-3 example against frozen reference data.
//!
//! The reference values live in `data/example.json` and are never
//! regenerated by the code under test.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cc::CcMap;
use crate::cluster::ExchangeMatrix;
use crate::error::{Error, Result};
use crate::foundation::LaurentPoly;
use crate::report::Report;
use crate::tube::{parse_indec_list, MaximalRigid, Tube};

const FROZEN: &str = include_str!("../data/example.json");

/// One frozen value: `x^prefactor * sum coef x^exp = numerator / x^denominator`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrozenValue {
    pub rank: Vec<i64>,
    pub prefactor: Vec<i64>,
    pub expansion: Vec<(i64, Vec<i64>)>,
    pub numerator: String,
    pub denominator: Vec<i64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrozenExample {
    pub n: usize,
    pub b: Vec<Vec<i64>>,
    pub realizing_object: String,
    pub variables: Vec<FrozenValue>,
}

impl FrozenExample {
    pub fn load() -> Result<Self> {
        serde_json::from_str(FROZEN).map_err(|e| Error::Invariant(format!("frozen example data: {e}")))
    }

    /// The frozen value as a Laurent polynomial.
    pub fn value(&self, v: &FrozenValue) -> Result<LaurentPoly> {
        let num = LaurentPoly::parse_polynomial(self.n, &v.numerator)?;
        Ok(num.shift(&v.denominator.iter().map(|d| -d).collect::<Vec<_>>()))
    }
}

/// One reproduced value.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExampleRow {
    pub object: String,
    pub rank: Vec<i64>,
    pub coindex: Vec<i64>,
    pub fraction: String,
    pub denom: Vec<i64>,
    pub matches: bool,
}

/// Outcome of the reproduction.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExampleOutcome {
    pub rigid: String,
    pub b: Vec<Vec<i64>>,
    pub realizers: Vec<String>,
    pub rows: Vec<ExampleRow>,
    pub report: Report,
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// All labelled maximal rigid objects whose `B_T` equals `target`, in
/// canonical order. Labels are permuted with the long summand kept first.
pub fn realizing_objects(tube: &Tube, target: &ExchangeMatrix) -> Result<Vec<MaximalRigid>> {
    let n = tube.n();
    let tail: Vec<usize> = (1..n).collect();
    let mut out = Vec::new();
    for t in tube.enumerate_maximal_rigid() {
        let b = tube.b_matrix_triangles(&t)?;
        for p in permutations(&tail) {
            let mut p = p;
            p.insert(0, 0);
            if b.permuted(&p) == *target {
                let r = t.relabeled(&p)?;
                if tube.b_matrix_triangles(&r)? == *target {
                    out.push(r);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn expansion_poly(n: usize, terms: &[(i64, Vec<i64>)]) -> LaurentPoly {
    LaurentPoly::from_terms(
        n,
        terms.iter().map(|(c, e)| (e.iter().map(|&x| x as i32).collect(), BigInt::from(*c))),
    )
}

/// Compares every value of the map on rigid objects outside `add Sigma T`
/// with the frozen data for one realizing object.
fn compare(cm: &CcMap, frozen: &FrozenExample, r: &mut Report) -> Result<Vec<ExampleRow>> {
    let n = frozen.n;
    let mut rows = Vec::new();
    let mut seen = vec![0usize; frozen.variables.len()];
    for x in cm.tube().rigid_indecomposables() {
        if cm.category().shifted_summand(x).is_some() {
            continue;
        }
        let res = cm.cc(x)?;
        let idx = frozen.variables.iter().position(|v| v.rank == res.rank);
        let mut ok = r.check(idx.is_some(), || format!("{x}: no frozen value with rank {:?}", res.rank));
        if let Some(i) = idx {
            let v = &frozen.variables[i];
            seen[i] += 1;
            let expected = frozen.value(v)?;
            let neg_coind: Vec<i64> = res.coindex.iter().map(|c| -c).collect();
            let table = crate::grassmannian::chi_table(cm.category(), &res.module)?;
            let sum = LaurentPoly::from_terms(
                n,
                table.support().map(|(e, c)| {
                    (cm.b().apply(e).iter().map(|&x| x as i32).collect(), BigInt::from(c))
                }),
            );
            ok &= r.check(res.poly == expected, || {
                format!("{x}: value {} differs from {}", res.poly.to_fraction_string(), expected.to_fraction_string())
            });
            ok &= r.check(res.denom == v.denominator, || {
                format!("{x}: denominator {:?} differs from {:?}", res.denom, v.denominator)
            });
            ok &= r.check(neg_coind == v.prefactor, || {
                format!("{x}: prefactor {neg_coind:?} differs from {:?}", v.prefactor)
            });
            ok &= r.check(sum == expansion_poly(n, &v.expansion), || {
                format!("{x}: Grassmannian sum differs from the frozen expansion")
            });
        }
        rows.push(ExampleRow {
            object: x.to_string(),
            rank: res.rank.clone(),
            coindex: res.coindex.clone(),
            fraction: res.poly.to_fraction_string(),
            denom: res.denom.clone(),
            matches: ok,
        });
    }
    for (i, &c) in seen.iter().enumerate() {
        r.check(c == 1, || format!("frozen value {} matched {c} times", frozen.variables[i].numerator));
    }
    Ok(rows)
}

/// Locates the realizing objects, checks the frozen one is among them and
/// compares all values for each of them. Rows are reported for the frozen
/// object, ordered as in the frozen data.
pub fn reproduce_example() -> Result<ExampleOutcome> {
    let frozen = FrozenExample::load()?;
    let tube = Tube::new(frozen.n)?;
    let target = ExchangeMatrix::new(frozen.b.clone())?;
    let mut r = Report::new("worked example");
    let realizers = realizing_objects(&tube, &target)?;
    r.check(!realizers.is_empty(), || "no maximal rigid object realizes the frozen B".into());
    let stored = MaximalRigid::new(&tube, parse_indec_list(tube.rank(), &frozen.realizing_object)?)?;
    r.check(realizers.contains(&stored), || format!("frozen object {stored} does not realize B"));
    let cm = CcMap::new(&stored)?;
    r.check(*cm.b() == target, || format!("B of {stored} is {}", cm.b()));
    r.check(cm.category().b_matrix_euler()? == target, || "Euler-form B differs".into());
    let mut rows = compare(&cm, &frozen, &mut r)?;
    let order = |row: &ExampleRow| frozen.variables.iter().position(|v| v.rank == row.rank).unwrap_or(usize::MAX);
    rows.sort_by_key(|row| (order(row), row.object.clone()));
    for t in realizers.iter().filter(|t| **t != stored) {
        let other = CcMap::new(t)?;
        let mut sub = Report::new(format!("realizer {t}"));
        compare(&other, &frozen, &mut sub)?;
        r.merge(sub);
    }
    Ok(ExampleOutcome {
        rigid: stored.to_string(),
        b: frozen.b.clone(),
        realizers: realizers.iter().map(|t| t.to_string()).collect(),
        rows,
        report: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutations_are_complete() {
        let p = permutations(&[1, 2, 3]);
        assert_eq!(p.len(), 6);
        assert_eq!(p[0], vec![1, 2, 3]);
        assert_eq!(p[5], vec![3, 2, 1]);
    }

    #[test]
    fn frozen_data_parses() {
        let f = FrozenExample::load().unwrap();
        assert_eq!(f.variables.len(), 9);
        for v in &f.variables {
            let p = f.value(v).unwrap();
            assert_eq!(p.denominator_vector().unwrap(), v.denominator);
            // prefactor times expansion is the value
            let e = expansion_poly(f.n, &v.expansion).shift(&v.prefactor);
            assert_eq!(e, p, "{}", v.numerator);
        }
    }
}
