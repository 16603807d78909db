//! The Caldero-Chapoton map and its verification against cluster variables.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::amod::{AModule, ModuleCategory};
use crate::cluster::{enumerate_atlas, exchange_binomial, ExchangeMatrix};
use crate::error::{Error, Result};
use crate::foundation::LaurentPoly;
use crate::grassmannian::{chi_table_sum, ChiTable};
use crate::report::Report;
use crate::tube::{Indec, MaximalRigid, Tube};

/// Value of the map on one object, with the data it was assembled from.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CcResult {
    pub object: String,
    pub module: AModule,
    pub coindex: Vec<i64>,
    pub rank: Vec<i64>,
    pub poly: LaurentPoly,
    pub denom: Vec<i64>,
}

/// `x^{-coind} sum_e chi(e) x^{B e}`.
pub fn cc_formula(b: &ExchangeMatrix, coindex: &[i64], table: &ChiTable) -> LaurentPoly {
    let n = b.n();
    LaurentPoly::from_terms(
        n,
        table.support().map(|(e, c)| {
            let be = b.apply(e);
            let exp = be.iter().zip(coindex).map(|(x, ci)| (x - ci) as i32).collect();
            (exp, BigInt::from(c))
        }),
    )
}

/// The map `X -> X^T_X` for a fixed maximal rigid `T`, with memoization.
#[derive(Debug)]
pub struct CcMap {
    mc: ModuleCategory,
    b: ExchangeMatrix,
    cache: Mutex<HashMap<Indec, CcResult>>,
}

impl CcMap {
    pub fn new(t: &MaximalRigid) -> Result<Self> {
        let mc = ModuleCategory::new(t)?;
        let b = mc.tube().b_matrix_triangles(t)?;
        Ok(CcMap {
            mc,
            b,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn category(&self) -> &ModuleCategory {
        &self.mc
    }

    pub fn tube(&self) -> &Tube {
        self.mc.tube()
    }

    pub fn rigid(&self) -> &MaximalRigid {
        self.mc.rigid()
    }

    pub fn b(&self) -> &ExchangeMatrix {
        &self.b
    }

    pub fn n(&self) -> usize {
        self.mc.n()
    }

    /// Object `(a,b)` in the frame where the long summand is `(1,n)`.
    pub fn normalized(&self, a: i64, b: usize) -> Indec {
        self.tube().indec(a, b).tau_pow(-self.mc.normalizing_shift())
    }

    /// Index of the long summand.
    pub fn long_index(&self) -> usize {
        let t = self.rigid();
        t.position(t.long_summand()).expect("long summand")
    }

    /// Value on an indecomposable rigid object or a shifted summand.
    pub fn cc(&self, x: Indec) -> Result<CcResult> {
        if !x.is_rigid() && self.mc.shifted_summand(x).is_none() {
            return Err(Error::Domain(format!("{x} is neither rigid nor a shifted summand")));
        }
        self.cc_general(x)
    }

    /// Value on any indecomposable in `pr T` and `pr Sigma T` whose image
    /// under `F` is locally free.
    pub fn cc_general(&self, x: Indec) -> Result<CcResult> {
        if let Some(r) = self.cache.lock().expect("cache").get(&x) {
            return Ok(r.clone());
        }
        let n = self.n();
        let r = if let Some(i) = self.mc.shifted_summand(x) {
            let poly = LaurentPoly::var(n, i);
            let denom = poly.denominator_vector()?;
            let mut coindex = vec![0; n];
            coindex[i] = -1;
            CcResult {
                object: x.to_string(),
                module: self.mc.zero_module(),
                coindex,
                rank: vec![0; n],
                poly,
                denom,
            }
        } else {
            if !(self.mc.in_pr_t(x) && self.mc.in_pr_sigma_t(x)) {
                return Err(Error::Domain(format!("{x} is outside pr T and pr Sigma T")));
            }
            let module = self.mc.apply_f(x)?;
            let rank = self.mc.rank_vector(&module)?;
            let coindex = self.mc.coindex(x)?;
            let table = chi_table_sum(&self.mc, std::slice::from_ref(&module))?;
            let poly = cc_formula(&self.b, &coindex, &table);
            let denom = poly.denominator_vector()?;
            CcResult {
                object: x.to_string(),
                module,
                coindex,
                rank,
                poly,
                denom,
            }
        };
        self.cache.lock().expect("cache").insert(x, r.clone());
        Ok(r)
    }

    /// Value on a direct sum, computed from the sum itself (coindex of the
    /// sum and the table of `F` of the sum), not as a product.
    pub fn cc_sum(&self, xs: &[Indec]) -> Result<LaurentPoly> {
        let coindex = self.mc.coindex_sum(xs)?;
        let parts = xs
            .iter()
            .filter(|&&x| self.mc.shifted_summand(x).is_none())
            .map(|&x| self.mc.apply_f(x))
            .collect::<Result<Vec<_>>>()?;
        let table = chi_table_sum(&self.mc, &parts)?;
        Ok(cc_formula(&self.b, &coindex, &table))
    }

    /// Product of the values on the summands; the zero object gives 1.
    pub fn product(&self, xs: &[Indec]) -> Result<LaurentPoly> {
        xs.iter()
            .try_fold(LaurentPoly::one(self.n()), |acc, &x| Ok(acc.mul(&self.cc_general(x)?.poly)))
    }
}

/// One line of the bijection report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObjectRow {
    pub object: String,
    pub rank: Vec<i64>,
    pub coindex: Vec<i64>,
    pub poly: String,
    pub fraction: String,
    pub denom: Vec<i64>,
    pub matched_variable: Option<usize>,
}

impl ObjectRow {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "object": self.object,
            "rank": self.rank,
            "coindex": self.coindex,
            "poly": self.poly,
            "fraction": self.fraction,
            "denom": self.denom,
            "matched_variable": self.matched_variable,
        })
    }
}

/// Values on all indecomposable rigid objects against the cluster variables
/// of `B_T`: shifted summands go to the initial variables, the image is the
/// full variable set, and the map is injective.
pub fn verify_bijection(cm: &CcMap, cap: usize) -> Result<(Report, Vec<ObjectRow>)> {
    let mut r = Report::new(format!("bijection for {}", cm.rigid()));
    let atlas = enumerate_atlas(cm.b(), cap)?;
    let n = cm.n();
    let mut rows = Vec::new();
    let mut images: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for x in cm.tube().rigid_indecomposables() {
        let Some(res) = r.attempt(&format!("value at {x}"), cm.cc(x)) else { continue };
        let text = res.poly.to_canonical_text();
        let matched = atlas.variables.iter().position(|v| *v == res.poly);
        r.check(matched.is_some(), || format!("{x} maps to {} which is not a cluster variable", res.poly.to_fraction_string()));
        if let Some(i) = cm.category().shifted_summand(x) {
            r.check(res.poly == LaurentPoly::var(n, i), || format!("{x} does not map to x{}", i + 1));
        }
        images.entry(text).or_default().push(x.to_string());
        rows.push(ObjectRow {
            object: x.to_string(),
            rank: res.rank,
            coindex: res.coindex,
            poly: res.poly.to_canonical_text(),
            fraction: res.poly.to_fraction_string(),
            denom: res.denom,
            matched_variable: matched,
        });
    }
    for (text, objs) in &images {
        r.check(objs.len() == 1, || format!("{} objects share the value {text}", objs.join(", ")));
    }
    let hit: BTreeSet<usize> = rows.iter().filter_map(|row| row.matched_variable).collect();
    r.check(hit.len() == atlas.variables.len(), || {
        format!("{} of {} cluster variables are values", hit.len(), atlas.variables.len())
    });
    r.check(rows.len() == n * (n + 1), || format!("{} rigid objects, expected {}", rows.len(), n * (n + 1)));
    Ok((r, rows))
}

/// Denominator vectors of values on rigid objects outside `add Sigma T`
/// equal the rank vectors of their images under `F`.
pub fn verify_denominators(cm: &CcMap) -> Result<Report> {
    let mut r = Report::new(format!("denominators for {}", cm.rigid()));
    for x in cm.tube().rigid_indecomposables() {
        if cm.category().shifted_summand(x).is_some() {
            continue;
        }
        let res = cm.cc(x)?;
        let rigid = cm.category().is_tau_rigid(&res.module)?;
        r.check(rigid, || format!("F{x} is not tau-rigid"));
        r.check(res.denom == res.rank, || {
            format!("denominator of the value at {x} is {:?}, rank {:?}", res.denom, res.rank)
        });
    }
    Ok(r)
}

fn check_identity(r: &mut Report, label: String, lhs: LaurentPoly, rhs: LaurentPoly) {
    r.check(lhs == rhs, || {
        format!("{label}: {} != {}", lhs.to_fraction_string(), rhs.to_fraction_string())
    });
}

/// The exchange identities for the long summand, for adjacent objects of
/// length `n`, and for shorter adjacent objects; the collapse of length
/// `n+1` objects; the mutation walk covering all rigid objects; and the
/// exchange relation on every mutation of every maximal rigid object.
pub fn verify_exchange_relations(cm: &CcMap) -> Result<Report> {
    let mut r = Report::new(format!("exchange relations for {}", cm.rigid()));
    let n = cm.n();
    let nn = n as i64;
    let one = LaurentPoly::one(n);
    let at = |a: i64, b: usize| cm.normalized(a, b);
    let val = |x: Indec| cm.cc_general(x).map(|c| c.poly);

    // long summand and its shift
    let x1 = LaurentPoly::var(n, cm.long_index());
    check_identity(
        &mut r,
        "shifted long summand times (1,n)".into(),
        x1.mul(&val(at(1, n))?),
        one.add(&val(at(1, n - 1))?.pow(2)),
    );
    check_identity(
        &mut r,
        "shifted long summand times (n,n)".into(),
        x1.mul(&val(at(nn, n))?),
        one.add(&val(at(nn + 1, n - 1))?.pow(2)),
    );
    // adjacent objects of length n
    for c in 1..nn {
        check_identity(
            &mut r,
            format!("({c},n)({},n)", c + 1),
            val(at(c, n))?.mul(&val(at(c + 1, n))?),
            one.add(&val(at(c + 1, n - 1))?.pow(2)),
        );
    }
    // shorter adjacent objects
    for a in 1..=nn + 1 {
        for b in 1..n {
            let shorter = if b == 1 { one.clone() } else { val(at(a + 1, b - 1))? };
            check_identity(
                &mut r,
                format!("({a},{b})({},{b})", a + 1),
                val(at(a, b))?.mul(&val(at(a + 1, b))?),
                one.add(&shorter.mul(&val(at(a, b + 1))?)),
            );
        }
    }
    // length n+1 collapses onto length n-1
    for i in 1..nn {
        let long = cm.cc_general(at(i, n + 1))?;
        let short = cm.cc(at(i + 1, n - 1))?;
        r.check(long.coindex == short.coindex, || format!("coindex of ({i},n+1) differs from ({},n-1)", i + 1));
        check_identity(&mut r, format!("({i},n+1) vs ({},n-1)", i + 1), long.poly, short.poly);
    }
    verify_walk(cm, &mut r)?;
    verify_exchange_compatibility(cm, &mut r)?;
    Ok(r)
}

/// Summands of the `i`-th object on the walk, in the normalized frame.
pub fn walk_object(n: usize, i: usize) -> Vec<(i64, usize)> {
    let (a, b) = ((i / n) as i64, i % n);
    (1..=b).map(|j| (a + 1, j)).chain((b + 1..=n).map(|j| (a, j))).collect()
}

fn verify_walk(cm: &CcMap, r: &mut Report) -> Result<()> {
    let n = cm.n();
    let tube = cm.tube();
    let mut seen: BTreeSet<Indec> = BTreeSet::new();
    let objects: Vec<Vec<Indec>> = (0..=n * n)
        .map(|i| walk_object(n, i).into_iter().map(|(a, b)| cm.normalized(a, b)).collect())
        .collect();
    for w in objects.windows(2) {
        let t = MaximalRigid::new(tube, w[0].clone())?;
        let (prev, next) = (&t.summands().to_vec(), &w[1]);
        let removed: Vec<usize> = (0..n).filter(|&k| !next.contains(&prev[k])).collect();
        let added: Vec<Indec> = next.iter().copied().filter(|x| !prev.contains(x)).collect();
        if !r.check(removed.len() == 1 && added.len() == 1, || format!("walk step {prev:?} -> {next:?} is not a mutation")) {
            continue;
        }
        let k = removed[0];
        let mu = tube.mutate_rigid(&t, k)?;
        r.check(mu.new == added[0], || format!("walk step at {} does not follow mutation", prev[k]));
        let values = prev.iter().map(|&x| cm.cc(x).map(|c| c.poly)).collect::<Result<Vec<_>>>()?;
        let b = tube.b_matrix_triangles(&t)?;
        check_identity(
            r,
            format!("walk exchange {} -> {}", prev[k], added[0]),
            values[k].mul(&cm.cc(added[0])?.poly),
            exchange_binomial(&b, k, &values),
        );
        seen.extend(prev.iter().copied());
        seen.extend(next.iter().copied());
    }
    r.check(seen.len() == n * (n + 1), || format!("walk covers {} of {} rigid objects", seen.len(), n * (n + 1)));
    Ok(())
}

fn verify_exchange_compatibility(cm: &CcMap, r: &mut Report) -> Result<()> {
    let tube = cm.tube();
    for t in tube.enumerate_maximal_rigid() {
        let values = t.summands().iter().map(|&x| cm.cc(x).map(|c| c.poly)).collect::<Result<Vec<_>>>()?;
        let b = tube.b_matrix_triangles(&t)?;
        for k in 0..cm.n() {
            let mu = tube.mutate_rigid(&t, k)?;
            check_identity(
                r,
                format!("exchange of {} in {t}", mu.old),
                values[k].mul(&cm.cc(mu.new)?.poly),
                exchange_binomial(&b, k, &values),
            );
        }
    }
    Ok(())
}

/// Values on direct sums of compatible rigid objects equal the products of
/// the values on the summands.
pub fn verify_multiplicativity(cm: &CcMap, pairs: &[(Indec, Indec)]) -> Result<Report> {
    let mut r = Report::new(format!("multiplicativity for {}", cm.rigid()));
    for &(x, y) in pairs {
        let lhs = cm.cc_sum(&[x, y])?;
        let rhs = cm.product(&[x, y])?;
        check_identity(&mut r, format!("{x}+{y}"), lhs, rhs);
    }
    Ok(r)
}

/// One maximal rigid object per orbit of the shift.
pub fn tau_orbit_representatives(tube: &Tube) -> Vec<MaximalRigid> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in tube.enumerate_maximal_rigid() {
        let key = (0..tube.rank() as i64).map(|k| t.tau_pow(k).canonical()).min().expect("nonempty");
        if seen.insert(key) {
            out.push(t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walk_endpoints() {
        assert_eq!(walk_object(3, 0), vec![(0, 1), (0, 2), (0, 3)]);
        assert_eq!(walk_object(3, 3), vec![(1, 1), (1, 2), (1, 3)]);
        assert_eq!(walk_object(3, 4), vec![(2, 1), (1, 2), (1, 3)]);
    }

    #[test]
    fn shifted_summands_map_to_initial_variables() {
        let tube = Tube::new(2).unwrap();
        let t = tube.enumerate_maximal_rigid().remove(0);
        let cm = CcMap::new(&t).unwrap();
        for (i, &ti) in t.summands().iter().enumerate() {
            assert_eq!(cm.cc(ti.tau()).unwrap().poly, LaurentPoly::var(2, i));
        }
    }

    #[test]
    fn nonrigid_objects_are_rejected() {
        let tube = Tube::new(2).unwrap();
        let t = tube.enumerate_maximal_rigid().remove(0);
        let cm = CcMap::new(&t).unwrap();
        assert!(cm.cc(tube.indec(1, 3)).is_err());
    }
}
