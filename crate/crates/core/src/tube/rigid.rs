use std::fmt;

use serde::{Deserialize, Serialize};

use super::{CHom, Indec, Tube};
use crate::cluster::ExchangeMatrix;
use crate::error::{Error, Result};
use crate::foundation::{EchelonSpan, Rational};

/// Basic maximal rigid object: `n` indecomposables, the long summand first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MaximalRigid {
    summands: Vec<Indec>,
}

impl MaximalRigid {
    /// Validates maximal rigidity; moves the long summand to the front and
    /// keeps the relative order of the others.
    pub fn new(tube: &Tube, summands: Vec<Indec>) -> Result<Self> {
        let n = tube.n();
        if summands.len() != n {
            return Err(Error::InvalidObject(format!(
                "expected {n} summands, got {}",
                summands.len()
            )));
        }
        if summands.iter().any(|x| x.rank() != tube.rank()) {
            return Err(Error::InvalidObject("summand from a tube of another rank".into()));
        }
        let long: Vec<usize> = (0..n).filter(|&i| summands[i].b() == n).collect();
        if long.len() != 1 {
            return Err(Error::InvalidObject("need exactly one summand of length n".into()));
        }
        if !tube.is_rigid_set(&summands) {
            return Err(Error::InvalidObject("summands are not pairwise Ext-orthogonal".into()));
        }
        let mut ordered = vec![summands[long[0]]];
        ordered.extend(summands.iter().enumerate().filter(|(i, _)| *i != long[0]).map(|(_, x)| *x));
        if !ordered.iter().all(|x| x.in_wing_of(&ordered[0])) {
            return Err(Error::Invariant("summand outside the wing of the long summand".into()));
        }
        let t = MaximalRigid { summands: ordered };
        if let Some(x) = tube
            .rigid_indecomposables()
            .into_iter()
            .find(|x| !t.summands.contains(x) && t.summands.iter().all(|&y| tube.ext1_c_dim(*x, y) == 0 && tube.ext1_c_dim(y, *x) == 0))
        {
            return Err(Error::InvalidObject(format!("not maximal: {x} can be added")));
        }
        Ok(t)
    }

    pub fn summands(&self) -> &[Indec] {
        &self.summands
    }

    pub fn n(&self) -> usize {
        self.summands.len()
    }

    pub fn long_summand(&self) -> Indec {
        self.summands[0]
    }

    pub fn position(&self, x: Indec) -> Option<usize> {
        self.summands.iter().position(|&y| y == x)
    }

    pub fn contains(&self, x: Indec) -> bool {
        self.position(x).is_some()
    }

    /// Long summand first, the rest sorted.
    pub fn canonical(&self) -> Self {
        let mut rest = self.summands[1..].to_vec();
        rest.sort();
        let mut s = vec![self.summands[0]];
        s.extend(rest);
        MaximalRigid { summands: s }
    }

    /// Same object with summands relabeled: `new[i] = old[p[i]]`.
    /// The long summand must stay first.
    pub fn relabeled(&self, p: &[usize]) -> Result<Self> {
        if p.first() != Some(&0) {
            return Err(Error::InvalidObject("relabeling must fix the long summand".into()));
        }
        Ok(MaximalRigid {
            summands: p.iter().map(|&i| self.summands[i]).collect(),
        })
    }

    /// Shift every summand by `tau^k`.
    pub fn tau_pow(&self, k: i64) -> Self {
        MaximalRigid {
            summands: self.summands.iter().map(|x| x.tau_pow(k)).collect(),
        }
    }

    /// Shifted summands `Sigma T_i = tau T_i`.
    pub fn shifted(&self) -> Vec<Indec> {
        self.summands.iter().map(|x| x.tau()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "summands": self.summands.iter().map(|x| [x.a(), x.b()]).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for MaximalRigid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.summands.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("+"))
    }
}

/// Result of mutating a maximal rigid object at one summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mutation {
    pub result: MaximalRigid,
    pub old: Indec,
    pub new: Indec,
    /// Middle term of `T_k^* -> U -> T_k`, the minimal right approximation.
    pub u: Vec<Indec>,
    /// Middle term of `T_k -> U' -> T_k^*`, the minimal left approximation.
    pub u_prime: Vec<Indec>,
}

/// Approximation summand: which object of the list and the chosen morphism.
#[derive(Clone, Debug)]
pub struct ApproxComponent {
    pub index: usize,
    pub morphism: CHom,
}

impl Tube {
    /// Radical basis of `Hom(x, y)` inside `add` of distinct indecomposables.
    fn radical_basis(&self, x: Indec, y: Indec) -> Result<Vec<CHom>> {
        let h = self.hom_space(x, y);
        if x != y {
            return Ok(h.basis());
        }
        if h.dim_t() != 1 {
            return Err(Error::Invariant(format!("End_T{x} is not one-dimensional")));
        }
        Ok(h.basis().into_iter().skip(1).collect())
    }

    /// Minimal right `add(list)`-approximation of `y`: for each list entry,
    /// a basis of `Hom(list_i, y)` modulo maps factoring through radical maps.
    pub fn right_approximation(&self, list: &[Indec], y: Indec) -> Result<Vec<ApproxComponent>> {
        let mut out = Vec::new();
        for (i, &ti) in list.iter().enumerate() {
            let h = self.hom_space(ti, y);
            let mut span = EchelonSpan::new(h.dim());
            for &tj in list {
                let rads = self.radical_basis(ti, tj)?;
                if rads.is_empty() {
                    continue;
                }
                for phi in self.hom_space(tj, y).basis() {
                    for r in &rads {
                        span.insert(&h.coords(&self.compose(&phi, r, ti, y)));
                    }
                }
            }
            for (k, b) in h.basis().into_iter().enumerate() {
                let mut e = vec![Rational::from_integer(0.into()); h.dim()];
                e[k] = Rational::from_integer(1.into());
                if span.insert(&e) {
                    out.push(ApproxComponent { index: i, morphism: b });
                }
            }
        }
        Ok(out)
    }

    /// Minimal left `add(list)`-approximation of `x`.
    pub fn left_approximation(&self, x: Indec, list: &[Indec]) -> Result<Vec<ApproxComponent>> {
        let mut out = Vec::new();
        for (i, &ti) in list.iter().enumerate() {
            let h = self.hom_space(x, ti);
            let mut span = EchelonSpan::new(h.dim());
            for &tj in list {
                let rads = self.radical_basis(tj, ti)?;
                if rads.is_empty() {
                    continue;
                }
                for phi in self.hom_space(x, tj).basis() {
                    for r in &rads {
                        span.insert(&h.coords(&self.compose(r, &phi, x, ti)));
                    }
                }
            }
            for (k, b) in h.basis().into_iter().enumerate() {
                let mut e = vec![Rational::from_integer(0.into()); h.dim()];
                e[k] = Rational::from_integer(1.into());
                if span.insert(&e) {
                    out.push(ApproxComponent { index: i, morphism: b });
                }
            }
        }
        Ok(out)
    }

    /// All basic maximal rigid objects, long summand first, others sorted.
    pub fn enumerate_maximal_rigid(&self) -> Vec<MaximalRigid> {
        let n = self.n;
        let rigids = self.rigid_indecomposables();
        let mut out = Vec::new();
        for a in 1..=self.rank() {
            let long = self.indec(a as i64, n);
            let cands: Vec<Indec> = rigids
                .iter()
                .copied()
                .filter(|x| *x != long && x.in_wing_of(&long) && self.compatible(*x, long))
                .collect();
            let mut chosen = Vec::new();
            self.extend_rigid(&cands, 0, &mut chosen, n - 1, &mut |c| {
                let mut s = vec![long];
                s.extend(c.iter().copied());
                let maximal = !rigids
                    .iter()
                    .any(|x| !s.contains(x) && s.iter().all(|&y| self.compatible(*x, y)));
                if maximal {
                    out.push(MaximalRigid { summands: s }.canonical());
                }
            });
        }
        out.sort();
        out
    }

    fn compatible(&self, x: Indec, y: Indec) -> bool {
        self.ext1_c_dim(x, y) == 0 && self.ext1_c_dim(y, x) == 0
    }

    fn extend_rigid(
        &self,
        cands: &[Indec],
        start: usize,
        chosen: &mut Vec<Indec>,
        need: usize,
        emit: &mut dyn FnMut(&[Indec]),
    ) {
        if chosen.len() == need {
            emit(chosen);
            return;
        }
        for i in start..cands.len() {
            let x = cands[i];
            if chosen.iter().all(|&y| self.compatible(x, y)) {
                chosen.push(x);
                self.extend_rigid(cands, i + 1, chosen, need, emit);
                chosen.pop();
            }
        }
    }

    /// Mutation at the summand with zero-based label `k`; labels are kept.
    pub fn mutate_rigid(&self, t: &MaximalRigid, k: usize) -> Result<Mutation> {
        let n = t.n();
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k + 1, n });
        }
        let old = t.summands[k];
        let rest: Vec<Indec> = t.summands.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| *x).collect();
        let completions: Vec<Indec> = self
            .rigid_indecomposables()
            .into_iter()
            .filter(|x| *x != old && !rest.contains(x) && rest.iter().all(|&y| self.compatible(*x, y)))
            .collect();
        if completions.len() != 1 {
            return Err(Error::Invariant(format!(
                "{} completions of the almost complete object at {old}",
                completions.len()
            )));
        }
        let new = completions[0];
        let mut summands = t.summands.clone();
        summands[k] = new;
        let u = self.right_approximation(&rest, old)?;
        let up = self.left_approximation(old, &rest)?;
        let mut u: Vec<Indec> = u.iter().map(|c| rest[c.index]).collect();
        let mut u_prime: Vec<Indec> = up.iter().map(|c| rest[c.index]).collect();
        u.sort();
        u_prime.sort();
        Ok(Mutation {
            result: MaximalRigid { summands },
            old,
            new,
            u,
            u_prime,
        })
    }

    /// `B_T` from exchange-triangle multiplicities:
    /// `b_ij = mult(T_i, U_j) - mult(T_i, U'_j)`.
    pub fn b_matrix_triangles(&self, t: &MaximalRigid) -> Result<ExchangeMatrix> {
        let n = t.n();
        let mut b = vec![vec![0i64; n]; n];
        for j in 0..n {
            let m = self.mutate_rigid(t, j)?;
            for i in 0..n {
                let x = t.summands[i];
                b[i][j] = m.u.iter().filter(|&&y| y == x).count() as i64
                    - m.u_prime.iter().filter(|&&y| y == x).count() as i64;
            }
        }
        ExchangeMatrix::new(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(tube: &Tube) -> MaximalRigid {
        let n = tube.n();
        let s = (1..=n).rev().map(|b| tube.indec(1, b)).collect();
        MaximalRigid::new(tube, s).unwrap()
    }

    #[test]
    fn counts_of_maximal_rigid_objects() {
        for (n, count) in [(2, 6), (3, 20), (4, 70)] {
            assert_eq!(Tube::new(n).unwrap().enumerate_maximal_rigid().len(), count, "n = {n}");
        }
    }

    #[test]
    fn linear_object_is_maximal_rigid() {
        let tube = Tube::new(3).unwrap();
        let t = linear(&tube);
        assert_eq!(t.to_string(), "(1,3)+(1,2)+(1,1)");
    }

    #[test]
    fn exchange_at_long_summand() {
        let tube = Tube::new(3).unwrap();
        let t = linear(&tube);
        let m = tube.mutate_rigid(&t, 0).unwrap();
        assert_eq!(m.new, tube.indec(4, 3));
        assert_eq!(m.u, vec![tube.indec(1, 2), tube.indec(1, 2)]);
        assert!(m.u_prime.is_empty());
    }

    #[test]
    fn mutation_is_involutive() {
        let tube = Tube::new(3).unwrap();
        for t in tube.enumerate_maximal_rigid() {
            for k in 0..3 {
                let m = tube.mutate_rigid(&t, k).unwrap();
                let back = tube.mutate_rigid(&m.result, k).unwrap();
                assert_eq!(back.result, t);
                assert_eq!(back.u, m.u_prime);
            }
        }
    }

    #[test]
    fn rejects_non_maximal_sets() {
        let tube = Tube::new(3).unwrap();
        let s = vec![tube.indec(1, 3), tube.indec(1, 1), tube.indec(2, 1)];
        assert!(MaximalRigid::new(&tube, s).is_err());
    }
}
