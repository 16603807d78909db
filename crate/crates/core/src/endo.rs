//! The endomorphism algebra of a maximal rigid object, its Gabriel quiver,
//! and the combinatorial class of quivers these algebras have.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cluster::ExchangeMatrix;
use crate::error::{Error, Result};
use crate::foundation::{vec_axpy, EchelonSpan, Rational};
use crate::tube::{CHom, HomSpace, MaximalRigid, Tube};

/// One basis vector of `A`: a basis morphism `T_src -> T_tgt`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub src: usize,
    pub tgt: usize,
    /// Position inside the basis of `Hom(T_src, T_tgt)`.
    pub local: usize,
    /// Tube morphism (as opposed to an extension class).
    pub is_tube: bool,
}

/// `A = End_C(T)` with product `a * b = a . b` (first `b`, then `a`).
#[derive(Clone, Debug)]
pub struct FinDimAlgebra {
    pub t: MaximalRigid,
    basis: Vec<BasisElement>,
    blocks: Vec<Vec<Range<usize>>>,
    homs: Vec<Vec<Arc<HomSpace>>>,
    /// Structure constants keyed by `(a, b)`, dense over the target block.
    mult: HashMap<(usize, usize), Vec<Rational>>,
    units: Vec<usize>,
}

impl FinDimAlgebra {
    pub fn build(tube: &Tube, t: &MaximalRigid) -> Result<Self> {
        let n = t.n();
        let s = t.summands();
        let mut basis = Vec::new();
        let mut blocks = vec![vec![0..0; n]; n];
        let mut homs = vec![Vec::with_capacity(n); n];
        let mut elements = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let h = tube.hom_space(s[i], s[j]);
                let start = basis.len();
                for (k, e) in h.basis().into_iter().enumerate() {
                    basis.push(BasisElement {
                        src: i,
                        tgt: j,
                        local: k,
                        is_tube: h.is_tube_basis(k),
                    });
                    elements.push(e);
                }
                blocks[i][j] = start..basis.len();
                homs[i].push(h);
            }
        }
        let mut units = Vec::with_capacity(n);
        for i in 0..n {
            let r = blocks[i][i].clone();
            let unit = r.start;
            if homs[i][i].dim_t() != 1 || elements[unit] != CHom::identity(s[i]) {
                return Err(Error::Invariant(format!("unexpected endomorphisms of {}", s[i])));
            }
            units.push(unit);
        }
        let mut mult = HashMap::new();
        for (a, ea) in basis.iter().enumerate() {
            for (b, eb) in basis.iter().enumerate() {
                if eb.tgt != ea.src {
                    continue;
                }
                let (x, z) = (s[eb.src], s[ea.tgt]);
                let prod = tube.compose(&elements[a], &elements[b], x, z);
                mult.insert((a, b), homs[eb.src][ea.tgt].coords(&prod));
            }
        }
        let alg = FinDimAlgebra {
            t: t.clone(),
            basis,
            blocks,
            homs,
            mult,
            units,
        };
        alg.check_associative()?;
        Ok(alg)
    }

    pub fn n(&self) -> usize {
        self.t.n()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    /// Global index range of the basis of `Hom(T_i, T_j)`.
    pub fn block(&self, i: usize, j: usize) -> Range<usize> {
        self.blocks[i][j].clone()
    }

    pub fn hom(&self, i: usize, j: usize) -> &HomSpace {
        &self.homs[i][j]
    }

    /// Global index of the identity of `T_i`.
    pub fn unit(&self, i: usize) -> usize {
        self.units[i]
    }

    /// `a . b` as coordinates over the block `(src(b), tgt(a))`, or `None`
    /// when the two are not composable.
    pub fn product(&self, a: usize, b: usize) -> Option<&[Rational]> {
        self.mult.get(&(a, b)).map(Vec::as_slice)
    }

    /// Product of two elements given by dense global coordinates.
    pub fn mul(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                if let Some(p) = self.product(a, b) {
                    let r = self.block(self.basis[b].src, self.basis[a].tgt);
                    vec_axpy(&mut out[r], &(xa * yb), p);
                }
            }
        }
        out
    }

    /// Dense global coordinates of a single basis element.
    pub fn basis_vector(&self, a: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[a] = Rational::one();
        v
    }

    fn check_associative(&self) -> Result<()> {
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                if self.basis[b].tgt != self.basis[a].src {
                    continue;
                }
                let ab = self.embed(self.basis[b].src, self.basis[a].tgt, self.product(a, b).expect("composable"));
                for c in 0..self.dim() {
                    if self.basis[c].tgt != self.basis[b].src {
                        continue;
                    }
                    let bc = self.embed(self.basis[c].src, self.basis[b].tgt, self.product(b, c).expect("composable"));
                    let left = self.mul(&ab, &self.basis_vector(c));
                    let right = self.mul(&self.basis_vector(a), &bc);
                    if left != right {
                        return Err(Error::Invariant(format!("associativity fails on basis triple ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Block coordinates placed into a dense global vector.
    pub fn embed(&self, src: usize, tgt: usize, local: &[Rational]) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        for (k, c) in self.block(src, tgt).zip(local) {
            v[k] = c.clone();
        }
        v
    }

    /// Radical basis of `Hom(T_i, T_j)` as global indices.
    pub fn radical(&self, i: usize, j: usize) -> Vec<usize> {
        self.block(i, j)
            .filter(|&k| i != j || !self.basis[k].is_tube)
            .collect()
    }

    /// Span of composites `rad(T_k,T_j) . rad(T_i,T_k)` in block coordinates.
    pub fn radical_square(&self, i: usize, j: usize) -> EchelonSpan {
        let mut span = EchelonSpan::new(self.block(i, j).len());
        for k in 0..self.n() {
            for &b in &self.radical(i, k) {
                for &a in &self.radical(k, j) {
                    span.insert(self.product(a, b).expect("composable"));
                }
            }
        }
        span
    }

    /// Deterministic fingerprint of the structure constants.
    pub fn checksum(&self) -> String {
        let mut acc = Rational::zero();
        let d = self.dim() as i64;
        let mut keys: Vec<&(usize, usize)> = self.mult.keys().collect();
        keys.sort();
        for &(a, b) in keys {
            let p = &self.mult[&(a, b)];
            let r = self.block(self.basis[b].src, self.basis[a].tgt);
            for (c, v) in r.zip(p) {
                if !v.is_zero() {
                    let w = (a as i64) * d * d + (b as i64) * d + c as i64 + 1;
                    acc += v * Rational::from_integer(w.into());
                }
            }
        }
        acc.to_string()
    }

    /// Product of two composable basis elements as a dense global vector.
    pub fn compose_basis(&self, a: usize, b: usize) -> Option<Vec<Rational>> {
        self.product(a, b)
            .map(|p| self.embed(self.basis[b].src, self.basis[a].tgt, p))
    }
}

/// Arrow `src -> tgt` realized by a radical basis element of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrow {
    pub src: usize,
    pub tgt: usize,
    pub element: usize,
}

/// Gabriel quiver with zero-based vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    pub n: usize,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    /// Quiver without algebra elements, for combinatorial checks.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        Quiver {
            n,
            arrows: edges
                .iter()
                .enumerate()
                .map(|(k, &(src, tgt))| Arrow { src, tgt, element: k })
                .collect(),
        }
    }

    pub fn loops(&self) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&k| self.arrows[k].src == self.arrows[k].tgt)
            .collect()
    }

    pub fn arrow_count(&self, i: usize, j: usize) -> usize {
        self.arrows.iter().filter(|a| a.src == i && a.tgt == j).count()
    }

    /// Oriented 3-cycles as arrow triples `(a, b, c)` with `a: i->j`,
    /// `b: j->k`, `c: k->i`, listed once per rotation.
    pub fn three_cycles(&self) -> Vec<[usize; 3]> {
        let mut out = Vec::new();
        for (a, x) in self.arrows.iter().enumerate() {
            for (b, y) in self.arrows.iter().enumerate() {
                for (c, z) in self.arrows.iter().enumerate() {
                    let distinct = x.src != x.tgt && y.src != y.tgt && z.src != z.tgt && x.src != y.tgt;
                    if distinct && x.tgt == y.src && y.tgt == z.src && z.tgt == x.src {
                        out.push([a, b, c]);
                    }
                }
            }
        }
        out
    }

    /// Serialized arrows `i->j` (one-based), loops flagged.
    pub fn arrow_strings(&self) -> Vec<String> {
        self.arrows
            .iter()
            .map(|a| {
                if a.src == a.tgt {
                    format!("{}->{} (loop)", a.src + 1, a.tgt + 1)
                } else {
                    format!("{}->{}", a.src + 1, a.tgt + 1)
                }
            })
            .collect()
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.arrow_strings().join(", "))
    }
}

/// Gabriel quiver: arrows lift a basis of `rad/rad^2`, tube morphisms first.
pub fn gabriel_quiver(alg: &FinDimAlgebra) -> Quiver {
    let n = alg.n();
    let mut arrows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let mut span = alg.radical_square(i, j);
            let start = alg.block(i, j).start;
            let mut rad = alg.radical(i, j);
            rad.sort_by_key(|&k| (!alg.basis()[k].is_tube, k));
            for k in rad {
                let mut e = vec![Rational::zero(); alg.block(i, j).len()];
                e[k - start] = Rational::one();
                if span.insert(&e) {
                    arrows.push(Arrow { src: i, tgt: j, element: k });
                }
            }
        }
    }
    arrows.sort();
    Quiver { n, arrows }
}

/// `B_T` from arrow counts: `b_ij = #(i->j) - #(j->i)`, doubled in the
/// column of the loop vertex.
pub fn b_matrix_arrows(q: &Quiver) -> Result<ExchangeMatrix> {
    let loops = q.loops();
    let lv = loops.first().map(|&l| q.arrows[l].src);
    let mut b = vec![vec![0i64; q.n]; q.n];
    for (i, row) in b.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            if i == j {
                continue;
            }
            let d = q.arrow_count(i, j) as i64 - q.arrow_count(j, i) as i64;
            *v = if Some(j) == lv { 2 * d } else { d };
        }
    }
    ExchangeMatrix::new(b)
}

/// Builds `A = End_C(T)`.
pub fn build_endomorphism_algebra(tube: &Tube, t: &MaximalRigid) -> Result<FinDimAlgebra> {
    FinDimAlgebra::build(tube, t)
}

/// Defining conditions of the quiver class; returns the failed ones.
pub fn qn_violations(q: &Quiver) -> Vec<String> {
    let mut bad = Vec::new();
    let n = q.n;
    let plain: Vec<&Arrow> = q.arrows.iter().filter(|a| a.src != a.tgt).collect();
    let mut adj = vec![BTreeSet::new(); n];
    let mut multiplicity: HashMap<(usize, usize), usize> = HashMap::new();
    for a in &plain {
        adj[a.src].insert(a.tgt);
        adj[a.tgt].insert(a.src);
        *multiplicity.entry((a.src.min(a.tgt), a.src.max(a.tgt))).or_default() += 1;
    }
    let cycles = q.three_cycles();
    let on_cycle = |arrow: usize| cycles.iter().any(|c| c.contains(&arrow));

    // (a) chordless cycles of the underlying graph are oriented 3-cycles.
    if multiplicity.values().any(|&m| m > 1) {
        bad.push("a cycle of length 2 in the underlying graph".to_string());
    }
    for cyc in simple_cycles(&adj) {
        let chordless = cyc.iter().enumerate().all(|(p, &u)| {
            cyc.iter().enumerate().all(|(r, &v)| {
                let d = (p as isize - r as isize).rem_euclid(cyc.len() as isize) as usize;
                d <= 1 || d == cyc.len() - 1 || !adj[u].contains(&v)
            })
        });
        if !chordless {
            continue;
        }
        let oriented = |fwd: bool| {
            (0..cyc.len()).all(|p| {
                let (u, v) = (cyc[p], cyc[(p + 1) % cyc.len()]);
                let (s, t) = if fwd { (u, v) } else { (v, u) };
                plain.iter().any(|a| a.src == s && a.tgt == t)
            })
        };
        if cyc.len() != 3 || !(oriented(true) || oriented(false)) {
            bad.push(format!("minimal cycle {:?} is not an oriented 3-cycle", cyc));
        }
    }
    for v in 0..n {
        let deg = adj[v].len();
        let incident: Vec<usize> = (0..q.arrows.len())
            .filter(|&k| {
                let a = &q.arrows[k];
                a.src != a.tgt && (a.src == v || a.tgt == v)
            })
            .collect();
        // (b) at most four neighbors.
        if deg > 4 {
            bad.push(format!("vertex {} has {deg} neighbors", v + 1));
        }
        let cycles_at_v: Vec<&[usize; 3]> = cycles
            .iter()
            .filter(|c| c.iter().any(|&k| incident.contains(&k)))
            .collect();
        let distinct_cycles: BTreeSet<BTreeSet<usize>> = cycles_at_v
            .iter()
            .map(|c| c.iter().copied().collect())
            .collect();
        // (c) four neighbors: two 3-cycles through v, each using two of its arrows.
        if deg == 4 {
            let covers = distinct_cycles.len() == 2
                && distinct_cycles
                    .iter()
                    .all(|c| c.iter().filter(|k| incident.contains(k)).count() == 2);
            if !covers {
                bad.push(format!("vertex {} with four neighbors", v + 1));
            }
        }
        // (d) three neighbors: one 3-cycle through v, third arrow on none.
        if deg == 3 {
            let ok = distinct_cycles.len() == 1
                && incident.iter().filter(|&&k| !on_cycle(k)).count() == 1;
            if !ok {
                bad.push(format!("vertex {} with three neighbors", v + 1));
            }
        }
    }
    // (e) a unique loop, at a vertex with one neighbor or two neighbors on a 3-cycle.
    let loops = q.loops();
    if loops.len() != 1 {
        bad.push(format!("{} loops", loops.len()));
    } else {
        let t = q.arrows[loops[0]].src;
        let traversed = cycles.iter().any(|c| c.iter().any(|&k| q.arrows[k].src == t));
        let ok = adj[t].len() == 1 || (adj[t].len() == 2 && traversed);
        if !ok {
            bad.push(format!("loop at vertex {} badly placed", t + 1));
        }
    }
    bad
}

/// Whether the quiver lies in the quiver class.
pub fn validate_qn(q: &Quiver) -> bool {
    qn_violations(q).is_empty()
}

/// Simple cycles of length at least 3 of an undirected simple graph, each
/// listed once starting from its minimal vertex.
fn simple_cycles(adj: &[BTreeSet<usize>]) -> Vec<Vec<usize>> {
    fn walk(adj: &[BTreeSet<usize>], start: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("nonempty path");
        for &v in &adj[last] {
            if v == start && path.len() >= 3 && path[1] < path[path.len() - 1] {
                out.push(path.clone());
            } else if v > start && !path.contains(&v) {
                path.push(v);
                walk(adj, start, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    for s in 0..adj.len() {
        walk(adj, s, &mut vec![s], &mut out);
    }
    out
}

/// Composable arrow pairs `(a, b)` (first `a`, then `b`) whose composite
/// `b . a` vanishes in `A`.
pub fn zero_relations(alg: &FinDimAlgebra, q: &Quiver) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (ia, a) in q.arrows.iter().enumerate() {
        for (ib, b) in q.arrows.iter().enumerate() {
            if a.tgt != b.src {
                continue;
            }
            let p = alg.product(b.element, a.element).expect("composable");
            if p.iter().all(Zero::is_zero) {
                out.push((ia, ib));
            }
        }
    }
    out
}

/// Checks the defining relations: the loop squares to zero, every length-2
/// path inside an oriented 3-cycle vanishes, no other length-2 path
/// vanishes, and `dim A` equals the number of nonzero paths.
pub fn verify_relations(alg: &FinDimAlgebra, q: &Quiver) -> Result<()> {
    let zeros: BTreeSet<(usize, usize)> = zero_relations(alg, q).into_iter().collect();
    let mut expected = BTreeSet::new();
    for l in q.loops() {
        expected.insert((l, l));
    }
    for c in q.three_cycles() {
        expected.insert((c[0], c[1]));
    }
    if zeros != expected {
        return Err(Error::Invariant(format!(
            "zero length-2 paths {:?} differ from the expected relations {:?}",
            zeros, expected
        )));
    }
    let paths = count_paths(q, &zeros, 4 * alg.dim() + 4)?;
    if paths != alg.dim() {
        return Err(Error::Invariant(format!(
            "{paths} nonzero paths but dim A = {}",
            alg.dim()
        )));
    }
    Ok(())
}

/// Number of paths (including trivial ones) avoiding the given zero pairs.
pub fn count_paths(q: &Quiver, zeros: &BTreeSet<(usize, usize)>, max_len: usize) -> Result<usize> {
    let mut count = q.n;
    let mut frontier: Vec<usize> = (0..q.arrows.len()).collect();
    let mut len = 1;
    while !frontier.is_empty() {
        if len > max_len {
            return Err(Error::Invariant("path length bound exceeded".into()));
        }
        count += frontier.len();
        let mut next = Vec::new();
        for &last in &frontier {
            for (b, arrow) in q.arrows.iter().enumerate() {
                if arrow.src == q.arrows[last].tgt && !zeros.contains(&(last, b)) {
                    next.push(b);
                }
            }
        }
        frontier = next;
        len += 1;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_quiver() -> Quiver {
        // alpha: 1->2, beta: 2->3, gamma: 3->1, rho at 1.
        Quiver::from_edges(3, &[(0, 1), (1, 2), (2, 0), (0, 0)])
    }

    #[test]
    fn example_quiver_is_in_class() {
        assert!(validate_qn(&example_quiver()));
    }

    #[test]
    fn two_loops_are_rejected() {
        let q = Quiver::from_edges(3, &[(0, 1), (1, 2), (0, 0), (2, 2)]);
        assert!(!validate_qn(&q));
    }

    #[test]
    fn unoriented_triangle_is_rejected() {
        let q = Quiver::from_edges(3, &[(0, 1), (1, 2), (0, 2), (0, 0)]);
        assert!(qn_violations(&q).iter().any(|v| v.contains("not an oriented 3-cycle")));
    }

    #[test]
    fn square_is_rejected() {
        let q = Quiver::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 0)]);
        assert!(!validate_qn(&q));
    }

    #[test]
    fn loop_in_middle_of_path_is_rejected() {
        let q = Quiver::from_edges(3, &[(0, 1), (1, 2), (1, 1)]);
        assert!(!validate_qn(&q));
        let q = Quiver::from_edges(3, &[(0, 1), (1, 2), (0, 0)]);
        assert!(validate_qn(&q));
    }

    #[test]
    fn linear_object_algebra() {
        let tube = Tube::new(3).unwrap();
        let t = MaximalRigid::new(&tube, vec![tube.indec(1, 3), tube.indec(1, 2), tube.indec(1, 1)]).unwrap();
        let a = build_endomorphism_algebra(&tube, &t).unwrap();
        assert_eq!(a.block(0, 0).len(), 2);
        assert_eq!(a.block(1, 1).len(), 1);
        let q = gabriel_quiver(&a);
        assert_eq!(q.loops().len(), 1);
        assert_eq!(q.arrows[q.loops()[0]].src, 0);
        assert!(validate_qn(&q), "{:?}", qn_violations(&q));
        verify_relations(&a, &q).unwrap();
    }
}
