//! The cluster tube of rank `n+1`: indecomposables, morphism spaces,
//! rigid and maximal rigid objects, mutation and the matrix `B_T`.
//!
//! An indecomposable `(a,b)` is the uniserial nilpotent representation with
//! basis `z_0, ..., z_{b-1}`, where `z_j` sits at vertex `a+j` (mod `n+1`),
//! `z_0` spans the socle and the nilpotent operator sends `z_j` to `z_{j-1}`.
//! Tube morphisms are vertex-preserving matrices commuting with that
//! operator. The second summand of a morphism space in the orbit category is
//! realized as `Ext^1(X, tau^{-1} Y)`, with `tau^{-1}` acting as the rotation
//! of vertex labels, so it is the identity on matrices.

mod hom;
mod rigid;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use hom::{CHom, HomSpace};
pub use rigid::{MaximalRigid, Mutation};

/// Indecomposable `(a,b)` of the tube of rank `rank`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Indec {
    rank: u16,
    a: u16,
    b: u16,
}

impl Indec {
    /// Normalizes `a` into `1..=rank`; rejects `b = 0`.
    pub fn new(rank: usize, a: i64, b: usize) -> Result<Self> {
        if b == 0 {
            return Err(Error::InvalidObject("length must be positive".into()));
        }
        if rank < 2 {
            return Err(Error::InvalidObject("tube rank must be at least 2".into()));
        }
        let m = rank as i64;
        let a = (a - 1).rem_euclid(m) + 1;
        Ok(Indec {
            rank: rank as u16,
            a: a as u16,
            b: b as u16,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank as usize
    }

    /// Socle position in `1..=rank`.
    pub fn a(&self) -> usize {
        self.a as usize
    }

    /// Length.
    pub fn b(&self) -> usize {
        self.b as usize
    }

    pub fn len(&self) -> usize {
        self.b()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `tau^k` applied to `self`, i.e. position shifted by `-k`.
    pub fn tau_pow(&self, k: i64) -> Self {
        Indec::new(self.rank(), self.a as i64 - k, self.b()).expect("valid object")
    }

    pub fn tau(&self) -> Self {
        self.tau_pow(1)
    }

    pub fn tau_inv(&self) -> Self {
        self.tau_pow(-1)
    }

    /// Vertex of the basis vector `z_j`, in `1..=rank`.
    pub fn vertex(&self, j: usize) -> usize {
        (self.a() - 1 + j) % self.rank() + 1
    }

    /// Whether `self` lies in the wing of `top` (a subquotient by position).
    pub fn in_wing_of(&self, top: &Indec) -> bool {
        let off = (self.a() + self.rank() - top.a()) % self.rank();
        off + self.b() <= top.b()
    }

    /// Rigid iff length at most `n = rank - 1`.
    pub fn is_rigid(&self) -> bool {
        self.b() < self.rank()
    }
}

impl fmt::Display for Indec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// Parses `(a,b)` given the tube rank.
pub fn parse_indec(rank: usize, s: &str) -> Result<Indec> {
    let t = s.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| Error::InvalidObject(format!("expected (a,b), got {t}")))?;
    let (a, b) = inner
        .split_once(',')
        .ok_or_else(|| Error::InvalidObject(format!("expected (a,b), got {t}")))?;
    let a = i64::from_str(a.trim()).map_err(|_| Error::InvalidObject(t.to_string()))?;
    let b = usize::from_str(b.trim()).map_err(|_| Error::InvalidObject(t.to_string()))?;
    Indec::new(rank, a, b)
}

/// Parses a comma-separated list such as `(1,3),(1,2),(1,1)`.
pub fn parse_indec_list(rank: usize, s: &str) -> Result<Vec<Indec>> {
    let mut out = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let close = rest
            .find(')')
            .ok_or_else(|| Error::InvalidObject(format!("unbalanced object list: {s}")))?;
        out.push(parse_indec(rank, &rest[..=close])?);
        rest = rest[close + 1..].trim_start_matches([',', ' ']);
    }
    Ok(out)
}

/// The cluster tube `C_{n+1}` with a cache of computed morphism spaces.
#[derive(Debug)]
pub struct Tube {
    n: usize,
    cache: RwLock<HashMap<(Indec, Indec), Arc<HomSpace>>>,
}

impl Tube {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidObject("n must be at least 2".into()));
        }
        Ok(Tube {
            n,
            cache: RwLock::new(HashMap::new()),
        })
    }

    /// Number of summands of a maximal rigid object.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.n + 1
    }

    pub fn indec(&self, a: i64, b: usize) -> Indec {
        Indec::new(self.rank(), a, b).expect("valid object")
    }

    /// All `n(n+1)` indecomposable rigid objects, sorted.
    pub fn rigid_indecomposables(&self) -> Vec<Indec> {
        let mut v: Vec<Indec> = (1..=self.rank())
            .flat_map(|a| (1..=self.n).map(move |b| (a, b)))
            .map(|(a, b)| self.indec(a as i64, b))
            .collect();
        v.sort();
        v
    }

    /// Morphism space `Hom_C(x, y)` with fixed bases.
    pub fn hom_space(&self, x: Indec, y: Indec) -> Arc<HomSpace> {
        if let Some(h) = self.cache.read().expect("cache lock").get(&(x, y)) {
            return Arc::clone(h);
        }
        let h = Arc::new(HomSpace::compute(x, y));
        self.cache
            .write()
            .expect("cache lock")
            .entry((x, y))
            .or_insert(h)
            .clone()
    }

    pub fn hom_tube_dim(&self, x: Indec, y: Indec) -> usize {
        self.hom_space(x, y).dim_t()
    }

    pub fn ext1_tube_dim(&self, x: Indec, y: Indec) -> usize {
        hom::ext1_tube_dim(x, y)
    }

    /// `dim Hom_T(x,y) + dim Hom_T(y, tau^2 x)`.
    pub fn hom_c_dim(&self, x: Indec, y: Indec) -> usize {
        self.hom_tube_dim(x, y) + self.hom_tube_dim(y, x.tau_pow(2))
    }

    /// `dim Ext^1_C(x,y) = dim Hom_C(x, tau y)`.
    pub fn ext1_c_dim(&self, x: Indec, y: Indec) -> usize {
        self.hom_c_dim(x, y.tau())
    }

    /// Length test, cross-checked against vanishing self-extensions.
    pub fn is_rigid(&self, x: Indec) -> Result<bool> {
        let by_length = x.is_rigid();
        let by_ext = self.ext1_c_dim(x, x) == 0;
        if by_length != by_ext {
            return Err(Error::Invariant(format!(
                "rigidity of {x}: length test {by_length}, Ext test {by_ext}"
            )));
        }
        Ok(by_length)
    }

    /// Distinct entries, pairwise and self Ext-orthogonal.
    pub fn is_rigid_set(&self, s: &[Indec]) -> bool {
        for (i, x) in s.iter().enumerate() {
            if s[..i].contains(x) {
                return false;
            }
        }
        s.iter().all(|&x| s.iter().all(|&y| self.ext1_c_dim(x, y) == 0))
    }

    /// Composition `g . f` for `f: x -> y`, `g: y -> z`.
    pub fn compose(&self, g: &CHom, f: &CHom, x: Indec, z: Indec) -> CHom {
        let t = &g.t * &f.t;
        let d = &(&g.t * &f.d) + &(&g.d * &f.t);
        let space = self.hom_space(x, z);
        CHom {
            t,
            d: space.normalize_d(&d),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_and_tau() {
        let x = Indec::new(4, 0, 2).unwrap();
        assert_eq!(x.a(), 4);
        assert_eq!(x.tau(), Indec::new(4, 3, 2).unwrap());
        assert_eq!(Indec::new(4, 1, 2).unwrap().tau(), x);
        assert_eq!(x.tau_inv().tau(), x);
        assert!(Indec::new(4, 1, 0).is_err());
    }

    #[test]
    fn basis_vertices_wrap() {
        let x = Indec::new(4, 3, 3).unwrap();
        assert_eq!((0..3).map(|j| x.vertex(j)).collect::<Vec<_>>(), vec![3, 4, 1]);
    }

    #[test]
    fn wing_membership() {
        let top = Indec::new(4, 4, 3).unwrap();
        assert!(Indec::new(4, 1, 2).unwrap().in_wing_of(&top));
        assert!(Indec::new(4, 4, 1).unwrap().in_wing_of(&top));
        assert!(!Indec::new(4, 2, 2).unwrap().in_wing_of(&top));
        assert!(!Indec::new(4, 3, 1).unwrap().in_wing_of(&top));
    }

    #[test]
    fn parse_objects() {
        let v = parse_indec_list(4, "(1,3),(1,2), (5,1)").unwrap();
        assert_eq!(v.iter().map(ToString::to_string).collect::<Vec<_>>(), vec!["(1,3)", "(1,2)", "(1,1)"]);
        assert!(parse_indec(4, "1,3").is_err());
    }

    #[test]
    fn rigid_count() {
        let t = Tube::new(3).unwrap();
        assert_eq!(t.rigid_indecomposables().len(), 12);
    }
}
