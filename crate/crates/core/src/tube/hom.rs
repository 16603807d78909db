use serde::{Deserialize, Serialize};

use super::Indec;
use crate::foundation::{q, EchelonSpan, ExactMatrix, Rational};

/// Morphism `x -> y` in the cluster tube: a tube part and a class in
/// `Ext^1(x, tau^{-1} y)`, both stored as `len(y) x len(x)` matrices.
/// The second matrix is kept in normal form for its morphism space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CHom {
    pub t: ExactMatrix,
    pub d: ExactMatrix,
}

impl CHom {
    pub fn zero(x: Indec, y: Indec) -> Self {
        CHom {
            t: ExactMatrix::zeros(y.b(), x.b()),
            d: ExactMatrix::zeros(y.b(), x.b()),
        }
    }

    pub fn identity(x: Indec) -> Self {
        CHom {
            t: ExactMatrix::identity(x.b()),
            d: ExactMatrix::zeros(x.b(), x.b()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_zero() && self.d.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        CHom {
            t: &self.t + &other.t,
            d: &self.d + &other.d,
        }
    }

    pub fn scale(&self, s: &Rational) -> Self {
        CHom {
            t: self.t.scale(s),
            d: self.d.scale(s),
        }
    }
}

/// Positions `(i,j)` of a `len(w) x len(x)` matrix with
/// `vertex_w(i) = vertex_x(j) - shift`.
fn pattern(x: Indec, w: Indec, shift: usize) -> Vec<(usize, usize)> {
    let m = x.rank();
    let mut out = Vec::new();
    for i in 0..w.b() {
        for j in 0..x.b() {
            if (w.vertex(i) + shift) % m == x.vertex(j) % m {
                out.push((i, j));
            }
        }
    }
    out
}

/// The two-term complex `Hom_0(x,w) -> Hom_1(x,w)`, `phi -> N_w phi - phi N_x`.
struct ExtComplex {
    c0: Vec<(usize, usize)>,
    c1: Vec<(usize, usize)>,
    /// Matrix of the differential, `|c1| x |c0|`.
    delta: ExactMatrix,
}

impl ExtComplex {
    fn new(x: Indec, w: Indec) -> Self {
        let c0 = pattern(x, w, 0);
        let c1 = pattern(x, w, 1);
        let mut delta = ExactMatrix::zeros(c1.len(), c0.len());
        for (col, &(i, j)) in c0.iter().enumerate() {
            // (N_w E_ij) = E_{i-1,j}; (E_ij N_x) = E_{i,j+1}.
            if i > 0 {
                if let Some(r) = c1.iter().position(|&p| p == (i - 1, j)) {
                    let v = delta.get(r, col) + q(1);
                    delta.set(r, col, v);
                }
            }
            if j + 1 < x.b() {
                if let Some(r) = c1.iter().position(|&p| p == (i, j + 1)) {
                    let v = delta.get(r, col) - q(1);
                    delta.set(r, col, v);
                }
            }
        }
        ExtComplex { c0, c1, delta }
    }
}

/// `dim Ext^1_T(x, y)` as the cokernel dimension of the standard complex.
pub(crate) fn ext1_tube_dim(x: Indec, y: Indec) -> usize {
    let c = ExtComplex::new(x, y);
    c.c1.len() - c.delta.rank()
}

/// `Hom_C(x,y)` with a basis of tube morphisms followed by a basis of
/// `Ext^1(x, tau^{-1} y)` classes.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: Indec,
    pub target: Indec,
    t_coords: Vec<(usize, usize)>,
    t_free: Vec<usize>,
    t_basis: Vec<ExactMatrix>,
    d_coords: Vec<(usize, usize)>,
    d_image: EchelonSpan,
    d_free: Vec<usize>,
}

impl HomSpace {
    pub(crate) fn compute(x: Indec, y: Indec) -> Self {
        let tc = ExtComplex::new(x, y);
        let kernel = tc.delta.kernel_basis();
        let rref = tc.delta.rref();
        let t_free: Vec<usize> = (0..tc.c0.len()).filter(|c| !rref.pivots.contains(c)).collect();
        let t_basis = kernel
            .iter()
            .map(|v| coords_to_matrix(&tc.c0, v, y.b(), x.b()))
            .collect();

        let dc = ExtComplex::new(x, y.tau_inv());
        let mut d_image = EchelonSpan::new(dc.c1.len());
        for col in 0..dc.c0.len() {
            d_image.insert(&dc.delta.column(col));
        }
        let d_free = (0..dc.c1.len())
            .filter(|c| !d_image.pivots().contains(c))
            .collect();
        HomSpace {
            source: x,
            target: y,
            t_coords: tc.c0,
            t_free,
            t_basis,
            d_coords: dc.c1,
            d_image,
            d_free,
        }
    }

    pub fn dim_t(&self) -> usize {
        self.t_basis.len()
    }

    pub fn dim_d(&self) -> usize {
        self.d_free.len()
    }

    pub fn dim(&self) -> usize {
        self.dim_t() + self.dim_d()
    }

    /// Basis: tube morphisms first, then normalized classes.
    pub fn basis(&self) -> Vec<CHom> {
        let (x, y) = (self.source, self.target);
        let mut out: Vec<CHom> = self
            .t_basis
            .iter()
            .map(|t| CHom {
                t: t.clone(),
                d: ExactMatrix::zeros(y.b(), x.b()),
            })
            .collect();
        for &f in &self.d_free {
            let (i, j) = self.d_coords[f];
            let mut d = ExactMatrix::zeros(y.b(), x.b());
            d.set(i, j, q(1));
            out.push(CHom {
                t: ExactMatrix::zeros(y.b(), x.b()),
                d,
            });
        }
        out
    }

    /// Whether basis element `k` is a tube morphism.
    pub fn is_tube_basis(&self, k: usize) -> bool {
        k < self.dim_t()
    }

    /// Reduces a class representative to its normal form.
    pub fn normalize_d(&self, d: &ExactMatrix) -> ExactMatrix {
        let v: Vec<Rational> = self.d_coords.iter().map(|&(i, j)| d.get(i, j).clone()).collect();
        debug_assert!(
            d.nonzero_entries().all(|(i, j, _)| self.d_coords.contains(&(i, j))),
            "class representative outside its degree pattern"
        );
        let r = self.d_image.reduce(&v);
        coords_to_matrix(&self.d_coords, &r, d.rows(), d.cols())
    }

    /// Coordinates of a morphism in [`HomSpace::basis`].
    pub fn coords(&self, f: &CHom) -> Vec<Rational> {
        let mut out: Vec<Rational> = self
            .t_free
            .iter()
            .map(|&c| {
                let (i, j) = self.t_coords[c];
                f.t.get(i, j).clone()
            })
            .collect();
        let nd = self.normalize_d(&f.d);
        out.extend(self.d_free.iter().map(|&c| {
            let (i, j) = self.d_coords[c];
            nd.get(i, j).clone()
        }));
        out
    }

    /// Morphism with the given coordinates.
    pub fn element(&self, coords: &[Rational]) -> CHom {
        let mut f = CHom::zero(self.source, self.target);
        for (c, b) in coords.iter().zip(self.basis()) {
            if !num_traits::Zero::is_zero(c) {
                f = f.add(&b.scale(c));
            }
        }
        f
    }

    /// Checks that `t` commutes with the nilpotent operators.
    pub fn is_tube_morphism(&self, t: &ExactMatrix) -> bool {
        let (x, y) = (self.source, self.target);
        let nx = nilpotent(x.b());
        let ny = nilpotent(y.b());
        let vertex_ok = t
            .nonzero_entries()
            .all(|(i, j, _)| y.vertex(i) == x.vertex(j));
        vertex_ok && &ny * t == t * &nx
    }
}

fn coords_to_matrix(coords: &[(usize, usize)], v: &[Rational], rows: usize, cols: usize) -> ExactMatrix {
    let mut m = ExactMatrix::zeros(rows, cols);
    for (&(i, j), val) in coords.iter().zip(v) {
        m.set(i, j, val.clone());
    }
    m
}

/// The operator `z_j -> z_{j-1}` on a space of dimension `len`.
pub(crate) fn nilpotent(len: usize) -> ExactMatrix {
    let mut n = ExactMatrix::zeros(len, len);
    for j in 1..len {
        n.set(j - 1, j, q(1));
    }
    n
}

#[cfg(test)]
mod tests {
    use super::super::Tube;
    use super::*;

    fn ob(a: i64, b: usize) -> Indec {
        Indec::new(4, a, b).unwrap()
    }

    /// Independent count: Hom between uniserials equals the number of
    /// quotients of `x` that are submodules of `y`.
    fn brute_hom(x: Indec, y: Indec) -> usize {
        let m = x.rank();
        (1..=x.b().min(y.b()))
            .filter(|&k| {
                // quotient of x of length k has top equal to top of x
                let top_x = (x.a() - 1 + x.b() - 1) % m;
                let top_sub = (y.a() - 1 + k - 1) % m;
                top_x == top_sub
            })
            .count()
    }

    #[test]
    fn tube_hom_matches_uniserial_count() {
        let tube = Tube::new(3).unwrap();
        for a in 1..=4 {
            for b in 1..=6 {
                for c in 1..=4 {
                    for d in 1..=6 {
                        let (x, y) = (ob(a, b), ob(c, d));
                        assert_eq!(tube.hom_tube_dim(x, y), brute_hom(x, y), "{x} -> {y}");
                    }
                }
            }
        }
    }

    #[test]
    fn small_hom_values() {
        let tube = Tube::new(3).unwrap();
        assert_eq!(tube.hom_tube_dim(ob(1, 2), ob(2, 1)), 1);
        assert_eq!(tube.hom_tube_dim(ob(1, 1), ob(2, 1)), 0);
        assert_eq!(tube.ext1_tube_dim(ob(1, 1), ob(3, 1)), 0);
        assert_eq!(tube.ext1_tube_dim(ob(2, 1), ob(1, 1)), 1);
    }

    #[test]
    fn ext_formula_matches_complex() {
        for a in 1..=4 {
            for b in 1..=5 {
                for c in 1..=4 {
                    for d in 1..=5 {
                        let (x, y) = (ob(a, b), ob(c, d));
                        let cx = ExtComplex::new(x, y);
                        let hom = Tube::new(3).unwrap().hom_tube_dim(x, y);
                        assert_eq!(ext1_tube_dim(x, y), cx.c1.len() + hom - cx.c0.len());
                    }
                }
            }
        }
    }

    #[test]
    fn tube_basis_commutes_with_nilpotent() {
        let tube = Tube::new(3).unwrap();
        let h = tube.hom_space(ob(4, 3), ob(1, 3));
        for f in h.basis().iter().take(h.dim_t()) {
            assert!(h.is_tube_morphism(&f.t));
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let tube = Tube::new(3).unwrap();
        let h = tube.hom_space(ob(1, 3), ob(1, 3));
        assert_eq!(h.dim(), 2);
        for (k, b) in h.basis().iter().enumerate() {
            let mut e = vec![q(0); h.dim()];
            e[k] = q(1);
            assert_eq!(h.coords(b), e);
        }
    }
}
