use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundation::{q, ExactMatrix, Rational};

/// Right module over a bound quiver algebra, stored as a representation of
/// the opposite quiver: the arrow `a: i -> j` acts by a `dims[i] x dims[j]`
/// matrix sending `M_j` to `M_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AModule {
    /// Arrow endpoints `(src, tgt)` of the underlying quiver.
    pub arrows: Vec<(usize, usize)>,
    pub dims: Vec<usize>,
    pub maps: Vec<ExactMatrix>,
    /// Object `X` with `M = F(X)`, when known.
    pub provenance: Option<String>,
}

/// Module homomorphism as one matrix per vertex (`dim N_i x dim M_i`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModHom {
    pub maps: Vec<ExactMatrix>,
}

impl ModHom {
    pub fn zero(m: &AModule, n: &AModule) -> Self {
        ModHom {
            maps: m.dims.iter().zip(&n.dims).map(|(&a, &b)| ExactMatrix::zeros(b, a)).collect(),
        }
    }

    pub fn identity(m: &AModule) -> Self {
        ModHom {
            maps: m.dims.iter().map(|&d| ExactMatrix::identity(d)).collect(),
        }
    }

    /// `self . other`.
    pub fn compose(&self, other: &ModHom) -> ModHom {
        ModHom {
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn add(&self, other: &ModHom) -> ModHom {
        ModHom {
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &Rational) -> ModHom {
        ModHom {
            maps: self.maps.iter().map(|a| a.scale(s)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(ExactMatrix::is_zero)
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.rows())
    }

    pub fn is_iso(&self) -> bool {
        self.maps.iter().all(|m| m.rows() == m.cols() && m.rank() == m.rows())
    }

    /// Dimension vector of the image.
    pub fn image_dims(&self) -> Vec<usize> {
        self.maps.iter().map(ExactMatrix::rank).collect()
    }
}

impl AModule {
    pub fn zero(arrows: &[(usize, usize)], n: usize) -> Self {
        AModule {
            arrows: arrows.to_vec(),
            dims: vec![0; n],
            maps: arrows.iter().map(|_| ExactMatrix::zeros(0, 0)).collect(),
            provenance: None,
        }
    }

    /// Simple module at vertex `v`.
    pub fn simple(arrows: &[(usize, usize)], n: usize, v: usize) -> Self {
        let mut dims = vec![0; n];
        dims[v] = 1;
        let maps = arrows
            .iter()
            .map(|&(s, t)| ExactMatrix::zeros(dims[s], dims[t]))
            .collect();
        AModule {
            arrows: arrows.to_vec(),
            dims,
            maps,
            provenance: Some(format!("S{}", v + 1)),
        }
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn with_provenance(mut self, p: impl Into<String>) -> Self {
        self.provenance = Some(p.into());
        self
    }

    /// Checks matrix shapes against the dimension vector.
    pub fn check_shapes(&self) -> Result<()> {
        for (k, (&(s, t), m)) in self.arrows.iter().zip(&self.maps).enumerate() {
            if m.rows() != self.dims[s] || m.cols() != self.dims[t] {
                return Err(Error::Invariant(format!("arrow {k} has a matrix of the wrong shape")));
            }
        }
        Ok(())
    }

    /// Whether the path "first `a`, then `b`" acts by zero.
    pub fn path_vanishes(&self, a: usize, b: usize) -> bool {
        // m . (b . a) = (m . b) . a: first apply b's matrix, then a's.
        (&self.maps[a] * &self.maps[b]).is_zero()
    }

    pub fn direct_sum(&self, other: &AModule) -> AModule {
        AModule {
            arrows: self.arrows.clone(),
            dims: self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect(),
            maps: self.maps.iter().zip(&other.maps).map(|(a, b)| a.direct_sum(b)).collect(),
            provenance: match (&self.provenance, &other.provenance) {
                (Some(a), Some(b)) => Some(format!("{a}+{b}")),
                _ => None,
            },
        }
    }

    pub fn direct_sum_all(arrows: &[(usize, usize)], n: usize, parts: &[AModule]) -> AModule {
        parts
            .iter()
            .fold(AModule::zero(arrows, n), |acc, m| if acc.is_zero() { m.clone() } else { acc.direct_sum(m) })
    }

    /// Radical: sum of the images of all arrow actions.
    pub fn radical_spaces(&self) -> Vec<ExactMatrix> {
        (0..self.n())
            .map(|v| {
                let mut acc = ExactMatrix::zeros(self.dims[v], 0);
                for (k, &(s, _)) in self.arrows.iter().enumerate() {
                    if s == v {
                        acc = acc.hstack(&self.maps[k]);
                    }
                }
                acc.column_basis()
            })
            .collect()
    }

    /// Socle: joint kernel of all arrow actions leaving each vertex space.
    pub fn socle_spaces(&self) -> Vec<ExactMatrix> {
        (0..self.n())
            .map(|v| {
                let mut acc = ExactMatrix::zeros(0, self.dims[v]);
                for (k, &(_, t)) in self.arrows.iter().enumerate() {
                    if t == v {
                        acc = acc.vstack(&self.maps[k]);
                    }
                }
                let ker = acc.kernel_basis();
                ExactMatrix::from_columns(self.dims[v], &ker)
            })
            .collect()
    }

    pub fn top_dims(&self) -> Vec<usize> {
        self.radical_spaces().iter().zip(&self.dims).map(|(r, d)| d - r.cols()).collect()
    }

    pub fn socle_dims(&self) -> Vec<usize> {
        self.socle_spaces().iter().map(ExactMatrix::cols).collect()
    }

    /// Smallest submodule containing the given subspaces.
    pub fn generated(&self, spaces: &[ExactMatrix]) -> Vec<ExactMatrix> {
        let mut cur: Vec<ExactMatrix> = spaces.iter().map(ExactMatrix::column_basis).collect();
        loop {
            let mut grown = false;
            for (k, &(s, t)) in self.arrows.iter().enumerate() {
                let img = &self.maps[k] * &cur[t];
                let joined = cur[s].hstack(&img).column_basis();
                if joined.cols() > cur[s].cols() {
                    cur[s] = joined;
                    grown = true;
                }
            }
            if !grown {
                return cur;
            }
        }
    }

    /// Submodule spanned by stable subspaces (columns), with its inclusion.
    pub fn submodule(&self, spaces: &[ExactMatrix]) -> Result<(AModule, ModHom)> {
        let mut maps = Vec::with_capacity(self.arrows.len());
        for (k, &(s, t)) in self.arrows.iter().enumerate() {
            let img = &self.maps[k] * &spaces[t];
            let m = spaces[s]
                .solve_matrix(&img)
                .ok_or_else(|| Error::Invariant("subspaces are not a submodule".into()))?;
            maps.push(m);
        }
        let sub = AModule {
            arrows: self.arrows.clone(),
            dims: spaces.iter().map(ExactMatrix::cols).collect(),
            maps,
            provenance: None,
        };
        Ok((sub, ModHom { maps: spaces.to_vec() }))
    }

    /// Quotient by stable subspaces, with the projection.
    pub fn quotient(&self, spaces: &[ExactMatrix]) -> Result<(AModule, ModHom)> {
        let mut comps = Vec::with_capacity(self.n());
        let mut projs = Vec::with_capacity(self.n());
        for (v, s) in spaces.iter().enumerate() {
            let d = self.dims[v];
            let mut basis = s.clone();
            let mut comp_cols = Vec::new();
            for e in 0..d {
                let mut unit = vec![q(0); d];
                unit[e] = q(1);
                let ext = basis.hstack(&ExactMatrix::from_columns(d, &[unit.clone()]));
                if ext.rank() > basis.cols() {
                    basis = ext;
                    comp_cols.push(unit);
                }
            }
            let inv = basis.inverse().ok_or_else(|| Error::Invariant("degenerate subspace".into()))?;
            let k = s.cols();
            projs.push(inv.block(k, 0, d - k, d));
            comps.push(ExactMatrix::from_columns(d, &comp_cols));
        }
        let mut maps = Vec::with_capacity(self.arrows.len());
        for (k, &(s, t)) in self.arrows.iter().enumerate() {
            // Stability: the image of the subspace at t lies in the subspace at s.
            let leak = &projs[s] * &(&self.maps[k] * &spaces[t]);
            if !leak.is_zero() {
                return Err(Error::Invariant("subspaces are not a submodule".into()));
            }
            maps.push(&projs[s] * &(&self.maps[k] * &comps[t]));
        }
        let quo = AModule {
            arrows: self.arrows.clone(),
            dims: projs.iter().map(ExactMatrix::rows).collect(),
            maps,
            provenance: None,
        };
        Ok((quo, ModHom { maps: projs }))
    }

    /// Kernel of `f: self -> N` with its inclusion.
    pub fn kernel_of(&self, f: &ModHom) -> Result<(AModule, ModHom)> {
        let spaces: Vec<ExactMatrix> = f
            .maps
            .iter()
            .zip(&self.dims)
            .map(|(m, &d)| ExactMatrix::from_columns(d, &m.kernel_basis()))
            .collect();
        self.submodule(&spaces)
    }

    /// Basis of `Hom_A(self, other)`: solutions of `phi_s A = B phi_t`.
    pub fn hom_basis(&self, other: &AModule) -> Vec<ModHom> {
        let n = self.n();
        let mut offsets = Vec::with_capacity(n + 1);
        let mut total = 0;
        for v in 0..n {
            offsets.push(total);
            total += self.dims[v] * other.dims[v];
        }
        if total == 0 {
            return Vec::new();
        }
        // phi_v is dims_other[v] x dims_self[v], row-major at offsets[v].
        let var = |v: usize, r: usize, c: usize| offsets[v] + r * self.dims[v] + c;
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for (k, &(s, t)) in self.arrows.iter().enumerate() {
            let a = &self.maps[k];
            let b = &other.maps[k];
            for r in 0..other.dims[s] {
                for c in 0..self.dims[t] {
                    let mut row = vec![q(0); total];
                    for x in 0..self.dims[s] {
                        let av = a.get(x, c);
                        if !num_traits::Zero::is_zero(av) {
                            row[var(s, r, x)] += av;
                        }
                    }
                    for y in 0..other.dims[t] {
                        let bv = b.get(r, y);
                        if !num_traits::Zero::is_zero(bv) {
                            row[var(t, y, c)] -= bv;
                        }
                    }
                    if row.iter().any(|x| !num_traits::Zero::is_zero(x)) {
                        rows.push(row);
                    }
                }
            }
        }
        let kernel = if rows.is_empty() {
            (0..total)
                .map(|i| {
                    let mut e = vec![q(0); total];
                    e[i] = q(1);
                    e
                })
                .collect()
        } else {
            ExactMatrix::from_rows(rows).kernel_basis()
        };
        kernel
            .into_iter()
            .map(|sol| ModHom {
                maps: (0..n)
                    .map(|v| {
                        let mut m = ExactMatrix::zeros(other.dims[v], self.dims[v]);
                        for r in 0..other.dims[v] {
                            for c in 0..self.dims[v] {
                                m.set(r, c, sol[var(v, r, c)].clone());
                            }
                        }
                        m
                    })
                    .collect(),
            })
            .collect()
    }

    pub fn hom_dim(&self, other: &AModule) -> usize {
        self.hom_basis(other).len()
    }

    /// Whether `f` commutes with every arrow action.
    pub fn is_hom(&self, other: &AModule, f: &ModHom) -> bool {
        self.arrows.iter().enumerate().all(|(k, &(s, t))| {
            &f.maps[s] * &self.maps[k] == &other.maps[k] * &f.maps[t]
        })
    }

    /// Matrices written with the vertex names and exact entries.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "provenance": self.provenance,
            "dims": self.dims,
            "arrows": self.arrows.iter().zip(&self.maps).map(|(&(s, t), m)| serde_json::json!({
                "arrow": format!("{}->{}", s + 1, t + 1),
                "matrix": m.to_string_rows(),
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The linear quiver 1 -> 2 with `M = P`-like module `C --1--> C`.
    fn two_vertex() -> AModule {
        AModule {
            arrows: vec![(0, 1)],
            dims: vec![1, 1],
            maps: vec![ExactMatrix::from_i64_rows(&[vec![1]])],
            provenance: None,
        }
    }

    #[test]
    fn hom_and_sub_quotient() {
        let m = two_vertex();
        assert_eq!(m.hom_dim(&m), 1);
        let s0 = AModule::simple(&m.arrows, 2, 0);
        let s1 = AModule::simple(&m.arrows, 2, 1);
        // the arrow sends M_2 onto M_1, so S1 is the socle
        assert_eq!(s0.hom_dim(&m), 1);
        assert_eq!(m.hom_dim(&s1), 1);
        assert_eq!(m.hom_dim(&s0), 0);
        assert_eq!(m.socle_dims(), vec![1, 0]);
        assert_eq!(m.top_dims(), vec![0, 1]);
        let soc = m.socle_spaces();
        let (sub, inc) = m.submodule(&soc).unwrap();
        assert_eq!(sub.dims, vec![1, 0]);
        assert!(sub.is_hom(&m, &inc));
        let (quo, proj) = m.quotient(&soc).unwrap();
        assert_eq!(quo.dims, vec![0, 1]);
        assert!(m.is_hom(&quo, &proj));
        assert!(m.quotient(&[ExactMatrix::zeros(1, 0), ExactMatrix::identity(1)]).is_err());
    }

    #[test]
    fn generated_submodule_closes_under_arrows() {
        let m = two_vertex();
        let g = m.generated(&[ExactMatrix::zeros(1, 0), ExactMatrix::identity(1)]);
        assert_eq!(g[0].cols(), 1);
    }
}
