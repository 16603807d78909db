//! Seed and matrix mutation and finite-type cluster atlases.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::foundation::LaurentPoly;

/// Default bound on the number of seeds visited by [`enumerate_atlas`].
pub const DEFAULT_CAP: usize = 10_000;

/// Square integer matrix with zero diagonal and sign-skew-symmetric entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExchangeMatrix {
    b: Vec<Vec<i64>>,
}

impl ExchangeMatrix {
    pub fn new(b: Vec<Vec<i64>>) -> Result<Self> {
        let n = b.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        for (i, row) in b.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix("not square".into()));
            }
            if row[i] != 0 {
                return Err(Error::InvalidMatrix(format!("nonzero diagonal entry at {}", i + 1)));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if b[i][j].signum() != -b[j][i].signum() {
                    return Err(Error::InvalidMatrix(format!(
                        "entries ({},{}) and ({},{}) are not sign-skew-symmetric",
                        i + 1,
                        j + 1,
                        j + 1,
                        i + 1
                    )));
                }
            }
        }
        Ok(ExchangeMatrix { b })
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// Entry `b_ij` with zero-based indices.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.b[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.b
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        self.b.iter().map(|r| r[j]).collect()
    }

    /// `B e` for an integer column vector `e`.
    pub fn apply(&self, e: &[i64]) -> Vec<i64> {
        self.b
            .iter()
            .map(|row| row.iter().zip(e).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Mutation in direction `k` (one-based).
    pub fn mutate(&self, k: usize) -> Result<Self> {
        let n = self.n();
        if k == 0 || k > n {
            return Err(Error::IndexOutOfRange { index: k, n });
        }
        let k = k - 1;
        let b = &self.b;
        let out = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == k || j == k {
                            -b[i][j]
                        } else {
                            b[i][j] + b[i][k].signum() * (b[i][k] * b[k][j]).max(0)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(ExchangeMatrix { b: out })
    }

    /// Simultaneous row/column permutation: `new[i][j] = old[p[i]][p[j]]`.
    pub fn permuted(&self, p: &[usize]) -> Self {
        ExchangeMatrix {
            b: p.iter().map(|&i| p.iter().map(|&j| self.b[i][j]).collect()).collect(),
        }
    }

    pub fn cartan_counterpart(&self) -> Vec<Vec<i64>> {
        cartan_counterpart(self)
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .b
            .iter()
            .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Matrix mutation in direction `k` (one-based).
pub fn mutate_matrix(b: &ExchangeMatrix, k: usize) -> Result<ExchangeMatrix> {
    b.mutate(k)
}

/// Diagonal 2, off-diagonal `-|b_ij|`.
pub fn cartan_counterpart(b: &ExchangeMatrix) -> Vec<Vec<i64>> {
    let n = b.n();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { 2 } else { -b.get(i, j).abs() })
                .collect()
        })
        .collect()
}

/// Exchange matrix together with a cluster of Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed {
    pub matrix: ExchangeMatrix,
    pub cluster: Vec<LaurentPoly>,
}

impl Seed {
    /// The initial seed `(B, (x_1, ..., x_n))`.
    pub fn initial(matrix: ExchangeMatrix) -> Self {
        let n = matrix.n();
        let cluster = (0..n).map(|i| LaurentPoly::var(n, i)).collect();
        Seed { matrix, cluster }
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    /// Seed mutation in direction `k` (one-based).
    pub fn mutate(&self, k: usize) -> Result<Self> {
        let matrix = self.matrix.mutate(k)?;
        let n = self.n();
        let kk = k - 1;
        let mut plus = LaurentPoly::one(n);
        let mut minus = LaurentPoly::one(n);
        for i in 0..n {
            let b = self.matrix.get(i, kk);
            if b > 0 {
                plus = plus.mul(&self.cluster[i].pow(b as u32));
            } else if b < 0 {
                minus = minus.mul(&self.cluster[i].pow((-b) as u32));
            }
        }
        let binomial = plus.add(&minus);
        let new_var = binomial
            .exact_div(&self.cluster[kk])
            .ok_or(Error::SeedNotOnPattern)?;
        if new_var.mul(&self.cluster[kk]) != binomial {
            return Err(Error::SeedNotOnPattern);
        }
        let mut cluster = self.cluster.clone();
        cluster[kk] = new_var;
        Ok(Seed { matrix, cluster })
    }

    /// Cluster sorted by canonical text with `B` permuted to match.
    pub fn canonical(&self) -> Self {
        let texts: Vec<String> = self.cluster.iter().map(LaurentPoly::to_canonical_text).collect();
        let mut perm: Vec<usize> = (0..self.n()).collect();
        perm.sort_by(|&a, &b| texts[a].cmp(&texts[b]));
        Seed {
            matrix: self.matrix.permuted(&perm),
            cluster: perm.iter().map(|&i| self.cluster[i].clone()).collect(),
        }
    }

    fn key(&self) -> String {
        let vars: Vec<String> = self.cluster.iter().map(LaurentPoly::to_canonical_text).collect();
        format!("{}|{}", self.matrix, vars.join(";"))
    }
}

/// Seed mutation in direction `k` (one-based).
pub fn mutate_seed(s: &Seed, k: usize) -> Result<Seed> {
    s.mutate(k)
}

/// Mutation edge between two canonical seeds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasEdge {
    pub from: usize,
    pub to: usize,
    /// One-based direction in the canonical labeling of `from`.
    pub direction: usize,
}

/// All seeds reachable from an initial seed, up to relabeling.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClusterAtlas {
    pub seeds: Vec<Seed>,
    /// Distinct cluster variables sorted by canonical text.
    pub variables: Vec<LaurentPoly>,
    pub edges: Vec<AtlasEdge>,
}

impl ClusterAtlas {
    pub fn contains_variable(&self, p: &LaurentPoly) -> bool {
        self.variables.binary_search_by(|v| v.to_canonical_text().cmp(&p.to_canonical_text())).is_ok()
    }

    /// JSON document `{seeds:[{b,cluster}], variables:[...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let seeds: Vec<serde_json::Value> = self
            .seeds
            .iter()
            .map(|s| {
                serde_json::json!({
                    "b": s.matrix.rows(),
                    "cluster": s.cluster.iter().map(LaurentPoly::to_canonical_text).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({
            "seeds": seeds,
            "variables": self.variables.iter().map(LaurentPoly::to_canonical_text).collect::<Vec<_>>(),
        })
    }
}

/// Breadth-first closure of the initial seed of `b` under all mutations.
pub fn enumerate_atlas(b: &ExchangeMatrix, cap: usize) -> Result<ClusterAtlas> {
    let n = b.n();
    let start = Seed::initial(b.clone()).canonical();
    let mut index: HashMap<String, usize> = HashMap::new();
    index.insert(start.key(), 0);
    let mut seeds = vec![start];
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(cur) = queue.pop_front() {
        for k in 1..=n {
            let next = seeds[cur].mutate(k)?.canonical();
            let key = next.key();
            let to = match index.get(&key) {
                Some(&i) => i,
                None => {
                    if seeds.len() >= cap {
                        return Err(Error::NotFiniteType { cap });
                    }
                    let i = seeds.len();
                    index.insert(key, i);
                    seeds.push(next);
                    queue.push_back(i);
                    i
                }
            };
            edges.push(AtlasEdge {
                from: cur,
                to,
                direction: k,
            });
        }
    }
    let mut variables: Vec<LaurentPoly> = seeds.iter().flat_map(|s| s.cluster.iter().cloned()).collect();
    variables.sort_by_key(LaurentPoly::to_canonical_text);
    variables.dedup();
    Ok(ClusterAtlas {
        seeds,
        variables,
        edges,
    })
}

/// The exchange binomial `prod x_i^{[b_ik]_+} + prod x_i^{[-b_ik]_+}` for
/// column `k` (zero-based), with `x` replaced by arbitrary values.
pub fn exchange_binomial(b: &ExchangeMatrix, k: usize, values: &[LaurentPoly]) -> LaurentPoly {
    let nv = values[0].nvars();
    let mut plus = LaurentPoly::monomial(vec![0; nv], BigInt::one());
    let mut minus = plus.clone();
    for (i, v) in values.iter().enumerate() {
        let e = b.get(i, k);
        if e > 0 {
            plus = plus.mul(&v.pow(e as u32));
        } else if e < 0 {
            minus = minus.mul(&v.pow((-e) as u32));
        }
    }
    plus.add(&minus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c3() -> ExchangeMatrix {
        ExchangeMatrix::new(vec![vec![0, 1, -1], vec![-2, 0, 1], vec![2, -1, 0]]).unwrap()
    }

    fn c2() -> ExchangeMatrix {
        ExchangeMatrix::new(vec![vec![0, 1], vec![-2, 0]]).unwrap()
    }

    #[test]
    fn rejects_non_skew_matrices() {
        assert!(ExchangeMatrix::new(vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(ExchangeMatrix::new(vec![vec![1, 0], vec![0, 0]]).is_err());
    }

    #[test]
    fn mutation_is_involutive() {
        let b = c3();
        assert_eq!(b.mutate(2).unwrap().mutate(2).unwrap(), b);
    }

    #[test]
    fn mutation_negates_row_and_column() {
        let b = c3();
        let m = b.mutate(3).unwrap();
        for i in 0..3 {
            assert_eq!(m.get(i, 2), -b.get(i, 2));
            assert_eq!(m.get(2, i), -b.get(2, i));
        }
    }

    #[test]
    fn out_of_range_direction() {
        assert_eq!(c3().mutate(4), Err(Error::IndexOutOfRange { index: 4, n: 3 }));
        assert!(c3().mutate(0).is_err());
    }

    #[test]
    fn cartan_of_c2() {
        assert_eq!(c2().cartan_counterpart(), vec![vec![2, -1], vec![-2, 2]]);
        let z = ExchangeMatrix::new(vec![vec![0, 0], vec![0, 0]]).unwrap();
        assert_eq!(z.cartan_counterpart(), vec![vec![2, 0], vec![0, 2]]);
    }

    #[test]
    fn seed_mutation_produces_exchange_quotient() {
        let s = Seed::initial(c3());
        let m = s.mutate(2).unwrap();
        let expected = LaurentPoly::parse_polynomial(3, "x1+x3").unwrap().shift(&[0, -1, 0]);
        assert_eq!(m.cluster[1], expected);
        assert_eq!(m.mutate(2).unwrap(), s);
    }

    #[test]
    fn c2_atlas_sizes() {
        let a = enumerate_atlas(&c2(), DEFAULT_CAP).unwrap();
        assert_eq!(a.variables.len(), 6);
        assert_eq!(a.seeds.len(), 6);
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(enumerate_atlas(&c3(), 5).unwrap_err(), Error::NotFiniteType { cap: 5 });
    }
}
