use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::module::{AModule, ModHom};
use crate::error::{Error, Result};
use crate::foundation::{q, ExactMatrix};

/// A letter of a walk: an arrow traversed forwards or backwards.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    Direct(usize),
    Inverse(usize),
}

impl Letter {
    pub fn arrow(&self) -> usize {
        match *self {
            Letter::Direct(a) | Letter::Inverse(a) => a,
        }
    }

    pub fn inverse(&self) -> Letter {
        match *self {
            Letter::Direct(a) => Letter::Inverse(a),
            Letter::Inverse(a) => Letter::Direct(a),
        }
    }
}

/// A string as a walk `v_0 -l_1- v_1 - ... - v_r`; a trivial string has no
/// letters. The usual written form lists the letters right to left.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    pub start: usize,
    pub letters: Vec<Letter>,
}

/// Walk-level data needed to build and validate strings.
#[derive(Clone, Debug)]
pub struct StringAlgebra {
    pub n: usize,
    pub arrows: Vec<(usize, usize)>,
    /// Zero paths "first `a`, then `b`".
    pub zeros: BTreeSet<(usize, usize)>,
}

impl StringAlgebra {
    fn step(&self, v: usize, l: Letter) -> Option<usize> {
        let (s, t) = self.arrows[l.arrow()];
        match l {
            Letter::Direct(_) if s == v => Some(t),
            Letter::Inverse(_) if t == v => Some(s),
            _ => None,
        }
    }

    fn compatible(&self, prev: Letter, next: Letter) -> bool {
        match (prev, next) {
            (Letter::Direct(a), Letter::Direct(b)) => !self.zeros.contains(&(a, b)),
            (Letter::Inverse(a), Letter::Inverse(b)) => !self.zeros.contains(&(b, a)),
            (Letter::Direct(a), Letter::Inverse(b)) | (Letter::Inverse(a), Letter::Direct(b)) => a != b,
        }
    }

    /// Vertices `v_0, ..., v_r` visited by the walk; errors if it is not a
    /// valid string.
    pub fn vertices(&self, w: &Word) -> Result<Vec<usize>> {
        let mut vs = vec![w.start];
        for (p, &l) in w.letters.iter().enumerate() {
            let v = self
                .step(*vs.last().expect("nonempty"), l)
                .ok_or_else(|| Error::InvalidObject("letters do not compose".into()))?;
            if p > 0 && !self.compatible(w.letters[p - 1], l) {
                return Err(Error::InvalidObject("word contains a relation or a cancellation".into()));
            }
            vs.push(v);
        }
        Ok(vs)
    }

    pub fn inverse_word(&self, w: &Word) -> Word {
        let end = *self.vertices(w).expect("valid word").last().expect("nonempty");
        Word {
            start: end,
            letters: w.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    /// All strings up to inversion, shortest first. Errors if strings grow
    /// beyond `max_len`, which would mean the algebra is not string-finite.
    pub fn enumerate(&self, max_len: usize) -> Result<Vec<Word>> {
        let mut out = BTreeSet::new();
        let mut frontier: Vec<(Word, usize)> = (0..self.n)
            .map(|v| (Word { start: v, letters: Vec::new() }, v))
            .collect();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (w, end) in frontier {
                if w.letters.len() > max_len {
                    return Err(Error::Invariant("string length bound exceeded".into()));
                }
                let inv = self.inverse_word(&w);
                out.insert(if inv < w { inv } else { w.clone() });
                for a in 0..self.arrows.len() {
                    for l in [Letter::Direct(a), Letter::Inverse(a)] {
                        let Some(v) = self.step(end, l) else { continue };
                        if w.letters.last().is_some_and(|&p| !self.compatible(p, l)) {
                            continue;
                        }
                        let mut letters = w.letters.clone();
                        letters.push(l);
                        next.push((Word { start: w.start, letters }, v));
                    }
                }
            }
            frontier = next;
        }
        let mut v: Vec<Word> = out.into_iter().collect();
        v.sort_by_key(|w| (w.letters.len(), w.clone()));
        Ok(v)
    }

    /// Action pairs `(from, to)` on positions: the arrow of letter `p`
    /// sends `z_p -> z_{p-1}` when direct and `z_{p-1} -> z_p` when inverse.
    pub fn actions(&self, w: &Word) -> Vec<(usize, usize, usize)> {
        w.letters
            .iter()
            .enumerate()
            .map(|(k, &l)| {
                let p = k + 1;
                match l {
                    Letter::Direct(a) => (a, p, p - 1),
                    Letter::Inverse(a) => (a, p - 1, p),
                }
            })
            .collect()
    }

    /// The string module `M(w)` with basis `z_0, ..., z_r` grouped by vertex.
    pub fn module(&self, w: &Word) -> Result<AModule> {
        let vs = self.vertices(w)?;
        let mut dims = vec![0; self.n];
        let mut local = Vec::with_capacity(vs.len());
        for &v in &vs {
            local.push(dims[v]);
            dims[v] += 1;
        }
        let mut maps: Vec<ExactMatrix> = self
            .arrows
            .iter()
            .map(|&(s, t)| ExactMatrix::zeros(dims[s], dims[t]))
            .collect();
        for (a, from, to) in self.actions(w) {
            maps[a].set(local[to], local[from], q(1));
        }
        Ok(AModule {
            arrows: self.arrows.clone(),
            dims,
            maps,
            provenance: None,
        })
    }

    /// Written form with letters right to left, e.g. `(1->2)rho(3->1)`.
    pub fn display(&self, w: &Word) -> String {
        if w.letters.is_empty() {
            return format!("1_({})", w.start + 1);
        }
        w.letters
            .iter()
            .rev()
            .map(|&l| {
                let (s, t) = self.arrows[l.arrow()];
                let name = if s == t { "rho".to_string() } else { format!("({}->{})", s + 1, t + 1) };
                match l {
                    Letter::Direct(_) => name,
                    Letter::Inverse(_) => format!("{name}^-1"),
                }
            })
            .collect()
    }
}

/// A module in string normal form: the word, the vertex of each basis
/// vector `z_p`, and the isomorphism `M(w) -> M` identifying the bases.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StringBasis {
    pub word: Word,
    pub written: String,
    pub vertices: Vec<usize>,
    /// `(arrow, from, to)` on positions.
    pub actions: Vec<(usize, usize, usize)>,
    pub module: AModule,
    pub iso: ModHom,
}

const ISO_ATTEMPTS: usize = 12;

/// Searches for an isomorphism `from -> to` among random integer
/// combinations of a Hom basis; deterministic for a fixed seed.
pub fn find_isomorphism(from: &AModule, to: &AModule, seed: u64) -> Option<ModHom> {
    if from.dims != to.dims {
        return None;
    }
    let basis = from.hom_basis(to);
    if basis.is_empty() {
        return if from.is_zero() { Some(ModHom::zero(from, to)) } else { None };
    }
    if basis.len() != from.hom_dim(from) || basis.len() != to.hom_dim(to) {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ISO_ATTEMPTS {
        let mut f = ModHom::zero(from, to);
        for b in &basis {
            let c: i64 = rng.gen_range(-7..=7);
            f = f.add(&b.scale(&q(c)));
        }
        if f.is_iso() {
            return Some(f);
        }
    }
    None
}

/// Identifies an indecomposable module with a string module.
pub fn string_normal_form(alg: &StringAlgebra, strings: &[Word], m: &AModule) -> Result<StringBasis> {
    for w in strings {
        let sm = alg.module(w)?;
        if sm.dims != m.dims {
            continue;
        }
        if let Some(iso) = find_isomorphism(&sm, m, 0x5eed) {
            return Ok(StringBasis {
                word: w.clone(),
                written: alg.display(w),
                vertices: alg.vertices(w)?,
                actions: alg.actions(w),
                module: sm,
                iso,
            });
        }
    }
    Err(Error::NotStringModule)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.start + 1)?;
        for l in &self.letters {
            match l {
                Letter::Direct(a) => write!(f, " {a}")?,
                Letter::Inverse(a) => write!(f, " {a}'")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// alpha: 1->2, beta: 2->3, gamma: 3->1, rho: 1->1 with the gentle relations.
    fn example() -> StringAlgebra {
        StringAlgebra {
            n: 3,
            arrows: vec![(0, 1), (1, 2), (2, 0), (0, 0)],
            zeros: [(0, 1), (1, 2), (2, 0), (3, 3)].into_iter().collect(),
        }
    }

    #[test]
    fn example_string_modules() {
        let alg = example();
        // w1 = alpha rho gamma, read right to left as a walk 3 -> 1 -> 1 -> 2.
        let w1 = Word {
            start: 2,
            letters: vec![Letter::Direct(2), Letter::Direct(3), Letter::Direct(0)],
        };
        let m1 = alg.module(&w1).unwrap();
        assert_eq!(m1.dims, vec![2, 1, 1]);
        assert_eq!(m1.maps[3], ExactMatrix::from_i64_rows(&[vec![0, 1], vec![0, 0]]));
        assert_eq!(alg.display(&w1), "(1->2)rho(3->1)");
        let w2 = Word {
            start: 2,
            letters: vec![Letter::Direct(2), Letter::Inverse(3), Letter::Direct(0)],
        };
        let m2 = alg.module(&w2).unwrap();
        assert_eq!(m2.maps[3], ExactMatrix::from_i64_rows(&[vec![0, 0], vec![1, 0]]));
        assert!(find_isomorphism(&m1, &m2, 1).is_none());
    }

    #[test]
    fn relations_are_rejected() {
        let alg = example();
        let bad = Word {
            start: 0,
            letters: vec![Letter::Direct(0), Letter::Direct(1)],
        };
        assert!(alg.vertices(&bad).is_err());
        let cancel = Word {
            start: 0,
            letters: vec![Letter::Direct(0), Letter::Inverse(0)],
        };
        assert!(alg.vertices(&cancel).is_err());
    }

    #[test]
    fn strings_are_finite_and_modules_satisfy_relations() {
        let alg = example();
        let words = alg.enumerate(16).unwrap();
        assert!(words.len() > 3);
        for w in &words {
            let m = alg.module(w).unwrap();
            for &(a, b) in &alg.zeros {
                assert!(m.path_vanishes(a, b), "{}", alg.display(w));
            }
            let vs = alg.vertices(w).unwrap();
            for (v, &d) in m.dims.iter().enumerate() {
                assert_eq!(vs.iter().filter(|&&u| u == v).count(), d, "{}", alg.display(w));
            }
        }
    }

    #[test]
    fn normal_form_recovers_a_permuted_basis() {
        let alg = example();
        let words = alg.enumerate(16).unwrap();
        let w1 = Word {
            start: 2,
            letters: vec![Letter::Direct(2), Letter::Direct(3), Letter::Direct(0)],
        };
        let mut m = alg.module(&w1).unwrap();
        // change basis at the loop vertex by g = [[1,1],[0,1]]
        let g = ExactMatrix::from_i64_rows(&[vec![1, 1], vec![0, 1]]);
        let gi = g.inverse().unwrap();
        for (k, &(s, t)) in alg.arrows.iter().enumerate() {
            let left = if s == 0 { g.clone() } else { ExactMatrix::identity(m.dims[s]) };
            let right = if t == 0 { gi.clone() } else { ExactMatrix::identity(m.dims[t]) };
            m.maps[k] = &(&left * &m.maps[k]) * &right;
        }
        let sb = string_normal_form(&alg, &words, &m).unwrap();
        assert_eq!(sb.module.dims, m.dims);
        assert!(sb.module.is_hom(&m, &sb.iso));
        assert_eq!(alg.module(&sb.word).unwrap(), sb.module);
        let inv = alg.inverse_word(&w1);
        assert!(sb.word == w1 || sb.word == inv);
    }
}
