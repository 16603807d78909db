//! Integer Laurent polynomials in a fixed number of variables.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::FoundationError;

/// Exponent vector of a monomial.
pub type Exponent = Vec<i32>;

/// Integer-coefficient Laurent polynomial keyed by exponent vectors.
///
/// Terms are kept in lexicographic exponent order with no zero coefficients,
/// so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, BigInt>,
}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(vec![0; nvars], BigInt::one())
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        Self::monomial(vec![0; nvars], BigInt::from(c))
    }

    /// The variable `x_{i+1}` (zero-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, BigInt::one())
    }

    pub fn monomial(exp: Exponent, coeff: BigInt) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentPoly { nvars, terms }
    }

    /// `x^alpha` with coefficient one.
    pub fn x_pow(alpha: &[i64]) -> Self {
        Self::monomial(alpha.iter().map(|&a| a as i32).collect(), BigInt::one())
    }

    /// Builds from `(exponent, coefficient)` pairs, merging duplicates.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponent, BigInt)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exp: Exponent, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(coeff);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.nvars)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &[i32]) -> BigInt {
        self.terms.get(exp).cloned().unwrap_or_else(BigInt::zero)
    }

    fn check_same_ring(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "Laurent polynomials in different rings");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_ring(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same_ring(other);
        let mut acc: BTreeMap<Exponent, BigInt> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponent = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += c1 * c2;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        LaurentPoly {
            nvars: self.nvars,
            terms: acc,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    /// Multiplication by the monomial `x^alpha`.
    pub fn shift(&self, alpha: &[i64]) -> Self {
        assert_eq!(alpha.len(), self.nvars, "shift length mismatch");
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let e2 = e.iter().zip(alpha).map(|(a, b)| a + *b as i32).collect();
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// `d_i = -(minimum exponent of x_i)`, so that `p = f / prod x_i^{d_i}`
    /// with `f` a polynomial divisible by no variable.
    pub fn denominator_vector(&self) -> Result<Vec<i64>, FoundationError> {
        if self.is_zero() {
            return Err(FoundationError::UndefinedDenominator);
        }
        Ok((0..self.nvars)
            .map(|i| -(self.terms.keys().map(|e| e[i]).min().unwrap_or(0) as i64))
            .collect())
    }

    fn min_max_exponents(&self) -> (Vec<i32>, Vec<i32>) {
        let mins = (0..self.nvars)
            .map(|i| self.terms.keys().map(|e| e[i]).min().unwrap_or(0))
            .collect();
        let maxs = (0..self.nvars)
            .map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0))
            .collect();
        (mins, maxs)
    }

    /// Exact quotient `self / divisor` in the Laurent ring, or `None`.
    ///
    /// Lexicographic leading-term division. Any exact quotient has its
    /// exponents in the box `[min(p)-min(d), max(p)-max(d)]`, so a candidate
    /// term outside the box proves non-divisibility.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        self.check_same_ring(divisor);
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        let (pmin, pmax) = self.min_max_exponents();
        let (dmin, dmax) = divisor.min_max_exponents();
        let lo: Vec<i32> = pmin.iter().zip(&dmin).map(|(a, b)| a - b).collect();
        let hi: Vec<i32> = pmax.iter().zip(&dmax).map(|(a, b)| a - b).collect();
        let (dlead_e, dlead_c) = divisor.terms.iter().next_back().expect("nonzero divisor");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((re, rc)) = rem.terms.iter().next_back() {
            let (qr, r) = rc.div_rem(dlead_c);
            if !r.is_zero() {
                return None;
            }
            let qe: Exponent = re.iter().zip(dlead_e).map(|(a, b)| a - b).collect();
            let in_box = qe
                .iter()
                .enumerate()
                .all(|(i, &v)| lo[i] <= v && v <= hi[i]);
            if !in_box {
                return None;
            }
            let t = Self::monomial(qe, qr);
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        debug_assert_eq!(quot.mul(divisor), *self);
        Some(quot)
    }

    /// Canonical text: terms in ascending lexicographic exponent order,
    /// each written `+c*x^(e1,...,en)`; the zero polynomial is `0`.
    pub fn to_canonical_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (e, c) in &self.terms {
            let sign = if c.is_negative() { '-' } else { '+' };
            let exps: Vec<String> = e.iter().map(ToString::to_string).collect();
            s.push_str(&format!("{sign}{}*x^({})", c.abs(), exps.join(",")));
        }
        s
    }

    /// Parses the canonical text form.
    pub fn parse_canonical(nvars: usize, text: &str) -> Result<Self, FoundationError> {
        let text = text.trim();
        let bad = || FoundationError::Parse(text.to_string());
        if text == "0" {
            return Ok(Self::zero(nvars));
        }
        let mut p = Self::zero(nvars);
        let mut rest = text;
        while !rest.is_empty() {
            let sign = match rest.as_bytes()[0] {
                b'+' => BigInt::one(),
                b'-' => -BigInt::one(),
                _ => return Err(bad()),
            };
            let star = rest.find('*').ok_or_else(bad)?;
            let coeff: BigInt = rest[1..star].parse().map_err(|_| bad())?;
            let open = rest.find('(').ok_or_else(bad)?;
            let close = rest.find(')').ok_or_else(bad)?;
            if &rest[star..open] != "*x^" {
                return Err(bad());
            }
            let exp: Exponent = rest[open + 1..close]
                .split(',')
                .map(|t| t.trim().parse::<i32>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad())?;
            if exp.len() != nvars {
                return Err(bad());
            }
            p.add_term(exp, sign * coeff);
            rest = &rest[close + 1..];
        }
        Ok(p)
    }

    /// Parses an ordinary polynomial expression such as `x1^2+2*x1*x2-x3`.
    /// Variables are `x1..xn`; exponents are nonnegative integers.
    pub fn parse_polynomial(nvars: usize, text: &str) -> Result<Self, FoundationError> {
        let bad = || FoundationError::Parse(text.to_string());
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in cleaned.chars().enumerate() {
            if (ch == '+' || ch == '-') && i > 0 {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        let mut p = Self::zero(nvars);
        for term in terms {
            let (neg, body) = match term.as_bytes()[0] {
                b'-' => (true, &term[1..]),
                b'+' => (false, &term[1..]),
                _ => (false, term.as_str()),
            };
            let mut coeff = BigInt::one();
            let mut exp = vec![0i32; nvars];
            for factor in body.split('*') {
                if let Some(v) = factor.strip_prefix('x') {
                    let (idx, pow) = match v.split_once('^') {
                        Some((a, b)) => (a, b.parse::<i32>().map_err(|_| bad())?),
                        None => (v, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| bad())?;
                    if idx == 0 || idx > nvars {
                        return Err(bad());
                    }
                    exp[idx - 1] += pow;
                } else {
                    coeff *= factor.parse::<BigInt>().map_err(|_| bad())?;
                }
            }
            if neg {
                coeff = -coeff;
            }
            p.add_term(exp, coeff);
        }
        Ok(p)
    }

    /// Human-oriented rendering as `numerator/denominator-monomial`.
    pub fn to_fraction_string(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let den = self.denominator_vector().expect("nonzero");
        let shift: Vec<i64> = den.iter().map(|&d| d.max(0)).collect();
        let num = self.shift(&shift);
        let mut parts = Vec::new();
        for (e, c) in num.terms.iter().rev() {
            let mono = monomial_text(e);
            let body = match (c.abs().is_one(), mono.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => mono,
                (false, true) => c.abs().to_string(),
                (false, false) => format!("{}*{}", c.abs(), mono),
            };
            let sign = if c.is_negative() { "-" } else { "+" };
            parts.push(format!("{sign}{body}"));
        }
        let mut numer = parts.concat();
        if numer.starts_with('+') {
            numer.remove(0);
        }
        let denom = monomial_text(&shift.iter().map(|&d| d as i32).collect::<Vec<_>>());
        if denom.is_empty() {
            numer
        } else {
            format!("({numer})/({denom})")
        }
    }
}

fn monomial_text(e: &[i32]) -> String {
    e.iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, &k)| {
            if k == 1 {
                format!("x{}", i + 1)
            } else {
                format!("x{}^{}", i + 1, k)
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_text())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Small(i64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exp: Exponent,
    coeff: CoeffRepr,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(e, c)| TermRepr {
                exp: e.clone(),
                coeff: match c.to_i64() {
                    Some(v) => CoeffRepr::Small(v),
                    None => CoeffRepr::Big(c.to_string()),
                },
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    /// The variable count is taken from the exponent length; an empty term
    /// list deserializes to the zero polynomial in zero variables.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(deserializer)?;
        let nvars = terms.first().map_or(0, |t| t.exp.len());
        let mut p = LaurentPoly::zero(nvars);
        for t in terms {
            if t.exp.len() != nvars {
                return Err(serde::de::Error::custom("exponent length mismatch"));
            }
            let c = match t.coeff {
                CoeffRepr::Small(v) => BigInt::from(v),
                CoeffRepr::Big(s) => s.parse().map_err(serde::de::Error::custom)?,
            };
            p.add_term(t.exp, c);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(n: usize, s: &str) -> LaurentPoly {
        LaurentPoly::parse_polynomial(n, s).unwrap()
    }

    #[test]
    fn single_variable_has_negative_denominator() {
        assert_eq!(LaurentPoly::var(3, 0).denominator_vector().unwrap(), vec![-1, 0, 0]);
    }

    #[test]
    fn zero_polynomial_has_no_denominator() {
        let err = LaurentPoly::zero(2).denominator_vector().unwrap_err();
        assert_eq!(err.to_string(), "undefined denominator");
    }

    #[test]
    fn denominators_of_fractions() {
        let p = poly(3, "x1+x3").shift(&[0, -1, 0]);
        assert_eq!(p.denominator_vector().unwrap(), vec![0, 1, 0]);
        let p = poly(3, "x1^2+2*x1*x2+x2^2+x3^2").shift(&[-1, 0, -2]);
        assert_eq!(p.denominator_vector().unwrap(), vec![1, 0, 2]);
    }

    #[test]
    fn canonical_text_round_trip() {
        let p = poly(3, "x1^2-2*x2+5").shift(&[0, 0, -2]);
        let text = p.to_canonical_text();
        assert_eq!(text, "+5*x^(0,0,-2)-2*x^(0,1,-2)+1*x^(2,0,-2)");
        assert_eq!(LaurentPoly::parse_canonical(3, &text).unwrap(), p);
        assert_eq!(LaurentPoly::zero(2).to_canonical_text(), "0");
    }

    #[test]
    fn json_round_trip() {
        let p = poly(2, "3*x1-x2^2").shift(&[-1, 0]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"[{"exp":[-1,2],"coeff":-1},{"exp":[0,0],"coeff":3}]"#);
        let back: LaurentPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn exact_division_recovers_factor() {
        let a = poly(3, "x1+x2+x3");
        let b = poly(3, "x1^2+x3").shift(&[0, -1, 0]);
        let prod = a.mul(&b);
        assert_eq!(prod.exact_div(&b), Some(a.clone()));
        assert_eq!(prod.exact_div(&a), Some(b));
        assert_eq!(poly(2, "x1+1").exact_div(&poly(2, "x1+x2")), None);
        assert_eq!(poly(1, "x1+1").exact_div(&poly(1, "2")), None);
    }

    #[test]
    fn fraction_rendering() {
        let p = poly(3, "x1+x3").shift(&[0, -1, 0]);
        assert_eq!(p.to_fraction_string(), "(x1+x3)/(x2)");
    }
}
