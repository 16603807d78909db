//! Property-based invariants over randomly chosen objects.

use proptest::prelude::*;

use clustertube::cc::CcMap;
use clustertube::cluster::ExchangeMatrix;
use clustertube::foundation::LaurentPoly;
use clustertube::tube::{Indec, Tube};

fn rigid_pair(n: usize, ti: usize, xi: usize, yi: usize) -> (CcMap, Indec, Indec) {
    let tube = Tube::new(n).unwrap();
    let all = tube.enumerate_maximal_rigid();
    let t = &all[ti % all.len()];
    let rigid = tube.rigid_indecomposables();
    let x = rigid[xi % rigid.len()];
    let y = rigid[yi % rigid.len()];
    (CcMap::new(t).unwrap(), x, y)
}

fn small_poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((prop::collection::vec(-2i32..3, 3), -3i64..4), 1..5).prop_map(|terms| {
        LaurentPoly::from_terms(3, terms.into_iter().map(|(e, c)| (e, c.into())))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    /// The value on a direct sum of compatible rigid objects is the product.
    #[test]
    fn multiplicative_on_compatible_pairs(n in 2usize..4, ti in 0usize..1000, xi in 0usize..100, yi in 0usize..100) {
        let (cm, x, y) = rigid_pair(n, ti, xi, yi);
        let tube = cm.tube();
        prop_assume!(tube.ext1_c_dim(x, y) == 0 && tube.ext1_c_dim(y, x) == 0);
        let sum = cm.cc_sum(&[x, y]).unwrap();
        let prod = cm.cc(x).unwrap().poly.mul(&cm.cc(y).unwrap().poly);
        prop_assert_eq!(sum, prod);
    }

    /// Extensions in the cluster tube are symmetric.
    #[test]
    fn ext_is_symmetric(n in 2usize..5, xi in 0usize..100, yi in 0usize..100) {
        let tube = Tube::new(n).unwrap();
        let rigid = tube.rigid_indecomposables();
        let (x, y) = (rigid[xi % rigid.len()], rigid[yi % rigid.len()]);
        prop_assert_eq!(tube.ext1_c_dim(x, y), tube.ext1_c_dim(y, x));
    }

    /// Values are cluster variables with positive coefficients whose
    /// denominator is the rank of the module.
    #[test]
    fn values_have_positive_coefficients(n in 2usize..4, ti in 0usize..1000, xi in 0usize..100) {
        let (cm, x, _) = rigid_pair(n, ti, xi, 0);
        let res = cm.cc(x).unwrap();
        prop_assert!(res.poly.terms().all(|(_, c)| *c > 0.into()));
        if cm.category().shifted_summand(x).is_none() {
            prop_assert_eq!(res.denom, res.rank);
        }
    }

    /// Mutating twice in the same direction is the identity.
    #[test]
    fn matrix_mutation_is_involutive(n in 2usize..5, ti in 0usize..1000, k in 0usize..5) {
        let tube = Tube::new(n).unwrap();
        let all = tube.enumerate_maximal_rigid();
        let b = tube.b_matrix_triangles(&all[ti % all.len()]).unwrap();
        let k = k % n + 1;
        prop_assert_eq!(b.mutate(k).unwrap().mutate(k).unwrap(), b);
    }

    /// Exact division inverts multiplication.
    #[test]
    fn laurent_division_inverts_product(p in small_poly(), q in small_poly()) {
        prop_assume!(!q.is_zero() && !p.is_zero());
        let pq = p.mul(&q);
        prop_assert_eq!(pq.exact_div(&q), Some(p));
    }

    /// Canonical text round-trips.
    #[test]
    fn canonical_text_round_trips(p in small_poly()) {
        let text = p.to_canonical_text();
        prop_assert_eq!(LaurentPoly::parse_canonical(3, &text).unwrap(), p);
    }

    /// Skew-symmetrizability survives mutation of a random valid matrix.
    #[test]
    fn mutated_matrices_remain_valid(n in 2usize..5, ti in 0usize..1000, path in prop::collection::vec(0usize..5, 0..8)) {
        let tube = Tube::new(n).unwrap();
        let all = tube.enumerate_maximal_rigid();
        let mut b = tube.b_matrix_triangles(&all[ti % all.len()]).unwrap();
        for k in path {
            b = b.mutate(k % n + 1).unwrap();
            prop_assert!(ExchangeMatrix::new(b.rows().to_vec()).is_ok());
        }
    }
}
