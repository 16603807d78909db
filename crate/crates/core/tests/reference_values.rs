//! Fixed reference values: the worked rank-3 example and counts of type C
//! cluster patterns.

use clustertube::amod::ModuleCategory;
use clustertube::cc::CcMap;
use clustertube::cluster::{enumerate_atlas, ExchangeMatrix, DEFAULT_CAP};
use clustertube::example::{realizing_objects, reproduce_example, FrozenExample};
use clustertube::foundation::LaurentPoly;
use clustertube::grassmannian::chi_table;
use clustertube::tube::{parse_indec_list, MaximalRigid, Tube};

fn example_object() -> (Tube, MaximalRigid) {
    let tube = Tube::new(3).unwrap();
    let t = MaximalRigid::new(&tube, parse_indec_list(4, "(1,3),(3,1),(1,1)").unwrap()).unwrap();
    (tube, t)
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn example_matrix_is_realized() {
    let (tube, t) = example_object();
    let target = ExchangeMatrix::new(vec![vec![0, 1, -1], vec![-2, 0, 1], vec![2, -1, 0]]).unwrap();
    assert_eq!(tube.b_matrix_triangles(&t).unwrap(), target);
    let found = realizing_objects(&tube, &target).unwrap();
    assert!(found.contains(&t));
    // the matrix is invariant under the shift, so every translate realizes it
    for k in 0..4 {
        assert!(found.contains(&t.tau_pow(k)), "{}", t.tau_pow(k));
    }
}

#[test]
fn example_quiver_has_loop_and_oriented_three_cycle() {
    let (_, t) = example_object();
    let mc = ModuleCategory::new(&t).unwrap();
    let mut arrows = mc.arrows().to_vec();
    arrows.sort();
    assert_eq!(arrows, vec![(0, 0), (0, 1), (1, 2), (2, 0)]);
    assert_eq!(mc.loop_vertex(), 0);
}

#[test]
fn example_values_match_frozen_data() {
    let o = reproduce_example().unwrap();
    assert!(o.report.passed(), "{:?}", o.report.failures);
    assert_eq!(o.rows.len(), 9);
    assert!(o.rows.iter().all(|r| r.matches));
}

#[test]
fn long_summand_value() {
    let (tube, t) = example_object();
    let cm = CcMap::new(&t).unwrap();
    let res = cm.cc(tube.indec(1, 3)).unwrap();
    assert_eq!(res.rank, vec![1, 0, 2]);
    assert_eq!(res.coindex, vec![-1, 0, 2]);
    let expected = LaurentPoly::parse_polynomial(3, "x1^2+2*x1*x2+x2^2+x3^2").unwrap().shift(&[-1, 0, -2]);
    assert_eq!(res.poly, expected);
    let table = chi_table(cm.category(), &res.module).unwrap();
    assert_eq!(table.get(&[0, 0, 0]), 1);
    assert_eq!(table.get(&[0, 0, 1]), 2);
    assert_eq!(table.get(&[0, 0, 2]), 1);
    assert_eq!(table.get(&[1, 0, 2]), 1);
    assert_eq!(table.get(&[1, 0, 1]), 0);
}

#[test]
fn frozen_data_has_one_value_per_nonshifted_rigid_object() {
    let f = FrozenExample::load().unwrap();
    let n = f.n;
    assert_eq!(f.variables.len(), n * (n + 1) - n);
    for v in &f.variables {
        assert_eq!(f.value(v).unwrap().denominator_vector().unwrap(), v.rank);
    }
}

#[test]
fn type_c_atlases_have_catalan_type_counts() {
    for n in 2..=4usize {
        let tube = Tube::new(n).unwrap();
        let t = tube.enumerate_maximal_rigid().remove(0);
        let b = tube.b_matrix_triangles(&t).unwrap();
        let atlas = enumerate_atlas(&b, DEFAULT_CAP).unwrap();
        assert_eq!(atlas.variables.len(), n * (n + 1), "n={n}");
        assert_eq!(atlas.seeds.len() as u64, binomial(2 * n as u64, n as u64), "n={n}");
    }
}

#[test]
fn nine_tau_rigid_modules_all_locally_free() {
    let (tube, t) = example_object();
    let mc = ModuleCategory::new(&t).unwrap();
    let mut count = 0;
    for x in tube.rigid_indecomposables() {
        if mc.shifted_summand(x).is_some() {
            continue;
        }
        let m = mc.apply_f(x).unwrap();
        assert!(mc.is_tau_rigid(&m).unwrap());
        assert!(mc.is_locally_free(&m));
        count += 1;
    }
    assert_eq!(count, 9);
    assert!(!mc.is_locally_free(&mc.simple(mc.loop_vertex())));
}
