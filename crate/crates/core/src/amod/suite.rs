use super::category::ModuleCategory;
use super::module::{AModule, ModHom};
use super::string::find_isomorphism;
use crate::cluster::ExchangeMatrix;
use crate::error::Result;
use crate::report::Report;
use crate::tube::{CHom, Indec};

const ISO_SEED: u64 = 0x1d3;

fn isomorphic(a: &AModule, b: &AModule) -> bool {
    find_isomorphism(a, b, ISO_SEED).is_some()
}

fn b_times(b: &ExchangeMatrix, v: &[i64]) -> Vec<i64> {
    b.apply(v)
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn unit(n: usize, k: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    e[k] = 1;
    e
}

/// The index/coindex identities for one maximal rigid object: the matrix
/// relation between coindex and index, the shift relation, additivity on
/// exchange triangles and on AR triangles, and the maximal locally free
/// submodules and factors of indecomposable projectives and injectives.
pub fn verify_index_suite(mc: &ModuleCategory) -> Result<Report> {
    let mut r = Report::new(format!("index suite for {}", mc.rigid()));
    let b = mc.tube().b_matrix_triangles(mc.rigid())?;
    matrix_relation(mc, &b, &mut r);
    shift_relation(mc, &mut r);
    exchange_triangles(mc, &mut r)?;
    ar_triangles(mc, &b, &mut r)?;
    long_summand_parts(mc, &mut r)?;
    Ok(r)
}

fn matrix_relation(mc: &ModuleCategory, b: &ExchangeMatrix, r: &mut Report) {
    for x in mc.tube().rigid_indecomposables() {
        let Some(ci) = r.attempt(&format!("coindex {x}"), mc.coindex(x)) else { continue };
        let Some(ii) = r.attempt(&format!("index {x}"), mc.index(x)) else { continue };
        let rank = if mc.shifted_summand(x).is_some() {
            vec![0; mc.n()]
        } else {
            let Some(m) = r.attempt(&format!("F{x}"), mc.apply_f(x)) else { continue };
            let Some(rank) = r.attempt(&format!("rank F{x}"), mc.rank_vector(&m)) else { continue };
            rank
        };
        let diff: Vec<i64> = ci.iter().zip(&ii).map(|(c, i)| c - i).collect();
        let br = b_times(b, &rank);
        r.check(diff == br, || format!("coind - ind of {x} is {diff:?}, B rank = {br:?}"));
    }
}

fn shift_relation(mc: &ModuleCategory, r: &mut Report) {
    for x in mc.tube().rigid_indecomposables() {
        let Some(ii) = r.attempt(&format!("index {x}"), mc.index(x)) else { continue };
        let Some(cs) = r.attempt(&format!("coindex {}", x.tau()), mc.coindex(x.tau())) else { continue };
        let neg: Vec<i64> = cs.iter().map(|c| -c).collect();
        r.check(ii == neg, || format!("ind {x} = {ii:?} but -coind of its shift = {neg:?}"));
    }
}

/// `F` of a morphism assembled from approximation components.
fn f_of(mc: &ModuleCategory, xs: &[Indec], ys: &[Indec], comps: Vec<(usize, usize, CHom)>) -> ModHom {
    mc.apply_f_matrix(xs, ys, &comps)
}

fn exchange_triangles(mc: &ModuleCategory, r: &mut Report) -> Result<()> {
    let tube = mc.tube();
    let t = mc.rigid();
    for k in 0..mc.n() {
        let mu = tube.mutate_rigid(t, k)?;
        let rest: Vec<Indec> = t.summands().iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| *x).collect();
        // T_k^* -> U -> T_k and T_k -> U' -> T_k^*
        for (x, z, mid) in [(mu.new, mu.old, &mu.u), (mu.old, mu.new, &mu.u_prime)] {
            let right = tube.right_approximation(&rest, z)?;
            let left = tube.left_approximation(x, &rest)?;
            let from_right: Vec<Indec> = right.iter().map(|c| rest[c.index]).collect();
            let from_left: Vec<Indec> = left.iter().map(|c| rest[c.index]).collect();
            let (mut sr, mut sl) = (from_right.clone(), from_left.clone());
            sr.sort();
            sl.sort();
            r.check(&sr == mid && &sl == mid, || {
                format!("approximations of {x} -> ? -> {z} disagree: {sl:?} vs {sr:?}")
            });
            let g = f_of(
                mc,
                &from_right,
                &[z],
                right.iter().enumerate().map(|(i, c)| (i, 0, c.morphism.clone())).collect(),
            );
            let f = f_of(
                mc,
                &[x],
                &from_left,
                left.iter().enumerate().map(|(i, c)| (0, i, c.morphism.clone())).collect(),
            );
            let all_t = [x, z].iter().chain(mid.iter()).all(|&o| mc.in_pr_t(o));
            let all_st = [x, z].iter().chain(mid.iter()).all(|&o| mc.in_pr_sigma_t(o));
            if g.is_surjective() && all_t {
                let lhs = mc.index_sum(mid)?;
                let rhs = add(&mc.index(x)?, &mc.index(z)?);
                r.check(lhs == rhs, || format!("index not additive on {x} -> {mid:?} -> {z}"));
            }
            if f.is_injective() && all_st {
                let lhs = mc.coindex_sum(mid)?;
                let rhs = add(&mc.coindex(x)?, &mc.coindex(z)?);
                r.check(lhs == rhs, || format!("coindex not additive on {x} -> {mid:?} -> {z}"));
            }
        }
    }
    Ok(())
}

fn ar_triangles(mc: &ModuleCategory, b: &ExchangeMatrix, r: &mut Report) -> Result<()> {
    let tube = mc.tube();
    let n = mc.n();
    for x in tube.rigid_indecomposables() {
        let sx = x.tau();
        let mut mid = vec![tube.indec(x.a() as i64 - 1, x.b() + 1)];
        if x.b() > 1 {
            mid.push(tube.indec(x.a() as i64, x.b() - 1));
        }
        let admissible = mid.iter().all(|&y| mc.in_pr_t(y) && mc.in_pr_sigma_t(y));
        if !admissible {
            continue;
        }
        let fy = mc.apply_f_sum(&mid)?;
        let x_shifted = mc.shifted_summand(x);
        let sx_shifted = mc.shifted_summand(sx);
        match (x_shifted, sx_shifted) {
            (None, None) => {
                let fx = mc.apply_f(x)?;
                let fsx = mc.apply_f(sx)?;
                let dims_ok = fy.dims == add_usize(&fx.dims, &fsx.dims);
                r.check(dims_ok, || format!("AR sequence ending at F{x} is not exact"));
                let tau = mc.tau(&fx)?;
                r.check(isomorphic(&tau, &fsx), || format!("tau_A F{x} is not F{sx}"));
                let ind = add(&mc.index(x)?, &mc.index(sx)?);
                let coind = add(&mc.coindex(x)?, &mc.coindex(sx)?);
                r.check(mc.index_sum(&mid)? == ind, || format!("index not additive on the AR triangle at {x}"));
                r.check(mc.coindex_sum(&mid)? == coind, || {
                    format!("coindex not additive on the AR triangle at {x}")
                });
            }
            (Some(k), _) => {
                r.check(k != long_index(mc), || format!("AR triangle at shifted long summand {x} is admissible"));
                let ik = mc.injective(k);
                r.check(isomorphic(&ik, &mc.apply_f(sx)?), || format!("F{sx} is not I{}", k + 1));
                let fac = mc.max_locally_free_factor_of_injective(k)?;
                r.check(mc.is_locally_free(&fac) && isomorphic(&fac, &fy), || {
                    format!("F of {mid:?} is not the locally free factor of I{}", k + 1)
                });
                let expected: Vec<i64> = b_times(b, &unit(n, k)).iter().map(|v| -v).collect();
                r.check(mc.coindex_sum(&mid)? == expected, || format!("coindex of {mid:?} is not -B e{}", k + 1));
            }
            (None, Some(k)) => {
                r.check(k != long_index(mc), || format!("AR triangle at long summand {x} is admissible"));
                let sub = mc.max_locally_free_submodule_of_projective(k)?;
                r.check(mc.is_locally_free(&sub) && isomorphic(&sub, &fy), || {
                    format!("F of {mid:?} is not the locally free submodule of P{}", k + 1)
                });
                let lhs = mc.coindex(x)?;
                let rhs = add(&mc.coindex_sum(&mid)?, &mc.coindex(x.tau_pow(2))?);
                r.check(lhs == rhs, || format!("coindex relation fails at {x}"));
            }
        }
    }
    Ok(())
}

fn add_usize(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn long_index(mc: &ModuleCategory) -> usize {
    let t = mc.rigid();
    t.position(t.long_summand()).expect("long summand")
}

/// `F((1,n-1))^2` and `F((n+1,n-1))^2` are the maximal locally free
/// submodule of `P_1` and factor of `I_1`, after normalizing the long
/// summand to `(1,n)`.
fn long_summand_parts(mc: &ModuleCategory, r: &mut Report) -> Result<()> {
    let tube = mc.tube();
    let n = mc.n();
    let s = mc.normalizing_shift();
    let at = |a: i64, b: usize| tube.indec(a, b).tau_pow(-s);
    let k = long_index(mc);
    let p = mc.projective(k);
    let sub = mc.max_locally_free_submodule_of_projective(k)?;
    let mut quotient_dims: Vec<usize> = p.dims.iter().zip(&sub.dims).map(|(a, b)| a - b).collect();
    quotient_dims[k] -= 2;
    r.check(quotient_dims.iter().all(|&d| d == 0), || "P1 modulo its locally free part is not 2 S1".into());
    r.check(mc.is_locally_free(&sub), || "locally free submodule of P1 is not locally free".into());
    if n >= 2 {
        let y = at(1, n - 1);
        let fy = mc.apply_f_sum(&[y, y])?;
        r.check(isomorphic(&sub, &fy), || format!("F({y})^2 is not the locally free submodule of P1"));
        let inj = mc.injective(k);
        r.check(isomorphic(&inj, &mc.apply_f(at(n as i64, n))?), || "F((n,n)) is not I1".into());
        let fac = mc.max_locally_free_factor_of_injective(k)?;
        let z = at(n as i64 + 1, n - 1);
        let fz = mc.apply_f_sum(&[z, z])?;
        r.check(mc.is_locally_free(&fac) && isomorphic(&fac, &fz), || {
            format!("F({z})^2 is not the locally free factor of I1")
        });
    }
    Ok(())
}
