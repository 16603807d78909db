use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_traits::Zero;

use super::module::{AModule, ModHom};
use super::string::{string_normal_form, StringAlgebra, StringBasis, Word};
use crate::cluster::ExchangeMatrix;
use crate::endo::{build_endomorphism_algebra, gabriel_quiver, verify_relations, zero_relations, FinDimAlgebra, Quiver};
use crate::error::{Error, Result};
use crate::foundation::{q, ExactMatrix, Rational};
use crate::tube::{CHom, Indec, MaximalRigid, Tube};

/// `mod A` for `A = End_C(T)`, together with the functor `F = Hom_C(T, -)`.
#[derive(Debug)]
pub struct ModuleCategory {
    tube: Tube,
    t: MaximalRigid,
    alg: FinDimAlgebra,
    quiver: Quiver,
    arrows: Vec<(usize, usize)>,
    arrow_elements: Vec<CHom>,
    loop_vertex: usize,
    strings: OnceLock<Result<(StringAlgebra, Vec<Word>)>>,
}

/// Minimal projective presentation `P_1 -> P_0 -> M -> 0`: vertex lists of
/// the summands and, for each pair, the element of `A` inducing the map.
#[derive(Clone, Debug)]
pub struct ProjectivePresentation {
    pub p0: Vec<usize>,
    pub p1: Vec<usize>,
    /// `elements[l][k]`: coordinates in `Hom(T_{p1[l]}, T_{p0[k]})`.
    pub elements: Vec<Vec<Vec<Rational>>>,
}

impl ModuleCategory {
    pub fn new(t: &MaximalRigid) -> Result<Self> {
        let tube = Tube::new(t.n())?;
        let alg = build_endomorphism_algebra(&tube, t)?;
        let quiver = gabriel_quiver(&alg);
        verify_relations(&alg, &quiver)?;
        let loops = quiver.loops();
        if loops.len() != 1 {
            return Err(Error::Invariant(format!("{} loops in the quiver", loops.len())));
        }
        let loop_vertex = quiver.arrows[loops[0]].src;
        let arrows = quiver.arrows.iter().map(|a| (a.src, a.tgt)).collect();
        let arrow_elements = quiver
            .arrows
            .iter()
            .map(|a| {
                let b = &alg.basis()[a.element];
                alg.hom(a.src, a.tgt).basis()[b.local].clone()
            })
            .collect();
        Ok(ModuleCategory {
            tube,
            t: t.clone(),
            alg,
            quiver,
            arrows,
            arrow_elements,
            loop_vertex,
            strings: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.t.n()
    }

    pub fn tube(&self) -> &Tube {
        &self.tube
    }

    pub fn rigid(&self) -> &MaximalRigid {
        &self.t
    }

    pub fn algebra(&self) -> &FinDimAlgebra {
        &self.alg
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn loop_vertex(&self) -> usize {
        self.loop_vertex
    }

    pub fn loop_arrow(&self) -> usize {
        self.quiver.loops()[0]
    }

    pub fn zero_module(&self) -> AModule {
        AModule::zero(&self.arrows, self.n())
    }

    pub fn simple(&self, v: usize) -> AModule {
        AModule::simple(&self.arrows, self.n(), v)
    }

    /// Power `k` of `tau` taking the long summand to `(1,n)`.
    pub fn normalizing_shift(&self) -> i64 {
        self.t.long_summand().a() as i64 - 1
    }

    fn normalized(&self, x: Indec) -> Indec {
        x.tau_pow(self.normalizing_shift())
    }

    /// Membership in `pr T`, via the region of objects finitely presented
    /// by a maximal rigid object with long summand `(1,n)`.
    pub fn in_pr_t(&self, x: Indec) -> bool {
        let y = self.normalized(x);
        let n = self.n();
        y.b() <= n || (y.b() <= 2 * n && y.a() + y.b() <= 2 * n + 1)
    }

    /// Membership in `pr Sigma T`, with `Sigma = tau`.
    pub fn in_pr_sigma_t(&self, x: Indec) -> bool {
        self.in_pr_t(x.tau_inv())
    }

    /// Index `i` with `x = Sigma T_i`, if any.
    pub fn shifted_summand(&self, x: Indec) -> Option<usize> {
        self.t.summands().iter().position(|s| s.tau() == x)
    }

    /// `F(X)` for an indecomposable `X` in `pr T`.
    pub fn apply_f(&self, x: Indec) -> Result<AModule> {
        if !self.in_pr_t(x) {
            return Err(Error::Domain(format!("{x} is not finitely presented by T")));
        }
        let s = self.t.summands();
        let dims: Vec<usize> = s.iter().map(|&ti| self.tube.hom_space(ti, x).dim()).collect();
        let mut maps = Vec::with_capacity(self.arrows.len());
        for (k, &(i, j)) in self.arrows.iter().enumerate() {
            // f in Hom(T_j, X) goes to f . a in Hom(T_i, X).
            let hj = self.tube.hom_space(s[j], x);
            let hi = self.tube.hom_space(s[i], x);
            let cols: Vec<Vec<Rational>> = hj
                .basis()
                .iter()
                .map(|f| hi.coords(&self.tube.compose(f, &self.arrow_elements[k], s[i], x)))
                .collect();
            maps.push(ExactMatrix::from_columns(dims[i], &cols));
        }
        let m = AModule {
            arrows: self.arrows.clone(),
            dims,
            maps,
            provenance: Some(x.to_string()),
        };
        m.check_shapes()?;
        self.check_relations(&m)?;
        Ok(m)
    }

    /// `F` of a direct sum.
    pub fn apply_f_sum(&self, xs: &[Indec]) -> Result<AModule> {
        let parts = xs.iter().map(|&x| self.apply_f(x)).collect::<Result<Vec<_>>>()?;
        let mut m = AModule::direct_sum_all(&self.arrows, self.n(), &parts);
        m.provenance = Some(xs.iter().map(ToString::to_string).collect::<Vec<_>>().join("+"));
        Ok(m)
    }

    /// `F(g)` for `g: X -> Y`, by postcomposition.
    pub fn apply_f_morphism(&self, g: &CHom, x: Indec, y: Indec) -> ModHom {
        let s = self.t.summands();
        ModHom {
            maps: s
                .iter()
                .map(|&ti| {
                    let hx = self.tube.hom_space(ti, x);
                    let hy = self.tube.hom_space(ti, y);
                    let cols: Vec<Vec<Rational>> = hx
                        .basis()
                        .iter()
                        .map(|f| hy.coords(&self.tube.compose(g, f, ti, y)))
                        .collect();
                    ExactMatrix::from_columns(hy.dim(), &cols)
                })
                .collect(),
        }
    }

    /// `F` of a morphism between direct sums given by components
    /// `(source index, target index, morphism)`.
    pub fn apply_f_matrix(&self, xs: &[Indec], ys: &[Indec], comps: &[(usize, usize, CHom)]) -> ModHom {
        let s = self.t.summands();
        let maps = s
            .iter()
            .enumerate()
            .map(|(v, &ti)| {
                let rows: Vec<usize> = ys.iter().map(|&y| self.tube.hom_space(ti, y).dim()).collect();
                let cols: Vec<usize> = xs.iter().map(|&x| self.tube.hom_space(ti, x).dim()).collect();
                let mut m = ExactMatrix::zeros(rows.iter().sum(), cols.iter().sum());
                for (a, b, g) in comps {
                    let block = self.apply_f_morphism(g, xs[*a], ys[*b]);
                    let r0: usize = rows[..*b].iter().sum();
                    let c0: usize = cols[..*a].iter().sum();
                    let cur = m.block(r0, c0, rows[*b], cols[*a]);
                    m.set_block(r0, c0, &(&cur + &block.maps[v]));
                }
                m
            })
            .collect();
        ModHom { maps }
    }

    /// Checks the defining relations on a module.
    pub fn check_relations(&self, m: &AModule) -> Result<()> {
        for (a, b) in zero_relations(&self.alg, &self.quiver) {
            if !m.path_vanishes(a, b) {
                return Err(Error::Invariant(format!(
                    "relation {}->{} then {}->{} fails on {}",
                    self.arrows[a].0 + 1,
                    self.arrows[a].1 + 1,
                    self.arrows[b].0 + 1,
                    self.arrows[b].1 + 1,
                    m.provenance.as_deref().unwrap_or("module")
                )));
            }
        }
        Ok(())
    }

    pub fn projective(&self, v: usize) -> AModule {
        self.apply_f(self.t.summands()[v])
            .expect("summands are finitely presented")
            .with_provenance(format!("P{}", v + 1))
    }

    /// `I_v = D Hom(T_v, T)`, with transposed postcomposition actions.
    pub fn injective(&self, v: usize) -> AModule {
        let s = self.t.summands();
        let dims: Vec<usize> = (0..self.n()).map(|i| self.alg.block(v, i).len()).collect();
        let maps = self
            .arrows
            .iter()
            .enumerate()
            .map(|(k, &(i, j))| {
                let hi = self.tube.hom_space(s[v], s[i]);
                let hj = self.tube.hom_space(s[v], s[j]);
                let cols: Vec<Vec<Rational>> = hi
                    .basis()
                    .iter()
                    .map(|g| hj.coords(&self.tube.compose(&self.arrow_elements[k], g, s[v], s[j])))
                    .collect();
                ExactMatrix::from_columns(dims[j], &cols).transpose()
            })
            .collect();
        AModule {
            arrows: self.arrows.clone(),
            dims,
            maps,
            provenance: Some(format!("I{}", v + 1)),
        }
    }

    /// Matrix of `g -> g . c` from `Hom(T_v, T_i)` to `Hom(T_u, T_i)`.
    fn precompose_matrix(&self, c: &CHom, u: usize, v: usize, i: usize) -> ExactMatrix {
        let s = self.t.summands();
        let hv = self.tube.hom_space(s[v], s[i]);
        let hu = self.tube.hom_space(s[u], s[i]);
        let cols: Vec<Vec<Rational>> = hv
            .basis()
            .iter()
            .map(|g| hu.coords(&self.tube.compose(g, c, s[u], s[i])))
            .collect();
        ExactMatrix::from_columns(hu.dim(), &cols)
    }

    /// The map `P_v -> M` sending the idempotent `e_v` to `m in M_v`.
    pub fn map_from_projective(&self, v: usize, m_mod: &AModule, m: &[Rational]) -> Result<ModHom> {
        let p = self.projective(v);
        let basis = p.hom_basis(m_mod);
        // (P_v)_v = End(T_v) with the identity as basis vector 0.
        let ev: Vec<Vec<Rational>> = basis.iter().map(|f| f.maps[v].column(0)).collect();
        let evm = ExactMatrix::from_columns(m_mod.dims[v], &ev);
        let coeffs = evm
            .solve(m)
            .ok_or_else(|| Error::Invariant("evaluation at the idempotent is not onto".into()))?;
        let mut out = ModHom::zero(&p, m_mod);
        for (c, f) in coeffs.iter().zip(&basis) {
            if !c.is_zero() {
                out = out.add(&f.scale(c));
            }
        }
        Ok(out)
    }

    /// The map `M -> I_v` whose functional on `M_v` is `phi`.
    pub fn map_to_injective(&self, m_mod: &AModule, v: usize, phi: &[Rational]) -> Result<ModHom> {
        let inj = self.injective(v);
        let basis = m_mod.hom_basis(&inj);
        let ev: Vec<Vec<Rational>> = basis.iter().map(|f| f.maps[v].row(0).to_vec()).collect();
        let evm = ExactMatrix::from_columns(m_mod.dims[v], &ev);
        let coeffs = evm
            .solve(phi)
            .ok_or_else(|| Error::Invariant("evaluation at the idempotent is not onto".into()))?;
        let mut out = ModHom::zero(m_mod, &inj);
        for (c, f) in coeffs.iter().zip(&basis) {
            if !c.is_zero() {
                out = out.add(&f.scale(c));
            }
        }
        Ok(out)
    }

    /// Projective cover: the vertex list of `P_0` and the epimorphism.
    pub fn projective_cover(&self, m: &AModule) -> Result<(Vec<usize>, AModule, ModHom)> {
        let rad = m.radical_spaces();
        let mut verts = Vec::new();
        let mut parts = Vec::new();
        let mut maps: Vec<ModHom> = Vec::new();
        for v in 0..self.n() {
            let mut basis = rad[v].clone();
            for e in 0..m.dims[v] {
                let mut unit = vec![q(0); m.dims[v]];
                unit[e] = q(1);
                let ext = basis.hstack(&ExactMatrix::from_columns(m.dims[v], &[unit.clone()]));
                if ext.rank() > basis.cols() {
                    basis = ext;
                    verts.push(v);
                    parts.push(self.projective(v));
                    maps.push(self.map_from_projective(v, m, &unit)?);
                }
            }
        }
        let p0 = AModule::direct_sum_all(&self.arrows, self.n(), &parts);
        let epi = ModHom {
            maps: (0..self.n())
                .map(|i| {
                    maps.iter()
                        .fold(ExactMatrix::zeros(m.dims[i], 0), |acc, f| acc.hstack(&f.maps[i]))
                })
                .collect(),
        };
        if !epi.is_surjective() {
            return Err(Error::Invariant("projective cover is not onto".into()));
        }
        Ok((verts, p0, epi))
    }

    /// Injective envelope: the vertex list of `I^0` and the monomorphism.
    pub fn injective_envelope(&self, m: &AModule) -> Result<(Vec<usize>, AModule, ModHom)> {
        let soc = m.socle_spaces();
        let mut verts = Vec::new();
        let mut parts = Vec::new();
        let mut maps: Vec<ModHom> = Vec::new();
        for v in 0..self.n() {
            let s = &soc[v];
            if s.cols() == 0 {
                continue;
            }
            // functionals dual to the socle basis, extended by zero
            let mut basis = s.clone();
            for e in 0..m.dims[v] {
                let mut unit = vec![q(0); m.dims[v]];
                unit[e] = q(1);
                let ext = basis.hstack(&ExactMatrix::from_columns(m.dims[v], &[unit]));
                if ext.rank() > basis.cols() {
                    basis = ext;
                }
            }
            let inv = basis.inverse().expect("basis");
            for k in 0..s.cols() {
                verts.push(v);
                parts.push(self.injective(v));
                maps.push(self.map_to_injective(m, v, inv.row(k))?);
            }
        }
        let i0 = AModule::direct_sum_all(&self.arrows, self.n(), &parts);
        let mono = ModHom {
            maps: (0..self.n())
                .map(|i| maps.iter().fold(ExactMatrix::zeros(0, m.dims[i]), |acc, f| acc.vstack(&f.maps[i])))
                .collect(),
        };
        if !mono.is_injective() {
            return Err(Error::Invariant("injective envelope is not injective".into()));
        }
        Ok((verts, i0, mono))
    }

    /// Syzygy `Omega M` with its inclusion into the projective cover.
    pub fn syzygy(&self, m: &AModule) -> Result<(Vec<usize>, AModule, ModHom, AModule)> {
        let (verts, p0, epi) = self.projective_cover(m)?;
        let (k, inc) = p0.kernel_of(&epi)?;
        Ok((verts, p0, inc, k))
    }

    pub fn hom_dim(&self, m: &AModule, n: &AModule) -> usize {
        m.hom_dim(n)
    }

    /// `dim Ext^1(M, N)` from `0 -> Omega M -> P_0 -> M -> 0`.
    pub fn ext1_dim(&self, m: &AModule, n: &AModule) -> Result<usize> {
        if m.is_zero() || n.is_zero() {
            return Ok(0);
        }
        let (_, p0, _, omega) = self.syzygy(m)?;
        let v = omega.hom_dim(n) + m.hom_dim(n);
        let p = p0.hom_dim(n);
        v.checked_sub(p)
            .ok_or_else(|| Error::Invariant("negative Ext dimension".into()))
    }

    /// `<M, N>_{<=1} = dim Hom - dim Ext^1`.
    pub fn euler_le1(&self, m: &AModule, n: &AModule) -> Result<i64> {
        Ok(m.hom_dim(n) as i64 - self.ext1_dim(m, n)? as i64)
    }

    /// Antisymmetrized form `<M,N>_a`.
    pub fn euler_a(&self, m: &AModule, n: &AModule) -> Result<i64> {
        Ok(self.euler_le1(m, n)? - self.euler_le1(n, m)?)
    }

    /// `B_T` from the antisymmetrized Euler form on simples, with the
    /// loop column doubled.
    pub fn b_matrix_euler(&self) -> Result<ExchangeMatrix> {
        let n = self.n();
        let simples: Vec<AModule> = (0..n).map(|v| self.simple(v)).collect();
        let mut b = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let e = self.euler_a(&simples[i], &simples[j])?;
                b[i][j] = if j == self.loop_vertex { 2 * e } else { e };
            }
        }
        ExchangeMatrix::new(b)
    }

    /// Minimal projective presentation of `M`.
    pub fn projective_presentation(&self, m: &AModule) -> Result<ProjectivePresentation> {
        if m.is_zero() {
            return Ok(ProjectivePresentation {
                p0: Vec::new(),
                p1: Vec::new(),
                elements: Vec::new(),
            });
        }
        let (p0v, p0, inc, omega) = self.syzygy(m)?;
        let (p1v, _, epi1) = if omega.is_zero() {
            (Vec::new(), self.zero_module(), ModHom::zero(&omega, &omega))
        } else {
            self.projective_cover(&omega)?
        };
        let p1map = inc.compose(&epi1);
        let mut elements = Vec::with_capacity(p1v.len());
        for (l, &u) in p1v.iter().enumerate() {
            // generator of the l-th summand of P_1 at its own vertex
            let off: usize = p1v[..l].iter().map(|&w| self.alg.block(u, w).len()).sum();
            let col = p1map.maps[u].column(off);
            let mut row = Vec::with_capacity(p0v.len());
            let mut r0 = 0;
            for &v in &p0v {
                let len = self.alg.block(u, v).len();
                row.push(col[r0..r0 + len].to_vec());
                r0 += len;
            }
            debug_assert_eq!(r0, p0.dims[u]);
            elements.push(row);
        }
        Ok(ProjectivePresentation {
            p0: p0v,
            p1: p1v,
            elements,
        })
    }

    /// Auslander-Reiten translate `tau_A M = ker nu(p_1)`.
    pub fn tau(&self, m: &AModule) -> Result<AModule> {
        let pres = self.projective_presentation(m)?;
        if pres.p1.is_empty() {
            return Ok(self.zero_module());
        }
        let src: Vec<AModule> = pres.p1.iter().map(|&u| self.injective(u)).collect();
        let tgt: Vec<AModule> = pres.p0.iter().map(|&v| self.injective(v)).collect();
        let nu_p1 = AModule::direct_sum_all(&self.arrows, self.n(), &src);
        let nu_p0 = AModule::direct_sum_all(&self.arrows, self.n(), &tgt);
        let maps = (0..self.n())
            .map(|i| {
                let mut mat = ExactMatrix::zeros(nu_p0.dims[i], nu_p1.dims[i]);
                let mut c0 = 0;
                for (l, &u) in pres.p1.iter().enumerate() {
                    let cu = self.alg.block(u, i).len();
                    let mut r0 = 0;
                    for (k, &v) in pres.p0.iter().enumerate() {
                        let rv = self.alg.block(v, i).len();
                        let c = self.alg.hom(u, v).element(&pres.elements[l][k]);
                        let block = self.precompose_matrix(&c, u, v, i).transpose();
                        mat.set_block(r0, c0, &block);
                        r0 += rv;
                    }
                    c0 += cu;
                }
                mat
            })
            .collect();
        let nu = ModHom { maps };
        if !nu_p1.is_hom(&nu_p0, &nu) {
            return Err(Error::Invariant("Nakayama image is not a module map".into()));
        }
        let (k, _) = nu_p1.kernel_of(&nu)?;
        Ok(k)
    }

    pub fn is_tau_rigid(&self, m: &AModule) -> Result<bool> {
        let t = self.tau(m)?;
        Ok(t.is_zero() || m.hom_dim(&t) == 0)
    }

    /// Locally free: the loop acts with rank half the loop-vertex dimension.
    pub fn is_locally_free(&self, m: &AModule) -> bool {
        let d = m.dims[self.loop_vertex];
        d.is_multiple_of(2) && m.maps[self.loop_arrow()].rank() == d / 2
    }

    pub fn rank_vector(&self, m: &AModule) -> Result<Vec<i64>> {
        if !self.is_locally_free(m) {
            return Err(Error::NotLocallyFree);
        }
        Ok(m.dims
            .iter()
            .enumerate()
            .map(|(v, &d)| if v == self.loop_vertex { d as i64 / 2 } else { d as i64 })
            .collect())
    }

    /// Multiplicities `(a, b)` of a minimal injective copresentation
    /// `0 -> M -> I^a -> I^b`.
    pub fn injective_copresentation(&self, m: &AModule) -> Result<(Vec<i64>, Vec<i64>)> {
        let n = self.n();
        let mut a = vec![0i64; n];
        let mut b = vec![0i64; n];
        if m.is_zero() {
            return Ok((a, b));
        }
        let (verts, i0, mono) = self.injective_envelope(m)?;
        for v in verts {
            a[v] += 1;
        }
        let image: Vec<ExactMatrix> = mono.maps.iter().map(ExactMatrix::column_basis).collect();
        let (coker, _) = i0.quotient(&image)?;
        for (v, d) in coker.socle_dims().into_iter().enumerate() {
            b[v] = d as i64;
        }
        Ok((a, b))
    }

    /// Coindex of an indecomposable `X` in `pr Sigma T`, from an injective
    /// copresentation of `F(X)`, cross-checked against `<S_i, F(X)>_{<=1}`.
    pub fn coindex(&self, x: Indec) -> Result<Vec<i64>> {
        if let Some(i) = self.shifted_summand(x) {
            let mut e = vec![0; self.n()];
            e[i] = -1;
            return Ok(e);
        }
        if !self.in_pr_sigma_t(x) {
            return Err(Error::Domain(format!("{x} is not finitely presented by Sigma T")));
        }
        let m = self.apply_f(x)?;
        let (a, b) = self.injective_copresentation(&m)?;
        let c: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        let euler = (0..self.n())
            .map(|i| self.euler_le1(&self.simple(i), &m))
            .collect::<Result<Vec<_>>>()?;
        if euler != c {
            return Err(Error::Invariant(format!("coindex of {x}: copresentation {c:?}, Euler form {euler:?}")));
        }
        Ok(c)
    }

    /// Index of an indecomposable `X` in `pr T`, from a projective
    /// presentation of `F(X)`, cross-checked against `<F(X), S_i>_{<=1}`.
    pub fn index(&self, x: Indec) -> Result<Vec<i64>> {
        if let Some(i) = self.shifted_summand(x) {
            let mut e = vec![0; self.n()];
            e[i] = -1;
            return Ok(e);
        }
        let m = self.apply_f(x)?;
        let pres = self.projective_presentation(&m)?;
        let mut c = vec![0i64; self.n()];
        for &v in &pres.p0 {
            c[v] += 1;
        }
        for &v in &pres.p1 {
            c[v] -= 1;
        }
        let euler = (0..self.n())
            .map(|i| self.euler_le1(&m, &self.simple(i)))
            .collect::<Result<Vec<_>>>()?;
        if euler != c {
            return Err(Error::Invariant(format!("index of {x}: presentation {c:?}, Euler form {euler:?}")));
        }
        Ok(c)
    }

    pub fn coindex_sum(&self, xs: &[Indec]) -> Result<Vec<i64>> {
        sum_vectors(self.n(), xs.iter().map(|&x| self.coindex(x)))
    }

    pub fn index_sum(&self, xs: &[Indec]) -> Result<Vec<i64>> {
        sum_vectors(self.n(), xs.iter().map(|&x| self.index(x)))
    }

    /// The string combinatorics of `A`, computed once.
    pub fn string_algebra(&self) -> Result<&(StringAlgebra, Vec<Word>)> {
        self.strings
            .get_or_init(|| {
                let zeros: BTreeSet<(usize, usize)> = zero_relations(&self.alg, &self.quiver).into_iter().collect();
                let sa = StringAlgebra {
                    n: self.n(),
                    arrows: self.arrows.clone(),
                    zeros,
                };
                let words = sa.enumerate(4 * self.n() + 8)?;
                Ok((sa, words))
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// All indecomposable modules, one string module per string.
    pub fn indecomposables(&self) -> Result<Vec<(Word, AModule)>> {
        let (sa, words) = self.string_algebra()?;
        words
            .iter()
            .map(|w| Ok((w.clone(), sa.module(w)?.with_provenance(sa.display(w)))))
            .collect()
    }

    pub fn string_normal_form(&self, m: &AModule) -> Result<StringBasis> {
        let (sa, words) = self.string_algebra()?;
        string_normal_form(sa, words, m)
    }

    /// Largest submodule supported at the loop vertex.
    fn loop_socle_part(&self, m: &AModule) -> Vec<ExactMatrix> {
        let l = self.loop_vertex;
        let mut acc = ExactMatrix::zeros(0, m.dims[l]);
        for (k, &(_, t)) in self.arrows.iter().enumerate() {
            if t == l && k != self.loop_arrow() {
                acc = acc.vstack(&m.maps[k]);
            }
        }
        (0..self.n())
            .map(|v| {
                if v == l {
                    ExactMatrix::from_columns(m.dims[l], &acc.kernel_basis())
                } else {
                    ExactMatrix::zeros(m.dims[v], 0)
                }
            })
            .collect()
    }

    /// Submodule of `P_k` generated by its vertex spaces away from `k`
    /// when `k` is the loop vertex, the radical otherwise. It is the
    /// largest proper locally free submodule when it is locally free.
    pub fn max_locally_free_submodule_of_projective(&self, k: usize) -> Result<AModule> {
        let p = self.projective(k);
        let spaces: Vec<ExactMatrix> = if k == self.loop_vertex {
            let seeds: Vec<ExactMatrix> = (0..self.n())
                .map(|v| if v == k { ExactMatrix::zeros(p.dims[v], 0) } else { ExactMatrix::identity(p.dims[v]) })
                .collect();
            p.generated(&seeds)
        } else {
            p.radical_spaces()
        };
        let (sub, _) = p.submodule(&spaces)?;
        Ok(sub)
    }

    /// Dual statement for `I_k`: the quotient by the socle, or by the
    /// largest submodule supported at the loop vertex.
    pub fn max_locally_free_factor_of_injective(&self, k: usize) -> Result<AModule> {
        let i = self.injective(k);
        let spaces = if k == self.loop_vertex {
            self.loop_socle_part(&i)
        } else {
            i.socle_spaces()
        };
        let (quo, _) = i.quotient(&spaces)?;
        Ok(quo)
    }
}

fn sum_vectors(n: usize, it: impl Iterator<Item = Result<Vec<i64>>>) -> Result<Vec<i64>> {
    let mut acc = vec![0i64; n];
    for v in it {
        for (a, b) in acc.iter_mut().zip(v?) {
            *a += b;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amod::{Letter, Word};
    use crate::tube::parse_indec_list;

    fn example() -> ModuleCategory {
        let tube = Tube::new(3).unwrap();
        let t = MaximalRigid::new(&tube, parse_indec_list(4, "(1,3),(3,1),(1,1)").unwrap()).unwrap();
        ModuleCategory::new(&t).unwrap()
    }

    #[test]
    fn projectives_and_injectives_represent_vertices() {
        let mc = example();
        for x in mc.tube().rigid_indecomposables() {
            if mc.shifted_summand(x).is_some() {
                continue;
            }
            let m = mc.apply_f(x).unwrap();
            for v in 0..mc.n() {
                assert_eq!(mc.hom_dim(&mc.projective(v), &m), m.dims[v]);
                assert_eq!(mc.hom_dim(&m, &mc.injective(v)), m.dims[v]);
                assert_eq!(mc.ext1_dim(&mc.projective(v), &m).unwrap(), 0);
            }
        }
        for v in 0..mc.n() {
            assert_eq!(mc.hom_dim(&mc.simple(v), &mc.injective(v)), 1);
        }
    }

    #[test]
    fn summands_map_to_projectives() {
        let mc = example();
        for (v, &tv) in mc.rigid().summands().iter().enumerate() {
            let f = mc.apply_f(tv).unwrap();
            assert!(crate::amod::find_isomorphism(&f, &mc.projective(v), 1).is_some());
            assert_eq!(mc.index(tv).unwrap(), {
                let mut e = vec![0; mc.n()];
                e[v] = 1;
                e
            });
        }
    }

    #[test]
    fn loop_simple_is_not_locally_free() {
        let mc = example();
        let s = mc.simple(mc.loop_vertex());
        assert!(!mc.is_locally_free(&s));
        assert!(mc.rank_vector(&s).is_err());
        assert!(mc.is_locally_free(&mc.projective(mc.loop_vertex())));
    }

    #[test]
    fn coindex_of_long_summand_image() {
        let mc = example();
        assert_eq!(mc.coindex(mc.tube().indec(1, 3)).unwrap(), vec![-1, 0, 2]);
        assert_eq!(mc.coindex(mc.tube().indec(0, 3)).unwrap(), vec![-1, 0, 0]);
    }

    #[test]
    fn long_and_short_neighbours_have_equal_dimension() {
        for n in 2..=4 {
            let tube = Tube::new(n).unwrap();
            for t in tube.enumerate_maximal_rigid() {
                let mc = ModuleCategory::new(&t).unwrap();
                let s = mc.normalizing_shift();
                for i in 1..n as i64 {
                    let long = tube.indec(i, n + 1).tau_pow(-s);
                    let short = tube.indec(i + 1, n - 1).tau_pow(-s);
                    let (a, b) = (mc.apply_f(long).unwrap(), mc.apply_f(short).unwrap());
                    assert_eq!(a.dims, b.dims, "{t}: {long} vs {short}");
                    let wa = mc.string_normal_form(&a).unwrap().word;
                    let wb = mc.string_normal_form(&b).unwrap().word;
                    let (sa, _) = mc.string_algebra().unwrap();
                    let flipped = |u: &Word, v: &Word| {
                        u.letters.len() == v.letters.len()
                            && u.letters.iter().zip(&v.letters).filter(|(x, y)| x != y).all(|(x, y)| {
                                *x == Letter::Direct(mc.loop_arrow()) && *y == Letter::Inverse(mc.loop_arrow())
                                    || *x == Letter::Inverse(mc.loop_arrow()) && *y == Letter::Direct(mc.loop_arrow())
                            })
                            && u.letters.iter().zip(&v.letters).filter(|(x, y)| x != y).count() == 1
                    };
                    assert!(
                        flipped(&wa, &wb) || flipped(&wa, &sa.inverse_word(&wb)),
                        "{t}: {} vs {}",
                        sa.display(&wa),
                        sa.display(&wb)
                    );
                }
            }
        }
    }
}
