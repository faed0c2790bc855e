//! Twisted modules `(M, u)` over a triangular bocs and their Frobenius
//! structure: shift, `J`, the conflations `(alpha, beta)`, idempotent
//! splitting, null-homotopies, cones and homotopy inverses.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::ainfty::odd;
use crate::bocs::{check_bocs_homotopy, layer_split, Bocs, BocsMap, Vector};
use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::gmodb::{
    block, compose, compose_all, from_blocks, hat_delta, invert, r_h_unchecked, restrict, same_space,
    DirectSum, GMorph,
};
use crate::graded::Space;
use crate::linalg::{self, Dense, Mat};
use crate::scalar::{Field, Scalar};

/// A graded module with Maurer-Cartan data `u` of degree 1.
#[derive(Clone, Debug, PartialEq)]
pub struct TwMod {
    pub space: Arc<Space>,
    pub u: GMorph,
}

impl TwMod {
    pub fn new(u: GMorph) -> Result<TwMod> {
        if u.deg != 1 || !same_space(&u.dom, &u.cod) {
            return Err(Error::Invalid("twisting data must be a degree 1 endomorphism".into()));
        }
        u.validate()?;
        Ok(TwMod { space: u.dom.clone(), u })
    }

    pub fn zero(bocs: Arc<Bocs>, space: Arc<Space>) -> TwMod {
        TwMod { space: space.clone(), u: GMorph::zero(bocs, space.clone(), space, 1) }
    }

    pub fn bocs(&self) -> &Arc<Bocs> {
        &self.u.bocs
    }

    pub fn identity(&self) -> GMorph {
        GMorph::identity(self.u.bocs.clone(), self.space.clone())
    }
}

fn report_layers(res: &mut CheckResult, identity: &str, d: &GMorph) {
    for layer in 0..=d.bocs.level {
        res.push(identity, format!("layer={}", layer), d.witness_at(layer));
    }
}

/// `delta-hat(u) + u * u`.
pub fn mc_defect(u: &GMorph) -> Result<GMorph> {
    Ok(hat_delta(u).add(&compose(u, u)?))
}

pub fn check_mc(m: &TwMod) -> CheckResult {
    let mut res = CheckResult::new();
    match mc_defect(&m.u) {
        Ok(d) => report_layers(&mut res, "maurer-cartan", &d),
        Err(e) => res.push("maurer-cartan", String::new(), Some(format!("{}", e))),
    }
    res
}

/// `D(f) = delta-hat(f) + v * f - (-1)^{|f|} f * u` for `f : (M,u) -> (N,v)`.
pub fn differential(f: &GMorph, src: &TwMod, tgt: &TwMod) -> Result<GMorph> {
    if !same_space(&f.dom, &src.space) || !same_space(&f.cod, &tgt.space) {
        return Err(Error::ModuleMismatch);
    }
    let vf = compose(&tgt.u, f)?;
    let fu = compose(f, &src.u)?;
    let fu = if odd(f.deg) { fu } else { fu.neg() };
    Ok(hat_delta(f).add(&vf).add(&fu))
}

pub fn check_twisted_morphism(f: &GMorph, src: &TwMod, tgt: &TwMod) -> CheckResult {
    let mut res = CheckResult::new();
    match differential(f, src, tgt) {
        Ok(d) => report_layers(&mut res, "twisted-morphism", &d),
        Err(e) => res.push("twisted-morphism", String::new(), Some(format!("{}", e))),
    }
    res
}

/// `f - g - (delta-hat(h) + v * h + h * u)`.
pub fn homotopy_defect(h: &GMorph, f: &GMorph, g: &GMorph, src: &TwMod, tgt: &TwMod) -> Result<GMorph> {
    if h.deg != f.deg - 1 {
        return Err(Error::Invalid(format!("a homotopy between degree {} maps needs degree {}", f.deg, f.deg - 1)));
    }
    let d = differential(h, src, tgt)?;
    Ok(f.try_add(&g.neg())?.sub(&d))
}

pub fn check_homotopy(h: &GMorph, f: &GMorph, g: &GMorph, src: &TwMod, tgt: &TwMod) -> CheckResult {
    let mut res = CheckResult::new();
    match homotopy_defect(h, f, g, src, tgt) {
        Ok(d) => report_layers(&mut res, "homotopy", &d),
        Err(e) => res.push("homotopy", String::new(), Some(format!("{}", e))),
    }
    res
}

fn ensure(res: CheckResult, what: &str) -> Result<()> {
    match res.first_failure() {
        None => Ok(()),
        Some(item) => Err(Error::Internal(format!(
            "{} fails {} at {}: {}",
            what,
            item.identity,
            item.index,
            item.witness.clone().unwrap_or_default()
        ))),
    }
}

/// Transports the twisting along an invertible `h : M -> N`:
/// `v = (-1)^{|h|} h * u * h^{-1} - delta-hat(h) * h^{-1}`.
pub fn transport(h: &GMorph, m: &TwMod) -> Result<TwMod> {
    if !same_space(&h.dom, &m.space) {
        return Err(Error::ModuleMismatch);
    }
    let hi = invert(h)?;
    let huh = compose_all(&[h, &m.u, &hi])?;
    let huh = if odd(h.deg) { huh.neg() } else { huh };
    let v = huh.sub(&compose(&hat_delta(h), &hi)?);
    TwMod::new(v)
}

/// `T(M, u) = (M[1], -u[1])`.
pub fn shift(m: &TwMod) -> TwMod {
    let m1 = Arc::new(m.space.shift(1));
    TwMod { space: m1.clone(), u: m.u.relabel(m1.clone(), m1, 1).neg() }
}

/// `T(f) = sigma * f * sigma^{-1}` has the matrices of `f`.
pub fn shift_morphism(f: &GMorph, src: &TwMod, tgt: &TwMod) -> GMorph {
    f.relabel(src.space.clone(), tgt.space.clone(), f.deg)
}

/// `J(M, u)` on `M (+) M[1]` together with `T(M, u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JData {
    pub j: TwMod,
    pub sum: DirectSum,
    pub shifted: TwMod,
}

/// `J(M,u) = (M (+) M[1], [[u, sigma^{-1}], [0, -u[1]]])`.
pub fn jfun(m: &TwMod) -> Result<JData> {
    let b = m.bocs().clone();
    let t = shift(m);
    let sum = DirectSum::new(vec![m.space.clone(), t.space.clone()]);
    let sinv = GMorph::strict(b.clone(), t.space.clone(), m.space.clone(), 1, Mat::identity(b.field, m.space.len()));
    let w = from_blocks(&b, &sum, &sum, 1, &[(0, 0, &m.u), (0, 1, &sinv), (1, 1, &t.u)])?;
    let j = TwMod::new(w)?;
    ensure(check_mc(&j), "J(M,u)")?;
    Ok(JData { j, sum, shifted: t })
}

/// `alpha = (I, 0)^t : (M,u) -> J(M,u)`.
pub fn alpha(jm: &JData) -> GMorph {
    jm.sum.inj(jm.j.bocs(), 0)
}

/// `beta = (0, I) : J(M,u) -> T(M,u)`.
pub fn beta(jm: &JData) -> GMorph {
    jm.sum.proj(jm.j.bocs(), 1)
}

/// `eta_1(F) = pi_1 * F` for `F : (M,u) -> J(N,v)`.
pub fn eta1(f: &GMorph, jn: &JData) -> Result<GMorph> {
    compose(&jn.sum.proj(jn.j.bocs(), 0), f)
}

/// The twisted morphism `(f1, f2)^t : (M,u) -> J(N,v)` with
/// `f2 = sigma_N * (f1 * u - delta-hat(f1) - v * f1)`.
pub fn eta1_complete(f1: &GMorph, src: &TwMod, tgt: &TwMod, jn: &JData) -> Result<GMorph> {
    if f1.deg != 0 {
        return Err(Error::Invalid("eta_1 completion needs a degree 0 morphism".into()));
    }
    let x = compose(f1, &src.u)?.sub(&hat_delta(f1)).sub(&compose(&tgt.u, f1)?);
    let f2 = x.relabel(src.space.clone(), jn.shifted.space.clone(), 0);
    let b = src.bocs();
    let cols = DirectSum::new(vec![src.space.clone()]);
    let f = from_blocks(b, &jn.sum, &cols, 0, &[(0, 0, f1), (1, 0, &f2)])?;
    Ok(f.relabel(src.space.clone(), jn.j.space.clone(), 0))
}

/// `eta_2(G) = G * iota_2` for `G : J(M,u) -> (N,v)`.
pub fn eta2(g: &GMorph, jm: &JData) -> Result<GMorph> {
    compose(g, &jm.sum.inj(jm.j.bocs(), 1))
}

/// The twisted morphism `(g1, g2) : J(M,u) -> (N,v)` with
/// `g1 = (delta-hat(g2) + v * g2 + g2 * u[1]) * sigma_M`.
pub fn eta2_complete(g2: &GMorph, jm: &JData, tgt: &TwMod) -> Result<GMorph> {
    if g2.deg != 0 {
        return Err(Error::Invalid("eta_2 completion needs a degree 0 morphism".into()));
    }
    let m = &jm.sum.parts[0];
    let shifted_u = jm.shifted.u.neg();
    let x = hat_delta(g2).add(&compose(&tgt.u, g2)?).add(&compose(g2, &shifted_u)?);
    let g1 = x.relabel(m.clone(), tgt.space.clone(), 0);
    let b = tgt.bocs();
    let rows = DirectSum::new(vec![tgt.space.clone()]);
    let g = from_blocks(b, &rows, &jm.sum, 0, &[(0, 0, &g1), (0, 1, g2)])?;
    Ok(g.relabel(jm.j.space.clone(), tgt.space.clone(), 0))
}

/// `J(f) = diag(f, f[1])`.
pub fn j_morphism(f: &GMorph, jm: &JData, jn: &JData) -> Result<GMorph> {
    let f1 = f.relabel(jm.shifted.space.clone(), jn.shifted.space.clone(), f.deg);
    let g = from_blocks(&f.bocs, &jn.sum, &jm.sum, f.deg, &[(0, 0, f), (1, 1, &f1)])?;
    Ok(g.relabel(jm.j.space.clone(), jn.j.space.clone(), f.deg))
}

/// For `f = delta-hat(g) + v * g + g * u`, the morphism
/// `k = eta_2^{-1}(g * sigma^{-1}) : J(M,u) -> (N,v)` with `k * alpha = f`.
pub fn factor_through_j(g: &GMorph, jm: &JData, tgt: &TwMod) -> Result<GMorph> {
    if g.deg != -1 {
        return Err(Error::Invalid("a homotopy has degree -1".into()));
    }
    let gs = g.relabel(jm.shifted.space.clone(), g.cod.clone(), 0);
    eta2_complete(&gs, jm, tgt)
}

/// For `k : J(M,u) -> (N,v)`, the homotopy `k_2 * sigma_M` witnessing that
/// `k * alpha` is null-homotopic.
pub fn homotopy_from_factor(k: &GMorph, jm: &JData) -> Result<GMorph> {
    let k2 = eta2(k, jm)?;
    Ok(k2.relabel(jm.sum.parts[0].clone(), k2.cod.clone(), -1))
}

/// `g * f = 0` and `0 -> M -> E -> N -> 0` exact on first components.
pub fn check_conflation(f: &GMorph, g: &GMorph) -> Result<()> {
    let gf = compose(g, f)?;
    if !gf.is_zero() {
        return Err(Error::NotComposableToZero);
    }
    exact_first_components(f, g)
}

fn exact_first_components(f: &GMorph, g: &GMorph) -> Result<()> {
    let field = f.field();
    let sf = crate::graded::solve_splitting(field, &f.dom, &f.cod, f.deg, &f.f0);
    if !sf.kernel.is_empty() {
        return Err(Error::NotExactOnComponents("first component of the inflation is not injective".into()));
    }
    let sg = crate::graded::solve_splitting(field, &g.dom, &g.cod, g.deg, &g.f0);
    if sg.image.len() != g.cod.len() {
        return Err(Error::NotExactOnComponents("first component of the deflation is not surjective".into()));
    }
    if sf.image.len() != sg.kernel.len() {
        return Err(Error::NotExactOnComponents("image and kernel differ".into()));
    }
    Ok(())
}

/// Output of [`straighten_conflation`].
#[derive(Clone, Debug, PartialEq)]
pub struct Straightened {
    pub h: GMorph,
    pub h_inv: GMorph,
    pub e: TwMod,
    pub f: GMorph,
    pub g: GMorph,
}

/// Replaces a conflation `M -f-> E -g-> N` by an isomorphic one with strict
/// maps `h * f = (f0, 0)` and `g * h^{-1} = (g0, 0)`.
pub fn straighten_conflation(f: &GMorph, g: &GMorph, e: &TwMod) -> Result<Straightened> {
    check_conflation(f, g)?;
    let b = f.bocs.clone();
    let field = b.field;
    let p = crate::graded::solve_splitting(field, &f.dom, &f.cod, f.deg, &f.f0).inverse;
    let s = crate::graded::solve_splitting(field, &g.dom, &g.cod, g.deg, &g.f0).inverse;
    let id = e.identity();
    let mut u1 = GMorph::zero(b.clone(), e.space.clone(), e.space.clone(), 0);
    for c in 0..b.len() {
        u1.f1[c] = f.f1[c].mul(&p);
    }
    let a1 = id.add(&u1);
    let g1 = compose(g, &a1)?;
    let mut u2 = GMorph::zero(b.clone(), e.space.clone(), e.space.clone(), 0);
    for c in 0..b.len() {
        u2.f1[c] = s.mul(&g1.f1[c]);
    }
    let a2 = id.add(&u2);
    let h = compose(&a2, &invert(&a1)?)?;
    let h_inv = invert(&h)?;
    let e2 = transport(&h, e)?;
    let f2 = compose(&h, f)?;
    let g2 = compose(g, &h_inv)?;
    if !f2.is_strict() || !g2.is_strict() {
        return Err(Error::Internal("straightening left nonzero higher components".into()));
    }
    Ok(Straightened { h, h_inv, e: e2, f: f2, g: g2 })
}

/// Output of [`split_idempotent`]: `h : M -> M_1 (+) M_2` with
/// `h * e * h^{-1} = diag(I, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdemSplit {
    pub h: GMorph,
    pub h_inv: GMorph,
    pub sum: DirectSum,
    pub total: TwMod,
    pub first: TwMod,
    pub second: TwMod,
}

fn sort_key(sp: &Space, j: usize) -> (i64, usize, String) {
    let g = sp.gen(j);
    (g.deg, g.src, g.label.clone())
}

/// Columns of an idempotent matrix spanning its image, as a strict
/// embedding of a new space whose labels are the pivot labels.
fn image_columns(field: Field, sp: &Space, p: &Dense) -> (Space, Vec<Vec<Scalar>>) {
    let n = sp.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&j| sort_key(sp, j));
    let cols: Vec<Vec<Scalar>> = order.iter().map(|&j| (0..n).map(|i| p[i][j].clone()).collect()).collect();
    let keep = linalg::independent_subset(field, &cols, n);
    let gens = keep.iter().map(|&k| sp.gen(order[k]).clone()).collect();
    let vecs = keep.iter().map(|&k| cols[k].clone()).collect();
    (Space::new(sp.nidem, gens).expect("labels from a valid space"), vecs)
}

/// Splits a twisted idempotent `e` of `(M,u)`.
pub fn split_idempotent(e: &GMorph, m: &TwMod) -> Result<IdemSplit> {
    if e.deg != 0 || !same_space(&e.dom, &m.space) || !same_space(&e.cod, &m.space) {
        return Err(Error::NotIdempotent);
    }
    if compose(e, e)? != *e {
        return Err(Error::NotIdempotent);
    }
    let b = e.bocs.clone();
    let field = b.field;
    let n = m.space.len();
    let id = m.identity();
    let one = Mat::identity(field, n);
    let mut h = id.clone();
    let mut cur = e.clone();
    for _ in 0..b.level {
        if cur.is_strict() {
            break;
        }
        let f0 = one.sub(&cur.f0.scale(&field.int(2)));
        let mut x = GMorph::zero(b.clone(), m.space.clone(), m.space.clone(), 0);
        for c in 0..b.len() {
            x.f1[c] = cur.f1[c].mul(&f0);
        }
        let step = id.add(&x);
        cur = compose_all(&[&step, &cur, &invert(&step)?])?;
        h = compose(&step, &h)?;
    }
    if !cur.is_strict() {
        return Err(Error::Internal("idempotent did not become strict".into()));
    }
    let p = cur.f0.to_dense();
    let q = one.sub(&cur.f0).to_dense();
    let (s1, v1) = image_columns(field, &m.space, &p);
    let (s2, v2) = image_columns(field, &m.space, &q);
    let sum = DirectSum::new(vec![Arc::new(s1), Arc::new(s2)]);
    let mut pinv = Mat::zeros(field, n, n);
    for (k, v) in v1.iter().chain(v2.iter()).enumerate() {
        for (i, x) in v.iter().enumerate() {
            pinv.set(i, k, x.clone());
        }
    }
    let pinv = GMorph::strict(b.clone(), sum.space.clone(), m.space.clone(), 0, pinv);
    let pm = GMorph::strict(b.clone(), m.space.clone(), sum.space.clone(), 0, crate::gmodb::invert_first(&pinv)?);
    let total_h = compose(&pm, &h)?;
    let total = transport(&total_h, m)?;
    let h_inv = invert(&total_h)?;
    let off1 = block(&total.u, &sum, 0, &sum, 1);
    let off2 = block(&total.u, &sum, 1, &sum, 0);
    if !off1.is_zero() || !off2.is_zero() {
        return Err(Error::Internal("transported twisting is not block diagonal; is e a twisted morphism?".into()));
    }
    let first = TwMod::new(block(&total.u, &sum, 0, &sum, 0))?;
    let second = TwMod::new(block(&total.u, &sum, 1, &sum, 1))?;
    Ok(IdemSplit { h: total_h, h_inv, sum, total, first, second })
}

/// Per `(degree, idempotent)` dimensions of the homology of `(M, d)`.
pub fn homology(sp: &Space, d: &Mat) -> Result<BTreeMap<(i64, usize), usize>> {
    if !d.mul(d).is_zero() {
        return Err(Error::NotAComplex);
    }
    let blocks = sp.blocks();
    let mut out = BTreeMap::new();
    for (&(deg, s), cols) in &blocks {
        let rows = blocks.get(&(deg + 1, s)).cloned().unwrap_or_default();
        let z = cols.len() - linalg::rank(&d.block(&rows, cols), cols.len());
        let prev = blocks.get(&(deg - 1, s)).cloned().unwrap_or_default();
        let bnd = linalg::rank(&d.block(cols, &prev), prev.len());
        if z > bnd {
            out.insert((deg, s), z - bnd);
        }
    }
    Ok(out)
}

/// A cycle of `(M, d)` which is not a boundary, as `(degree, idempotent, vector)`.
pub fn homology_witness(sp: &Space, d: &Mat) -> Result<Option<(i64, usize, BTreeMap<usize, Scalar>)>> {
    if !d.mul(d).is_zero() {
        return Err(Error::NotAComplex);
    }
    let field = d.field;
    let blocks = sp.blocks();
    for (&(deg, s), cols) in &blocks {
        let rows = blocks.get(&(deg + 1, s)).cloned().unwrap_or_default();
        let prev = blocks.get(&(deg - 1, s)).cloned().unwrap_or_default();
        let z = linalg::nullspace(field, &d.block(&rows, cols), cols.len());
        let dmat = d.block(cols, &prev);
        let mut cand: Vec<Vec<Scalar>> = (0..prev.len()).map(|j| (0..cols.len()).map(|i| dmat[i][j].clone()).collect()).collect();
        let nb = cand.len();
        cand.extend(z);
        let keep = linalg::independent_subset(field, &cand, cols.len());
        if let Some(k) = keep.into_iter().find(|&k| k >= nb) {
            let v = cand[k].iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (cols[i], x.clone())).collect();
            return Ok(Some((deg, s, v)));
        }
    }
    Ok(None)
}

fn format_witness(sp: &Space, deg: i64, s: usize, v: &BTreeMap<usize, Scalar>) -> String {
    let w: Vec<String> = v.iter().map(|(&i, x)| format!("{}*{}", x, sp.gen(i).label)).collect();
    format!("homology in degree {} at idempotent {}: {}", deg, s, w.join(" + "))
}

/// A contraction `h` with `d h + h d = id` of an acyclic complex `(M, d)`.
pub fn contraction(sp: &Space, d: &Mat) -> Result<Mat> {
    if !d.mul(d).is_zero() {
        return Err(Error::NotAComplex);
    }
    let field = d.field;
    let blocks = sp.blocks();
    let mut h = Mat::zeros(field, sp.len(), sp.len());
    let mut by_idem: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    for &(deg, s) in blocks.keys() {
        by_idem.entry(s).or_default().push(deg);
    }
    for (s, degs) in by_idem {
        // complements K_j of the cycles, in local coordinates
        let mut comp: BTreeMap<i64, Vec<Vec<Scalar>>> = BTreeMap::new();
        for &deg in &degs {
            let cols = &blocks[&(deg, s)];
            let rows = blocks.get(&(deg + 1, s)).cloned().unwrap_or_default();
            let z = linalg::nullspace(field, &d.block(&rows, cols), cols.len());
            let mut cand = z.clone();
            for k in 0..cols.len() {
                let mut e = vec![field.zero(); cols.len()];
                e[k] = field.one();
                cand.push(e);
            }
            let keep = linalg::independent_subset(field, &cand, cols.len());
            comp.insert(deg, keep.into_iter().filter(|&k| k >= z.len()).map(|k| cand[k].clone()).collect());
        }
        for &deg in &degs {
            let cols = &blocks[&(deg, s)];
            let prev = blocks.get(&(deg - 1, s)).cloned().unwrap_or_default();
            let kp = comp.get(&(deg - 1)).cloned().unwrap_or_default();
            let dmat = d.block(cols, &prev);
            let dk: Vec<Vec<Scalar>> = kp
                .iter()
                .map(|k| (0..cols.len()).map(|i| dot(&dmat[i], k)).collect())
                .collect();
            let kj = &comp[&deg];
            if dk.len() + kj.len() != cols.len() {
                let (deg, s, v) = homology_witness(sp, d)?.ok_or_else(|| Error::Internal("acyclic after all".into()))?;
                return Err(Error::NotAcyclic(format_witness(sp, deg, s, &v)));
            }
            // h [dK' | K] = [K' | 0]
            let n = cols.len();
            let mut basis = vec![vec![field.zero(); n]; n];
            for (c, v) in dk.iter().chain(kj.iter()).enumerate() {
                for i in 0..n {
                    basis[i][c] = v[i].clone();
                }
            }
            let inv = linalg::inverse(field, &basis).ok_or_else(|| Error::Internal("contraction basis".into()))?;
            for (c, k) in kp.iter().enumerate() {
                for (a, &pi) in prev.iter().enumerate() {
                    if k[a].is_zero() {
                        continue;
                    }
                    for (b, &ci) in cols.iter().enumerate() {
                        h.add_at(pi, ci, &(&k[a] * &inv[c][b]));
                    }
                }
            }
        }
    }
    Ok(h)
}

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut s = a.first().map(|x| x.field().zero()).unwrap_or_else(|| b[0].field().zero());
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += &(x * y);
        }
    }
    s
}

/// `h` with `I = delta-hat(h) + u * h + h * u` for `(M, u)` with acyclic `(M, u0)`.
pub fn nullhomotopy(m: &TwMod) -> Result<GMorph> {
    let b = m.bocs().clone();
    let field = b.field;
    let sp = m.space.clone();
    let n = sp.len();
    let u = &m.u;
    let h0 = contraction(&sp, &u.f0)?;
    let mut h = GMorph::zero(b.clone(), sp.clone(), sp.clone(), -1);
    h.f0 = h0.clone();
    let split = layer_split(&b)?;
    let one = field.one();
    // u1 and the quadratic terms on an arbitrary vector of C-bar
    let g_of = |h: &GMorph, vec: &Vector, dh: Mat| -> Mat {
        let mut g = dh;
        for (&c, beta) in vec {
            if !u.f1[c].is_zero() {
                g.add_assign(&u.f1[c].mul(&h0).add(&h0.mul(&u.f1[c])).scale(beta));
            }
            for (x, y, lam) in b.comult(c) {
                let s = lam * beta;
                if !u.f1[*y].is_zero() && !h.f1[*x].is_zero() {
                    g.add_assign(&u.f1[*y].mul(&h.f1[*x]).scale(&s));
                }
                if !h.f1[*y].is_zero() && !u.f1[*x].is_zero() {
                    g.add_assign(&h.f1[*y].mul(&u.f1[*x]).scale(&s));
                }
            }
        }
        g
    };
    let contract = |g: Mat, label: &str| -> Result<Mat> {
        if u.f0.mul(&g) != g.mul(&u.f0) {
            return Err(Error::ChainMapDefect(format!("at {}", label)));
        }
        Ok(h0.mul(&g).neg())
    };
    for part in &split.layers {
        let layer = part.layer;
        let vpos: BTreeMap<usize, usize> = part.pivots.iter().enumerate().map(|(j, &c)| (c, j)).collect();
        // y = sum gamma_j v_j + rest, where rest meets the layer only in W
        let split_vec = |y: &Vector| -> (Vec<(usize, Scalar)>, Vector) {
            let gamma: Vec<(usize, Scalar)> =
                y.iter().filter_map(|(c, x)| vpos.get(c).map(|&j| (j, x.clone()))).collect();
            let mut rest = y.clone();
            for (j, x) in &gamma {
                for (c, y) in &part.v[*j] {
                    crate::linalg::sv_add(&mut rest, *c, &-(x * y));
                }
            }
            (gamma, rest)
        };
        // h1 on lower layers applied to a vector supported there
        let h_low = |h: &GMorph, y: &Vector| -> Mat {
            let mut acc = Mat::zeros(field, n, n);
            for (c, x) in y {
                if b.gen(*c).layer < layer && !h.f1[*c].is_zero() {
                    acc.add_assign(&h.f1[*c].scale(x));
                }
            }
            acc
        };
        let mut hv: Vec<Mat> = Vec::with_capacity(part.v.len());
        for v in &part.v {
            let g = g_of(&h, v, Mat::zeros(field, n, n));
            hv.push(contract(g, &b.label_vec(v))?);
        }
        let mut hw: BTreeMap<usize, Mat> = BTreeMap::new();
        for &w in &part.w {
            let (gamma, rest) = split_vec(b.delta(w));
            if rest.keys().any(|&c| b.gen(c).layer == layer) {
                return Err(Error::TriangularityViolation(format!("differential of {} reaches W", b.gen(w).label)));
            }
            let mut hd = h_low(&h, &rest);
            for (j, x) in &gamma {
                hd.add_assign(&hv[*j].scale(x));
            }
            let dh = hd.col_signs(|j| odd(sp.deg(j)));
            let mut e = Vector::new();
            e.insert(w, one.clone());
            let g = g_of(&h, &e, dh);
            hw.insert(w, contract(g, &b.gen(w).label)?);
        }
        // a pivot c of v is v minus its W entries and its lower part
        for (j, &c) in part.pivots.iter().enumerate() {
            let mut val = hv[j].clone();
            let mut lower = Vector::new();
            for (d, x) in &part.v[j] {
                if *d == c {
                    continue;
                }
                match hw.get(d) {
                    Some(m) => val.add_assign(&m.scale(&-x.clone())),
                    None => {
                        lower.insert(*d, -x.clone());
                    }
                }
            }
            val.add_assign(&h_low(&h, &lower));
            h.f1[c] = val;
        }
        for (w, m) in hw {
            h.f1[w] = m;
        }
    }
    Ok(h)
}

/// The mapping cone of `f : (M,u) -> (N,v)` with its canonical maps.
#[derive(Clone, Debug, PartialEq)]
pub struct Cone {
    pub cone: TwMod,
    pub sum: DirectSum,
    pub shifted: TwMod,
    pub inc: GMorph,
    pub out: GMorph,
}

/// `C_f = (M[1] (+) N, [[-u[1], 0], [f sigma^{-1}, v]])`.
pub fn cone(f: &GMorph, src: &TwMod, tgt: &TwMod) -> Result<Cone> {
    if f.deg != 0 {
        return Err(Error::Invalid("cones are built for degree 0 morphisms".into()));
    }
    ensure(check_twisted_morphism(f, src, tgt), "the morphism")?;
    let b = f.bocs.clone();
    let t = shift(src);
    let sum = DirectSum::new(vec![t.space.clone(), tgt.space.clone()]);
    let fs = f.relabel(t.space.clone(), tgt.space.clone(), 1);
    let w = from_blocks(&b, &sum, &sum, 1, &[(0, 0, &t.u), (1, 0, &fs), (1, 1, &tgt.u)])?;
    let c = TwMod::new(w)?;
    ensure(check_mc(&c), "the cone")?;
    let inc = sum.inj(&b, 1);
    let out = sum.proj(&b, 0);
    ensure(check_twisted_morphism(&inc, tgt, &c), "the cone inclusion")?;
    ensure(check_twisted_morphism(&out, &c, &t), "the cone projection")?;
    Ok(Cone { cone: c, sum, shifted: t, inc, out })
}

/// `(M, u0)` acyclic.
pub fn is_acyclic(m: &TwMod) -> Result<bool> {
    Ok(homology(&m.space, &m.u.f0)?.is_empty())
}

/// Whether `f0` induces an isomorphism in homology.
pub fn is_quasi_iso(f: &GMorph, src: &TwMod, tgt: &TwMod) -> Result<bool> {
    complex_quasi_iso(&src.space, &src.u.f0, &tgt.space, &tgt.u.f0, &f.f0)
}

/// Whether the chain map `f : (M, d) -> (N, e)` is a quasi-isomorphism,
/// decided by acyclicity of its cone.
pub fn complex_quasi_iso(m: &Space, d: &Mat, n: &Space, e: &Mat, f: &Mat) -> Result<bool> {
    let field = d.field;
    let (sum, offs) = Space::direct_sum(&[&m.shift(1), n]);
    let mut w = Mat::zeros(field, sum.len(), sum.len());
    for (&(i, j), v) in &d.data {
        w.add_at(offs[0] + i, offs[0] + j, &-v.clone());
    }
    for (&(i, j), v) in &e.data {
        w.add_at(offs[1] + i, offs[1] + j, v);
    }
    for (&(i, j), v) in &f.data {
        w.add_at(offs[1] + i, offs[0] + j, v);
    }
    Ok(homology(&sum, &w)?.is_empty())
}

/// A homotopy inverse `g` of `f` with `f * g - I = D(h_fg)` and `g * f - I = D(h_gf)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyInverse {
    pub g: GMorph,
    pub h_fg: GMorph,
    pub h_gf: GMorph,
}

pub fn homotopy_inverse(f: &GMorph, src: &TwMod, tgt: &TwMod) -> Result<HomotopyInverse> {
    let c = cone(f, src, tgt)?;
    let hh = match nullhomotopy(&c.cone) {
        Ok(h) => h,
        Err(Error::NotAcyclic(w)) => return Err(Error::NotQuasiIso(w)),
        Err(e) => return Err(e),
    };
    let h12 = block(&hh, &c.sum, 0, &c.sum, 1);
    let h11 = block(&hh, &c.sum, 0, &c.sum, 0);
    let h22 = block(&hh, &c.sum, 1, &c.sum, 1);
    let g = h12.relabel(tgt.space.clone(), src.space.clone(), 0);
    let h_fg = h22.neg();
    let h_gf = h11.relabel(src.space.clone(), src.space.clone(), -1);
    Ok(HomotopyInverse { g, h_fg, h_gf })
}

/// `R_psi(M, u)`.
pub fn restrict_twisted(psi: &BocsMap, m: &TwMod) -> Result<TwMod> {
    TwMod::new(restrict(psi, &m.u)?)
}

/// `eta = I + R_h(u) : R_phi(M,u) -> R_psi(M,u)` together with both restrictions.
pub fn restriction_equivalence_witness(
    phi: &BocsMap,
    psi: &BocsMap,
    h: &BocsMap,
    m: &TwMod,
) -> Result<(GMorph, TwMod, TwMod)> {
    let res = check_bocs_homotopy(h, phi, psi);
    if let Some(item) = res.first_failure() {
        return Err(Error::NotAHomotopy(format!("{} {}", item.identity, item.witness.clone().unwrap_or_default())));
    }
    let a = restrict_twisted(phi, m)?;
    let c = restrict_twisted(psi, m)?;
    let rh = r_h_unchecked(h, &m.u)?;
    let eta = a.identity().add(&rh);
    ensure(check_twisted_morphism(&eta, &a, &c), "eta")?;
    Ok((eta, a, c))
}
