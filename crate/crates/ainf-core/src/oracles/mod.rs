//! Seeded generators of random structures, and brute force evaluators that
//! recompute every identity family from scratch.
//!
//! Algebras are truncated path algebras of small quivers with a Leibniz
//! differential, transported along a random morphism with identity first
//! component so that higher operations appear. Every basis element carries a
//! weight (the path length for algebras) and all random maps are weight
//! nondecreasing, which keeps transported operations of bounded arity.

pub mod brute;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ainfmod::{self, compose_n, delta_n, AInfModule, ModMorphism};
use crate::ainfty::{postcompose, precompose_ops, AInfAlgebra, AlgHomotopy, AlgMorphism};
use crate::bocs::Bocs;
use crate::error::Result;
use crate::gmodb::{compose, invert, DirectSum, GMorph};
use crate::graded::{ends, word_deg, words, Gen, Space, TMap};
use crate::linalg::{self, Mat};
use crate::scalar::{Field, Scalar};
use crate::twisted::{self, TwMod};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A small nonzero coefficient.
pub fn coeff(field: Field, rng: &mut Rng) -> Scalar {
    loop {
        let s = field.int([1, -1, 2, -2, 3][rng.gen_range(0..5)]);
        if !s.is_zero() {
            return s;
        }
    }
}

/// An algebra with the weight of each basis element.
#[derive(Clone, Debug)]
pub struct WAlg {
    pub alg: Arc<AInfAlgebra>,
    pub weight: Vec<usize>,
}

/// A module with the weight of each basis element.
#[derive(Clone, Debug)]
pub struct WMod {
    pub module: Arc<AInfModule>,
    pub weight: Vec<usize>,
}

#[derive(Clone, Copy, Debug)]
pub struct AlgOpts {
    pub max_dim: usize,
    pub max_idem: usize,
    /// Longest nonzero path.
    pub width: usize,
}

impl Default for AlgOpts {
    fn default() -> AlgOpts {
        AlgOpts { max_dim: 6, max_idem: 2, width: 3 }
    }
}

/// A random map `X_1 (x) ... (x) X_k -> Y` of degree `deg` which does not
/// lower the total weight.
#[allow(clippy::too_many_arguments)]
pub fn random_map(
    rng: &mut Rng,
    field: Field,
    dom: Vec<Arc<Space>>,
    dw: &[&[usize]],
    cod: Arc<Space>,
    cw: &[usize],
    deg: i64,
    density: f64,
) -> TMap {
    let mut t = TMap::zero(field, deg, dom.clone(), vec![cod.clone()]);
    for w in words(&dom) {
        let (src, tgt) = ends(&dom, &w);
        let win: usize = w.iter().enumerate().map(|(i, &x)| dw[i][x as usize]).sum();
        let d = word_deg(&dom, &w) + deg;
        for o in 0..cod.len() {
            let g = cod.gen(o);
            if Some(g.src) == src && g.tgt == tgt && g.deg == d && cw[o] >= win && rng.gen_bool(density) {
                t.add_entry(w.clone(), vec![o as u32], &coeff(field, rng));
            }
        }
    }
    t
}

#[derive(Clone, Debug)]
struct Arrow {
    name: char,
    src: usize,
    tgt: usize,
    deg: i64,
    weight: usize,
}

/// Paths `a_1 a_2 ... a_k` with `src(a_i) = tgt(a_{i+1})` and total weight at most `cap`.
fn paths(arrows: &[Arrow], allowed: &[usize], cap: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = allowed.iter().filter(|&&a| arrows[a].weight <= cap).map(|&a| vec![a]).collect();
    let mut frontier = out.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in &frontier {
            let last = &arrows[*p.last().expect("nonempty")];
            let w = path_weight(arrows, p);
            for &a in allowed {
                if arrows[a].tgt == last.src && w + arrows[a].weight <= cap {
                    let mut q = p.clone();
                    q.push(a);
                    next.push(q);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

fn path_weight(arrows: &[Arrow], p: &[usize]) -> usize {
    p.iter().map(|&a| arrows[a].weight).sum()
}

fn path_deg(arrows: &[Arrow], p: &[usize]) -> i64 {
    p.iter().map(|&a| arrows[a].deg).sum()
}

fn path_ends(arrows: &[Arrow], p: &[usize]) -> (usize, usize) {
    (arrows[*p.last().expect("nonempty")].src, arrows[p[0]].tgt)
}

/// A path algebra truncated at total weight `width`, with a Leibniz
/// differential. Arrows split into cycles `a, b, c` of weight 1 and arrows
/// `x, y` whose differential is a combination of parallel paths of cycles;
/// such an arrow weighs as much as the shortest of those paths.
pub fn gen_dg_algebra(rng: &mut Rng, field: Field, opts: AlgOpts) -> WAlg {
    loop {
        if let Some(a) = try_dg_algebra(rng, field, opts) {
            return a;
        }
    }
}

fn try_dg_algebra(rng: &mut Rng, field: Field, opts: AlgOpts) -> Option<WAlg> {
    let nidem = rng.gen_range(1..=opts.max_idem.max(1));
    let nz = rng.gen_range(1..=3usize);
    let mut arrows: Vec<Arrow> = Vec::new();
    for i in 0..nz {
        let src = rng.gen_range(0..nidem);
        let tgt = if rng.gen_bool(0.5) { src } else { rng.gen_range(0..nidem) };
        arrows.push(Arrow { name: ['a', 'b', 'c'][i], src, tgt, deg: rng.gen_range(-1..=1), weight: 1 });
    }
    let zs: Vec<usize> = (0..nz).collect();
    let zpaths = paths(&arrows, &zs, opts.width);
    let nx = [0, 1, 1, 2][rng.gen_range(0..4)];
    let mut dx: BTreeMap<usize, Vec<(Vec<usize>, Scalar)>> = BTreeMap::new();
    for i in 0..nx {
        let p = zpaths[rng.gen_range(0..zpaths.len())].clone();
        let (s, t) = path_ends(&arrows, &p);
        let d = path_deg(&arrows, &p);
        let mut terms = vec![(p.clone(), coeff(field, rng))];
        for q in &zpaths {
            if *q != p && path_ends(&arrows, q) == (s, t) && path_deg(&arrows, q) == d && rng.gen_bool(0.3) {
                terms.push((q.clone(), coeff(field, rng)));
            }
        }
        let weight = terms.iter().map(|(q, _)| q.len()).min().expect("nonempty");
        dx.insert(arrows.len(), terms);
        arrows.push(Arrow { name: ['x', 'y'][i], src: s, tgt: t, deg: d - 1, weight });
    }
    let all_idx: Vec<usize> = (0..arrows.len()).collect();
    let all = paths(&arrows, &all_idx, opts.width);
    if all.is_empty() || all.len() > opts.max_dim {
        return None;
    }
    let gens: Vec<Gen> = all
        .iter()
        .map(|p| {
            let (s, t) = path_ends(&arrows, p);
            Gen { label: p.iter().map(|&a| arrows[a].name).collect(), deg: path_deg(&arrows, p), src: s, tgt: Some(t) }
        })
        .collect();
    let index: BTreeMap<Vec<usize>, u32> = all.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
    let space = Arc::new(Space::new(nidem, gens).ok()?);
    let mut a = AInfAlgebra::new(field, space.clone(), opts.width.max(2)).ok()?;
    let mut m2 = a.zero_map(2, 0);
    for (i, p) in all.iter().enumerate() {
        for (j, q) in all.iter().enumerate() {
            let mut pq = p.clone();
            pq.extend_from_slice(q);
            if let Some(&k) = index.get(&pq) {
                if arrows[*p.last().expect("nonempty")].src == arrows[q[0]].tgt {
                    m2.add_entry(vec![i as u32, j as u32], vec![k], &field.one());
                }
            }
        }
    }
    let mut m1 = a.zero_map(1, 1);
    for (i, p) in all.iter().enumerate() {
        let mut before = 0i64;
        for (pos, &x) in p.iter().enumerate() {
            if let Some(terms) = dx.get(&x) {
                for (q, c) in terms {
                    let mut r: Vec<usize> = p[..pos].to_vec();
                    r.extend_from_slice(q);
                    r.extend_from_slice(&p[pos + 1..]);
                    if let Some(&k) = index.get(&r) {
                        m1.add_entry(vec![i as u32], vec![k], &c.clone().signed(before % 2 != 0));
                    }
                }
            }
            before += arrows[x].deg;
        }
    }
    a.set_op(1, m1).ok()?;
    a.set_op(2, m2).ok()?;
    let weight = all.iter().map(|p| path_weight(&arrows, p)).collect();
    Some(WAlg { alg: Arc::new(a), weight })
}

/// `A'` on the space of `A` with the operations making `f : A' -> A`, with
/// `f_1 = id` and the given higher components, a morphism.
pub fn transport_algebra(a: &WAlg, higher: &BTreeMap<usize, TMap>) -> Result<(WAlg, AlgMorphism)> {
    let src = &a.alg;
    let field = src.field;
    let top = a.weight.iter().copied().max().unwrap_or(1).max(2);
    let mut comps = higher.clone();
    comps.insert(1, TMap::identity(field, src.dom(1)));
    let mut b = AInfAlgebra::new(field, src.space.clone(), top)?;
    for n in 1..=top {
        let zero = src.zero_map(n, 2 - n as i64);
        let rhs = postcompose(&ops_of(src), &comps, n, zero.clone());
        let other = precompose_ops(&b, &comps, n, zero);
        b.set_op(n, rhs.sub(&other))?;
    }
    let b = Arc::new(b);
    let mut f = AlgMorphism::new(b.clone(), src.clone());
    for (n, c) in comps {
        f.set_comp(n, c)?;
    }
    Ok((WAlg { alg: b, weight: a.weight.clone() }, f))
}

fn ops_of(a: &AInfAlgebra) -> BTreeMap<usize, TMap> {
    a.ops().map(|(&n, m)| (n, m.clone())).collect()
}

/// A random weight nondecreasing family `h_n : A^{(x) n} -> B` of degree `d + 1 - n`
/// for `lo <= n <= hi`.
pub fn random_alg_family(rng: &mut Rng, a: &WAlg, b: &WAlg, d: i64, lo: usize, hi: usize, density: f64) -> BTreeMap<usize, TMap> {
    let mut out = BTreeMap::new();
    for n in lo..=hi {
        let dw: Vec<&[usize]> = vec![&a.weight[..]; n];
        let t = random_map(rng, a.alg.field, a.alg.dom(n), &dw, b.alg.space.clone(), &b.weight, d + 1 - n as i64, density);
        if !t.is_zero() {
            out.insert(n, t);
        }
    }
    out
}

/// A dg algebra `A` and a transported `A'` with the morphism `f : A' -> A`.
pub fn gen_algebra_pair(rng: &mut Rng, field: Field, opts: AlgOpts) -> Result<(WAlg, WAlg, AlgMorphism)> {
    let a = gen_dg_algebra(rng, field, opts);
    let higher = random_alg_family(rng, &a, &a, 0, 2, opts.width, 0.5);
    let (b, f) = transport_algebra(&a, &higher)?;
    Ok((b, a, f))
}

/// A random algebra, usually with nonzero higher operations.
pub fn gen_algebra(rng: &mut Rng, field: Field, opts: AlgOpts) -> Result<WAlg> {
    Ok(gen_algebra_pair(rng, field, opts)?.0)
}

/// Two morphisms `A' -> A` with a homotopy between them.
pub fn gen_homotopic(rng: &mut Rng, field: Field, opts: AlgOpts) -> Result<(WAlg, WAlg, AlgMorphism, AlgMorphism, AlgHomotopy)> {
    let (b, a, f) = gen_algebra_pair(rng, field, opts)?;
    let comps = random_alg_family(rng, &b, &a, -1, 1, opts.width, 0.5);
    let h = AlgHomotopy { comps };
    let g = crate::ainfty::homotopic_partner(&f, &h)?;
    Ok((b, a, f, g, h))
}

/// `A_A`.
pub fn free_module(a: &WAlg) -> Result<WMod> {
    let alg = a.alg.clone();
    let space = Arc::new(alg.space.as_right());
    let mut m = AInfModule::new(alg.clone(), space.clone(), alg.bound)?;
    for (&n, op) in alg.ops() {
        let t = TMap { field: op.field, deg: op.deg, dom: m.dom(n), cod: vec![space.clone()], table: op.table.clone() };
        m.set_op(n, t)?;
    }
    Ok(WMod { module: Arc::new(m), weight: a.weight.clone() })
}

/// A complex `(M, d)` regarded as a module with no higher operations.
/// With `acyclic` every generator is paired with its differential.
pub fn gen_complex(rng: &mut Rng, a: &WAlg, size: usize, acyclic: bool) -> Result<WMod> {
    let field = a.alg.field;
    let nidem = a.alg.space.nidem;
    let mut gens = Vec::new();
    let mut weight = Vec::new();
    let mut d = Mat::zeros(field, 0, 0);
    let mut pairs = Vec::new();
    let mut k = 0;
    while gens.len() < size {
        let deg = rng.gen_range(-1..=1i64);
        let src = rng.gen_range(0..nidem);
        let w = rng.gen_range(0..=2usize);
        let pair = acyclic || rng.gen_bool(0.5);
        gens.push(Gen { label: format!("m{}", k), deg, src, tgt: None });
        weight.push(w);
        k += 1;
        if pair {
            gens.push(Gen { label: format!("m{}", k), deg: deg + 1, src, tgt: None });
            weight.push(w + rng.gen_range(0..=1usize));
            pairs.push((gens.len() - 2, gens.len() - 1));
            k += 1;
        }
    }
    let n = gens.len();
    d.rows = n;
    d.cols = n;
    for (b, c) in pairs {
        d.set(c, b, coeff(field, rng));
    }
    // conjugate by a unipotent change of basis raising the weight
    let mut g = Mat::identity(field, n);
    for i in 0..n {
        for j in 0..n {
            if gens[i].deg == gens[j].deg && gens[i].src == gens[j].src && weight[i] > weight[j] && rng.gen_bool(0.4) {
                g.set(i, j, coeff(field, rng));
            }
        }
    }
    let gi = Mat::from_dense(field, &linalg::inverse(field, &g.to_dense()).expect("unipotent"), n);
    let d = g.mul(&d).mul(&gi);
    let space = Arc::new(Space::new(nidem, gens)?);
    let mut m = AInfModule::new(a.alg.clone(), space.clone(), 1)?;
    m.set_op(1, crate::graded::from_mat(field, 1, space.clone(), space, &d))?;
    Ok(WMod { module: Arc::new(m), weight })
}

/// A random weight nondecreasing family `f_n : M (x) A^{n-1} -> N` of degree
/// `d + 1 - n` for `lo <= n <= hi`.
pub fn random_mod_family(
    rng: &mut Rng,
    a: &WAlg,
    m: &WMod,
    n: &WMod,
    d: i64,
    lo: usize,
    hi: usize,
    density: f64,
) -> BTreeMap<usize, TMap> {
    let mut out = BTreeMap::new();
    for k in lo..=hi {
        let mut dw: Vec<&[usize]> = vec![&m.weight[..]];
        dw.extend(core::iter::repeat(&a.weight[..]).take(k - 1));
        let t = random_map(rng, a.alg.field, m.module.dom(k), &dw, n.module.space.clone(), &n.weight, d + 1 - k as i64, density);
        if !t.is_zero() {
            out.insert(k, t);
        }
    }
    out
}

/// Largest arity a weight nondecreasing module map on `m` can have.
pub fn arity_cap(m: &WMod) -> usize {
    m.weight.iter().copied().max().unwrap_or(0) + 1
}

/// `M'` on the space of `M` with `T : M' -> M` a morphism, where `T_1 = id`
/// and the higher components are given.
pub fn transport_module(m: &WMod, higher: &BTreeMap<usize, TMap>) -> Result<(WMod, ModMorphism)> {
    let src = &m.module;
    let field = src.alg.field;
    let top = arity_cap(m).max(src.top());
    let mut comps = higher.clone();
    comps.insert(1, TMap::identity(field, vec![src.space.clone()]));
    let mut new = AInfModule::new(src.alg.clone(), src.space.clone(), top)?;
    let mut ops: BTreeMap<usize, TMap> = BTreeMap::new();
    let target = src.ops().clone();
    for n in 1..=top {
        let zero = src.zero_map(n, 2 - n as i64);
        let mut x = delta_n(&src.alg, &comps, 0, n, zero.clone());
        x.add_assign(&compose_n(&target, &comps, 0, n, zero.clone()));
        // T(m') without the T_1 term
        let mut tm = zero;
        for s in 1..n {
            let r = n - s;
            let (Some(outer), Some(inner)) = (comps.get(&(1 + s)), ops.get(&r)) else { continue };
            let term = crate::ainfty::compose_at(outer, 0, inner);
            tm.add_assign(&if (r * s) % 2 == 1 { term.neg() } else { term });
        }
        let op = x.sub(&tm);
        if !op.is_zero() {
            ops.insert(n, op.clone());
        }
        new.set_op(n, op)?;
    }
    let new = Arc::new(new);
    let mut t = ModMorphism::new(new.clone(), src.clone(), 0);
    for (k, c) in comps {
        t.set_comp(k, c)?;
    }
    Ok((WMod { module: new, weight: m.weight.clone() }, t))
}

/// Transports `m` along a random `T` and returns `M'` with `T : M' -> M`.
pub fn scramble_module(rng: &mut Rng, a: &WAlg, m: &WMod) -> Result<(WMod, ModMorphism)> {
    let higher = random_mod_family(rng, a, m, m, 0, 2, arity_cap(m), 0.7);
    transport_module(m, &higher)
}

pub fn sum_modules(parts: &[&WMod]) -> Result<(WMod, Vec<usize>)> {
    let mods: Vec<&AInfModule> = parts.iter().map(|p| &*p.module).collect();
    let (m, offs) = ainfmod::direct_sum_mod(&mods)?;
    let weight = parts.iter().flat_map(|p| p.weight.iter().copied()).collect();
    Ok((WMod { module: Arc::new(m), weight }, offs))
}

pub fn j_module(m: &WMod) -> Result<WMod> {
    let j = ainfmod::jfun_mod(&m.module)?;
    let mut weight = m.weight.clone();
    weight.extend_from_slice(&m.weight);
    Ok(WMod { module: Arc::new(j), weight })
}

/// A random module: the free module, a complex, or a sum of these, then
/// transported so that higher operations appear.
pub fn gen_module(rng: &mut Rng, a: &WAlg, acyclic: bool) -> Result<WMod> {
    let base = if acyclic {
        let k = { let k = rng.gen_range(1..=2); gen_complex(rng, a, k, false) }?;
        j_module(&k)?
    } else {
        match rng.gen_range(0..3) {
            0 => free_module(a)?,
            1 => { let k = rng.gen_range(1..=3); gen_complex(rng, a, k, false) }?,
            _ => {
                let x = free_module(a)?;
                let y = { let k = rng.gen_range(1..=2); gen_complex(rng, a, k, false) }?;
                sum_modules(&[&x, &y])?.0
            }
        }
    };
    Ok(scramble_module(rng, a, &base)?.0)
}

/// `D(h)` for a random degree `d - 1` family `h : M -> N`.
pub fn random_boundary(rng: &mut Rng, a: &WAlg, m: &WMod, n: &WMod, d: i64) -> Result<ModMorphism> {
    let comps = random_mod_family(rng, a, m, n, d - 1, 1, arity_cap(m), 0.4);
    let h = ModMorphism { src: m.module.clone(), tgt: n.module.clone(), deg: d - 1, comps };
    ainfmod::mod_differential(&h)
}

/// A quasi-isomorphism of modules `M' -> P` built from an inclusion into a sum
/// with a contractible module, a change of coordinates, and a boundary.
pub fn gen_quasi_iso(rng: &mut Rng, a: &WAlg) -> Result<(WMod, WMod, ModMorphism)> {
    let m = gen_module(rng, a, false)?;
    let k = { let k = rng.gen_range(1..=2); gen_complex(rng, a, k, false) }?;
    let jk = j_module(&k)?;
    let (p, offs) = sum_modules(&[&m, &jk])?;
    let (inc, proj) = ainfmod::sum_inclusion(m.module.clone(), p.module.clone(), offs[0])?;
    let (m2, t) = scramble_module(rng, a, &m)?;
    if rng.gen_bool(0.5) {
        let f = ainfmod::compose_mod(&inc, &t)?;
        let f = f.add(&random_boundary(rng, a, &m2, &p, 0)?)?;
        Ok((m2, p, f))
    } else {
        let (p2, t2) = scramble_module(rng, a, &p)?;
        let f = ainfmod::compose_mod(&proj, &t2)?;
        let f = f.add(&random_boundary(rng, a, &p2, &m, 0)?)?;
        Ok((p2, m, f))
    }
}

/// A morphism which is not a quasi-isomorphism: zero out of a module with homology.
pub fn gen_non_quasi_iso(rng: &mut Rng, a: &WAlg) -> Result<(WMod, WMod, ModMorphism)> {
    loop {
        let m = gen_module(rng, a, false)?;
        if ainfmod::mod_homology(&m.module)?.is_empty() {
            continue;
        }
        let k = gen_complex(rng, a, 1, false)?;
        let jk = j_module(&k)?;
        let f = random_boundary(rng, a, &m, &jk, 0)?;
        return Ok((m, jk, f));
    }
}

/// A random morphism of `GMod-B` of degree `deg` between the given spaces.
pub fn random_gmorph(rng: &mut Rng, bocs: &Arc<Bocs>, dom: &Arc<Space>, cod: &Arc<Space>, deg: i64, density: f64) -> GMorph {
    let field = bocs.field;
    let mut f = GMorph::zero(bocs.clone(), dom.clone(), cod.clone(), deg);
    for i in 0..cod.len() {
        for j in 0..dom.len() {
            if cod.gen(i).src == dom.gen(j).src && cod.deg(i) == dom.deg(j) + deg && rng.gen_bool(density) {
                f.f0.set(i, j, coeff(field, rng));
            }
        }
    }
    for c in 0..bocs.len() {
        let g = bocs.gen(c);
        for i in 0..cod.len() {
            for j in 0..dom.len() {
                if dom.gen(j).src == g.tgt && cod.gen(i).src == g.src && cod.deg(i) == dom.deg(j) + g.deg + deg && rng.gen_bool(density) {
                    f.f1[c].set(i, j, coeff(field, rng));
                }
            }
        }
    }
    f
}

/// A random morphism whose first component is block unitriangular, hence invertible.
pub fn random_iso(rng: &mut Rng, bocs: &Arc<Bocs>, m: &Arc<Space>, density: f64) -> GMorph {
    let mut f = random_gmorph(rng, bocs, m, m, 0, density);
    let field = bocs.field;
    let mut f0 = Mat::identity(field, m.len());
    for i in 0..m.len() {
        for j in 0..i {
            if m.gen(i).src == m.gen(j).src && m.deg(i) == m.deg(j) && rng.gen_bool(density) {
                f0.set(i, j, coeff(field, rng));
            }
        }
    }
    f.f0 = f0;
    f
}

/// A random space of right modules over `k^nidem`.
pub fn random_space(rng: &mut Rng, nidem: usize, size: usize, prefix: &str) -> Arc<Space> {
    let gens = (0..size)
        .map(|i| Gen { label: format!("{}{}", prefix, i), deg: rng.gen_range(-1..=1), src: rng.gen_range(0..nidem), tgt: None })
        .collect();
    Arc::new(Space::new(nidem, gens).expect("fresh labels"))
}

/// A twisted module over a bar bocs: the image of a random module, then
/// transported along a random isomorphism.
pub fn gen_twisted(rng: &mut Rng, a: &WAlg, bocs: &Arc<Bocs>, acyclic: bool) -> Result<TwMod> {
    let m = gen_module(rng, a, acyclic)?;
    let t = ainfmod::to_twisted(&m.module, bocs)?;
    let h = random_iso(rng, bocs, &t.space, 0.5);
    twisted::transport(&h, &t)
}

/// A twisted module over any bocs: `(M, (d, 0))` transported along a random isomorphism.
pub fn gen_mc(rng: &mut Rng, bocs: &Arc<Bocs>, size: usize, acyclic: bool) -> Result<TwMod> {
    let field = bocs.field;
    let dummy = WAlg {
        alg: Arc::new(AInfAlgebra::new(field, Arc::new(Space::new(bocs.nidem, vec![Gen { label: "e".into(), deg: 0, src: 0, tgt: Some(0) }])?), 1)?),
        weight: vec![1],
    };
    let c = gen_complex(rng, &dummy, size, acyclic)?;
    let sp = c.module.space.clone();
    let mut u = GMorph::zero(bocs.clone(), sp.clone(), sp.clone(), 1);
    u.f0 = crate::graded::to_mat(&c.module.op(1));
    let h = random_iso(rng, bocs, &sp, 0.3);
    twisted::transport(&h, &TwMod::new(u)?)
}

/// A closed morphism `(M,u) -> (N,v)` of degree `d`: `D(k)` for random `k`, plus
/// `extra` when given.
pub fn random_closed(rng: &mut Rng, src: &TwMod, tgt: &TwMod, d: i64) -> Result<GMorph> {
    let k = random_gmorph(rng, src.bocs(), &src.space, &tgt.space, d - 1, 0.4);
    twisted::differential(&k, src, tgt)
}

/// An idempotent `e` of a twisted module: the projection onto the first summand
/// of a sum, conjugated by a random isomorphism.
pub fn gen_idempotent(rng: &mut Rng, a: &WAlg, bocs: &Arc<Bocs>) -> Result<(GMorph, TwMod)> {
    let x = gen_twisted(rng, a, bocs, false)?;
    let y = gen_twisted(rng, a, bocs, false)?;
    let sum = DirectSum::new(vec![x.space.clone(), y.space.clone()]);
    let u = crate::gmodb::from_blocks(bocs, &sum, &sum, 1, &[(0, 0, &x.u), (1, 1, &y.u)])?;
    let m = TwMod::new(u)?;
    let p = compose(&sum.inj(bocs, 0), &sum.proj(bocs, 0))?;
    let h = random_iso(rng, bocs, &m.space, 0.3);
    let hi = invert(&h)?;
    let e = crate::gmodb::compose_all(&[&h, &p, &hi])?;
    Ok((e, twisted::transport(&h, &m)?))
}

/// A conflation `M -f-> E -g-> N`: an extension by a closed degree 1 map,
/// conjugated by a random isomorphism of `E`.
pub fn gen_conflation(rng: &mut Rng, a: &WAlg, bocs: &Arc<Bocs>) -> Result<(GMorph, GMorph, TwMod, TwMod, TwMod)> {
    let m = gen_twisted(rng, a, bocs, false)?;
    let n = gen_twisted(rng, a, bocs, false)?;
    let c = random_closed(rng, &n, &m, 1)?;
    let sum = DirectSum::new(vec![m.space.clone(), n.space.clone()]);
    let u = crate::gmodb::from_blocks(bocs, &sum, &sum, 1, &[(0, 0, &m.u), (0, 1, &c), (1, 1, &n.u)])?;
    let e = TwMod::new(u)?;
    let h = random_iso(rng, bocs, &e.space, 0.3);
    let hi = invert(&h)?;
    let f = compose(&h, &sum.inj(bocs, 0))?;
    let g = compose(&sum.proj(bocs, 1), &hi)?;
    Ok((f, g, twisted::transport(&h, &e)?, m, n))
}
