//! Right A-infinity modules, the dg category `GMod-A`, and the bridge to
//! twisted modules over the bar bocs.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::ainfty::{compose_at, compose_tensor, compositions, odd, sgn, AInfAlgebra, AlgMorphism};
use crate::bocs::{BarData, Bocs};
use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::gmodb::{same_space, GMorph};
use crate::graded::{Space, TMap, Word};
use crate::linalg::Mat;
use crate::twisted::{self, TwMod};

pub type Family = BTreeMap<usize, TMap>;

/// A right A-infinity module with operations `m_n : M (x) A^{n-1} -> M` of degree `2-n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AInfModule {
    pub alg: Arc<AInfAlgebra>,
    pub space: Arc<Space>,
    /// `M[1]`, shared by everything built through the bridge.
    pub shifted: Arc<Space>,
    pub bound: usize,
    ops: Family,
}

impl AInfModule {
    pub fn new(alg: Arc<AInfAlgebra>, space: Arc<Space>, bound: usize) -> Result<AInfModule> {
        if space.gens().iter().any(|g| g.tgt.is_some()) {
            return Err(Error::Invalid("a right module has no left idempotents".into()));
        }
        if space.nidem != alg.space.nidem {
            return Err(Error::IdempotentMismatch);
        }
        let shifted = Arc::new(space.shift(1));
        Ok(AInfModule { alg, space, shifted, bound: bound.max(1), ops: BTreeMap::new() })
    }

    pub fn dom(&self, n: usize) -> Vec<Arc<Space>> {
        let mut d = vec![self.space.clone()];
        d.extend(core::iter::repeat(self.alg.space.clone()).take(n - 1));
        d
    }

    pub fn zero_map(&self, n: usize, deg: i64) -> TMap {
        TMap::zero(self.alg.field, deg, self.dom(n), vec![self.space.clone()])
    }

    pub fn op(&self, n: usize) -> TMap {
        self.ops.get(&n).cloned().unwrap_or_else(|| self.zero_map(n, 2 - n as i64))
    }

    pub fn op_ref(&self, n: usize) -> Option<&TMap> {
        self.ops.get(&n)
    }

    pub fn set_op(&mut self, n: usize, m: TMap) -> Result<()> {
        if n == 0 || m.deg != 2 - n as i64 || m.dom.len() != n {
            return Err(Error::Invalid(format!("m_{} must have arity {} and degree {}", n, n, 2 - n as i64)));
        }
        if n > self.bound && !m.is_zero() {
            return Err(Error::Invalid(format!("m_{} exceeds the arity bound {}", n, self.bound)));
        }
        m.validate()?;
        if m.is_zero() {
            self.ops.remove(&n);
        } else {
            self.ops.insert(n, m);
        }
        Ok(())
    }

    pub fn ops(&self) -> &Family {
        &self.ops
    }

    pub fn top(&self) -> usize {
        self.ops.keys().next_back().copied().unwrap_or(0)
    }
}

fn same_module(a: &AInfModule, b: &AInfModule) -> bool {
    same_space(&a.space, &b.space) && a.ops == b.ops
}

/// A degree `d` morphism of `GMod-A`: components `f_n` of degree `d+1-n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModMorphism {
    pub src: Arc<AInfModule>,
    pub tgt: Arc<AInfModule>,
    pub deg: i64,
    pub comps: Family,
}

impl ModMorphism {
    pub fn new(src: Arc<AInfModule>, tgt: Arc<AInfModule>, deg: i64) -> ModMorphism {
        ModMorphism { src, tgt, deg, comps: BTreeMap::new() }
    }

    pub fn identity(m: Arc<AInfModule>) -> ModMorphism {
        let mut f = ModMorphism::new(m.clone(), m.clone(), 0);
        f.comps.insert(1, TMap::identity(m.alg.field, vec![m.space.clone()]));
        f
    }

    /// The operations of `M` as a degree 1 endomorphism.
    pub fn operations(m: Arc<AInfModule>) -> ModMorphism {
        let comps = m.ops.clone();
        ModMorphism { src: m.clone(), tgt: m, deg: 1, comps }
    }

    pub fn zero_comp(&self, n: usize, deg: i64) -> TMap {
        TMap::zero(self.src.alg.field, deg, self.src.dom(n), vec![self.tgt.space.clone()])
    }

    pub fn comp(&self, n: usize) -> TMap {
        self.comps.get(&n).cloned().unwrap_or_else(|| self.zero_comp(n, self.deg + 1 - n as i64))
    }

    pub fn set_comp(&mut self, n: usize, f: TMap) -> Result<()> {
        let deg = self.deg + 1 - n as i64;
        if n == 0 || f.deg != deg || f.dom.len() != n {
            return Err(Error::Invalid(format!("component {} must have arity {} and degree {}", n, n, deg)));
        }
        f.validate()?;
        if f.is_zero() {
            self.comps.remove(&n);
        } else {
            self.comps.insert(n, f);
        }
        Ok(())
    }

    pub fn top(&self) -> usize {
        self.comps.keys().next_back().copied().unwrap_or(0)
    }

    pub fn bound(&self) -> usize {
        self.top().max(self.src.bound).max(self.tgt.bound)
    }

    fn like(&self, deg: i64) -> ModMorphism {
        ModMorphism::new(self.src.clone(), self.tgt.clone(), deg)
    }

    pub fn add(&self, o: &ModMorphism) -> Result<ModMorphism> {
        if self.deg != o.deg || !same_module(&self.src, &o.src) || !same_module(&self.tgt, &o.tgt) {
            return Err(Error::ModuleMismatch);
        }
        let mut r = self.clone();
        for (&n, c) in &o.comps {
            let x = r.comp(n).add(c);
            r.set_comp(n, x)?;
        }
        Ok(r)
    }

    pub fn neg(&self) -> ModMorphism {
        let mut r = self.clone();
        for c in r.comps.values_mut() {
            *c = c.neg();
        }
        r
    }

    pub fn sub(&self, o: &ModMorphism) -> Result<ModMorphism> {
        self.add(&o.neg())
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|c| c.is_zero())
    }

    /// Components of arity `<= n` only.
    pub fn truncated(&self, n: usize) -> ModMorphism {
        let mut r = self.clone();
        r.comps.retain(|&k, _| k <= n);
        r
    }
}

/// `sum_{r+s=n, r>=1} (-1)^{(|f|+r+1)s} g_{1+s}(f_r (x) id^s)`.
pub(crate) fn compose_n(g: &Family, f: &Family, fdeg: i64, n: usize, zero: TMap) -> TMap {
    let mut acc = zero;
    for r in 1..=n {
        let s = n - r;
        let (Some(outer), Some(inner)) = (g.get(&(1 + s)), f.get(&r)) else { continue };
        let term = compose_at(outer, 0, inner);
        let term = if odd((fdeg + r as i64 + 1) * s as i64) { term.neg() } else { term };
        acc.add_assign(&term);
    }
    acc
}

/// `sum_{r,s>=1} (-1)^{|f|+r+st+1} f_{r+1+t}(id^r (x) m_s (x) id^t)`.
pub(crate) fn delta_n(a: &AInfAlgebra, f: &Family, fdeg: i64, n: usize, zero: TMap) -> TMap {
    let mut acc = zero;
    for s in 1..n {
        let Some(ms) = a.op_ref(s) else { continue };
        for r in 1..=n - s {
            let t = n - r - s;
            let Some(outer) = f.get(&(r + 1 + t)) else { continue };
            let term = compose_at(outer, r, ms);
            let term = if odd(fdeg + (r + s * t) as i64 + 1) { term.neg() } else { term };
            acc.add_assign(&term);
        }
    }
    acc
}

fn family_top(f: &Family) -> usize {
    f.keys().next_back().copied().unwrap_or(0)
}

pub fn compose_mod(g: &ModMorphism, f: &ModMorphism) -> Result<ModMorphism> {
    if !same_module(&f.tgt, &g.src) {
        return Err(Error::ModuleMismatch);
    }
    let mut r = ModMorphism::new(f.src.clone(), g.tgt.clone(), f.deg + g.deg);
    let top = (family_top(&f.comps) + family_top(&g.comps)).saturating_sub(1);
    for n in 1..=top {
        let c = compose_n(&g.comps, &f.comps, f.deg, n, r.zero_comp(n, r.deg + 1 - n as i64));
        r.set_comp(n, c)?;
    }
    Ok(r)
}

pub fn delta_inf(f: &ModMorphism) -> ModMorphism {
    let a = &f.src.alg;
    let mut r = f.like(f.deg + 1);
    let top = family_top(&f.comps) + a.top();
    for n in 2..=top {
        let c = delta_n(a, &f.comps, f.deg, n, r.zero_comp(n, r.deg + 1 - n as i64));
        r.set_comp(n, c).expect("homogeneous");
    }
    r
}

/// `D(f) = delta_inf(f) + m^N . f - (-1)^{|f|} f . m^M`.
pub fn mod_differential(f: &ModMorphism) -> Result<ModMorphism> {
    let mn = ModMorphism::operations(f.tgt.clone());
    let mm = ModMorphism::operations(f.src.clone());
    let a = compose_mod(&mn, f)?;
    let b = compose_mod(f, &mm)?;
    let b = if odd(f.deg) { b } else { b.neg() };
    delta_inf(f).add(&a)?.add(&b)
}

fn witness(t: &TMap) -> Option<String> {
    t.witness().map(|(i, o, v)| format!("at {} -> {} value {}", i, o, v))
}

/// `Sigma^+_n + Sigma^0_n`.
pub fn module_defect(m: &AInfModule, n: usize) -> TMap {
    let a = &m.alg;
    let mut acc = m.zero_map(n, 3 - n as i64);
    for s in 1..n {
        let Some(ms) = a.op_ref(s) else { continue };
        for r in 1..=n - s {
            let t = n - r - s;
            let Some(outer) = m.ops.get(&(r + 1 + t)) else { continue };
            let term = compose_at(outer, r, ms);
            acc.add_assign(&if odd((r + s * t) as i64) { term.neg() } else { term });
        }
    }
    for s in 1..=n {
        let t = n - s;
        let (Some(outer), Some(inner)) = (m.ops.get(&(1 + t)), m.ops.get(&s)) else { continue };
        let term = compose_at(outer, 0, inner);
        acc.add_assign(&if odd((s * t) as i64) { term.neg() } else { term });
    }
    acc
}

/// `(delta_inf(m) + m . m)_n`.
pub fn module_defect_dg(m: &AInfModule, n: usize) -> TMap {
    let zero = m.zero_map(n, 3 - n as i64);
    let d = delta_n(&m.alg, &m.ops, 1, n, zero.clone());
    d.add(&compose_n(&m.ops, &m.ops, 1, n, zero))
}

pub fn check_module(m: &AInfModule, n: usize) -> CheckResult {
    let mut res = CheckResult::new();
    let d = module_defect(m, n);
    let e = module_defect_dg(m, n);
    res.push("module", format!("n={}", n), witness(&d));
    res.push("module-formulations", format!("n={}", n), witness(&d.sub(&e)));
    res
}

pub fn check_module_all(m: &AInfModule) -> CheckResult {
    let mut res = CheckResult::new();
    for n in 1..=2 * m.bound {
        res.extend(check_module(m, n));
    }
    res
}

/// `Sigma^{f+}_n + Sigma^{f0}_n + Sigma^{f-}_n` for a degree 0 family.
pub fn morphism_sums(f: &ModMorphism, n: usize) -> TMap {
    let a = &f.src.alg;
    let mut acc = f.zero_comp(n, 2 - n as i64);
    for s in 1..n {
        let Some(ms) = a.op_ref(s) else { continue };
        for r in 1..=n - s {
            let t = n - r - s;
            let Some(outer) = f.comps.get(&(r + 1 + t)) else { continue };
            let term = compose_at(outer, r, ms);
            acc.add_assign(&if odd((r + s * t) as i64) { term.neg() } else { term });
        }
    }
    for s in 1..=n {
        let t = n - s;
        let (Some(outer), Some(inner)) = (f.comps.get(&(1 + t)), f.src.ops.get(&s)) else { continue };
        let term = compose_at(outer, 0, inner);
        acc.add_assign(&if odd((s * t) as i64) { term.neg() } else { term });
    }
    for r in 1..=n {
        let s = n - r;
        let (Some(outer), Some(inner)) = (f.tgt.ops.get(&(1 + s)), f.comps.get(&r)) else { continue };
        let term = compose_at(outer, 0, inner);
        acc.add_assign(&if odd(((r + 1) * s) as i64) { term } else { term.neg() });
    }
    acc
}

/// Checks `D(f)_n = 0`; for degree 0 also compares with the classical sums.
pub fn check_mod_morphism(f: &ModMorphism, n: usize) -> Result<CheckResult> {
    let mut res = CheckResult::new();
    let d = mod_differential(f)?.comp(n);
    res.push("module-morphism", format!("n={}", n), witness(&d));
    if f.deg == 0 {
        let c = morphism_sums(f, n);
        if c.add(&d) != f.zero_comp(n, 2 - n as i64) {
            return Err(Error::FormulationMismatch(format!("morphism identity at n={}", n)));
        }
    }
    Ok(res)
}

pub fn check_mod_morphism_all(f: &ModMorphism) -> Result<CheckResult> {
    let mut res = CheckResult::new();
    for n in 1..=2 * f.bound() {
        res.extend(check_mod_morphism(f, n)?);
    }
    Ok(res)
}

/// `H^{(1)}_n + H^{(2)}_n + H^{(3)}_n` evaluated with the classical signs.
pub fn homotopy_sums(h: &ModMorphism, n: usize) -> TMap {
    let a = &h.src.alg;
    let mut acc = h.zero_comp(n, 1 - n as i64);
    for r in 1..=n {
        let s = n - r;
        let (Some(outer), Some(inner)) = (h.tgt.ops.get(&(1 + s)), h.comps.get(&r)) else { continue };
        let term = compose_at(outer, 0, inner);
        acc.add_assign(&if odd((r * s) as i64) { term.neg() } else { term });
    }
    for s in 1..=n {
        let t = n - s;
        let (Some(outer), Some(inner)) = (h.comps.get(&(1 + t)), h.src.ops.get(&s)) else { continue };
        let term = compose_at(outer, 0, inner);
        acc.add_assign(&if odd((s * t) as i64) { term.neg() } else { term });
    }
    for s in 1..n {
        let Some(ms) = a.op_ref(s) else { continue };
        for r in 1..=n - s {
            let t = n - r - s;
            let Some(outer) = h.comps.get(&(r + 1 + t)) else { continue };
            let term = compose_at(outer, r, ms);
            acc.add_assign(&if odd((r + s * t) as i64) { term.neg() } else { term });
        }
    }
    acc
}

/// Checks `f_n - g_n = H^{(1)}_n + H^{(2)}_n + H^{(3)}_n` and that this agrees
/// with `delta_inf(h) + m^N . h + h . m^M`.
pub fn check_mod_homotopy(h: &ModMorphism, f: &ModMorphism, g: &ModMorphism, n: usize) -> Result<CheckResult> {
    if h.deg != f.deg - 1 || f.deg != g.deg {
        return Err(Error::Invalid("homotopy degrees".into()));
    }
    let classical = homotopy_sums(h, n);
    let dg = mod_differential(h)?.comp(n);
    if classical != dg {
        return Err(Error::FormulationMismatch(format!("homotopy identity at n={}", n)));
    }
    let mut res = CheckResult::new();
    let d = f.comp(n).sub(&g.comp(n)).sub(&classical);
    res.push("module-homotopy", format!("n={}", n), witness(&d));
    Ok(res)
}

pub fn check_mod_homotopy_upto(h: &ModMorphism, f: &ModMorphism, g: &ModMorphism, top: usize) -> Result<CheckResult> {
    let mut res = CheckResult::new();
    for n in 1..=top {
        res.extend(check_mod_homotopy(h, f, g, n)?);
    }
    Ok(res)
}

fn bar_of<'a>(b: &'a Bocs, alg: &AInfAlgebra) -> Result<&'a BarData> {
    let data = b.bar.as_ref().ok_or_else(|| Error::Invalid("a bar bocs is required".into()))?;
    if data.alg.space != alg.space || data.alg.ops().ne(alg.ops()) {
        return Err(Error::AlgebraMismatch);
    }
    Ok(data)
}

/// `(-1)^{n|m| + sum (n-i)|a_i|}`, the sign of `sigma_M (x) sigma^{(x) n}`.
fn bridge_sign(m: &AInfModule, word: &[u32]) -> bool {
    let n = word.len() as i64 - 1;
    let dm = m.space.deg(word[0] as usize);
    let a: i64 = word[1..].iter().enumerate().map(|(i, &x)| (n - 1 - i as i64) * m.alg.space.deg(x as usize)).sum();
    odd(n * dm + a)
}

fn bridge(f: &ModMorphism, bocs: &Arc<Bocs>, lossless: bool) -> Result<GMorph> {
    let data = bar_of(bocs, &f.src.alg)?;
    if lossless && family_top(&f.comps) > bocs.level + 1 {
        return Err(Error::TruncationTooSmall);
    }
    let field = bocs.field;
    let mut g = GMorph::zero(bocs.clone(), f.src.shifted.clone(), f.tgt.shifted.clone(), f.deg);
    if let Some(f1) = f.comps.get(&1) {
        g.f0 = crate::graded::to_mat(f1);
    }
    for (&n, c) in &f.comps {
        if n < 2 || n > bocs.level + 1 {
            continue;
        }
        for (w, o, v) in c.entries() {
            let Some(&k) = data.lookup.get(&w[1..]) else { continue };
            g.f1[k].add_at(o[0] as usize, w[0] as usize, &v.clone().signed(bridge_sign(&f.src, w)));
        }
    }
    let _ = field;
    Ok(g)
}

/// `G(f)` over the bar bocs; fails if components above the level would be lost.
pub fn to_gmorph(f: &ModMorphism, bocs: &Arc<Bocs>) -> Result<GMorph> {
    bridge(f, bocs, true)
}

/// `G(f)` keeping only what the level of the bocs can see.
pub fn to_gmorph_truncated(f: &ModMorphism, bocs: &Arc<Bocs>) -> Result<GMorph> {
    bridge(f, bocs, false)
}

pub fn to_twisted(m: &Arc<AInfModule>, bocs: &Arc<Bocs>) -> Result<TwMod> {
    let u = to_gmorph(&ModMorphism::operations(m.clone()), bocs)?;
    TwMod::new(u)
}

fn unbridge(g: &GMorph, src: &Arc<AInfModule>, tgt: &Arc<AInfModule>) -> Result<Family> {
    let data = bar_of(&g.bocs, &src.alg)?;
    if g.dom.len() != src.space.len() || g.cod.len() != tgt.space.len() {
        return Err(Error::ModuleMismatch);
    }
    let field = g.bocs.field;
    let mut comps: Family = BTreeMap::new();
    let deg = g.deg;
    let mut c1 = TMap::zero(field, deg, src.dom(1), vec![tgt.space.clone()]);
    for (&(i, j), v) in &g.f0.data {
        c1.add_entry(vec![j as u32], vec![i as u32], v);
    }
    comps.insert(1, c1);
    for (k, mat) in g.f1.iter().enumerate() {
        let w = &data.words[k];
        let n = w.len() + 1;
        let entry = comps.entry(n).or_insert_with(|| TMap::zero(field, deg + 1 - n as i64, src.dom(n), vec![tgt.space.clone()]));
        for (&(i, j), v) in &mat.data {
            let mut word: Word = vec![j as u32];
            word.extend_from_slice(w);
            let s = bridge_sign(src, &word);
            entry.add_entry(word, vec![i as u32], &v.clone().signed(s));
        }
    }
    comps.retain(|_, c| !c.is_zero());
    for c in comps.values() {
        c.validate()?;
    }
    Ok(comps)
}

/// The family of `GMod-A` with `G(f) = g`.
pub fn from_gmorph(g: &GMorph, src: Arc<AInfModule>, tgt: Arc<AInfModule>) -> Result<ModMorphism> {
    let comps = unbridge(g, &src, &tgt)?;
    Ok(ModMorphism { src, tgt, deg: g.deg, comps })
}

/// The A-infinity module `M` with `G(M) = (M[1], u)`.
pub fn from_twisted(t: &TwMod, alg: Arc<AInfAlgebra>, space: Arc<Space>) -> Result<AInfModule> {
    let level = t.bocs().level;
    let mut m = AInfModule::new(alg, space, level + 1)?;
    let probe = Arc::new(m.clone());
    let comps = unbridge(&t.u, &probe, &probe)?;
    for (n, c) in comps {
        m.set_op(n, c)?;
    }
    Ok(m)
}

/// `m^{M[1]}_n = (-1)^n sigma m_n (sigma^{-1} (x) id^{n-1})` on `M[1]`.
pub fn shift_mod(m: &AInfModule) -> Result<AInfModule> {
    let mut r = AInfModule::new(m.alg.clone(), m.shifted.clone(), m.bound)?;
    for (&n, op) in &m.ops {
        let t = retarget(op, &r, &r.space, op.deg);
        r.set_op(n, if n % 2 == 1 { t.neg() } else { t })?;
    }
    Ok(r)
}

/// The same table between other modules.
fn retarget(t: &TMap, src: &AInfModule, cod: &Arc<Space>, deg: i64) -> TMap {
    TMap { field: t.field, deg, dom: src.dom(t.dom.len()), cod: vec![cod.clone()], table: t.table.clone() }
}

/// `f[1]_n = (-1)^{n-1} sigma f_n sigma^{-1}`.
pub fn shift_mod_morphism(f: &ModMorphism, src: Arc<AInfModule>, tgt: Arc<AInfModule>) -> Result<ModMorphism> {
    let mut r = ModMorphism::new(src.clone(), tgt.clone(), f.deg);
    for (&n, c) in &f.comps {
        let t = retarget(c, &src, &tgt.space, c.deg);
        r.set_comp(n, if n % 2 == 0 { t.neg() } else { t })?;
    }
    Ok(r)
}

/// `J(M)` on `M (+) M[1]`: `m_1 = [[m_1, sigma^{-1}], [0, m^{M[1]}_1]]` and
/// `m_n = diag(m_n, m^{M[1]}_n)` for `n >= 2`.
pub fn jfun_mod(m: &AInfModule) -> Result<AInfModule> {
    let t = shift_mod(m)?;
    let (sum, offs) = Space::direct_sum(&[&m.space, &t.space]);
    let mut j = AInfModule::new(m.alg.clone(), Arc::new(sum), m.bound)?;
    let field = m.alg.field;
    let top = m.top().max(1);
    for n in 1..=top {
        let mut op = j.zero_map(n, 2 - n as i64);
        for (part, off) in [(&m.ops, offs[0]), (&t.ops, offs[1])] {
            if let Some(x) = part.get(&n) {
                for (w, o, v) in x.entries() {
                    let mut w2 = w.clone();
                    w2[0] += off as u32;
                    op.add_entry(w2, vec![o[0] + off as u32], v);
                }
            }
        }
        if n == 1 {
            for i in 0..m.space.len() {
                op.add_entry(vec![(offs[1] + i) as u32], vec![(offs[0] + i) as u32], &field.one());
            }
        }
        j.set_op(n, op)?;
    }
    Ok(j)
}

/// `R_phi(f)_n = sum (-1)^{sgn(i)} f_{r+1}(id_M (x) phi_{i_1} (x) ... (x) phi_{i_r})`.
fn restrict_family(phi: &AlgMorphism, f: &Family, src_dom: &dyn Fn(usize) -> Vec<Arc<Space>>, m: &Arc<Space>) -> Family {
    let field = phi.src.field;
    let idm = TMap::identity(field, vec![m.clone()]);
    let mut out: Family = BTreeMap::new();
    let ftop = family_top(f);
    if ftop == 0 {
        return out;
    }
    let ptop = phi.comps.keys().next_back().copied().unwrap_or(0);
    let top = 1 + (ftop - 1) * ptop.max(1);
    for n in 1..=top {
        let mut acc: Option<TMap> = None;
        if n == 1 {
            if let Some(x) = f.get(&1) {
                acc = Some(x.clone());
            }
        } else {
            for parts in compositions(n - 1) {
                let Some(outer) = f.get(&(parts.len() + 1)) else { continue };
                let fs: Option<Vec<&TMap>> = parts.iter().map(|i| phi.comps.get(i)).collect();
                let Some(fs) = fs else { continue };
                let mut all = vec![&idm];
                all.extend(fs);
                let term = compose_tensor(outer, &all);
                let term = if sgn(&parts).expect("positive parts") { term.neg() } else { term };
                match acc.as_mut() {
                    Some(a) => a.add_assign(&term),
                    None => acc = Some(term),
                }
            }
        }
        if let Some(mut a) = acc {
            a.dom = src_dom(n);
            if !a.is_zero() {
                out.insert(n, a);
            }
        }
    }
    out
}

/// Restriction of a module over `B` along `phi : A -> B`.
pub fn restrict_module(phi: &AlgMorphism, n: &AInfModule) -> Result<AInfModule> {
    if phi.tgt.space != n.alg.space || phi.tgt.ops().ne(n.alg.ops()) {
        return Err(Error::AlgebraMismatch);
    }
    let probe = AInfModule::new(phi.src.clone(), n.space.clone(), 1)?;
    let dom = |k: usize| probe.dom(k);
    let ops = restrict_family(phi, &n.ops, &dom, &n.space);
    let bound = family_top(&ops).max(1);
    let mut r = AInfModule::new(phi.src.clone(), n.space.clone(), bound)?;
    for (k, op) in ops {
        r.set_op(k, op)?;
    }
    Ok(r)
}

/// `R_phi(f) : R_phi(M) -> R_phi(N)`.
pub fn restrict_mod_morphism(
    phi: &AlgMorphism,
    f: &ModMorphism,
    src: Arc<AInfModule>,
    tgt: Arc<AInfModule>,
) -> Result<ModMorphism> {
    if phi.tgt.space != f.src.alg.space {
        return Err(Error::AlgebraMismatch);
    }
    let s2 = src.clone();
    let dom = move |k: usize| s2.dom(k);
    let comps = restrict_family(phi, &f.comps, &dom, &f.src.space);
    let mut r = ModMorphism::new(src, tgt.clone(), f.deg);
    for (k, mut c) in comps {
        c.cod = vec![tgt.space.clone()];
        r.set_comp(k, c)?;
    }
    Ok(r)
}

/// Homology dimensions of `(M, m_1)` per degree and idempotent.
pub fn mod_homology(m: &AInfModule) -> Result<BTreeMap<(i64, usize), usize>> {
    twisted::homology(&m.space, &first_matrix(&m.op(1)))
}

fn first_matrix(t: &TMap) -> Mat {
    crate::graded::to_mat(t)
}

/// Whether `f_1` is a quasi-isomorphism of complexes.
pub fn is_quasi_iso_mod(f: &ModMorphism) -> Result<bool> {
    twisted::complex_quasi_iso(
        &f.src.space,
        &first_matrix(&f.src.op(1)),
        &f.tgt.space,
        &first_matrix(&f.tgt.op(1)),
        &first_matrix(&f.comp(1)),
    )
}

/// A homotopy inverse computed through the bar bocs: `g`, `h_fg` from
/// `f . g` to the identity and `h_gf` from `g . f` to the identity. The
/// identities hold for arities `<= level + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModHomotopyInverse {
    pub g: ModMorphism,
    pub h_fg: ModMorphism,
    pub h_gf: ModMorphism,
}

pub fn mod_homotopy_inverse(f: &ModMorphism, bocs: &Arc<Bocs>) -> Result<ModHomotopyInverse> {
    if f.deg != 0 {
        return Err(Error::Invalid("homotopy inverses are for degree 0 morphisms".into()));
    }
    let src = to_twisted(&f.src, bocs)?;
    let tgt = to_twisted(&f.tgt, bocs)?;
    let gf = to_gmorph(f, bocs)?;
    let hi = twisted::homotopy_inverse(&gf, &src, &tgt)?;
    Ok(ModHomotopyInverse {
        g: from_gmorph(&hi.g, f.tgt.clone(), f.src.clone())?,
        h_fg: from_gmorph(&hi.h_fg, f.tgt.clone(), f.tgt.clone())?,
        h_gf: from_gmorph(&hi.h_gf, f.src.clone(), f.src.clone())?,
    })
}

/// The strict morphism with first component `mat` and no higher components.
pub fn strict_mod_morphism(src: Arc<AInfModule>, tgt: Arc<AInfModule>, deg: i64, mat: &Mat) -> Result<ModMorphism> {
    let field = src.alg.field;
    let mut f = ModMorphism::new(src.clone(), tgt.clone(), deg);
    let c = crate::graded::from_mat(field, deg, src.space.clone(), tgt.space.clone(), mat);
    f.set_comp(1, c)?;
    Ok(f)
}

/// `M_1 (+) ... (+) M_k` with the block diagonal operations and the offsets.
pub fn direct_sum_mod(parts: &[&AInfModule]) -> Result<(AInfModule, Vec<usize>)> {
    let first = parts.first().ok_or_else(|| Error::Invalid("empty direct sum".into()))?;
    let spaces: Vec<&Space> = parts.iter().map(|p| &*p.space).collect();
    let (sum, offs) = Space::direct_sum(&spaces);
    let bound = parts.iter().map(|p| p.bound).max().unwrap_or(1);
    let mut m = AInfModule::new(first.alg.clone(), Arc::new(sum), bound)?;
    let top = parts.iter().map(|p| p.top()).max().unwrap_or(0);
    for n in 1..=top {
        let mut op = m.zero_map(n, 2 - n as i64);
        for (p, &off) in parts.iter().zip(&offs) {
            if p.alg.space != first.alg.space {
                return Err(Error::AlgebraMismatch);
            }
            if let Some(x) = p.ops.get(&n) {
                for (w, o, v) in x.entries() {
                    let mut w2 = w.clone();
                    w2[0] += off as u32;
                    op.add_entry(w2, vec![o[0] + off as u32], v);
                }
            }
        }
        m.set_op(n, op)?;
    }
    Ok((m, offs))
}

/// Strict inclusion of the summand at `offset` and projection onto it.
pub fn sum_inclusion(part: Arc<AInfModule>, sum: Arc<AInfModule>, offset: usize) -> Result<(ModMorphism, ModMorphism)> {
    let field = sum.alg.field;
    let (n, k) = (sum.space.len(), part.space.len());
    let mut i = Mat::zeros(field, n, k);
    let mut p = Mat::zeros(field, k, n);
    for a in 0..k {
        i.set(offset + a, a, field.one());
        p.set(a, offset + a, field.one());
    }
    Ok((strict_mod_morphism(part.clone(), sum.clone(), 0, &i)?, strict_mod_morphism(sum, part, 0, &p)?))
}
