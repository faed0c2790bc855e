//! A-infinity algebras over `S`, their morphisms and homotopies.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::graded::{word_deg, Space, TMap, Word};
use crate::scalar::{Field, Scalar};

/// `(-1)^k` as a parity.
pub fn odd(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

/// Parity of `(r-1)(i_1-1) + (r-2)(i_2-1) + ... + (i_{r-1}-1)`.
pub fn sgn(parts: &[usize]) -> Result<bool> {
    if parts.is_empty() || parts.contains(&0) {
        return Err(Error::EmptyPartition);
    }
    let r = parts.len();
    let s: usize = parts.iter().enumerate().map(|(u, &i)| (r - 1 - u) * (i - 1)).sum();
    Ok(s % 2 == 1)
}

fn sgn_or_even(parts: &[usize]) -> bool {
    if parts.is_empty() {
        false
    } else {
        sgn(parts).expect("positive parts")
    }
}

/// All compositions of `n` into positive parts.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

type RevIndex = BTreeMap<u32, Vec<(Word, Scalar)>>;

fn rev_index(f: &TMap) -> RevIndex {
    let mut idx: RevIndex = BTreeMap::new();
    for (w, o, v) in f.entries() {
        debug_assert_eq!(o.len(), 1);
        idx.entry(o[0]).or_default().push((w.clone(), v.clone()));
    }
    idx
}

/// `g . (id^{pos} (x) f (x) id^{...})` for a single output `f`, evaluated
/// sparsely from the entries of `g`.
pub fn compose_at(g: &TMap, pos: usize, f: &TMap) -> TMap {
    let mut dom: Vec<Arc<Space>> = g.dom[..pos].to_vec();
    dom.extend(f.dom.iter().cloned());
    dom.extend(g.dom[pos + 1..].iter().cloned());
    let mut r = TMap::zero(g.field, g.deg + f.deg, dom, g.cod.clone());
    if f.is_zero() || g.is_zero() {
        return r;
    }
    let idx = rev_index(f);
    let fodd = odd(f.deg);
    for (v, img) in &g.table {
        let Some(pre) = idx.get(&v[pos]) else { continue };
        let sign = fodd && odd(word_deg(&g.dom[..pos], &v[..pos]));
        for (w, a) in pre {
            let mut input: Word = v[..pos].to_vec();
            input.extend_from_slice(w);
            input.extend_from_slice(&v[pos + 1..]);
            for (o, b) in img {
                r.add_entry(input.clone(), o.clone(), &(a * b).signed(sign));
            }
        }
    }
    r
}

/// `g . (f_1 (x) ... (x) f_k)` for single output maps `f_j`, with Koszul signs.
pub fn compose_tensor(g: &TMap, fs: &[&TMap]) -> TMap {
    assert_eq!(g.dom.len(), fs.len());
    let mut dom = Vec::new();
    for f in fs {
        dom.extend(f.dom.iter().cloned());
    }
    let deg = g.deg + fs.iter().map(|f| f.deg).sum::<i64>();
    let mut r = TMap::zero(g.field, deg, dom, g.cod.clone());
    if g.is_zero() || fs.iter().any(|f| f.is_zero()) {
        return r;
    }
    let idxs: Vec<RevIndex> = fs.iter().map(|f| rev_index(f)).collect();
    for (v, img) in &g.table {
        let mut pres = Vec::with_capacity(fs.len());
        for (j, &letter) in v.iter().enumerate() {
            match idxs[j].get(&letter) {
                Some(p) => pres.push(p),
                None => break,
            }
        }
        if pres.len() < fs.len() {
            continue;
        }
        let mut choice = vec![0usize; fs.len()];
        loop {
            let mut input = Word::new();
            let mut coeff = g.field.one();
            let mut sign = false;
            let mut seen = 0i64;
            for j in 0..fs.len() {
                let (w, a) = &pres[j][choice[j]];
                if odd(fs[j].deg) && odd(seen) {
                    sign = !sign;
                }
                seen += word_deg(&fs[j].dom, w);
                input.extend_from_slice(w);
                coeff = &coeff * a;
            }
            let coeff = coeff.signed(sign);
            for (o, b) in img {
                r.add_entry(input.clone(), o.clone(), &(&coeff * b));
            }
            let mut j = fs.len();
            loop {
                if j == 0 {
                    break;
                }
                j -= 1;
                choice[j] += 1;
                if choice[j] < pres[j].len() {
                    break;
                }
                choice[j] = 0;
                if j == 0 {
                    j = usize::MAX;
                    break;
                }
            }
            if j == usize::MAX {
                break;
            }
        }
    }
    r
}

/// An A-infinity algebra with operations `m_n`, `1 <= n <= bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct AInfAlgebra {
    pub field: Field,
    pub space: Arc<Space>,
    pub bound: usize,
    ops: BTreeMap<usize, TMap>,
}

impl AInfAlgebra {
    pub fn new(field: Field, space: Arc<Space>, bound: usize) -> Result<AInfAlgebra> {
        if !space.is_bimodule() {
            return Err(Error::Invalid("an algebra needs a bimodule".into()));
        }
        Ok(AInfAlgebra { field, space, bound: bound.max(1), ops: BTreeMap::new() })
    }

    pub fn dom(&self, n: usize) -> Vec<Arc<Space>> {
        vec![self.space.clone(); n]
    }

    pub fn zero_map(&self, n: usize, deg: i64) -> TMap {
        TMap::zero(self.field, deg, self.dom(n), vec![self.space.clone()])
    }

    /// `m_n`, zero when absent.
    pub fn op(&self, n: usize) -> TMap {
        self.ops.get(&n).cloned().unwrap_or_else(|| self.zero_map(n, 2 - n as i64))
    }

    pub fn op_ref(&self, n: usize) -> Option<&TMap> {
        self.ops.get(&n)
    }

    pub fn set_op(&mut self, n: usize, m: TMap) -> Result<()> {
        if n == 0 || m.deg != 2 - n as i64 || m.dom.len() != n || m.cod.len() != 1 {
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

    pub fn ops(&self) -> impl Iterator<Item = (&usize, &TMap)> {
        self.ops.iter()
    }

    /// Largest `n` with a nonzero `m_n`.
    pub fn top(&self) -> usize {
        self.ops.keys().next_back().copied().unwrap_or(0)
    }
}

/// The defect `sum (-1)^{r+st} m_{r+1+t}(id^r (x) m_s (x) id^t)` of the identity of arity `n`.
pub fn stasheff_defect(a: &AInfAlgebra, n: usize) -> TMap {
    let mut acc = a.zero_map(n, 3 - n as i64);
    for s in 1..=n {
        let Some(ms) = a.op_ref(s) else { continue };
        for r in 0..=n - s {
            let t = n - s - r;
            let Some(outer) = a.op_ref(r + 1 + t) else { continue };
            let mut term = compose_at(outer, r, ms);
            if odd((r + s * t) as i64) {
                term = term.neg();
            }
            acc.add_assign(&term);
        }
    }
    acc
}

fn report(res: &mut CheckResult, identity: &str, index: String, defect: &TMap) {
    let w = defect.witness().map(|(i, o, v)| format!("at {} -> {} value {}", i, o, v));
    res.push(identity, index, w);
}

pub fn check_stasheff(a: &AInfAlgebra, n: usize) -> CheckResult {
    let mut res = CheckResult::new();
    report(&mut res, "stasheff", format!("n={}", n), &stasheff_defect(a, n));
    res
}

/// All Stasheff identities up to `2 * bound`.
pub fn check_stasheff_all(a: &AInfAlgebra) -> CheckResult {
    let mut res = CheckResult::new();
    for n in 1..=2 * a.bound {
        res.extend(check_stasheff(a, n));
    }
    res
}

fn tri(n: usize) -> bool {
    (n * n.saturating_sub(1) / 2) % 2 == 1
}

/// Defect with the alternative sign rule `(-1)^{rs+t}`.
pub fn translated_defect(a: &AInfAlgebra, n: usize) -> TMap {
    let mut acc = a.zero_map(n, 3 - n as i64);
    for s in 1..=n {
        let Some(ms) = a.op_ref(s) else { continue };
        for r in 0..=n - s {
            let t = n - s - r;
            let Some(outer) = a.op_ref(r + 1 + t) else { continue };
            let mut term = compose_at(outer, r, ms);
            if odd((r * s + t) as i64) {
                term = term.neg();
            }
            acc.add_assign(&term);
        }
    }
    acc
}

/// Rescales `m_n` by `(-1)^{n(n-1)/2}` and verifies that the defects
/// correspond under the same sign for every `n <= 2 * bound`.
pub fn sign_translate(a: &AInfAlgebra) -> Result<AInfAlgebra> {
    let mut b = a.clone();
    for (&n, m) in a.ops() {
        b.ops.insert(n, if tri(n) { m.neg() } else { m.clone() });
    }
    for n in 1..=2 * a.bound {
        let z = stasheff_defect(a, n);
        let z2 = translated_defect(&b, n);
        let expect = if tri(n) { z.neg() } else { z };
        if z2 != expect {
            return Err(Error::TranslationDefectMismatch(n));
        }
    }
    Ok(b)
}

/// A morphism of A-infinity algebras with components `f_n` of degree `1-n`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgMorphism {
    pub src: Arc<AInfAlgebra>,
    pub tgt: Arc<AInfAlgebra>,
    pub comps: BTreeMap<usize, TMap>,
}

impl AlgMorphism {
    pub fn new(src: Arc<AInfAlgebra>, tgt: Arc<AInfAlgebra>) -> AlgMorphism {
        AlgMorphism { src, tgt, comps: BTreeMap::new() }
    }

    pub fn identity(a: Arc<AInfAlgebra>) -> AlgMorphism {
        let mut f = AlgMorphism::new(a.clone(), a.clone());
        f.comps.insert(1, TMap::identity(a.field, a.dom(1)));
        f
    }

    pub fn zero_comp(&self, n: usize, deg: i64) -> TMap {
        TMap::zero(self.src.field, deg, self.src.dom(n), vec![self.tgt.space.clone()])
    }

    pub fn comp(&self, n: usize) -> TMap {
        self.comps.get(&n).cloned().unwrap_or_else(|| self.zero_comp(n, 1 - n as i64))
    }

    pub fn set_comp(&mut self, n: usize, f: TMap) -> Result<()> {
        set_family(&mut self.comps, n, f, 1 - n as i64)
    }

    pub fn bound(&self) -> usize {
        let top = self.comps.keys().next_back().copied().unwrap_or(0);
        top.max(self.src.bound).max(self.tgt.bound)
    }
}

fn set_family(comps: &mut BTreeMap<usize, TMap>, n: usize, f: TMap, deg: i64) -> Result<()> {
    if n == 0 || f.deg != deg || f.dom.len() != n {
        return Err(Error::Invalid(format!("component {} must have arity {} and degree {}", n, n, deg)));
    }
    f.validate()?;
    if f.is_zero() {
        comps.remove(&n);
    } else {
        comps.insert(n, f);
    }
    Ok(())
}

/// `sum (-1)^{r+st} f_{r+1+t}(id^r (x) m_s (x) id^t)` for any family of
/// components `f` (of degree `d+1-n` when `f` has degree `d`).
pub fn precompose_ops(a: &AInfAlgebra, f: &BTreeMap<usize, TMap>, n: usize, zero: TMap) -> TMap {
    let mut acc = zero;
    for s in 1..=n {
        let Some(ms) = a.op_ref(s) else { continue };
        for r in 0..=n - s {
            let t = n - s - r;
            let Some(outer) = f.get(&(r + 1 + t)) else { continue };
            let mut term = compose_at(outer, r, ms);
            if odd((r + s * t) as i64) {
                term = term.neg();
            }
            acc.add_assign(&term);
        }
    }
    acc
}

/// `sum (-1)^{sgn(i)} g_s(f_{i_1} (x) ... (x) f_{i_s})` over compositions of `n`.
pub fn postcompose(g: &BTreeMap<usize, TMap>, f: &BTreeMap<usize, TMap>, n: usize, zero: TMap) -> TMap {
    let mut acc = zero;
    for parts in compositions(n) {
        let Some(outer) = g.get(&parts.len()) else { continue };
        let fs: Option<Vec<&TMap>> = parts.iter().map(|i| f.get(i)).collect();
        let Some(fs) = fs else { continue };
        let mut term = compose_tensor(outer, &fs);
        if sgn_or_even(&parts) {
            term = term.neg();
        }
        acc.add_assign(&term);
    }
    acc
}

/// `Sigma_n - Sigma'_n` for a candidate morphism.
pub fn morphism_defect(f: &AlgMorphism, n: usize) -> TMap {
    let deg = 2 - n as i64;
    let lhs = precompose_ops(&f.src, &f.comps, n, f.zero_comp(n, deg));
    let rhs = postcompose(&f.tgt.ops, &f.comps, n, f.zero_comp(n, deg));
    lhs.sub(&rhs)
}

pub fn check_alg_morphism(f: &AlgMorphism, n: usize) -> CheckResult {
    let mut res = CheckResult::new();
    report(&mut res, "morphism", format!("n={}", n), &morphism_defect(f, n));
    res
}

pub fn check_alg_morphism_all(f: &AlgMorphism) -> CheckResult {
    let mut res = CheckResult::new();
    for n in 1..=2 * f.bound() {
        res.extend(check_alg_morphism(f, n));
    }
    res
}

pub fn compose_alg_morphisms(g: &AlgMorphism, f: &AlgMorphism) -> Result<AlgMorphism> {
    if f.tgt.space != g.src.space || f.tgt.ops != g.src.ops {
        return Err(Error::AlgebraMismatch);
    }
    let mut h = AlgMorphism::new(f.src.clone(), g.tgt.clone());
    let top = f.bound() * g.bound();
    for n in 1..=top {
        let c = postcompose(&g.comps, &f.comps, n, h.zero_comp(n, 1 - n as i64));
        h.set_comp(n, c)?;
    }
    Ok(h)
}

/// A family `h_n` of degree `-n` (more generally `d+1-n`).
#[derive(Clone, Debug, PartialEq)]
pub struct AlgHomotopy {
    pub comps: BTreeMap<usize, TMap>,
}

/// `H(h)_n`.
pub fn h_term(a: &AInfAlgebra, h: &AlgHomotopy, n: usize, zero: TMap) -> TMap {
    precompose_ops(a, &h.comps, n, zero)
}

/// `H_{f,g}(h)_n`.
pub fn hfg_term(f: &AlgMorphism, g: &AlgMorphism, h: &AlgHomotopy, n: usize) -> TMap {
    let mut acc = f.zero_comp(n, 1 - n as i64);
    for parts in compositions(n) {
        let k = parts.len();
        let Some(outer) = f.tgt.op_ref(k) else { continue };
        for p in 0..k {
            let is = &parts[..p];
            let s = parts[p];
            let js = &parts[p + 1..];
            let (r, t) = (p, js.len());
            let mut fs: Vec<&TMap> = Vec::with_capacity(k);
            let mut missing = false;
            for i in is {
                match f.comps.get(i) {
                    Some(x) => fs.push(x),
                    None => missing = true,
                }
            }
            match h.comps.get(&s) {
                Some(x) => fs.push(x),
                None => missing = true,
            }
            for j in js {
                match g.comps.get(j) {
                    Some(x) => fs.push(x),
                    None => missing = true,
                }
            }
            if missing {
                continue;
            }
            let sum_i: usize = is.iter().sum();
            let e = r * (t + 1) + s * t + t * sum_i;
            let sign = odd(e as i64) ^ sgn_or_even(is) ^ sgn_or_even(js);
            let mut term = compose_tensor(outer, &fs);
            if sign {
                term = term.neg();
            }
            acc.add_assign(&term);
        }
    }
    acc
}

/// `f_n - g_n - H(h)_n - H_{f,g}(h)_n`.
pub fn alg_homotopy_defect(h: &AlgHomotopy, f: &AlgMorphism, g: &AlgMorphism, n: usize) -> TMap {
    let deg = 1 - n as i64;
    let mut d = f.comp(n).sub(&g.comp(n));
    d = d.sub(&h_term(&f.src, h, n, f.zero_comp(n, deg)));
    d.sub(&hfg_term(f, g, h, n))
}

pub fn check_alg_homotopy(h: &AlgHomotopy, f: &AlgMorphism, g: &AlgMorphism, n: usize) -> CheckResult {
    let mut res = CheckResult::new();
    report(&mut res, "homotopy", format!("n={}", n), &alg_homotopy_defect(h, f, g, n));
    res
}

fn homotopy_bound(h: &AlgHomotopy, f: &AlgMorphism) -> usize {
    f.bound().max(h.comps.keys().next_back().copied().unwrap_or(0))
}

pub fn check_alg_homotopy_all(h: &AlgHomotopy, f: &AlgMorphism, g: &AlgMorphism) -> CheckResult {
    let mut res = CheckResult::new();
    for n in 1..=2 * homotopy_bound(h, f).max(g.bound()) {
        res.extend(check_alg_homotopy(h, f, g, n));
    }
    res
}

/// The morphism `g` with `f - g = H(h) + H_{f,g}(h)`, built one arity at a time.
pub fn homotopic_partner(f: &AlgMorphism, h: &AlgHomotopy) -> Result<AlgMorphism> {
    let mut g = AlgMorphism::new(f.src.clone(), f.tgt.clone());
    for n in 1..=2 * homotopy_bound(h, f) {
        let deg = 1 - n as i64;
        let hh = h_term(&f.src, h, n, f.zero_comp(n, deg));
        let hfg = hfg_term(f, &g, h, n);
        let gn = f.comp(n).sub(&hh).sub(&hfg);
        g.set_comp(n, gn)?;
    }
    Ok(g)
}

/// `h^odot = H(h) + H_{f,g}(h)` as a family of degree `1-n`.
pub fn homotopy_odot(h: &AlgHomotopy, f: &AlgMorphism, g: &AlgMorphism, top: usize) -> AlgHomotopy {
    let mut comps = BTreeMap::new();
    for n in 1..=top {
        let deg = 1 - n as i64;
        let x = h_term(&f.src, h, n, f.zero_comp(n, deg)).add(&hfg_term(f, g, h, n));
        if !x.is_zero() {
            comps.insert(n, x);
        }
    }
    AlgHomotopy { comps }
}

/// Labels of a defect for reports.
pub fn defect_label(m: &TMap) -> Option<String> {
    m.witness().map(|(i, o, v)| format!("{} -> {} : {}", i, o, v))
}
