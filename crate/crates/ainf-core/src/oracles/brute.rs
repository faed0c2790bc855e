//! Brute force evaluators. Each identity family is recomputed basis word by
//! basis word from its defining sum, applying tensor products of maps with
//! the Koszul rule `(f (x) g)(x (x) y) = (-1)^{|g||x|} f(x) (x) g(y)` and
//! passing between `A` and `A[1]` through explicit suspensions. Nothing here
//! calls the composition routines of the main engine.

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::ainfmod::{AInfModule, ModMorphism};
use crate::ainfty::{AInfAlgebra, AlgHomotopy, AlgMorphism};
use crate::bocs::{Bocs, BocsMap, Vector};
use crate::gmodb::GMorph;
use crate::graded::{words, Space, TMap, Word};
use crate::linalg::{sv_add, Mat};
use crate::scalar::Scalar;

type Family = BTreeMap<usize, TMap>;

/// A vector of a tensor power: words to coefficients.
pub type Tensor = BTreeMap<Word, Scalar>;

fn parity(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

fn degs(factors: &[Arc<Space>], w: &[u32]) -> Vec<i64> {
    w.iter().zip(factors).map(|(&x, s)| s.deg(x as usize)).collect()
}

/// Compositions of `n` into positive parts, in lexicographic order.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for last in 1..=n {
        for mut head in compositions(n - last) {
            head.push(last);
            out.push(head);
        }
    }
    out.sort();
    out
}

/// `(r-1)(i_1-1) + ... + (i_{r-1}-1)`.
fn sgn(parts: &[usize]) -> i64 {
    let r = parts.len() as i64;
    parts.iter().enumerate().map(|(u, &i)| (r - 1 - u as i64) * (i as i64 - 1)).sum()
}

fn one_output(f: &TMap, w: &[u32]) -> Vec<(u32, Scalar)> {
    match f.table.get(w) {
        Some(img) => img.iter().map(|(o, v)| (o[0], v.clone())).collect(),
        None => Vec::new(),
    }
}

/// `(f_1 (x) ... (x) f_k)(w)`, where `None` stands for an identity map and
/// `arity` gives the number of letters each factor eats.
fn apply_tensor(fs: &[(Option<&TMap>, usize)], w: &[u32], d: &[i64]) -> Tensor {
    let field_one = || -> Option<Scalar> {
        fs.iter().find_map(|(f, _)| f.map(|f| f.field.one()))
    };
    let mut acc: Tensor = BTreeMap::new();
    let Some(one) = field_one() else {
        return acc;
    };
    acc.insert(Word::new(), one);
    let mut pos = 0;
    let mut passed = 0i64;
    for (f, k) in fs {
        let chunk = &w[pos..pos + k];
        let mut next: Tensor = BTreeMap::new();
        match f {
            None => {
                for (pre, v) in &acc {
                    let mut nw = pre.clone();
                    nw.extend_from_slice(chunk);
                    sv_add(&mut next, nw, v);
                }
            }
            Some(f) => {
                let sign = parity(f.deg * passed);
                let img = one_output(f, chunk);
                for (pre, v) in &acc {
                    for (o, x) in &img {
                        let mut nw = pre.clone();
                        nw.push(*o);
                        sv_add(&mut next, nw, &(v * x).signed(sign));
                    }
                }
            }
        }
        passed += d[pos..pos + k].iter().sum::<i64>();
        pos += k;
        acc = next;
    }
    acc
}

/// `g` applied to every word of a tensor.
fn apply_outer(g: &TMap, x: &Tensor, out: &mut BTreeMap<u32, Scalar>, sign: bool) {
    for (w, v) in x {
        for (o, c) in one_output(g, w) {
            sv_add(out, o, &(v * &c).signed(sign));
        }
    }
}

fn collect(t: &mut TMap, w: &Word, out: BTreeMap<u32, Scalar>) {
    for (o, v) in out {
        t.add_entry(w.clone(), vec![o], &v);
    }
}

/// `g(id^r (x) f (x) id^t)` on the word `w`, accumulated with sign `sign`.
fn inside(g: &TMap, f: &TMap, r: usize, s: usize, t: usize, w: &[u32], d: &[i64], out: &mut BTreeMap<u32, Scalar>, sign: bool) {
    let mut fs: Vec<(Option<&TMap>, usize)> = vec![(None, 1); r];
    fs.push((Some(f), s));
    fs.extend(core::iter::repeat((None, 1)).take(t));
    apply_outer(g, &apply_tensor(&fs, w, d), out, sign);
}

/// Stasheff defect with signs `(-1)^{r+st}` or, with `translated`, `(-1)^{rs+t}`.
pub fn stasheff(a: &AInfAlgebra, n: usize, translated: bool) -> TMap {
    let dom = a.dom(n);
    let mut t = a.zero_map(n, 3 - n as i64);
    for w in words(&dom) {
        let d = degs(&dom, &w);
        let mut out = BTreeMap::new();
        for s in 1..=n {
            for r in 0..=n - s {
                let u = n - r - s;
                let (Some(g), Some(f)) = (a.op_ref(r + 1 + u), a.op_ref(s)) else { continue };
                let e = if translated { r * s + u } else { r + s * u };
                inside(g, f, r, s, u, &w, &d, &mut out, parity(e as i64));
            }
        }
        collect(&mut t, &w, out);
    }
    t
}

/// `sum (-1)^{sgn(i)} g_k(f_{i_1} (x) ... (x) f_{i_k})` on one word.
fn postcomp(g: &Family, f: &Family, w: &[u32], d: &[i64], out: &mut BTreeMap<u32, Scalar>, sign: bool) {
    for parts in compositions(w.len()) {
        let Some(outer) = g.get(&parts.len()) else { continue };
        let fs: Option<Vec<(Option<&TMap>, usize)>> = parts.iter().map(|i| f.get(i).map(|x| (Some(x), *i))).collect();
        let Some(fs) = fs else { continue };
        apply_outer(outer, &apply_tensor(&fs, w, d), out, sign ^ parity(sgn(&parts)));
    }
}

fn ops(a: &AInfAlgebra) -> Family {
    a.ops().map(|(&n, m)| (n, m.clone())).collect()
}

/// `sum (-1)^{r+st} f(id^r (x) m_s (x) id^t) - sum (-1)^{sgn(i)} m_k(f_{i_1} (x) ...)`.
pub fn alg_morphism(f: &AlgMorphism, n: usize) -> TMap {
    let dom = f.src.dom(n);
    let mut t = f.zero_comp(n, 2 - n as i64);
    let target = ops(&f.tgt);
    for w in words(&dom) {
        let d = degs(&dom, &w);
        let mut out = BTreeMap::new();
        for s in 1..=n {
            for r in 0..=n - s {
                let u = n - r - s;
                let (Some(g), Some(m)) = (f.comps.get(&(r + 1 + u)), f.src.op_ref(s)) else { continue };
                inside(g, m, r, s, u, &w, &d, &mut out, parity((r + s * u) as i64));
            }
        }
        postcomp(&target, &f.comps, &w, &d, &mut out, true);
        collect(&mut t, &w, out);
    }
    t
}

/// `f_n - g_n - H(h)_n - H_{f,g}(h)_n`.
pub fn alg_homotopy(h: &AlgHomotopy, f: &AlgMorphism, g: &AlgMorphism, n: usize) -> TMap {
    let dom = f.src.dom(n);
    let mut t = f.comp(n).sub(&g.comp(n));
    for w in words(&dom) {
        let d = degs(&dom, &w);
        let mut out = BTreeMap::new();
        for s in 1..=n {
            for r in 0..=n - s {
                let u = n - r - s;
                let (Some(outer), Some(m)) = (h.comps.get(&(r + 1 + u)), f.src.op_ref(s)) else { continue };
                inside(outer, m, r, s, u, &w, &d, &mut out, !parity((r + s * u) as i64));
            }
        }
        for parts in compositions(n) {
            let k = parts.len();
            let Some(outer) = f.tgt.op_ref(k) else { continue };
            for p in 0..k {
                let (is, s, js) = (&parts[..p], parts[p], &parts[p + 1..]);
                let (r, u) = (is.len() as i64, js.len() as i64);
                let sum_i: usize = is.iter().sum();
                let mut fs = Vec::new();
                let mut ok = true;
                for i in is {
                    match f.comps.get(i) {
                        Some(x) => fs.push((Some(x), *i)),
                        None => ok = false,
                    }
                }
                match h.comps.get(&s) {
                    Some(x) => fs.push((Some(x), s)),
                    None => ok = false,
                }
                for j in js {
                    match g.comps.get(j) {
                        Some(x) => fs.push((Some(x), *j)),
                        None => ok = false,
                    }
                }
                if !ok {
                    continue;
                }
                let e = r * (u + 1) + s as i64 * u + u * sum_i as i64 + sgn(is) + sgn(js);
                apply_outer(outer, &apply_tensor(&fs, &w, &d), &mut out, !parity(e));
            }
        }
        collect(&mut t, &w, out);
    }
    t
}

/// `sum (-1)^{r+st} mu(id^r (x) mu_s (x) id^t)` for a right module, with `mu_s`
/// the module operation when `r = 0` and the algebra operation otherwise.
pub fn module(m: &AInfModule, n: usize) -> TMap {
    let dom = m.dom(n);
    let mut t = m.zero_map(n, 3 - n as i64);
    for w in words(&dom) {
        let d = degs(&dom, &w);
        let mut out = BTreeMap::new();
        for s in 1..=n {
            for r in 0..=n - s {
                let u = n - r - s;
                let inner = if r == 0 { m.op_ref(s) } else { m.alg.op_ref(s) };
                let (Some(g), Some(f)) = (m.op_ref(r + 1 + u), inner) else { continue };
                inside(g, f, r, s, u, &w, &d, &mut out, parity((r + s * u) as i64));
            }
        }
        collect(&mut t, &w, out);
    }
    t
}

/// `sum_{r >= 1, s >= 0} (-1)^{(|f|+r+1)s} g_{1+s}(f_r (x) id^s)` on one word.
fn mod_comp(g: &Family, f: &Family, fdeg: i64, w: &[u32], d: &[i64], out: &mut BTreeMap<u32, Scalar>, sign: bool) {
    let n = w.len();
    for r in 1..=n {
        let s = n - r;
        let (Some(outer), Some(inner)) = (g.get(&(1 + s)), f.get(&r)) else { continue };
        inside(outer, inner, 0, r, s, w, d, out, sign ^ parity((fdeg + r as i64 + 1) * s as i64));
    }
}

/// `sum_{r, s >= 1} (-1)^{|f|+r+st+1} f(id^r (x) m_s (x) id^t)` on one word.
fn delta_inf(a: &AInfAlgebra, f: &Family, fdeg: i64, w: &[u32], d: &[i64], out: &mut BTreeMap<u32, Scalar>) {
    let n = w.len();
    for s in 1..n {
        for r in 1..=n - s {
            let u = n - r - s;
            let (Some(outer), Some(m)) = (f.get(&(r + 1 + u)), a.op_ref(s)) else { continue };
            inside(outer, m, r, s, u, w, d, out, parity(fdeg + (r + s * u) as i64 + 1));
        }
    }
}

fn mod_ops(m: &AInfModule) -> Family {
    m.ops().clone()
}

/// `(g . f)_n`.
pub fn compose_mod(g: &ModMorphism, f: &ModMorphism, n: usize) -> TMap {
    let dom = f.src.dom(n);
    let mut t = TMap::zero(f.src.alg.field, f.deg + g.deg + 1 - n as i64, dom.clone(), vec![g.tgt.space.clone()]);
    for w in words(&dom) {
        let d = degs(&dom, &w);
        let mut out = BTreeMap::new();
        mod_comp(&g.comps, &f.comps, f.deg, &w, &d, &mut out, false);
        collect(&mut t, &w, out);
    }
    t
}

/// `delta_inf(f)_n`.
pub fn delta_inf_mod(f: &ModMorphism, n: usize) -> TMap {
    let dom = f.src.dom(n);
    let mut t = TMap::zero(f.src.alg.field, f.deg + 2 - n as i64, dom.clone(), vec![f.tgt.space.clone()]);
    for w in words(&dom) {
        let d = degs(&dom, &w);
        let mut out = BTreeMap::new();
        delta_inf(&f.src.alg, &f.comps, f.deg, &w, &d, &mut out);
        collect(&mut t, &w, out);
    }
    t
}

/// `D(f)_n = delta_inf(f)_n + (m^N . f)_n - (-1)^{|f|} (f . m^M)_n`.
pub fn mod_differential(f: &ModMorphism, n: usize) -> TMap {
    let dom = f.src.dom(n);
    let mut t = TMap::zero(f.src.alg.field, f.deg + 2 - n as i64, dom.clone(), vec![f.tgt.space.clone()]);
    let (mn, mm) = (mod_ops(&f.tgt), mod_ops(&f.src));
    for w in words(&dom) {
        let d = degs(&dom, &w);
        let mut out = BTreeMap::new();
        delta_inf(&f.src.alg, &f.comps, f.deg, &w, &d, &mut out);
        mod_comp(&mn, &f.comps, f.deg, &w, &d, &mut out, false);
        mod_comp(&f.comps, &mm, 1, &w, &d, &mut out, !parity(f.deg));
        collect(&mut t, &w, out);
    }
    t
}

/// `H^{(1)} + H^{(2)} + H^{(3)}` with the classical signs
/// `(-1)^{rs}`, `(-1)^{st}` and `(-1)^{r+st}`.
pub fn mod_homotopy_sums(h: &ModMorphism, n: usize) -> TMap {
    let dom = h.src.dom(n);
    let mut t = TMap::zero(h.src.alg.field, h.deg + 2 - n as i64, dom.clone(), vec![h.tgt.space.clone()]);
    for w in words(&dom) {
        let d = degs(&dom, &w);
        let mut out = BTreeMap::new();
        for r in 1..=n {
            let s = n - r;
            let (Some(outer), Some(inner)) = (h.tgt.op_ref(1 + s), h.comps.get(&r)) else { continue };
            inside(outer, inner, 0, r, s, &w, &d, &mut out, parity((r * s) as i64));
        }
        for s in 1..=n {
            let u = n - s;
            let (Some(outer), Some(inner)) = (h.comps.get(&(1 + u)), h.src.op_ref(s)) else { continue };
            inside(outer, inner, 0, s, u, &w, &d, &mut out, parity((s * u) as i64));
        }
        for s in 1..n {
            for r in 1..=n - s {
                let u = n - r - s;
                let (Some(outer), Some(m)) = (h.comps.get(&(r + 1 + u)), h.src.alg.op_ref(s)) else { continue };
                inside(outer, m, r, s, u, &w, &d, &mut out, parity((r + s * u) as i64));
            }
        }
        collect(&mut t, &w, out);
    }
    t
}

/// Sign of `(sigma^{-1})^{(x) k}` on `sigma x_1 (x) ... (x) sigma x_k`, times the
/// normalisation `(-1)^{k(k-1)/2}` shared by all hatted maps.
fn desuspend(d: &[i64]) -> bool {
    let k = d.len() as i64;
    let koszul: i64 = d.iter().enumerate().map(|(l, &x)| (k - 1 - l as i64) * (x - 1)).sum();
    parity(koszul + k * (k - 1) / 2)
}

/// The bar differential on every basis word, recomputed from `m-hat`.
pub fn bar_differential(b: &Bocs) -> Vec<Vector> {
    let data = b.bar.as_ref().expect("bar bocs");
    let a = &data.alg;
    let sp = &a.space;
    let mut out = Vec::new();
    for w in &data.words {
        let d: Vec<i64> = w.iter().map(|&x| sp.deg(x as usize)).collect();
        let mut v = Vector::new();
        for s in 1..=w.len() {
            let Some(ms) = a.op_ref(s) else { continue };
            for r in 0..=w.len() - s {
                let chunk = &w[r..r + s];
                // m-hat has degree 1 and passes the shifted letters in front
                let passed: i64 = d[..r].iter().map(|x| x - 1).sum();
                let sign = desuspend(&d[r..r + s]) ^ parity(passed);
                for (o, c) in one_output(ms, chunk) {
                    let mut nw: Word = w[..r].to_vec();
                    nw.push(o);
                    nw.extend_from_slice(&w[r + s..]);
                    if let Some(&k) = data.lookup.get(&nw) {
                        sv_add(&mut v, k, &c.signed(sign));
                    }
                }
            }
        }
        out.push(v);
    }
    out
}

/// `G(f)` entry by entry: `f-hat_{n+1} = sigma f_{n+1} (sigma^{-1})^{(x) n+1}`
/// with the common normalisation.
pub fn bridge(f: &ModMorphism, bocs: &Arc<Bocs>) -> GMorph {
    let data = bocs.bar.as_ref().expect("bar bocs");
    let mut g = GMorph::zero(bocs.clone(), f.src.shifted.clone(), f.tgt.shifted.clone(), f.deg);
    let msp = &f.src.space;
    let asp = &f.src.alg.space;
    for j in 0..msp.len() {
        if let Some(f1) = f.comps.get(&1) {
            for (o, c) in one_output(f1, &[j as u32]) {
                g.f0.add_at(o as usize, j, &c);
            }
        }
        for (k, w) in data.words.iter().enumerate() {
            let Some(fk) = f.comps.get(&(w.len() + 1)) else { continue };
            let mut input: Word = vec![j as u32];
            input.extend_from_slice(w);
            let mut d = vec![msp.deg(j)];
            d.extend(w.iter().map(|&x| asp.deg(x as usize)));
            let sign = desuspend(&d);
            for (o, c) in one_output(fk, &input) {
                g.f1[k].add_at(o as usize, j, &c.signed(sign));
            }
        }
    }
    g
}

fn hat_images(comps: &Family, sp: &Space, w: &[u32]) -> Vec<(u32, Scalar)> {
    let Some(f) = comps.get(&w.len()) else { return Vec::new() };
    let d: Vec<i64> = w.iter().map(|&x| sp.deg(x as usize)).collect();
    let sign = desuspend(&d);
    one_output(f, w).into_iter().map(|(o, c)| (o, c.signed(sign))).collect()
}

/// `Delta(h)` for a family `h` of degree `deg` between `f` and `g`: on a word,
/// the sum over splittings of `f-hat (x) ... (x) h-hat (x) g-hat (x) ...`. With `h`
/// empty and `deg = 0` and `f = g` this is `Psi(f)`.
pub fn coderivation(
    h: Option<&AlgHomotopy>,
    deg: i64,
    f: &AlgMorphism,
    g: &AlgMorphism,
    ba: &Arc<Bocs>,
    bb: &Arc<Bocs>,
) -> BocsMap {
    let da = ba.bar.as_ref().expect("bar bocs");
    let db = bb.bar.as_ref().expect("bar bocs");
    let sp = &f.src.space;
    let mut out = BocsMap::zero(ba.clone(), bb.clone(), deg);
    for (i, w) in da.words.iter().enumerate() {
        let mut acc: Tensor = BTreeMap::new();
        for parts in compositions(w.len()) {
            let slots: Vec<Option<usize>> = match h {
                None => vec![None],
                Some(_) => (0..parts.len()).map(Some).collect(),
            };
            for hp in slots {
                let mut cur: Tensor = BTreeMap::new();
                cur.insert(Word::new(), f.src.field.one());
                let mut pos = 0;
                let mut passed = 0i64;
                for (k, &p) in parts.iter().enumerate() {
                    let chunk = &w[pos..pos + p];
                    let (img, sign) = match hp {
                        Some(q) if k == q => (hat_images(&h.expect("h").comps, sp, chunk), parity(deg * passed)),
                        Some(q) if k > q => (hat_images(&g.comps, sp, chunk), false),
                        _ => (hat_images(&f.comps, sp, chunk), false),
                    };
                    let mut next = BTreeMap::new();
                    for (pre, v) in &cur {
                        for (o, c) in &img {
                            let mut nw = pre.clone();
                            nw.push(*o);
                            sv_add(&mut next, nw, &(v * c).signed(sign));
                        }
                    }
                    cur = next;
                    passed += chunk.iter().map(|&x| sp.deg(x as usize) - 1).sum::<i64>();
                    pos += p;
                }
                for (k, v) in cur {
                    sv_add(&mut acc, k, &v);
                }
            }
        }
        for (k, v) in acc {
            if let Some(&j) = db.lookup.get(&k) {
                sv_add(&mut out.map[i], j, &v);
            }
        }
    }
    out
}

fn column_apply(m: &Mat, col: &BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
    let mut out = BTreeMap::new();
    for (&(i, j), a) in &m.data {
        if let Some(b) = col.get(&j) {
            sv_add(&mut out, i, &(a * b));
        }
    }
    out
}

fn unit(field: crate::scalar::Field, j: usize) -> BTreeMap<usize, Scalar> {
    let mut v = BTreeMap::new();
    v.insert(j, field.one());
    v
}

/// `g * f` column by column from its definition.
pub fn compose(g: &GMorph, f: &GMorph) -> GMorph {
    let b = &f.bocs;
    let field = b.field;
    let mut r = GMorph::zero(b.clone(), f.dom.clone(), g.cod.clone(), f.deg + g.deg);
    for j in 0..f.dom.len() {
        let e = unit(field, j);
        let f0e = column_apply(&f.f0, &e);
        for (i, v) in column_apply(&g.f0, &f0e) {
            r.f0.add_at(i, j, &v);
        }
        for c in 0..b.len() {
            let mut col = column_apply(&g.f1[c], &f0e);
            for (i, v) in column_apply(&g.f0, &column_apply(&f.f1[c], &e)) {
                sv_add(&mut col, i, &v);
            }
            for (x, y, lam) in b.comult(c) {
                for (i, v) in column_apply(&g.f1[*y], &column_apply(&f.f1[*x], &e)) {
                    sv_add(&mut col, i, &(&v * lam));
                }
            }
            for (i, v) in col {
                r.f1[c].add_at(i, j, &v);
            }
        }
    }
    r
}

/// `delta-hat(f)` from its definition.
pub fn hat_delta(f: &GMorph) -> GMorph {
    let b = &f.bocs;
    let mut r = GMorph::zero(b.clone(), f.dom.clone(), f.cod.clone(), f.deg + 1);
    for c in 0..b.len() {
        for j in 0..f.dom.len() {
            let sign = parity(f.deg + f.dom.deg(j) + 1);
            for (&dc, lam) in b.delta(c) {
                for (i, v) in column_apply(&f.f1[dc], &unit(b.field, j)) {
                    r.f1[c].add_at(i, j, &(&v * lam).signed(sign));
                }
            }
        }
    }
    r
}

/// `delta-hat(u) + u * u`.
pub fn mc(u: &GMorph) -> GMorph {
    hat_delta(u).add(&compose(u, u))
}

/// `delta-hat(f) + v * f - (-1)^{|f|} f * u`.
pub fn twisted_differential(f: &GMorph, u: &GMorph, v: &GMorph) -> GMorph {
    let a = hat_delta(f).add(&compose(v, f));
    let b = compose(f, u);
    if parity(f.deg) {
        a.add(&b)
    } else {
        a.sub(&b)
    }
}
