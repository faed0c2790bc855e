//! Triangular differential graded bocses given by explicit filtration layers,
//! and the bar construction of an A-infinity algebra.
//!
//! A bocs is stored through its reduced part: a basis of `C-bar` where every
//! element carries the first layer `C-bar_i` it belongs to, the reduced
//! comultiplication and the differential on basis elements. The counit and
//! the summand `S` are implicit.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::ainfty::{compositions, odd, AInfAlgebra, AlgHomotopy, AlgMorphism};
use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::graded::{self, Gen, Space, Word};
use crate::linalg::{self, sv_add};
use crate::scalar::{Field, Scalar};

pub type Vector = BTreeMap<usize, Scalar>;

/// A basis element `c in e_tgt C e_src` first appearing in layer `layer`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BGen {
    pub label: String,
    pub deg: i64,
    pub src: usize,
    pub tgt: usize,
    pub layer: usize,
}

/// Word data of a bar bocs: basis element `i` is the word `words[i]` over `A[1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BarData {
    pub alg: Arc<AInfAlgebra>,
    pub words: Vec<Word>,
    pub lookup: BTreeMap<Word, usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bocs {
    pub field: Field,
    pub nidem: usize,
    basis: Vec<BGen>,
    index: BTreeMap<String, usize>,
    comult: Vec<Vec<(usize, usize, Scalar)>>,
    delta: Vec<Vector>,
    pub level: usize,
    pub bar: Option<BarData>,
}

impl Bocs {
    /// Builds a bocs and checks degrees, idempotents and triangularity.
    pub fn new(
        field: Field,
        nidem: usize,
        basis: Vec<BGen>,
        comult: Vec<Vec<(usize, usize, Scalar)>>,
        delta: Vec<Vector>,
    ) -> Result<Bocs> {
        let n = basis.len();
        if comult.len() != n || delta.len() != n {
            return Err(Error::Invalid("comultiplication and differential must cover the basis".into()));
        }
        let mut index = BTreeMap::new();
        for (i, g) in basis.iter().enumerate() {
            if g.src >= nidem || g.tgt >= nidem {
                return Err(Error::IdempotentMismatch);
            }
            if g.layer == 0 {
                return Err(Error::TriangularityViolation(format!("{} has layer 0", g.label)));
            }
            if index.insert(g.label.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate label {}", g.label)));
            }
        }
        for (i, g) in basis.iter().enumerate() {
            for (a, b, _) in &comult[i] {
                let (x, y) = (&basis[*a], &basis[*b]);
                if x.layer >= g.layer || y.layer >= g.layer {
                    return Err(Error::TriangularityViolation(format!(
                        "comultiplication of {} does not lower the layer",
                        g.label
                    )));
                }
                if x.src != y.tgt || x.tgt != g.tgt || y.src != g.src || x.deg + y.deg != g.deg {
                    return Err(Error::Invalid(format!("comultiplication of {} is not homogeneous", g.label)));
                }
            }
            for &j in delta[i].keys() {
                let y = &basis[j];
                if y.layer > g.layer {
                    return Err(Error::TriangularityViolation(format!("differential of {} raises the layer", g.label)));
                }
                if y.src != g.src || y.tgt != g.tgt || y.deg != g.deg + 1 {
                    return Err(Error::Invalid(format!("differential of {} is not homogeneous of degree 1", g.label)));
                }
            }
        }
        let level = basis.iter().map(|g| g.layer).max().unwrap_or(0);
        let mut comult = comult;
        for c in comult.iter_mut() {
            let mut acc: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
            for (a, b, v) in c.drain(..) {
                sv_add(&mut acc, (a, b), &v);
            }
            *c = acc.into_iter().map(|((a, b), v)| (a, b, v)).collect();
        }
        let delta = delta.into_iter().map(|d| d.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect();
        Ok(Bocs { field, nidem, basis, index, comult, delta, level, bar: None })
    }

    /// The trivial bocs `C = S`.
    pub fn trivial(field: Field, nidem: usize) -> Bocs {
        Bocs::new(field, nidem, Vec::new(), Vec::new(), Vec::new()).expect("empty bocs")
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn gen(&self, i: usize) -> &BGen {
        &self.basis[i]
    }

    pub fn basis(&self) -> &[BGen] {
        &self.basis
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn comult(&self, i: usize) -> &[(usize, usize, Scalar)] {
        &self.comult[i]
    }

    pub fn delta(&self, i: usize) -> &Vector {
        &self.delta[i]
    }

    pub fn delta_vec(&self, c: &Vector) -> Vector {
        let mut out = Vector::new();
        for (&i, a) in c {
            for (&j, b) in &self.delta[i] {
                sv_add(&mut out, j, &(a * b));
            }
        }
        out
    }

    pub fn comult_vec(&self, c: &Vector) -> BTreeMap<(usize, usize), Scalar> {
        let mut out = BTreeMap::new();
        for (&i, a) in c {
            for (x, y, b) in &self.comult[i] {
                sv_add(&mut out, (*x, *y), &(a * b));
            }
        }
        out
    }

    /// Basis elements of exactly layer `i`.
    pub fn layer(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&k| self.basis[k].layer == i).collect()
    }

    /// `C-bar` as a graded bimodule.
    pub fn space(&self) -> Space {
        let gens = self
            .basis
            .iter()
            .map(|g| Gen { label: g.label.clone(), deg: g.deg, src: g.src, tgt: Some(g.tgt) })
            .collect();
        Space::new(self.nidem, gens).expect("bocs labels")
    }

    /// The highest layer touched by a vector.
    pub fn vec_layer(&self, c: &Vector) -> usize {
        c.keys().map(|&i| self.basis[i].layer).max().unwrap_or(0)
    }

    pub fn label_vec(&self, c: &Vector) -> String {
        if c.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = c.iter().map(|(&i, v)| format!("{}*{}", v, self.basis[i].label)).collect();
        parts.join(" + ")
    }
}

/// `C-bar_i = sum_{j <= i} A[1]^{(x) j}` with word splitting and the
/// differential induced by the operations of `a`.
pub fn bar_construct(a: Arc<AInfAlgebra>, level: usize) -> Result<Bocs> {
    if level == 0 {
        return Err(Error::Invalid("the bar construction needs level >= 1".into()));
    }
    let sp = a.space.clone();
    let mut words: Vec<Word> = Vec::new();
    for n in 1..=level {
        words.extend(graded::words(&vec![sp.clone(); n]));
    }
    let lookup: BTreeMap<Word, usize> = words.iter().enumerate().map(|(i, w)| (w.clone(), i)).collect();
    let letter_deg = |x: u32| sp.deg(x as usize) - 1;
    let basis: Vec<BGen> = words
        .iter()
        .map(|w| BGen {
            label: graded::word_label(&vec![sp.clone(); w.len()], w),
            deg: w.iter().map(|&x| letter_deg(x)).sum(),
            src: sp.gen(w[w.len() - 1] as usize).src,
            tgt: sp.gen(w[0] as usize).tgt.expect("bimodule"),
            layer: w.len(),
        })
        .collect();
    let mut comult = Vec::with_capacity(words.len());
    let mut delta = Vec::with_capacity(words.len());
    let one = a.field.one();
    for w in &words {
        let n = w.len();
        comult.push((1..n).map(|k| (lookup[&w[..k]], lookup[&w[k..]], one.clone())).collect());
        let mut d = Vector::new();
        for s in 1..=n.min(a.bound) {
            let Some(ms) = a.op_ref(s) else { continue };
            for r in 0..=n - s {
                let sub = &w[r..r + s];
                let Some(img) = ms.apply(sub) else { continue };
                // m-hat_s on sigma a_1 ... sigma a_s, then the Koszul sign of
                // passing the r letters in front
                let e: i64 = sub.iter().enumerate().map(|(k, &x)| (s - 1 - k) as i64 * sp.deg(x as usize)).sum::<i64>()
                    + w[..r].iter().map(|&x| letter_deg(x)).sum::<i64>();
                for (o, v) in img {
                    let mut nw: Word = w[..r].to_vec();
                    nw.push(o[0]);
                    nw.extend_from_slice(&w[r + s..]);
                    sv_add(&mut d, lookup[&nw], &v.clone().signed(odd(e)));
                }
            }
        }
        delta.push(d);
    }
    let mut b = Bocs::new(a.field, sp.nidem, basis, comult, delta)?;
    for i in 0..b.len() {
        let dd = b.delta_vec(&b.delta[i].clone());
        if !dd.is_empty() {
            return Err(Error::StasheffViolation(b.basis[i].label.clone()));
        }
    }
    b.bar = Some(BarData { alg: a, words, lookup });
    Ok(b)
}

fn tensor_label(b: &Bocs, k: &[usize]) -> String {
    let parts: Vec<&str> = k.iter().map(|&i| b.basis[i].label.as_str()).collect();
    parts.join(" (x) ")
}

/// Coassociativity, coderivation, `delta^2 = 0` and the counit conditions,
/// reported per layer.
pub fn check_bocs_axioms(b: &Bocs) -> CheckResult {
    let mut res = CheckResult::new();
    for layer in 1..=b.level {
        let elems = b.layer(layer);
        let mut coassoc = None;
        let mut coder = None;
        let mut square = None;
        for &c in &elems {
            let label = &b.basis[c].label;
            // (mu (x) 1) mu = (1 (x) mu) mu
            let mut diff: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
            for (x, y, v) in &b.comult[c] {
                for (p, q, w) in &b.comult[*x] {
                    sv_add(&mut diff, vec![*p, *q, *y], &(v * w));
                }
                for (p, q, w) in &b.comult[*y] {
                    sv_add(&mut diff, vec![*x, *p, *q], &-(v * w));
                }
            }
            if coassoc.is_none() {
                if let Some((k, v)) = diff.iter().next() {
                    coassoc = Some(format!("at {} on {} value {}", label, tensor_label(b, k), v));
                }
            }
            // mu delta = (delta (x) 1 + 1 (x) delta) mu
            let mut e: BTreeMap<(usize, usize), Scalar> = BTreeMap::new();
            for (&d, v) in &b.delta[c] {
                for (x, y, w) in &b.comult[d] {
                    sv_add(&mut e, (*x, *y), &(v * w));
                }
            }
            for (x, y, v) in &b.comult[c] {
                for (&dx, w) in &b.delta[*x] {
                    sv_add(&mut e, (dx, *y), &-(v * w));
                }
                let sign = odd(b.basis[*x].deg);
                for (&dy, w) in &b.delta[*y] {
                    sv_add(&mut e, (*x, dy), &-(v * w).signed(sign));
                }
            }
            if coder.is_none() {
                if let Some(((x, y), v)) = e.iter().next() {
                    coder = Some(format!("at {} on {} value {}", label, tensor_label(b, &[*x, *y]), v));
                }
            }
            let dd = b.delta_vec(&b.delta[c]);
            if square.is_none() && !dd.is_empty() {
                square = Some(format!("at {}: {}", label, b.label_vec(&dd)));
            }
        }
        let idx = format!("layer={}", layer);
        res.push("coassociativity", idx.clone(), coassoc);
        res.push("coderivation", idx.clone(), coder);
        res.push("delta-squared", idx.clone(), square);
        // the counit is the projection onto S and delta never reaches S
        res.pass("counit", idx.clone());
        res.pass("epsilon-delta", idx);
    }
    res
}

/// `mu-bar^n(c)` as a sum of `(n+1)`-fold tensors, with
/// `mu-bar^n = (id (x) mu-bar^{n-1}) mu-bar`.
pub fn iterate_comult(b: &Bocs, n: usize, c: &Vector) -> BTreeMap<Vec<usize>, Scalar> {
    let mut out = BTreeMap::new();
    if n == 0 {
        for (&i, v) in c {
            sv_add(&mut out, vec![i], v);
        }
        return out;
    }
    for (&i, v) in c {
        for (x, y, w) in &b.comult[i] {
            let mut single = Vector::new();
            single.insert(*y, b.field.one());
            for (k, z) in iterate_comult(b, n - 1, &single) {
                let mut key = vec![*x];
                key.extend(k);
                sv_add(&mut out, key, &(&(v * w) * &z));
            }
        }
    }
    out
}

/// `C-bar_i = C-bar_{i-1} (+) V_i (+) W_i` with `V_i` spanned by cycles.
///
/// Each `v` in `V_i` has a pivot in layer `i` where it has coefficient one,
/// and every other vector of `V_i` vanishes there. `W_i` consists of the
/// remaining basis elements of layer `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerPart {
    pub layer: usize,
    pub v: Vec<Vector>,
    pub pivots: Vec<usize>,
    pub w: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayerSplit {
    pub layers: Vec<LayerPart>,
}

/// Block key `(degree, src, tgt)`.
type BlockKey = (i64, usize, usize);

/// Computes `Z = ker delta` inside each layer and splits off `V` and `W`
/// blockwise by degree and idempotents, preferring pivots in basis order.
pub fn layer_split(b: &Bocs) -> Result<LayerSplit> {
    let f = b.field;
    let mut layers = Vec::new();
    for layer in 1..=b.level {
        let mut blocks: BTreeMap<BlockKey, Vec<usize>> = BTreeMap::new();
        for (i, g) in b.basis.iter().enumerate() {
            if g.layer <= layer {
                blocks.entry((g.deg, g.src, g.tgt)).or_default().push(i);
            }
        }
        let mut part = LayerPart { layer, v: Vec::new(), pivots: Vec::new(), w: Vec::new() };
        for ((deg, s, t), cols) in &blocks {
            // new elements first, so that pivots land in the layer whenever possible
            let mut order: Vec<usize> = cols.iter().copied().filter(|&i| b.basis[i].layer == layer).collect();
            if order.is_empty() {
                continue;
            }
            let nnew = order.len();
            order.extend(cols.iter().copied().filter(|&i| b.basis[i].layer < layer));
            let targets: BTreeMap<usize, ()> = blocks.get(&(deg + 1, *s, *t)).map(|r| r.iter().map(|&i| (i, ())).collect()).unwrap_or_default();
            let mut eqs: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
            for (k, &c) in order.iter().enumerate() {
                for (&r, v) in &b.delta[c] {
                    if !targets.contains_key(&r) {
                        return Err(Error::TriangularityViolation(format!(
                            "differential of {} leaves layer {}",
                            b.basis[c].label, layer
                        )));
                    }
                    eqs.entry(r).or_default().insert(k, v.clone());
                }
            }
            let mut sys = linalg::SparseSystem::new(f, order.len());
            for row in eqs.into_values() {
                sys.insert_homogeneous(row);
            }
            let (_, null) = sys.solve().expect("homogeneous systems are consistent");
            let mut ech = linalg::SparseSystem::new(f, order.len());
            for z in null {
                ech.insert_homogeneous(z);
            }
            let mut pivots = BTreeMap::new();
            for (p, row) in ech.reduced() {
                if p >= nnew {
                    break;
                }
                let v: Vector = row.into_iter().filter(|(k, _)| *k < order.len()).map(|(k, x)| (order[k], x)).collect();
                pivots.insert(order[p], v);
            }
            for (c, v) in pivots.iter() {
                part.pivots.push(*c);
                part.v.push(v.clone());
            }
            part.w.extend(order[..nnew].iter().copied().filter(|c| !pivots.contains_key(c)));
        }
        // delta(C-bar_i) must land in C-bar_{i-1} + V_i
        let mut sys = linalg::SparseSystem::new(f, b.len());
        for i in (0..b.len()).filter(|&i| b.basis[i].layer < layer) {
            let mut e = BTreeMap::new();
            e.insert(i, f.one());
            sys.insert_homogeneous(e);
        }
        for v in &part.v {
            sys.insert_homogeneous(v.clone());
        }
        for i in b.layer(layer) {
            if !sys.contains(&b.delta[i]) {
                return Err(Error::TriangularityViolation(format!(
                    "differential of {} is not in the previous layer plus cycles",
                    b.basis[i].label
                )));
            }
        }
        layers.push(part);
    }
    Ok(LayerSplit { layers })
}

/// A homogeneous map of reduced bocses `C-bar_1 -> C-bar_2`, basis element to vector.
#[derive(Clone, Debug, PartialEq)]
pub struct BocsMap {
    pub src: Arc<Bocs>,
    pub tgt: Arc<Bocs>,
    pub deg: i64,
    pub map: Vec<Vector>,
}

impl BocsMap {
    pub fn zero(src: Arc<Bocs>, tgt: Arc<Bocs>, deg: i64) -> BocsMap {
        let n = src.len();
        BocsMap { src, tgt, deg, map: vec![Vector::new(); n] }
    }

    pub fn identity(b: Arc<Bocs>) -> BocsMap {
        let map = (0..b.len())
            .map(|i| {
                let mut v = Vector::new();
                v.insert(i, b.field.one());
                v
            })
            .collect();
        BocsMap { src: b.clone(), tgt: b, deg: 0, map }
    }

    pub fn apply(&self, c: &Vector) -> Vector {
        let mut out = Vector::new();
        for (&i, a) in c {
            for (&j, b) in &self.map[i] {
                sv_add(&mut out, j, &(a * b));
            }
        }
        out
    }

    pub fn sub(&self, o: &BocsMap) -> BocsMap {
        let mut r = self.clone();
        for (i, v) in o.map.iter().enumerate() {
            for (&j, x) in v {
                sv_add(&mut r.map[i], j, &-x);
            }
        }
        r
    }

    pub fn add(&self, o: &BocsMap) -> BocsMap {
        let mut r = self.clone();
        for (i, v) in o.map.iter().enumerate() {
            for (&j, x) in v {
                sv_add(&mut r.map[i], j, x);
            }
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.map.iter().all(|v| v.is_empty())
    }

    /// `delta_2 xi - (-1)^{|xi|} xi delta_1`; for degree `-1` this is `delta xi + xi delta`.
    pub fn odot(&self) -> BocsMap {
        let mut r = BocsMap::zero(self.src.clone(), self.tgt.clone(), self.deg + 1);
        for i in 0..self.src.len() {
            let mut v = self.tgt.delta_vec(&self.map[i]);
            let w = self.apply(&self.src.delta[i]);
            let sign = !odd(self.deg);
            for (&j, x) in &w {
                sv_add(&mut v, j, &x.clone().signed(sign));
            }
            r.map[i] = v;
        }
        r
    }

    fn first_defect(&self, res: &mut Option<String>, i: usize, v: &BTreeMap<(usize, usize), Scalar>) {
        if res.is_none() {
            if let Some(((x, y), s)) = v.iter().next() {
                *res = Some(format!(
                    "at {} on {} (x) {} value {}",
                    self.src.basis[i].label, self.tgt.basis[*x].label, self.tgt.basis[*y].label, s
                ));
            }
        }
    }
}

/// Checks that `psi` is a degree zero morphism of dg bocses preserving layers.
pub fn check_bocs_morphism(psi: &BocsMap) -> CheckResult {
    let mut res = CheckResult::new();
    let (a, b) = (&psi.src, &psi.tgt);
    let mut hom = None;
    let mut comult = None;
    let mut diff = None;
    if psi.deg != 0 {
        hom = Some(format!("degree {}", psi.deg));
    }
    for i in 0..a.len() {
        let g = &a.basis[i];
        for &j in psi.map[i].keys() {
            let h = &b.basis[j];
            if hom.is_none() && (h.deg != g.deg || h.src != g.src || h.tgt != g.tgt || h.layer > g.layer) {
                hom = Some(format!("{} -> {}", g.label, h.label));
            }
        }
        let mut e = b.comult_vec(&psi.map[i]);
        for (x, y, v) in &a.comult[i] {
            for (&p, s) in &psi.map[*x] {
                for (&q, t) in &psi.map[*y] {
                    sv_add(&mut e, (p, q), &-(&(v * s) * t));
                }
            }
        }
        psi.first_defect(&mut comult, i, &e);
        let mut d = b.delta_vec(&psi.map[i]);
        for (&j, x) in &psi.apply(&a.delta[i]) {
            sv_add(&mut d, j, &-x);
        }
        if diff.is_none() && !d.is_empty() {
            diff = Some(format!("at {}: {}", g.label, b.label_vec(&d)));
        }
    }
    res.push("homogeneous", String::new(), hom);
    res.push("comultiplicative", String::new(), comult);
    res.push("differential", String::new(), diff);
    res
}

/// Checks `mu h = (phi (x) h + h (x) psi) mu` and `phi - psi = delta h + h delta`
/// for a degree `-1` map `h`.
pub fn check_bocs_homotopy(h: &BocsMap, phi: &BocsMap, psi: &BocsMap) -> CheckResult {
    let mut res = CheckResult::new();
    let (a, b) = (&h.src, &h.tgt);
    let mut coder = None;
    let mut eq = None;
    let deg = if h.deg == -1 { None } else { Some(format!("degree {}", h.deg)) };
    let odot = h.odot();
    for i in 0..a.len() {
        let mut e = b.comult_vec(&h.map[i]);
        for (x, y, v) in &a.comult[i] {
            let sx = odd(a.basis[*x].deg * h.deg);
            for (&p, s) in &phi.map[*x] {
                for (&q, t) in &h.map[*y] {
                    sv_add(&mut e, (p, q), &-(&(v * s) * t).signed(sx));
                }
            }
            for (&p, s) in &h.map[*x] {
                for (&q, t) in &psi.map[*y] {
                    sv_add(&mut e, (p, q), &-(&(v * s) * t));
                }
            }
        }
        h.first_defect(&mut coder, i, &e);
        let mut d = phi.map[i].clone();
        for (&j, x) in &psi.map[i] {
            sv_add(&mut d, j, &-x);
        }
        for (&j, x) in &odot.map[i] {
            sv_add(&mut d, j, &-x);
        }
        if eq.is_none() && !d.is_empty() {
            eq = Some(format!("at {}: {}", a.basis[i].label, b.label_vec(&d)));
        }
    }
    res.push("degree", String::new(), deg);
    res.push("coderivation", String::new(), coder);
    res.push("homotopy", String::new(), eq);
    res
}

fn bar_data(b: &Bocs) -> Result<&BarData> {
    b.bar.as_ref().ok_or_else(|| Error::Invalid("a bar bocs is required".into()))
}

/// `phi-hat_i(sigma a_1 ... sigma a_i) = (-1)^{sum (i-k)|a_k|} sigma phi_i(a)` as
/// a map from words to letters.
fn hat_sign(sp: &Space, w: &[u32]) -> bool {
    let i = w.len();
    odd(w.iter().enumerate().map(|(k, &x)| (i - 1 - k) as i64 * sp.deg(x as usize)).sum())
}

/// The coalgebra morphism of bar bocses induced by an A-infinity morphism.
pub fn psi_of_morphism(f: &AlgMorphism, ba: Arc<Bocs>, bb: Arc<Bocs>) -> Result<BocsMap> {
    let da = bar_data(&ba)?;
    let db = bar_data(&bb)?;
    if da.alg.space != f.src.space || db.alg.space != f.tgt.space {
        return Err(Error::AlgebraMismatch);
    }
    let sa = f.src.space.clone();
    let mut out = BocsMap::zero(ba.clone(), bb.clone(), 0);
    for (i, w) in da.words.iter().enumerate() {
        let mut acc: BTreeMap<Word, Scalar> = BTreeMap::new();
        for parts in compositions(w.len()) {
            let mut partial: BTreeMap<Word, Scalar> = BTreeMap::new();
            partial.insert(Word::new(), f.src.field.one());
            let mut pos = 0;
            for &p in &parts {
                let chunk = &w[pos..pos + p];
                pos += p;
                let Some(img) = f.comps.get(&p).and_then(|c| c.apply(chunk)) else {
                    partial.clear();
                    break;
                };
                let sign = hat_sign(&sa, chunk);
                let mut next = BTreeMap::new();
                for (pw, pv) in &partial {
                    for (o, v) in img {
                        let mut nw = pw.clone();
                        nw.push(o[0]);
                        sv_add(&mut next, nw, &(pv * v).signed(sign));
                    }
                }
                partial = next;
            }
            for (k, v) in partial {
                sv_add(&mut acc, k, &v);
            }
        }
        for (k, v) in acc {
            let Some(&j) = db.lookup.get(&k) else {
                return Err(Error::TruncationMismatch);
            };
            sv_add(&mut out.map[i], j, &v);
        }
    }
    Ok(out)
}

/// The `Psi(f)`-`Psi(g)` coderivation of degree `d` determined by a family
/// `h_n` of degree `d+1-n`.
pub fn delta_coderivation(
    h: &AlgHomotopy,
    deg: i64,
    f: &AlgMorphism,
    g: &AlgMorphism,
    ba: Arc<Bocs>,
    bb: Arc<Bocs>,
) -> Result<BocsMap> {
    let da = bar_data(&ba)?;
    let db = bar_data(&bb)?;
    let sa = f.src.space.clone();
    let mut out = BocsMap::zero(ba.clone(), bb.clone(), deg);
    let apply = |comps: &BTreeMap<usize, crate::graded::TMap>, chunk: &[u32]| -> Option<Vec<(u32, Scalar)>> {
        comps.get(&chunk.len()).and_then(|c| c.apply(chunk)).map(|img| {
            let sign = hat_sign(&sa, chunk);
            img.iter().map(|(o, v)| (o[0], v.clone().signed(sign))).collect()
        })
    };
    for (i, w) in da.words.iter().enumerate() {
        let mut acc: BTreeMap<Word, Scalar> = BTreeMap::new();
        for parts in compositions(w.len()) {
            for hp in 0..parts.len() {
                let mut partial: BTreeMap<Word, Scalar> = BTreeMap::new();
                partial.insert(Word::new(), f.src.field.one());
                let mut pos = 0;
                for (k, &p) in parts.iter().enumerate() {
                    let chunk = &w[pos..pos + p];
                    let before: i64 = w[..pos].iter().map(|&x| sa.deg(x as usize) - 1).sum();
                    pos += p;
                    let img = if k < hp {
                        apply(&f.comps, chunk)
                    } else if k == hp {
                        apply(&h.comps, chunk).map(|v| {
                            let s = odd(deg * before);
                            v.into_iter().map(|(o, x)| (o, x.signed(s))).collect()
                        })
                    } else {
                        apply(&g.comps, chunk)
                    };
                    let Some(img) = img else {
                        partial.clear();
                        break;
                    };
                    let mut next = BTreeMap::new();
                    for (pw, pv) in &partial {
                        for (o, v) in &img {
                            let mut nw = pw.clone();
                            nw.push(*o);
                            sv_add(&mut next, nw, &(pv * v));
                        }
                    }
                    partial = next;
                }
                for (k, v) in partial {
                    sv_add(&mut acc, k, &v);
                }
            }
        }
        for (k, v) in acc {
            let Some(&j) = db.lookup.get(&k) else {
                return Err(Error::TruncationMismatch);
            };
            sv_add(&mut out.map[i], j, &v);
        }
    }
    Ok(out)
}
