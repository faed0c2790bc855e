//! Graded modules and bimodules over `S = k^n`, multilinear maps between
//! their tensor powers, and the Koszul sign rule.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::scalar::{Field, Scalar};

/// A basis element. For bimodule elements `x in e_t X e_s`, `src = s` and
/// `tgt = Some(t)`; right module elements carry `tgt = None`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Gen {
    pub label: String,
    pub deg: i64,
    pub src: usize,
    pub tgt: Option<usize>,
}

/// A finite dimensional graded right module or bimodule with an ordered basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Space {
    pub nidem: usize,
    gens: Vec<Gen>,
    index: BTreeMap<String, usize>,
}

pub type Word = Vec<u32>;

impl Space {
    pub fn new(nidem: usize, gens: Vec<Gen>) -> Result<Space> {
        if nidem == 0 {
            return Err(Error::Invalid("base ring needs at least one idempotent".into()));
        }
        let mut index = BTreeMap::new();
        for (i, g) in gens.iter().enumerate() {
            if g.src >= nidem || g.tgt.map_or(false, |t| t >= nidem) {
                return Err(Error::IdempotentMismatch);
            }
            if index.insert(g.label.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate label {}", g.label)));
            }
        }
        Ok(Space { nidem, gens, index })
    }

    pub fn empty(nidem: usize) -> Space {
        Space { nidem, gens: Vec::new(), index: BTreeMap::new() }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[Gen] {
        &self.gens
    }

    pub fn gen(&self, i: usize) -> &Gen {
        &self.gens[i]
    }

    pub fn deg(&self, i: usize) -> i64 {
        self.gens[i].deg
    }

    pub fn find(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn is_bimodule(&self) -> bool {
        self.gens.iter().all(|g| g.tgt.is_some())
    }

    /// `M[k]` with `M[k]_i = M_{i+k}`; labels are kept.
    pub fn shift(&self, k: i64) -> Space {
        let gens = self.gens.iter().map(|g| Gen { deg: g.deg - k, ..g.clone() }).collect();
        Space { nidem: self.nidem, gens, index: self.index.clone() }
    }

    /// The right module underlying a bimodule.
    pub fn as_right(&self) -> Space {
        let gens = self.gens.iter().map(|g| Gen { tgt: None, ..g.clone() }).collect();
        Space { nidem: self.nidem, gens, index: self.index.clone() }
    }

    /// Direct sum; labels of part `k` get the prefix `k:` when labels collide.
    pub fn direct_sum(parts: &[&Space]) -> (Space, Vec<usize>) {
        let nidem = parts.first().map_or(1, |p| p.nidem);
        let mut seen = BTreeMap::new();
        let mut clash = false;
        for p in parts {
            for g in &p.gens {
                if seen.insert(g.label.clone(), ()).is_some() {
                    clash = true;
                }
            }
        }
        let mut gens = Vec::new();
        let mut offsets = Vec::new();
        for (k, p) in parts.iter().enumerate() {
            offsets.push(gens.len());
            for g in &p.gens {
                let label = if clash { format!("{}:{}", k + 1, g.label) } else { g.label.clone() };
                gens.push(Gen { label, ..g.clone() });
            }
        }
        (Space::new(nidem, gens).expect("direct sum labels"), offsets)
    }

    /// Dimension table `(deg, src, tgt) -> dim`.
    pub fn dims(&self) -> BTreeMap<(i64, usize, Option<usize>), usize> {
        let mut d = BTreeMap::new();
        for g in &self.gens {
            *d.entry((g.deg, g.src, g.tgt)).or_insert(0) += 1;
        }
        d
    }

    /// Indices grouped by `(deg, src)`, the blocks of right `S`-linear maps.
    pub fn blocks(&self) -> BTreeMap<(i64, usize), Vec<usize>> {
        let mut b: BTreeMap<(i64, usize), Vec<usize>> = BTreeMap::new();
        for (i, g) in self.gens.iter().enumerate() {
            b.entry((g.deg, g.src)).or_default().push(i);
        }
        b
    }
}

/// Whether `x (x) y` is nonzero over `S`.
pub fn composable(x: &Gen, y: &Gen) -> bool {
    y.tgt == Some(x.src)
}

/// All composable basis tensors of `f_1 (x) ... (x) f_k`.
pub fn words(factors: &[Arc<Space>]) -> Vec<Word> {
    let mut out = Vec::new();
    if factors.is_empty() {
        out.push(Vec::new());
        return out;
    }
    let mut cur: Word = Vec::new();
    fn rec(factors: &[Arc<Space>], cur: &mut Word, out: &mut Vec<Word>) {
        let k = cur.len();
        if k == factors.len() {
            out.push(cur.clone());
            return;
        }
        for (i, g) in factors[k].gens().iter().enumerate() {
            if k > 0 {
                let prev = factors[k - 1].gen(cur[k - 1] as usize);
                if !composable(prev, g) {
                    continue;
                }
            }
            cur.push(i as u32);
            rec(factors, cur, out);
            cur.pop();
        }
    }
    rec(factors, &mut cur, &mut out);
    out
}

pub fn word_deg(factors: &[Arc<Space>], w: &[u32]) -> i64 {
    w.iter().zip(factors).map(|(&i, s)| s.deg(i as usize)).sum()
}

pub fn word_label(factors: &[Arc<Space>], w: &[u32]) -> String {
    let parts: Vec<&str> = w.iter().zip(factors).map(|(&i, s)| s.gen(i as usize).label.as_str()).collect();
    parts.join("|")
}

/// A homogeneous multilinear map `X_1 (x) ... (x) X_k -> Y_1 (x) ... (x) Y_l`
/// stored as a sparse table on basis tensors.
#[derive(Clone, Debug, PartialEq)]
pub struct TMap {
    pub field: Field,
    pub deg: i64,
    pub dom: Vec<Arc<Space>>,
    pub cod: Vec<Arc<Space>>,
    pub table: BTreeMap<Word, BTreeMap<Word, Scalar>>,
}

impl TMap {
    pub fn zero(field: Field, deg: i64, dom: Vec<Arc<Space>>, cod: Vec<Arc<Space>>) -> TMap {
        TMap { field, deg, dom, cod, table: BTreeMap::new() }
    }

    pub fn identity(field: Field, factors: Vec<Arc<Space>>) -> TMap {
        let mut t = TMap::zero(field, 0, factors.clone(), factors.clone());
        for w in words(&factors) {
            let mut img = BTreeMap::new();
            img.insert(w.clone(), field.one());
            t.table.insert(w, img);
        }
        t
    }

    /// A map with one output factor, from `(input word, output index, coefficient)` triples.
    pub fn from_entries(
        field: Field,
        deg: i64,
        dom: Vec<Arc<Space>>,
        cod: Arc<Space>,
        entries: impl IntoIterator<Item = (Word, u32, Scalar)>,
    ) -> TMap {
        let mut t = TMap::zero(field, deg, dom, vec![cod]);
        for (w, o, v) in entries {
            t.add_entry(w, vec![o], &v);
        }
        t
    }

    pub fn add_entry(&mut self, w: Word, o: Word, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        let img = self.table.entry(w.clone()).or_default();
        linalg::sv_add(img, o, v);
        if img.is_empty() {
            self.table.remove(&w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn apply(&self, w: &[u32]) -> Option<&BTreeMap<Word, Scalar>> {
        self.table.get(w)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Word, &Word, &Scalar)> {
        self.table.iter().flat_map(|(w, img)| img.iter().map(move |(o, v)| (w, o, v)))
    }

    pub fn add_assign(&mut self, o: &TMap) {
        for (w, img) in &o.table {
            for (x, v) in img {
                self.add_entry(w.clone(), x.clone(), v);
            }
        }
    }

    pub fn add(&self, o: &TMap) -> TMap {
        let mut r = self.clone();
        r.add_assign(o);
        r
    }

    pub fn scale(&self, s: &Scalar) -> TMap {
        let mut r = TMap::zero(self.field, self.deg, self.dom.clone(), self.cod.clone());
        if s.is_zero() {
            return r;
        }
        for (w, img) in &self.table {
            r.table.insert(w.clone(), img.iter().map(|(o, v)| (o.clone(), v * s)).collect());
        }
        r
    }

    pub fn neg(&self) -> TMap {
        self.scale(&self.field.int(-1))
    }

    pub fn sub(&self, o: &TMap) -> TMap {
        self.add(&o.neg())
    }

    /// `g . f`, i.e. `f` first.
    pub fn compose(g: &TMap, f: &TMap) -> TMap {
        let mut r = TMap::zero(f.field, f.deg + g.deg, f.dom.clone(), g.cod.clone());
        for (w, img) in &f.table {
            let mut acc: BTreeMap<Word, Scalar> = BTreeMap::new();
            for (x, a) in img {
                if let Some(gi) = g.table.get(x) {
                    for (y, b) in gi {
                        linalg::sv_add(&mut acc, y.clone(), &(a * b));
                    }
                }
            }
            if !acc.is_empty() {
                r.table.insert(w.clone(), acc);
            }
        }
        r
    }

    /// `f (x) g` with `(f (x) g)(x (x) y) = (-1)^{|g||x|} f(x) (x) g(y)`.
    pub fn tensor(f: &TMap, g: &TMap) -> TMap {
        let mut dom = f.dom.clone();
        dom.extend(g.dom.iter().cloned());
        let mut cod = f.cod.clone();
        cod.extend(g.cod.iter().cloned());
        let mut r = TMap::zero(f.field, f.deg + g.deg, dom, cod);
        let kf = f.dom.len();
        for (wx, ix) in &f.table {
            let last = if kf > 0 { Some(f.dom[kf - 1].gen(wx[kf - 1] as usize)) } else { None };
            let odd = (g.deg * word_deg(&f.dom, wx)).rem_euclid(2) == 1;
            for (wy, iy) in &g.table {
                if let (Some(l), Some(&y0)) = (last, wy.first()) {
                    if !composable(l, g.dom[0].gen(y0 as usize)) {
                        continue;
                    }
                }
                let mut w = wx.clone();
                w.extend_from_slice(wy);
                let mut acc = BTreeMap::new();
                for (ox, a) in ix {
                    for (oy, b) in iy {
                        let mut o = ox.clone();
                        o.extend_from_slice(oy);
                        linalg::sv_add(&mut acc, o, &(a * b).signed(odd));
                    }
                }
                if !acc.is_empty() {
                    r.table.insert(w, acc);
                }
            }
        }
        r
    }

    /// Tensor product of a list of maps, left to right.
    pub fn tensor_all(maps: &[&TMap]) -> TMap {
        let mut it = maps.iter();
        let first = (*it.next().expect("nonempty tensor")).clone();
        it.fold(first, |acc, m| TMap::tensor(&acc, m))
    }

    /// `id^{(x) left} (x) f (x) id^{(x) right}`.
    pub fn insert(f: &TMap, left: &[Arc<Space>], right: &[Arc<Space>]) -> TMap {
        let mut r = f.clone();
        if !left.is_empty() {
            r = TMap::tensor(&TMap::identity(f.field, left.to_vec()), &r);
        }
        if !right.is_empty() {
            r = TMap::tensor(&r, &TMap::identity(f.field, right.to_vec()));
        }
        r
    }

    /// Checks that every entry respects degrees and idempotents.
    pub fn validate(&self) -> Result<()> {
        for (w, o, _) in self.entries() {
            if w.len() != self.dom.len() || o.len() != self.cod.len() {
                return Err(Error::Invalid("word length".into()));
            }
            if word_deg(&self.dom, w) + self.deg != word_deg(&self.cod, o) {
                return Err(Error::Invalid(format!(
                    "entry {} -> {} breaks degree {}",
                    word_label(&self.dom, w),
                    word_label(&self.cod, o),
                    self.deg
                )));
            }
            let (ws, wt) = ends(&self.dom, w);
            let (os, ot) = ends(&self.cod, o);
            if ws != os || (wt.is_some() && ot.is_some() && wt != ot) {
                return Err(Error::IdempotentMismatch);
            }
        }
        Ok(())
    }

    /// First nonzero entry as `(input, output, value)` labels.
    pub fn witness(&self) -> Option<(String, String, Scalar)> {
        self.entries().next().map(|(w, o, v)| (word_label(&self.dom, w), word_label(&self.cod, o), v.clone()))
    }
}

/// Right and left idempotents of a composable tensor.
pub fn ends(factors: &[Arc<Space>], w: &[u32]) -> (Option<usize>, Option<usize>) {
    if w.is_empty() {
        return (None, None);
    }
    let first = factors[0].gen(w[0] as usize);
    let last = factors[w.len() - 1].gen(w[w.len() - 1] as usize);
    (Some(last.src), first.tgt)
}

/// The shift isomorphism `sigma_M : M -> M[1]` of degree `-1`.
pub fn shift_iso(field: Field, m: &Arc<Space>) -> (Arc<Space>, TMap) {
    let m1 = Arc::new(m.shift(1));
    let t = TMap::from_entries(field, -1, vec![m.clone()], m1.clone(), (0..m.len()).map(|i| (vec![i as u32], i as u32, field.one())));
    (m1, t)
}

/// Single factor map as a matrix (rows: codomain basis, columns: domain basis).
pub fn to_mat(f: &TMap) -> Mat {
    let mut m = Mat::zeros(f.field, f.cod[0].len(), f.dom[0].len());
    for (w, o, v) in f.entries() {
        m.set(o[0] as usize, w[0] as usize, v.clone());
    }
    m
}

pub fn from_mat(field: Field, deg: i64, dom: Arc<Space>, cod: Arc<Space>, m: &Mat) -> TMap {
    TMap::from_entries(field, deg, vec![dom], cod, m.data.iter().map(|(&(i, j), v)| (vec![j as u32], i as u32, v.clone())))
}

/// Kernel, image and a generalized inverse of a homogeneous map.
#[derive(Clone, Debug)]
pub struct Splitting {
    /// Kernel basis vectors in the domain.
    pub kernel: Vec<BTreeMap<usize, Scalar>>,
    /// Image basis vectors in the codomain.
    pub image: Vec<BTreeMap<usize, Scalar>>,
    /// `g : N -> M` with `f g f = f`; `g` restricted to the image is a section
    /// and `g f` is a projection onto a complement of the kernel.
    pub inverse: Mat,
}

/// Splits a homogeneous right `S`-linear map `f : M -> N` of degree `deg`,
/// given as a matrix, blockwise by degree and idempotent.
pub fn solve_splitting(field: Field, dom: &Space, cod: &Space, deg: i64, f: &Mat) -> Splitting {
    let mut kernel = Vec::new();
    let mut image = Vec::new();
    let mut g = Mat::zeros(field, dom.len(), cod.len());
    let cb = cod.blocks();
    for ((d, s), cols) in dom.blocks() {
        let rows = cb.get(&(d + deg, s)).cloned().unwrap_or_default();
        let a = f.block(&rows, &cols);
        for v in linalg::nullspace(field, &a, cols.len()) {
            kernel.push(v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(k, x)| (cols[k], x.clone())).collect());
        }
        if rows.is_empty() {
            continue;
        }
        let mut e = a.clone();
        let piv = linalg::rref(&mut e, cols.len());
        for &p in &piv {
            image.push((0..rows.len()).filter(|&i| !a[i][p].is_zero()).map(|i| (rows[i], a[i][p].clone())).collect());
        }
        let gi = linalg::generalized_inverse(field, &a, rows.len(), cols.len());
        for (j, row) in gi.iter().enumerate() {
            for (i, v) in row.iter().enumerate() {
                g.set(cols[j], rows[i], v.clone());
            }
        }
    }
    Splitting { kernel, image, inverse: g }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn space(gens: &[(&str, i64, usize, Option<usize>)]) -> Arc<Space> {
        Arc::new(
            Space::new(
                2,
                gens.iter().map(|&(l, d, s, t)| Gen { label: l.to_string(), deg: d, src: s, tgt: t }).collect(),
            )
            .unwrap(),
        )
    }

    #[test]
    fn words_respect_idempotents() {
        let a = space(&[("x", 0, 0, Some(1)), ("y", 1, 1, Some(0)), ("e", 0, 0, Some(0))]);
        let w = words(&[a.clone(), a.clone()]);
        // a|b needs src a = tgt b
        let mut w = w;
        w.sort();
        assert_eq!(w, vec![vec![0, 1], vec![0, 2], vec![1, 0], vec![2, 1], vec![2, 2]]);
    }

    #[test]
    fn koszul_sign_on_tensor() {
        let f = Field::Q;
        let a = space(&[("x", 1, 0, Some(0))]);
        let id = TMap::identity(f, vec![a.clone()]);
        let g = TMap::from_entries(f, 1, vec![a.clone()], a.clone(), [(vec![0], 0, f.one())]);
        // (id (x) g)(x (x) x) = (-1)^{|g||x|} x (x) g(x) = -x (x) x
        let t = TMap::tensor(&id, &g);
        assert_eq!(t.apply(&[0, 0]).unwrap().get(&vec![0, 0]).unwrap(), &f.int(-1));
    }

    #[test]
    fn double_shift() {
        let m = space(&[("a", 0, 0, None), ("b", 1, 0, None), ("c", 2, 1, None)]);
        let m2 = m.shift(1).shift(1);
        assert_eq!(m2.deg(2), 0);
        assert_eq!(m2, m.shift(2));
    }
}
