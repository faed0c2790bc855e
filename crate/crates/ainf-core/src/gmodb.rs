//! Morphisms of graded modules over a triangular bocs in component form.
//!
//! A morphism `f : M (x) C -> N` is stored as `f0 = f(- (x) 1)` and one
//! matrix `f1[c]` for every basis element `c` of `C-bar`, mapping the part
//! of `M` at the idempotent `tgt(c)` to the part of `N` at `src(c)`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::ainfty::odd;
use crate::bocs::{check_bocs_homotopy, check_bocs_morphism, Bocs, BocsMap};
use crate::error::{Error, Result};
use crate::graded::Space;
use crate::linalg::{self, Mat};
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct GMorph {
    pub bocs: Arc<Bocs>,
    pub dom: Arc<Space>,
    pub cod: Arc<Space>,
    pub deg: i64,
    pub f0: Mat,
    pub f1: Vec<Mat>,
}

pub fn same_bocs(a: &Arc<Bocs>, b: &Arc<Bocs>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub fn same_space(a: &Arc<Space>, b: &Arc<Space>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl GMorph {
    pub fn zero(bocs: Arc<Bocs>, dom: Arc<Space>, cod: Arc<Space>, deg: i64) -> GMorph {
        let f = bocs.field;
        let z = Mat::zeros(f, cod.len(), dom.len());
        let f1 = vec![z.clone(); bocs.len()];
        GMorph { bocs, dom, cod, deg, f0: z, f1 }
    }

    /// `(f0, 0)`.
    pub fn strict(bocs: Arc<Bocs>, dom: Arc<Space>, cod: Arc<Space>, deg: i64, f0: Mat) -> GMorph {
        let mut g = GMorph::zero(bocs, dom, cod, deg);
        g.f0 = f0;
        g
    }

    pub fn identity(bocs: Arc<Bocs>, m: Arc<Space>) -> GMorph {
        let id = Mat::identity(bocs.field, m.len());
        GMorph::strict(bocs, m.clone(), m, 0, id)
    }

    pub fn field(&self) -> Field {
        self.bocs.field
    }

    pub fn is_zero(&self) -> bool {
        self.f0.is_zero() && self.f1.iter().all(|m| m.is_zero())
    }

    pub fn is_strict(&self) -> bool {
        self.f1.iter().all(|m| m.is_zero())
    }

    /// Checks homogeneity and compatibility with idempotents.
    pub fn validate(&self) -> Result<()> {
        let (m, n) = (&self.dom, &self.cod);
        if self.f0.rows != n.len() || self.f0.cols != m.len() || self.f1.len() != self.bocs.len() {
            return Err(Error::Invalid("component shapes do not match".into()));
        }
        for (&(i, j), _) in &self.f0.data {
            if n.gen(i).src != m.gen(j).src || n.deg(i) != m.deg(j) + self.deg {
                return Err(Error::Invalid(format!("f0 entry {} <- {} is not homogeneous", n.gen(i).label, m.gen(j).label)));
            }
        }
        for (c, mat) in self.f1.iter().enumerate() {
            let g = self.bocs.gen(c);
            if mat.rows != n.len() || mat.cols != m.len() {
                return Err(Error::Invalid("component shapes do not match".into()));
            }
            for (&(i, j), _) in &mat.data {
                if m.gen(j).src != g.tgt || n.gen(i).src != g.src || n.deg(i) != m.deg(j) + g.deg + self.deg {
                    return Err(Error::Invalid(format!(
                        "f1({}) entry {} <- {} is not homogeneous",
                        g.label,
                        n.gen(i).label,
                        m.gen(j).label
                    )));
                }
            }
        }
        Ok(())
    }

    fn same_shape(&self, o: &GMorph) -> Result<()> {
        if !same_bocs(&self.bocs, &o.bocs) {
            return Err(Error::TruncationMismatch);
        }
        if !same_space(&self.dom, &o.dom) || !same_space(&self.cod, &o.cod) || self.deg != o.deg {
            return Err(Error::ModuleMismatch);
        }
        Ok(())
    }

    pub fn try_add(&self, o: &GMorph) -> Result<GMorph> {
        self.same_shape(o)?;
        let mut r = self.clone();
        r.f0.add_assign(&o.f0);
        for (a, b) in r.f1.iter_mut().zip(&o.f1) {
            a.add_assign(b);
        }
        Ok(r)
    }

    pub fn add(&self, o: &GMorph) -> GMorph {
        self.try_add(o).expect("morphisms of the same shape")
    }

    pub fn neg(&self) -> GMorph {
        let mut r = self.clone();
        r.f0 = r.f0.neg();
        for a in r.f1.iter_mut() {
            *a = a.neg();
        }
        r
    }

    pub fn sub(&self, o: &GMorph) -> GMorph {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &crate::scalar::Scalar) -> GMorph {
        let mut r = self.clone();
        r.f0 = r.f0.scale(s);
        for a in r.f1.iter_mut() {
            *a = a.scale(s);
        }
        r
    }

    /// Same matrices between other spaces, e.g. `u[1]` or `sigma^{-1} * f`.
    pub fn relabel(&self, dom: Arc<Space>, cod: Arc<Space>, deg: i64) -> GMorph {
        let mut r = self.clone();
        r.dom = dom;
        r.cod = cod;
        r.deg = deg;
        r
    }

    /// The component at the first basis element whose value is nonzero,
    /// `None` for the zero morphism. Layer `0` stands for `f0`.
    pub fn witness(&self) -> Option<(usize, String)> {
        if let Some((&(i, j), v)) = self.f0.data.iter().next() {
            return Some((0, format!("f0 {} <- {} value {}", self.cod.gen(i).label, self.dom.gen(j).label, v)));
        }
        let mut best: Option<(usize, String)> = None;
        for (c, mat) in self.f1.iter().enumerate() {
            if let Some((&(i, j), v)) = mat.data.iter().next() {
                let g = self.bocs.gen(c);
                if best.as_ref().map_or(true, |b| g.layer < b.0) {
                    best = Some((
                        g.layer,
                        format!("f1({}) {} <- {} value {}", g.label, self.cod.gen(i).label, self.dom.gen(j).label, v),
                    ));
                }
            }
        }
        best
    }

    /// First nonzero component at exactly `layer` (`0` for `f0`).
    pub fn witness_at(&self, layer: usize) -> Option<String> {
        if layer == 0 {
            return self
                .f0
                .data
                .iter()
                .next()
                .map(|(&(i, j), v)| format!("f0 {} <- {} value {}", self.cod.gen(i).label, self.dom.gen(j).label, v));
        }
        for (c, mat) in self.f1.iter().enumerate() {
            let g = self.bocs.gen(c);
            if g.layer != layer {
                continue;
            }
            if let Some((&(i, j), v)) = mat.data.iter().next() {
                return Some(format!(
                    "f1({}) {} <- {} value {}",
                    g.label,
                    self.cod.gen(i).label,
                    self.dom.gen(j).label,
                    v
                ));
            }
        }
        None
    }
}

/// `g * f`.
pub fn compose(g: &GMorph, f: &GMorph) -> Result<GMorph> {
    if !same_bocs(&g.bocs, &f.bocs) {
        return Err(Error::TruncationMismatch);
    }
    if !same_space(&f.cod, &g.dom) {
        return Err(Error::ModuleMismatch);
    }
    let b = &f.bocs;
    let mut r = GMorph::zero(b.clone(), f.dom.clone(), g.cod.clone(), f.deg + g.deg);
    r.f0 = g.f0.mul(&f.f0);
    for c in 0..b.len() {
        let mut m = g.f1[c].mul(&f.f0);
        m.add_assign(&g.f0.mul(&f.f1[c]));
        for (x, y, v) in b.comult(c) {
            if g.f1[*y].is_zero() || f.f1[*x].is_zero() {
                continue;
            }
            m.add_assign(&g.f1[*y].mul(&f.f1[*x]).scale(v));
        }
        r.f1[c] = m;
    }
    Ok(r)
}

/// Composes a chain `f_1 * f_2 * ... * f_k` (leftmost applied last).
pub fn compose_all(fs: &[&GMorph]) -> Result<GMorph> {
    let mut it = fs.iter().rev();
    let mut acc = (*it.next().ok_or_else(|| Error::Invalid("empty composite".into()))?).clone();
    for g in it {
        acc = compose(g, &acc)?;
    }
    Ok(acc)
}

/// `delta-hat(f)`: zero first component and
/// `delta-hat(f)1(c)[m] = (-1)^{|f|+|m|+1} f1(delta c)[m]`.
pub fn hat_delta(f: &GMorph) -> GMorph {
    let b = &f.bocs;
    let mut r = GMorph::zero(b.clone(), f.dom.clone(), f.cod.clone(), f.deg + 1);
    for c in 0..b.len() {
        let mut m = Mat::zeros(b.field, f.cod.len(), f.dom.len());
        for (&d, v) in b.delta(c) {
            if !f.f1[d].is_zero() {
                m.add_assign(&f.f1[d].scale(v));
            }
        }
        let dom = &f.dom;
        r.f1[c] = m.col_signs(|j| odd(f.deg + dom.deg(j) + 1));
    }
    r
}

/// Inverts `f0` blockwise by idempotent and degree.
pub fn invert_first(f: &GMorph) -> Result<Mat> {
    let field = f.field();
    if f.dom.len() != f.cod.len() {
        return Err(Error::NotInvertible("domain and codomain dimensions differ".into()));
    }
    let mut inv = Mat::zeros(field, f.dom.len(), f.cod.len());
    let rb = f.cod.blocks();
    for ((d, s), cols) in f.dom.blocks() {
        let rows = rb.get(&(d + f.deg, s)).cloned().unwrap_or_default();
        if rows.len() != cols.len() {
            return Err(Error::NotInvertible(format!("block degree {} idempotent {} is not square", d, s)));
        }
        let a = f.f0.block(&rows, &cols);
        let Some(ai) = linalg::inverse(field, &a) else {
            return Err(Error::NotInvertible(format!("first component singular in degree {} at idempotent {}", d, s)));
        };
        for (i, row) in ai.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                inv.set(cols[i], rows[j], v.clone());
            }
        }
    }
    Ok(inv)
}

/// Two-sided inverse of a morphism with invertible first component:
/// `f^{-1} = (sum_n (-v)^{*n}) * (f0^{-1}, 0)` with `(f0^{-1},0) * f = I + v`.
pub fn invert(f: &GMorph) -> Result<GMorph> {
    let g0 = GMorph::strict(f.bocs.clone(), f.cod.clone(), f.dom.clone(), -f.deg, invert_first(f)?);
    let mut v = compose(&g0, f)?;
    v.f0 = Mat::zeros(f.field(), f.dom.len(), f.dom.len());
    let mv = v.neg();
    let mut term = GMorph::identity(f.bocs.clone(), f.dom.clone());
    let mut series = term.clone();
    for _ in 0..f.bocs.level {
        term = compose(&mv, &term)?;
        if term.is_zero() {
            break;
        }
        series = series.add(&term);
    }
    compose(&series, &g0)
}

/// `R_psi(f) = f (id (x) psi)` for a bocs morphism `psi : B1 -> B2`.
pub fn restrict(psi: &BocsMap, f: &GMorph) -> Result<GMorph> {
    let res = check_bocs_morphism(psi);
    if let Some(item) = res.first_failure() {
        return Err(Error::NotABocsMorphism(format!("{} {}", item.identity, item.witness.clone().unwrap_or_default())));
    }
    restrict_unchecked(psi, f)
}

pub fn restrict_unchecked(psi: &BocsMap, f: &GMorph) -> Result<GMorph> {
    if !same_bocs(&psi.tgt, &f.bocs) {
        return Err(Error::TruncationMismatch);
    }
    let mut r = GMorph::zero(psi.src.clone(), f.dom.clone(), f.cod.clone(), f.deg);
    r.f0 = f.f0.clone();
    for (c, img) in psi.map.iter().enumerate() {
        let mut m = Mat::zeros(f.field(), f.cod.len(), f.dom.len());
        for (&d, v) in img {
            m.add_assign(&f.f1[d].scale(v));
        }
        r.f1[c] = m;
    }
    Ok(r)
}

/// `R_h(u) = (-1)^{|u|} u (id (x) h)` for a degree `-1` bocs map `h`; the first
/// component vanishes since `h(1) = 0`.
pub fn r_h(h: &BocsMap, phi: &BocsMap, psi: &BocsMap, u: &GMorph) -> Result<GMorph> {
    let res = check_bocs_homotopy(h, phi, psi);
    if let Some(item) = res.first_failure() {
        return Err(Error::NotAHomotopy(format!("{} {}", item.identity, item.witness.clone().unwrap_or_default())));
    }
    r_h_unchecked(h, u)
}

pub fn r_h_unchecked(h: &BocsMap, u: &GMorph) -> Result<GMorph> {
    if !same_bocs(&h.tgt, &u.bocs) {
        return Err(Error::TruncationMismatch);
    }
    let mut r = GMorph::zero(h.src.clone(), u.dom.clone(), u.cod.clone(), u.deg + h.deg);
    for (c, img) in h.map.iter().enumerate() {
        let mut m = Mat::zeros(u.field(), u.cod.len(), u.dom.len());
        for (&d, v) in img {
            m.add_assign(&u.f1[d].scale(v));
        }
        let dom = &u.dom;
        r.f1[c] = m.col_signs(|j| odd(u.deg + dom.deg(j)));
    }
    Ok(r)
}

/// A direct sum `M_1 (+) ... (+) M_k` with its offsets.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectSum {
    pub space: Arc<Space>,
    pub parts: Vec<Arc<Space>>,
    pub offsets: Vec<usize>,
}

impl DirectSum {
    pub fn new(parts: Vec<Arc<Space>>) -> DirectSum {
        let refs: Vec<&Space> = parts.iter().map(|p| &**p).collect();
        let (s, offsets) = Space::direct_sum(&refs);
        DirectSum { space: Arc::new(s), parts, offsets }
    }

    fn range(&self, i: usize) -> (usize, usize) {
        (self.offsets[i], self.parts[i].len())
    }

    /// Strict inclusion of the `i`-th summand.
    pub fn inj(&self, bocs: &Arc<Bocs>, i: usize) -> GMorph {
        let (o, n) = self.range(i);
        let mut m = Mat::zeros(bocs.field, self.space.len(), n);
        for k in 0..n {
            m.set(o + k, k, bocs.field.one());
        }
        GMorph::strict(bocs.clone(), self.parts[i].clone(), self.space.clone(), 0, m)
    }

    /// Strict projection onto the `i`-th summand.
    pub fn proj(&self, bocs: &Arc<Bocs>, i: usize) -> GMorph {
        let (o, n) = self.range(i);
        let mut m = Mat::zeros(bocs.field, n, self.space.len());
        for k in 0..n {
            m.set(k, o + k, bocs.field.one());
        }
        GMorph::strict(bocs.clone(), self.space.clone(), self.parts[i].clone(), 0, m)
    }
}

fn place(src: &Mat, rows: usize, cols: usize, ro: usize, co: usize) -> Mat {
    let mut m = Mat::zeros(src.field, rows, cols);
    for (&(i, j), v) in &src.data {
        m.set(ro + i, co + j, v.clone());
    }
    m
}

fn cut(src: &Mat, ro: usize, nr: usize, co: usize, nc: usize) -> Mat {
    let mut m = Mat::zeros(src.field, nr, nc);
    for (&(i, j), v) in &src.data {
        if i >= ro && i < ro + nr && j >= co && j < co + nc {
            m.set(i - ro, j - co, v.clone());
        }
    }
    m
}

/// Assembles a block matrix of morphisms `rows[i] <- cols[j]` of common degree.
pub fn from_blocks(
    bocs: &Arc<Bocs>,
    rows: &DirectSum,
    cols: &DirectSum,
    deg: i64,
    blocks: &[(usize, usize, &GMorph)],
) -> Result<GMorph> {
    let mut r = GMorph::zero(bocs.clone(), cols.space.clone(), rows.space.clone(), deg);
    let (nr, nc) = (rows.space.len(), cols.space.len());
    for (i, j, f) in blocks {
        if f.deg != deg || f.dom.len() != cols.parts[*j].len() || f.cod.len() != rows.parts[*i].len() {
            return Err(Error::ModuleMismatch);
        }
        let (ro, co) = (rows.offsets[*i], cols.offsets[*j]);
        r.f0.add_assign(&place(&f.f0, nr, nc, ro, co));
        for (c, m) in f.f1.iter().enumerate() {
            if !m.is_zero() {
                r.f1[c].add_assign(&place(m, nr, nc, ro, co));
            }
        }
    }
    r.validate()?;
    Ok(r)
}

/// The block `rows[i] <- cols[j]` of a morphism between direct sums.
pub fn block(f: &GMorph, rows: &DirectSum, i: usize, cols: &DirectSum, j: usize) -> GMorph {
    let (ro, nr) = rows.range(i);
    let (co, nc) = cols.range(j);
    let mut r = GMorph::zero(f.bocs.clone(), cols.parts[j].clone(), rows.parts[i].clone(), f.deg);
    r.f0 = cut(&f.f0, ro, nr, co, nc);
    for (c, m) in f.f1.iter().enumerate() {
        r.f1[c] = cut(m, ro, nr, co, nc);
    }
    r
}

/// `(sigma_M, sigma_M^{-1})` as strict morphisms between `M` and `M[1]`.
pub fn sigma(bocs: &Arc<Bocs>, m: &Arc<Space>, m1: &Arc<Space>) -> (GMorph, GMorph) {
    let id = Mat::identity(bocs.field, m.len());
    (
        GMorph::strict(bocs.clone(), m.clone(), m1.clone(), -1, id.clone()),
        GMorph::strict(bocs.clone(), m1.clone(), m.clone(), 1, id),
    )
}

/// Keeps only the blocks `f0` and `f1(c)` for `c` in layers `<= level`.
pub fn truncate(f: &GMorph, level: usize) -> GMorph {
    let mut r = f.clone();
    for (c, m) in r.f1.iter_mut().enumerate() {
        if f.bocs.gen(c).layer > level {
            *m = Mat::zeros(m.field, m.rows, m.cols);
        }
    }
    r
}

/// Basis indices of `C-bar` grouped by layer.
pub fn layers(b: &Bocs) -> BTreeMap<usize, Vec<usize>> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..b.len() {
        out.entry(b.gen(c).layer).or_default().push(c);
    }
    out
}
