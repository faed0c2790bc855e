//! Sparse exact matrices and row reduction.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::scalar::{Field, Scalar};

/// Sparse matrix stored as `(row, col) -> entry`; absent entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub field: Field,
    pub data: BTreeMap<(usize, usize), Scalar>,
}

pub type Dense = Vec<Vec<Scalar>>;

impl Mat {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, field, data: BTreeMap::new() }
    }

    pub fn identity(field: Field, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data.insert((i, i), field.one());
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data.get(&(i, j)).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        if v.is_zero() {
            self.data.remove(&(i, j));
        } else {
            self.data.insert((i, j), v);
        }
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        match self.data.get_mut(&(i, j)) {
            Some(x) => {
                *x += v;
                if x.is_zero() {
                    self.data.remove(&(i, j));
                }
            }
            None => {
                self.data.insert((i, j), v.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.is_empty()
    }

    pub fn add(&self, o: &Mat) -> Mat {
        debug_assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let mut r = self.clone();
        for (&(i, j), v) in &o.data {
            r.add_at(i, j, v);
        }
        r
    }

    pub fn add_assign(&mut self, o: &Mat) {
        for (&(i, j), v) in &o.data {
            self.add_at(i, j, v);
        }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Mat {
        let mut r = self.clone();
        for v in r.data.values_mut() {
            *v = -&*v;
        }
        r
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        if s.is_zero() {
            return Mat::zeros(self.field, self.rows, self.cols);
        }
        let mut r = self.clone();
        for v in r.data.values_mut() {
            *v = &*v * s;
        }
        r
    }

    /// `self * o`.
    pub fn mul(&self, o: &Mat) -> Mat {
        debug_assert_eq!(self.cols, o.rows);
        let mut r = Mat::zeros(self.field, self.rows, o.cols);
        for (&(i, k), a) in &self.data {
            for (&(_, j), b) in o.data.range((k, 0)..(k + 1, 0)) {
                r.add_at(i, j, &(a * b));
            }
        }
        r
    }

    pub fn transpose(&self) -> Mat {
        let mut r = Mat::zeros(self.field, self.cols, self.rows);
        for (&(i, j), v) in &self.data {
            r.data.insert((j, i), v.clone());
        }
        r
    }

    /// Multiplies column `j` by `-1` whenever `odd(j)`.
    pub fn col_signs(&self, odd: impl Fn(usize) -> bool) -> Mat {
        let mut r = self.clone();
        for (&(_, j), v) in r.data.iter_mut() {
            if odd(j) {
                *v = -&*v;
            }
        }
        r
    }

    pub fn apply(&self, x: &BTreeMap<usize, Scalar>) -> BTreeMap<usize, Scalar> {
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (&(i, j), a) in &self.data {
            if let Some(b) = x.get(&j) {
                sv_add(&mut out, i, &(a * b));
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> BTreeMap<usize, Scalar> {
        self.data.iter().filter(|(k, _)| k.1 == j).map(|(k, v)| (k.0, v.clone())).collect()
    }

    pub fn to_dense(&self) -> Dense {
        let mut d = vec![vec![self.field.zero(); self.cols]; self.rows];
        for (&(i, j), v) in &self.data {
            d[i][j] = v.clone();
        }
        d
    }

    pub fn from_dense(field: Field, d: &Dense, cols: usize) -> Mat {
        let mut m = Mat::zeros(field, d.len(), cols);
        for (i, row) in d.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    /// Dense submatrix on the given rows and columns.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Dense {
        rows.iter().map(|&i| cols.iter().map(|&j| self.get(i, j)).collect()).collect()
    }
}

/// Adds `v` at index `i` of a sparse vector, dropping zeros.
pub fn sv_add<K: Ord + Clone>(x: &mut BTreeMap<K, Scalar>, i: K, v: &Scalar) {
    if v.is_zero() {
        return;
    }
    match x.get_mut(&i) {
        Some(y) => {
            *y += v;
            if y.is_zero() {
                x.remove(&i);
            }
        }
        None => {
            x.insert(i, v.clone());
        }
    }
}

/// In-place reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut Dense, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r >= m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for j in c..ncols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Dense, ncols: usize) -> usize {
    let mut a = m.clone();
    rref(&mut a, ncols).len()
}

/// Basis of `{x : m x = 0}`.
pub fn nullspace(field: Field, m: &Dense, ncols: usize) -> Vec<Vec<Scalar>> {
    let mut a = m.clone();
    let piv = rref(&mut a, ncols);
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !piv.contains(c)) {
        let mut x = vec![field.zero(); ncols];
        x[f] = field.one();
        for (r, &p) in piv.iter().enumerate() {
            x[p] = -&a[r][f];
        }
        out.push(x);
    }
    out
}

/// Inverse of a square matrix, if it exists.
pub fn inverse(field: Field, m: &Dense) -> Option<Dense> {
    let n = m.len();
    let mut a: Dense = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    let piv = rref(&mut a, 2 * n);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return if n == 0 { Some(Vec::new()) } else { None };
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Some solution of `m x = b`.
pub fn solve(field: Field, m: &Dense, ncols: usize, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let mut a: Dense = m
        .iter()
        .zip(b)
        .map(|(row, v)| {
            let mut r = row.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let piv = rref(&mut a, ncols + 1);
    if piv.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![field.zero(); ncols];
    for (r, &p) in piv.iter().enumerate() {
        x[p] = a[r][ncols].clone();
    }
    Some(x)
}

/// Indices of a maximal independent subset of the given vectors, scanned in order.
pub fn independent_subset(field: Field, vecs: &[Vec<Scalar>], dim: usize) -> Vec<usize> {
    let mut sys = SparseSystem::new(field, dim);
    let mut keep = Vec::new();
    for (k, v) in vecs.iter().enumerate() {
        let row: BTreeMap<usize, Scalar> =
            v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
        if sys.insert_homogeneous(row) {
            keep.push(k);
        }
    }
    keep
}

/// A generalized inverse `g` of `a` (`a g a = a`) whose image is a complement
/// of `ker a` and whose kernel is a complement of `im a`.
pub fn generalized_inverse(field: Field, a: &Dense, rows: usize, cols: usize) -> Dense {
    let mut g = vec![vec![field.zero(); rows]; cols];
    if rows == 0 || cols == 0 {
        return g;
    }
    let mut e = a.clone();
    let piv = rref(&mut e, cols);
    // image basis: columns a[:, p] for pivot p, indexed by rows
    let img: Vec<Vec<Scalar>> = piv.iter().map(|&p| (0..rows).map(|i| a[i][p].clone()).collect()).collect();
    // complete the image basis by standard vectors
    let mut basis = img.clone();
    for i in 0..rows {
        let mut v = vec![field.zero(); rows];
        v[i] = field.one();
        basis.push(v);
    }
    let keep = independent_subset(field, &basis, rows);
    let chosen: Vec<usize> = keep;
    // matrix with chosen basis as columns; invert to get coordinates
    let bmat: Dense = (0..rows).map(|i| chosen.iter().map(|&k| basis[k][i].clone()).collect()).collect();
    let binv = inverse(field, &bmat).expect("basis");
    // g sends image vector number r to standard vector e_{piv[r]} and the rest to zero
    for (r, &p) in piv.iter().enumerate() {
        for i in 0..rows {
            g[p][i] = binv[r][i].clone();
        }
    }
    g
}

/// Incremental sparse row echelon form for linear systems `A x = b`.
#[derive(Clone, Debug)]
pub struct SparseSystem {
    field: Field,
    nvars: usize,
    rows: BTreeMap<usize, BTreeMap<usize, Scalar>>,
    inconsistent: bool,
}

impl SparseSystem {
    pub fn new(field: Field, nvars: usize) -> SparseSystem {
        SparseSystem { field, nvars, rows: BTreeMap::new(), inconsistent: false }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    /// Inserts `row . x = rhs`; returns whether the rank grew.
    pub fn insert(&mut self, mut row: BTreeMap<usize, Scalar>, rhs: Scalar) -> bool {
        let rc = self.nvars;
        sv_add(&mut row, rc, &rhs);
        loop {
            let Some((&c, v)) = row.iter().next() else { return false };
            if c == rc {
                self.inconsistent = true;
                return false;
            }
            if let Some(p) = self.rows.get(&c) {
                let f = v.clone();
                for (&j, w) in p {
                    sv_add(&mut row, j, &-(&f * w));
                }
            } else {
                let inv = v.inv().unwrap();
                for w in row.values_mut() {
                    *w = &*w * &inv;
                }
                self.rows.insert(c, row);
                return true;
            }
        }
    }

    /// Whether `row` lies in the span of the inserted rows.
    pub fn contains(&self, row: &BTreeMap<usize, Scalar>) -> bool {
        let mut row = row.clone();
        loop {
            let Some((&c, v)) = row.iter().next() else { return true };
            let Some(p) = self.rows.get(&c) else { return false };
            let f = v.clone();
            for (&j, w) in p {
                sv_add(&mut row, j, &-(&f * w));
            }
        }
    }

    pub fn insert_homogeneous(&mut self, row: BTreeMap<usize, Scalar>) -> bool {
        let z = self.field.zero();
        self.insert(row, z)
    }

    /// The rows in reduced echelon form, keyed by pivot; the right hand side
    /// sits in column `nvars`.
    pub fn reduced(&self) -> BTreeMap<usize, BTreeMap<usize, Scalar>> {
        let rc = self.nvars;
        let mut red: BTreeMap<usize, BTreeMap<usize, Scalar>> = BTreeMap::new();
        for (&p, row) in self.rows.iter().rev() {
            let mut r = row.clone();
            let hits: Vec<usize> = r.keys().copied().filter(|&c| c != p && c != rc && red.contains_key(&c)).collect();
            for c in hits {
                let Some(f) = r.get(&c).cloned() else { continue };
                for (&j, w) in &red[&c] {
                    sv_add(&mut r, j, &-(&f * w));
                }
            }
            red.insert(p, r);
        }
        red
    }

    /// A particular solution and a nullspace basis, or `None` if inconsistent.
    pub fn solve(&self) -> Option<(Vec<Scalar>, Vec<BTreeMap<usize, Scalar>>)> {
        if self.inconsistent {
            return None;
        }
        let rc = self.nvars;
        let red = self.reduced();
        let mut x = vec![self.field.zero(); self.nvars];
        for (&p, r) in &red {
            if let Some(v) = r.get(&rc) {
                x[p] = v.clone();
            }
        }
        let mut null = Vec::new();
        let mut dep: BTreeMap<usize, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (&p, r) in &red {
            for (&j, w) in r {
                if j != p && j != rc {
                    dep.entry(j).or_default().push((p, w.clone()));
                }
            }
        }
        for f in (0..self.nvars).filter(|c| !red.contains_key(c)) {
            let mut v = BTreeMap::new();
            v.insert(f, self.field.one());
            if let Some(d) = dep.get(&f) {
                for (p, w) in d {
                    v.insert(*p, -w);
                }
            }
            null.push(v);
        }
        Some((x, null))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Field::Q.int(v)
    }

    #[test]
    fn inverse_and_solve() {
        let f = Field::Q;
        let m = vec![vec![q(2), q(1)], vec![q(1), q(1)]];
        let inv = inverse(f, &m).unwrap();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(-1), q(2)]]);
        let x = solve(f, &m, 2, &[q(3), q(2)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        assert!(inverse(f, &vec![vec![q(1), q(1)], vec![q(1), q(1)]]).is_none());
    }

    #[test]
    fn sparse_system_matches_dense() {
        let f = Field::Q;
        let mut s = SparseSystem::new(f, 3);
        let row = |v: &[(usize, i64)]| v.iter().map(|&(i, x)| (i, q(x))).collect::<BTreeMap<_, _>>();
        s.insert(row(&[(0, 1), (1, 1)]), q(2));
        s.insert(row(&[(1, 1), (2, -1)]), q(0));
        let (x, null) = s.solve().unwrap();
        assert_eq!(null.len(), 1);
        assert_eq!(&x[0] + &x[1], q(2));
        assert_eq!(x[1], x[2]);
        s.insert(row(&[(0, 1), (2, 1)]), q(5));
        assert!(!s.is_consistent());
    }

    #[test]
    fn generalized_inverse_identity() {
        let f = Field::Q;
        let a = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let g = generalized_inverse(f, &a, 2, 3);
        let am = Mat::from_dense(f, &a, 3);
        let gm = Mat::from_dense(f, &g, 2);
        assert_eq!(am.mul(&gm).mul(&am), am);
    }
}
