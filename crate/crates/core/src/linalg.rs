//! Dense exact linear algebra over a [`Field`].
//!
//! Vectors are rows. `Mat::kernel` is the right kernel `{x : A x = 0}` and is
//! returned as a matrix whose rows span it.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;

/// Default cap on `q^ambient` for subspace enumeration.
pub const DEFAULT_ENUM_CAP: u64 = 2_000_000;

#[derive(Clone)]
pub struct Mat {
    field: Arc<Field>,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}
impl Eq for Mat {}

impl std::hash::Hash for Mat {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Output of [`Mat::gauss`].
#[derive(Clone, Debug)]
pub struct Gauss {
    pub rank: usize,
    pub rref: Mat,
    pub pivots: Vec<usize>,
    pub kernel: Subspace,
    pub image: Subspace,
}

impl Mat {
    pub fn zeros(field: &Arc<Field>, rows: usize, cols: usize) -> Mat {
        Mat { field: Arc::clone(field), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Arc<Field>, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_data(field: &Arc<Field>, rows: usize, cols: usize, data: Vec<u32>) -> Mat {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Mat { field: Arc::clone(field), rows, cols, data }
    }

    pub fn from_rows(field: &Arc<Field>, rows: &[Vec<u32>]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        let data: Vec<u32> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Mat::from_data(field, rows.len(), cols, data)
    }

    /// Integer entries reduced into the prime field.
    pub fn from_ints(field: &Arc<Field>, rows: &[Vec<i64>]) -> Mat {
        let conv: Vec<Vec<u32>> =
            rows.iter().map(|r| r.iter().map(|&x| field.from_int(x)).collect()).collect();
        Mat::from_rows(field, &conv)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_vec(&self, i: usize) -> Vec<u32> {
        self.row(i).to_vec()
    }
    pub fn col_vec(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    if b != 0 {
                        *d = f.add(*d, f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    /// `self * v` for a column vector `v`.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| {
                    if a == 0 || b == 0 {
                        acc
                    } else {
                        f.add(acc, f.mul(a, b))
                    }
                })
            })
            .collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Mat { field: Arc::clone(f), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Mat { field: Arc::clone(f), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u32) -> Mat {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Mat { field: Arc::clone(f), rows: self.rows, cols: self.cols, data }
    }

    /// `self += c * other`.
    pub fn axpy(&mut self, c: u32, other: &Mat) {
        if c == 0 {
            return;
        }
        let f = Arc::clone(&self.field);
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            if b != 0 {
                *a = f.add(*a, f.mul(c, b));
            }
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let mut out = Mat::zeros(&self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            out.data[i * out.cols..i * out.cols + self.cols].copy_from_slice(self.row(i));
            out.data[i * out.cols + self.cols..(i + 1) * out.cols].copy_from_slice(other.row(i));
        }
        out
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { field: Arc::clone(&self.field), rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        out
    }

    pub fn paste(&mut self, r0: usize, c0: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        let mut out = Mat::zeros(&self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.set(i, j, self.get(r0 + i, c0 + j));
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let rows: Vec<Vec<u32>> = idx.iter().map(|&i| self.row_vec(i)).collect();
        let mut m = Mat::from_rows(&self.field, &rows);
        m.cols = self.cols;
        m
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        let mut out = Mat::zeros(&self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (k, &j) in idx.iter().enumerate() {
                out.set(i, k, self.get(i, j));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        assert!(self.is_square());
        let mut result = Mat::identity(&self.field, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// In-place reduced row echelon form; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = Arc::clone(&self.field);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if piv != r {
                for j in 0..self.cols {
                    self.data.swap(piv * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            if inv != 1 {
                for j in c..self.cols {
                    let v = self.get(r, j);
                    self.set(r, j, f.mul(v, inv));
                }
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                for j in c..self.cols {
                    let pv = self.data[r * self.cols + j];
                    if pv != 0 {
                        let idx = i * self.cols + j;
                        self.data[idx] = f.add(self.data[idx], f.mul(neg, pv));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place();
        (m, piv)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self * x = 0}` as rows.
    pub fn kernel(&self) -> Mat {
        let (r, pivots) = self.rref();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Mat::zeros(f, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(k, pc, f.neg(r.get(i, fc)));
            }
        }
        out
    }

    /// Row reduction summary.
    pub fn gauss(&self) -> Gauss {
        let (rref, pivots) = self.rref();
        let rank = pivots.len();
        let kernel = Subspace::from_rows(&self.kernel());
        let image = Subspace::from_rows(&self.transpose());
        Gauss { rank, rref, pivots, kernel, image }
    }

    /// Some `x` with `self * x = b`, or `None`.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let f = &self.field;
        let col = Mat::from_data(f, self.rows, 1, b.to_vec());
        let aug = self.hstack(&col);
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Some(x)
    }

    /// Solve `X * self = B` row by row (i.e. express rows of `b` in the row space of `self`).
    pub fn solve_left(&self, b: &Mat) -> Option<Mat> {
        let t = self.transpose();
        let mut out = Mat::zeros(&self.field, b.rows, self.rows);
        for i in 0..b.rows {
            let x = t.solve(b.row(i))?;
            for (j, v) in x.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Some(out)
    }

    pub fn inverse(&self) -> Option<Mat> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(&self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// True iff some power is zero.
    pub fn is_nilpotent(&self) -> bool {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return true;
        }
        let mut m = self.clone();
        let mut k = 1;
        while k < n {
            m = m.mul(&m);
            k *= 2;
        }
        m.is_zero()
    }

    /// JSON form with entries as coordinate vectors.
    pub fn to_json(&self) -> MatJson {
        MatJson {
            rows: self.rows,
            cols: self.cols,
            entries: (0..self.rows)
                .map(|i| self.row(i).iter().map(|&a| self.field.coords(a)).collect())
                .collect(),
        }
    }

    pub fn from_json(field: &Arc<Field>, json: &MatJson) -> Result<Mat> {
        if json.entries.len() != json.rows || json.entries.iter().any(|r| r.len() != json.cols) {
            return Err(Error::Dimension("matrix JSON grid does not match its shape".into()));
        }
        let mut data = Vec::with_capacity(json.rows * json.cols);
        for row in &json.entries {
            for c in row {
                data.push(field.from_coords(c)?);
            }
        }
        Ok(Mat::from_data(field, json.rows, json.cols, data))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Vec<u32>>>,
}

/// A subspace of `field^ambient`, stored by its RREF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Mat,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) {:?}", self.dim(), self.ambient(), self.basis.data)
    }
}

/// Binary operations on subspaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceOp {
    Sum,
    Intersect,
    Contains,
    QuotientMap,
}

/// Result of [`Subspace::op`].
#[derive(Clone, Debug)]
pub enum SubspaceOpResult {
    Space(Subspace),
    Map(Mat),
    Bool(bool),
}

impl Subspace {
    pub fn zero(field: &Arc<Field>, ambient: usize) -> Subspace {
        Subspace { basis: Mat::zeros(field, 0, ambient), pivots: Vec::new() }
    }

    pub fn full(field: &Arc<Field>, ambient: usize) -> Subspace {
        Subspace { basis: Mat::identity(field, ambient), pivots: (0..ambient).collect() }
    }

    /// Span of the rows of `m`.
    pub fn from_rows(m: &Mat) -> Subspace {
        let (r, pivots) = m.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        let mut basis = r.select_rows(&keep);
        basis.cols = m.cols;
        Subspace { basis, pivots }
    }

    /// Accepts a matrix already in RREF without recomputation.
    fn from_rref_unchecked(basis: Mat, pivots: Vec<usize>) -> Subspace {
        Subspace { basis, pivots }
    }

    pub fn field(&self) -> &Arc<Field> {
        self.basis.field()
    }
    pub fn dim(&self) -> usize {
        self.basis.rows
    }
    pub fn ambient(&self) -> usize {
        self.basis.cols
    }
    pub fn basis(&self) -> &Mat {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduce `v` modulo the subspace, in place; zero iff `v` lies in it.
    pub fn reduce(&self, v: &mut [u32]) {
        let f = self.field();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            let neg = f.neg(c);
            for (x, &b) in v.iter_mut().zip(self.basis.row(i)) {
                if b != 0 {
                    *x = f.add(*x, f.mul(neg, b));
                }
            }
        }
    }

    pub fn contains_vec(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    fn check(&self, other: &Subspace) -> Result<()> {
        if self.ambient() != other.ambient() || **self.field() != **other.field() {
            return Err(Error::Dimension("subspaces live in different ambients".into()));
        }
        Ok(())
    }

    pub fn contains(&self, other: &Subspace) -> Result<bool> {
        self.check(other)?;
        Ok((0..other.dim()).all(|i| self.contains_vec(other.basis.row(i))))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        Ok(Subspace::from_rows(&self.basis.vstack(&other.basis)))
    }

    /// Zassenhaus intersection.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check(other)?;
        let n = self.ambient();
        let top = self.basis.hstack(&self.basis);
        let bottom = other.basis.hstack(&Mat::zeros(self.field(), other.dim(), n));
        let (r, pivots) = top.vstack(&bottom).rref();
        let rows: Vec<Vec<u32>> = pivots
            .iter()
            .enumerate()
            .filter(|(_, &pc)| pc >= n)
            .map(|(i, _)| r.row(i)[n..].to_vec())
            .collect();
        if rows.is_empty() {
            return Ok(Subspace::zero(self.field(), n));
        }
        Ok(Subspace::from_rows(&Mat::from_rows(self.field(), &rows)))
    }

    /// Surjection `ambient -> ambient - dim` (as a matrix acting on column
    /// vectors) with kernel exactly this subspace; it reads off the non-pivot
    /// coordinates after reduction.
    pub fn quotient_map(&self) -> Mat {
        let n = self.ambient();
        let free: Vec<usize> = (0..n).filter(|c| !self.pivots.contains(c)).collect();
        let mut out = Mat::zeros(self.field(), free.len(), n);
        for j in 0..n {
            let mut e = vec![0; n];
            e[j] = 1;
            self.reduce(&mut e);
            for (k, &fc) in free.iter().enumerate() {
                out.set(k, j, e[fc]);
            }
        }
        out
    }

    /// Coordinates of the non-pivot positions used by [`Subspace::quotient_map`].
    pub fn complement_coords(&self) -> Vec<usize> {
        (0..self.ambient()).filter(|c| !self.pivots.contains(c)).collect()
    }

    pub fn op(&self, other: &Subspace, op: SubspaceOp) -> Result<SubspaceOpResult> {
        Ok(match op {
            SubspaceOp::Sum => SubspaceOpResult::Space(self.sum(other)?),
            SubspaceOp::Intersect => SubspaceOpResult::Space(self.intersect(other)?),
            SubspaceOp::Contains => SubspaceOpResult::Bool(self.contains(other)?),
            SubspaceOp::QuotientMap => {
                self.check(other)?;
                SubspaceOpResult::Map(self.quotient_map())
            }
        })
    }
}

/// Gaussian binomial coefficient `[n choose k]_q` from the product formula.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// All `d`-dimensional subspaces of `field^ambient`, each exactly once, ordered
/// by pivot set (lexicographic) and then by free entries.
pub fn enumerate_subspaces(
    field: &Arc<Field>,
    ambient: usize,
    d: usize,
    cap: u64,
) -> Result<impl Iterator<Item = Subspace>> {
    let q = field.q() as u64;
    let total = (q as u128).checked_pow(ambient as u32).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(Error::CapExceeded(format!(
            "subspace enumeration in dimension {ambient} over GF({q})"
        )));
    }
    let field = Arc::clone(field);
    let pivot_sets: Vec<Vec<usize>> = if d > ambient { Vec::new() } else { combinations(ambient, d) };
    Ok(pivot_sets.into_iter().flat_map(move |pivots| {
        let field = Arc::clone(&field);
        // free slots: (row, col) with col > pivot[row] and col not a pivot
        let slots: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &pc)| {
                let pivots = pivots.clone();
                (pc + 1..ambient).filter(move |c| !pivots.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let count = q.pow(slots.len() as u32);
        (0..count).map(move |mut code| {
            let mut m = Mat::zeros(&field, pivots.len(), ambient);
            for (i, &pc) in pivots.iter().enumerate() {
                m.set(i, pc, 1);
            }
            for &(i, c) in slots.iter().rev() {
                m.set(i, c, (code % q) as u32);
                code /= q;
            }
            Subspace::from_rref_unchecked(m, pivots.clone())
        })
    }))
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn identity_rank_and_kernel() {
        let f = Field::new(3, 1).unwrap();
        let g = Mat::identity(&f, 2).gauss();
        assert_eq!(g.rank, 2);
        assert_eq!(g.kernel.dim(), 0);
    }

    #[test]
    fn zero_matrix() {
        let f = Field::new(2, 1).unwrap();
        let g = Mat::zeros(&f, 3, 2).gauss();
        assert_eq!(g.rank, 0);
        assert_eq!(g.kernel, Subspace::full(&f, 2));
    }

    #[test]
    fn all_ones_over_gf2() {
        let f = Field::new(2, 1).unwrap();
        let m = Mat::from_ints(&f, &[vec![1, 1], vec![1, 1]]);
        let g = m.gauss();
        assert_eq!(g.rank, 1);
        assert_eq!(g.kernel, Subspace::from_rows(&Mat::from_ints(&f, &[vec![1, 1]])));
    }

    #[test]
    fn lines_in_gf2_plane() {
        let f = Field::new(2, 1).unwrap();
        let lines: Vec<Subspace> = enumerate_subspaces(&f, 2, 1, DEFAULT_ENUM_CAP).unwrap().collect();
        assert_eq!(lines.len(), 3);
        for a in &lines {
            assert_eq!(a.intersect(a).unwrap(), *a);
            for b in &lines {
                if a != b {
                    assert_eq!(a.sum(b).unwrap().dim(), 2);
                    assert_eq!(a.intersect(b).unwrap().dim(), 0);
                }
            }
            assert!(Subspace::full(&f, 2).contains(a).unwrap());
        }
    }

    #[test]
    fn enumeration_edge_cases() {
        let f = Field::new(3, 1).unwrap();
        let zero: Vec<_> = enumerate_subspaces(&f, 3, 0, DEFAULT_ENUM_CAP).unwrap().collect();
        assert_eq!(zero, vec![Subspace::zero(&f, 3)]);
        assert_eq!(enumerate_subspaces(&f, 2, 3, DEFAULT_ENUM_CAP).unwrap().count(), 0);
        assert!(enumerate_subspaces(&f, 30, 1, DEFAULT_ENUM_CAP).is_err());
    }

    #[test]
    fn enumeration_matches_gaussian_binomial() {
        for q in [2u32, 3] {
            let f = Field::new(q, 1).unwrap();
            for n in 0..=5 {
                for k in 0..=n {
                    let spaces: Vec<_> = enumerate_subspaces(&f, n, k, DEFAULT_ENUM_CAP).unwrap().collect();
                    assert_eq!(spaces.len() as u128, gaussian_binomial(n, k, q as u64));
                    let set: std::collections::HashSet<_> = spaces.iter().cloned().collect();
                    assert_eq!(set.len(), spaces.len());
                }
            }
        }
    }

    #[test]
    fn quotient_map_kernel_is_subspace() {
        let f = Field::new(3, 1).unwrap();
        let s = Subspace::from_rows(&Mat::from_ints(&f, &[vec![1, 2, 0, 1], vec![0, 1, 1, 1]]));
        let qm = s.quotient_map();
        assert_eq!(qm.rows(), 2);
        assert_eq!(qm.rank(), 2);
        assert_eq!(Subspace::from_rows(&qm.kernel()), s);
    }

    #[test]
    fn inverse_round_trip() {
        let f = Field::new(5, 1).unwrap();
        let m = Mat::from_ints(&f, &[vec![1, 2], vec![3, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(&f, 2));
        assert!(Mat::from_ints(&f, &[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    #[test]
    fn matrix_json_round_trip() {
        let f = Field::new(2, 2).unwrap();
        let m = Mat::from_rows(&f, &[vec![0, 1, 2], vec![3, 2, 1]]);
        let back = Mat::from_json(&f, &m.to_json()).unwrap();
        assert_eq!(back, m);
    }
}
