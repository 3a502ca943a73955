//! Dense integer matrices with exact (arbitrary precision) arithmetic.
//!
//! Everything here is fraction-free: determinants use Bareiss elimination,
//! kernels and Smith invariants use unimodular row/column operations only.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::BadShape { rows, cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from row vectors. An empty slice gives the 0x0 matrix.
    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: row.len() });
            }
            data.extend(row.iter().cloned().map(Into::into));
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    /// Like [`IntMatrix::from_rows`] but with an explicit column count, so that
    /// a matrix with zero rows keeps its width.
    pub fn from_rows_with_cols<T: Clone + Into<BigInt>>(rows: &[Vec<T>], cols: usize) -> Result<Self> {
        let mut m = Self::from_rows(rows)?;
        if rows.is_empty() {
            m.cols = cols;
        } else if m.cols != cols {
            return Err(Error::DimensionMismatch { expected: cols, got: m.cols });
        }
        Ok(m)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| &self[(i, k)] * &other[(k, j)]).sum()
        }))
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, got: v.len() });
        }
        Ok((0..self.cols)
            .map(|j| v.iter().enumerate().map(|(i, x)| x * &self[(i, j)]).sum())
            .collect())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.cols });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Self { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn block_diag(&self, other: &Self) -> Self {
        let (r, c) = (self.rows, self.cols);
        Self::from_fn(r + other.rows, c + other.cols, |i, j| match (i < r, j < c) {
            (true, true) => self[(i, j)].clone(),
            (false, false) => other[(i - r, j - c)].clone(),
            _ => BigInt::zero(),
        })
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    /// Determinant via Bareiss elimination. Panics on a non-square matrix.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a {}x{} matrix", self.rows, self.cols);
        bareiss_det(self.row_vecs())
    }

    /// Classical adjugate: `adj(A) A = A adj(A) = det(A) I`.
    pub fn adjugate(&self) -> Self {
        assert!(self.is_square(), "adjugate of a {}x{} matrix", self.rows, self.cols);
        let n = self.rows;
        if n == 1 {
            return Self::identity(1);
        }
        Self::from_fn(n, n, |i, j| {
            let minor: Vec<Vec<BigInt>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| (0..n).filter(|&c| c != i).map(|c| self[(r, c)].clone()).collect())
                .collect();
            let d = bareiss_det(minor);
            if (i + j) % 2 == 0 {
                d
            } else {
                -d
            }
        })
    }

    pub fn rank(&self) -> usize {
        let mut a = self.row_vecs();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            for i in r + 1..self.rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let (p, q) = (a[r][c].clone(), a[i][c].clone());
                for j in c..self.cols {
                    a[i][j] = &p * &a[i][j] - &q * &a[r][j];
                }
                let g = content(&a[i]);
                if !g.is_zero() && !g.is_one() {
                    a[i].iter_mut().for_each(|x| *x /= &g);
                }
            }
            r += 1;
        }
        r
    }

    /// Basis (as rows) of the integer right kernel `{x : self * x^T = 0}`.
    ///
    /// The rows are the tail of a unimodular transform, so the kernel they
    /// span is saturated in `Z^cols`.
    pub fn kernel_rows(&self) -> Self {
        let (n, m) = (self.rows, self.cols);
        let mut b: Vec<Vec<BigInt>> =
            (0..m).map(|j| (0..n).map(|i| self[(i, j)].clone()).collect()).collect();
        let mut u = Self::identity(m).row_vecs();
        let mut pivot = 0;
        for col in 0..n {
            loop {
                let best = (pivot..m)
                    .filter(|&r| !b[r][col].is_zero())
                    .min_by(|&x, &y| b[x][col].abs().cmp(&b[y][col].abs()));
                let Some(best) = best else { break };
                b.swap(pivot, best);
                u.swap(pivot, best);
                let mut clean = true;
                for r in pivot + 1..m {
                    if b[r][col].is_zero() {
                        continue;
                    }
                    let q = b[r][col].div_floor(&b[pivot][col]);
                    let (head, tail) = b.split_at_mut(r);
                    axpy(&mut tail[0], &head[pivot], &q);
                    let (head, tail) = u.split_at_mut(r);
                    axpy(&mut tail[0], &head[pivot], &q);
                    if !b[r][col].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    pivot += 1;
                    break;
                }
            }
        }
        Self::from_rows_with_cols(&u[pivot..], m).expect("rows have width m")
    }

    /// Nonzero Smith invariant factors `h_1 | h_2 | ... | h_r`, all positive.
    pub fn smith_invariants(&self) -> Vec<BigInt> {
        let (n, m) = (self.rows, self.cols);
        let mut a = self.row_vecs();
        let mut out = Vec::new();
        for t in 0..n.min(m) {
            let Some((pi, pj)) = argmin_nonzero(&a, t, t) else { break };
            a.swap(t, pi);
            swap_cols(&mut a, t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..n {
                    if !a[i][t].is_zero() {
                        let q = a[i][t].div_floor(&a[t][t]);
                        let (head, tail) = a.split_at_mut(i);
                        axpy(&mut tail[0], &head[t], &q);
                        dirty |= !a[i][t].is_zero();
                    }
                }
                for j in t + 1..m {
                    if !a[t][j].is_zero() {
                        let q = a[t][j].div_floor(&a[t][t]);
                        for row in a.iter_mut() {
                            let s = &q * &row[t];
                            row[j] -= s;
                        }
                        dirty |= !a[t][j].is_zero();
                    }
                }
                if dirty {
                    // a remainder smaller than the pivot is left in row or column t
                    let in_col = (t..n).filter(|&i| !a[i][t].is_zero()).map(|i| (i, t));
                    let in_row = (t..m).filter(|&j| !a[t][j].is_zero()).map(|j| (t, j));
                    let (i, j) = in_col
                        .chain(in_row)
                        .min_by(|x, y| a[x.0][x.1].abs().cmp(&a[y.0][y.1].abs()))
                        .expect("pivot is nonzero");
                    a.swap(t, i);
                    swap_cols(&mut a, t, j);
                    continue;
                }
                let bad = (t + 1..n).find(|&i| (t + 1..m).any(|j| !a[i][j].is_multiple_of(&a[t][t])));
                if let Some(i) = bad {
                    let (head, tail) = a.split_at_mut(i);
                    let src = tail[0].clone();
                    axpy(&mut head[t], &src, &BigInt::from(-1));
                    continue;
                }
                break;
            }
            out.push(a[t][t].abs());
        }
        out
    }

    pub fn to_i128_rows(&self) -> Option<Vec<Vec<i128>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(ToPrimitive::to_i128).collect()).collect()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows).map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect()).collect()
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// `target -= q * src`
pub(crate) fn axpy(target: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }
}

fn argmin_nonzero(a: &[Vec<BigInt>], r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(r0) {
        for (j, x) in row.iter().enumerate().skip(c0) {
            if x.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| x.abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

pub(crate) fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Gcd of all entries (0 for the zero vector).
pub fn content(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// All increasing `k`-subsets of `0..n`, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = if k <= n { Some((0..k).collect::<Vec<_>>()) } else { None };
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if succ[i] < n - k + i {
                succ[i] += 1;
                for j in i + 1..k {
                    succ[j] = succ[j - 1] + 1;
                }
                next = Some(succ);
                break;
            }
        }
        Some(cur)
    })
}
