//! Integral LLL reduction (δ = 3/4) driven by a positive definite Gram matrix.
//!
//! All quantities are integers: `d_i` are the leading Gram determinants and
//! `λ_{k,j} = d_{j} μ_{k,j}`. Follows the classical all-integer formulation,
//! so no rational arithmetic is needed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Result of a reduction: `transform * gram * transformᵀ == reduced`.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub transform: IntMatrix,
    pub reduced: IntMatrix,
}

struct State {
    g: Vec<Vec<BigInt>>,
    h: Vec<Vec<BigInt>>,
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
}

/// Indices are 1-based internally (slot 0 of `g`, `h`, `lam` is unused).
impl State {
    fn red(&mut self, k: usize, l: usize) {
        let two_lam = BigInt::from(2) * &self.lam[k][l];
        if two_lam.abs() <= self.d[l] {
            return;
        }
        let q = (&two_lam + &self.d[l]).div_floor(&(BigInt::from(2) * &self.d[l]));
        for j in 0..self.h[k].len() {
            let v = &q * &self.h[l][j];
            self.h[k][j] -= v;
        }
        let n = self.g.len();
        for j in 1..n {
            let v = &q * &self.g[l][j];
            self.g[k][j] -= v;
        }
        for i in 1..n {
            let v = &q * &self.g[i][l];
            self.g[i][k] -= v;
        }
        let v = &q * &self.d[l];
        self.lam[k][l] -= v;
        for i in 1..l {
            let v = &q * &self.lam[l][i];
            self.lam[k][i] -= v;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.h.swap(k, k - 1);
        self.g.swap(k, k - 1);
        for row in self.g.iter_mut() {
            row.swap(k, k - 1);
        }
        for j in 1..k - 1 {
            let (lo, hi) = self.lam.split_at_mut(k);
            std::mem::swap(&mut lo[k - 1][j], &mut hi[0][j]);
        }
        let lam = self.lam[k][k - 1].clone();
        let b = (&self.d[k - 2] * &self.d[k] + &lam * &lam) / &self.d[k - 1];
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            self.lam[i][k] = (&self.d[k] * &self.lam[i][k - 1] - &lam * &t) / &self.d[k - 1];
            self.lam[i][k - 1] = (&b * &t + &lam * &self.lam[i][k]) / &self.d[k];
        }
        self.d[k - 1] = b;
    }
}

/// LLL-reduces the basis whose Gram matrix is `gram` (must be positive definite).
pub fn reduce_gram(gram: &IntMatrix) -> Result<Reduced> {
    let n = gram.nrows();
    if n == 0 {
        return Ok(Reduced { transform: IntMatrix::zeros(0, 0), reduced: IntMatrix::zeros(0, 0) });
    }
    let mut g = vec![vec![BigInt::zero(); n + 1]; n + 1];
    let mut h = vec![vec![BigInt::zero(); n]; n + 1];
    for i in 0..n {
        for j in 0..n {
            g[i + 1][j + 1] = gram[(i, j)].clone();
        }
        h[i + 1][i] = BigInt::from(1);
    }
    let mut st = State {
        g,
        h,
        d: vec![BigInt::zero(); n + 1],
        lam: vec![vec![BigInt::zero(); n + 1]; n + 1],
    };
    st.d[0] = BigInt::from(1);
    st.d[1] = st.g[1][1].clone();
    if !st.d[1].is_positive() {
        return Err(Error::NotPositiveDefinite);
    }
    let (mut k, mut kmax) = (2, 1);
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = st.g[k][j].clone();
                for i in 1..j {
                    u = (&st.d[i] * &u - &st.lam[k][i] * &st.lam[j][i]) / &st.d[i - 1];
                }
                if j < k {
                    st.lam[k][j] = u;
                } else {
                    if !u.is_positive() {
                        return Err(Error::NotPositiveDefinite);
                    }
                    st.d[k] = u;
                }
            }
        }
        loop {
            st.red(k, k - 1);
            let lhs = BigInt::from(4) * &st.d[k] * &st.d[k - 2];
            let lam = &st.lam[k][k - 1];
            let rhs = BigInt::from(3) * &st.d[k - 1] * &st.d[k - 1] - BigInt::from(4) * lam * lam;
            if lhs < rhs {
                st.swap(k, kmax);
                k = (k - 1).max(2);
                continue;
            }
            for l in (1..k - 1).rev() {
                st.red(k, l);
            }
            k += 1;
            break;
        }
    }
    let transform = IntMatrix::from_rows(&st.h[1..]).expect("square");
    let reduced = IntMatrix::from_fn(n, n, |i, j| st.g[i + 1][j + 1].clone());
    Ok(Reduced { transform, reduced })
}

/// LLL-reduces the rows of `basis` in the standard Euclidean metric.
pub fn reduce_rows(basis: &IntMatrix) -> Result<IntMatrix> {
    let gram = basis.mul(&basis.transpose())?;
    let r = reduce_gram(&gram)?;
    r.transform.mul(basis)
}
