//! Integral lattices given by a symmetric Gram matrix, and the handful of
//! standard lattices the classification is built from.
//!
//! Basis order inside `Λ⁻ = U ⊕ U(2) ⊕ E8(2)` is `(u1, u2 | v1, v2 | e1..e8)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Index of `u1` in the standard `Λ⁻` basis.
pub const U1: usize = 0;
pub const U2: usize = 1;
pub const V1: usize = 2;
pub const V2: usize = 3;
/// First `E8(2)` coordinate.
pub const E8_START: usize = 4;

/// Edges of the E8 Dynkin diagram: a chain 0-1-2-3-4-5-6 with node 7 on node 4.
const E8_EDGES: [(usize, usize); 7] = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardLattice {
    /// Hyperbolic plane, Gram `[[0,1],[1,0]]`.
    U,
    /// Hyperbolic plane scaled by 2.
    U2,
    /// Negative definite E8 scaled by 2 (diagonal −4).
    E8_2,
    /// `U ⊕ U(2) ⊕ E8(2)`, rank 12.
    LambdaMinus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralLattice {
    gram: IntMatrix,
}

/// Counts of positive, negative and zero entries in a rational diagonalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl IntegralLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch { expected: gram.nrows(), got: gram.ncols() });
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(Self { gram })
    }

    pub fn from_rows<T: Clone + Into<BigInt>>(rows: &[Vec<T>]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(rows)?)
    }

    /// Rank-1 lattice `<n>`.
    pub fn scalar(n: i64) -> Self {
        Self { gram: IntMatrix::from_rows(&[vec![n]]).expect("1x1") }
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let gram = IntMatrix::from_fn(n, n, |i, j| if i == j { entries[i].into() } else { BigInt::zero() });
        Self { gram }
    }

    pub fn zero_rank() -> Self {
        Self { gram: IntMatrix::zeros(0, 0) }
    }

    pub fn standard(which: StandardLattice) -> Self {
        match which {
            StandardLattice::U => Self::diagonal_free(&[vec![0, 1], vec![1, 0]]),
            StandardLattice::U2 => Self::diagonal_free(&[vec![0, 2], vec![2, 0]]),
            StandardLattice::E8_2 => {
                let mut g = vec![vec![0i64; 8]; 8];
                for (i, row) in g.iter_mut().enumerate() {
                    row[i] = -4;
                }
                for &(i, j) in &E8_EDGES {
                    g[i][j] = 2;
                    g[j][i] = 2;
                }
                Self::diagonal_free(&g)
            }
            StandardLattice::LambdaMinus => Self::standard(StandardLattice::U)
                .direct_sum(&Self::standard(StandardLattice::U2))
                .direct_sum(&Self::standard(StandardLattice::E8_2)),
        }
    }

    fn diagonal_free(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows).expect("static gram is symmetric")
    }

    pub fn rank(&self) -> usize {
        self.gram.nrows()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn det(&self) -> BigInt {
        self.gram.det()
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self { gram: self.gram.block_diag(&other.gram) }
    }

    /// `u^T G v`.
    pub fn inner_product<T: Clone + Into<BigInt>>(&self, u: &[T], v: &[T]) -> Result<BigInt> {
        let n = self.rank();
        for len in [u.len(), v.len()] {
            if len != n {
                return Err(Error::DimensionMismatch { expected: n, got: len });
            }
        }
        let u: Vec<BigInt> = u.iter().cloned().map(Into::into).collect();
        let v: Vec<BigInt> = v.iter().cloned().map(Into::into).collect();
        Ok(self.product_big(&u, &v))
    }

    pub(crate) fn product_big(&self, u: &[BigInt], v: &[BigInt]) -> BigInt {
        let mut total = BigInt::zero();
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            let row: BigInt = self.gram.row(i).iter().zip(v).map(|(g, x)| g * x).sum();
            total += ui * row;
        }
        total
    }

    /// Sylvester signature from an exact symmetric (congruence) elimination.
    pub fn signature(&self) -> Signature {
        let n = self.rank();
        let mut a = self.gram.row_vecs();
        let mut sig = Signature { positive: 0, negative: 0, zero: 0 };
        let mut live: Vec<usize> = (0..n).collect();
        while !live.is_empty() {
            let pivot = match live.iter().copied().find(|&i| !a[i][i].is_zero()) {
                Some(p) => p,
                None => {
                    // all remaining diagonal entries vanish; create one with e_i + e_j
                    let pair = live
                        .iter()
                        .flat_map(|&i| live.iter().map(move |&j| (i, j)))
                        .find(|&(i, j)| i != j && !a[i][j].is_zero());
                    let Some((i, j)) = pair else {
                        sig.zero += live.len();
                        break;
                    };
                    add_congruent(&mut a, i, j);
                    i
                }
            };
            let p = a[pivot][pivot].clone();
            if p.is_positive() {
                sig.positive += 1;
            } else {
                sig.negative += 1;
            }
            live.retain(|&i| i != pivot);
            // Schur complement scaled by |p| to stay integral
            let (abs_p, neg) = (p.abs(), p.is_negative());
            for &i in &live {
                for &j in &live {
                    let cross = &a[i][pivot] * &a[pivot][j];
                    let v = &abs_p * &a[i][j];
                    a[i][j] = if neg { v + cross } else { v - cross };
                }
            }
            normalize_block(&mut a, &live);
        }
        sig
    }

    /// True when `-G` is positive definite (all leading minors of `-G` positive).
    pub fn is_negative_definite(&self) -> bool {
        let n = self.rank();
        let neg = IntMatrix::from_fn(n, n, |i, j| -self.gram[(i, j)].clone());
        leading_minors_positive(&neg)
    }

    pub fn is_positive_definite(&self) -> bool {
        leading_minors_positive(&self.gram)
    }
}

/// Row/column operation `e_i <- e_i + e_j` applied as a congruence.
fn add_congruent(a: &mut [Vec<BigInt>], i: usize, j: usize) {
    let n = a.len();
    for k in 0..n {
        let v = a[j][k].clone();
        a[i][k] += v;
    }
    for row in a.iter_mut().take(n) {
        let v = row[j].clone();
        row[i] += v;
    }
}

/// Divide the live block by the gcd of its entries (a positive scalar, so
/// the signature is unchanged).
fn normalize_block(a: &mut [Vec<BigInt>], live: &[usize]) {
    let g = live
        .iter()
        .flat_map(|&i| live.iter().map(move |&j| (i, j)))
        .fold(BigInt::zero(), |g, (i, j)| g.gcd(&a[i][j]));
    if g.is_zero() || g == BigInt::from(1) {
        return;
    }
    for &i in live {
        for &j in live {
            a[i][j] /= &g;
        }
    }
}

pub(crate) fn leading_minors_positive(g: &IntMatrix) -> bool {
    let n = g.nrows();
    let mut a = g.row_vecs();
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if !a[k][k].is_positive() {
            return false;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(which: StandardLattice) -> IntegralLattice {
        IntegralLattice::standard(which)
    }

    #[test]
    fn inner_products() {
        let u = lat(StandardLattice::U);
        assert_eq!(u.inner_product(&[1, 0], &[0, 1]).unwrap(), 1.into());
        assert_eq!(u.inner_product(&[1, 1], &[1, 1]).unwrap(), 2.into());
        let u2 = lat(StandardLattice::U2);
        assert_eq!(u2.inner_product(&[1, 1], &[1, 1]).unwrap(), 4.into());
        assert!(matches!(
            u.inner_product(&[1, 0, 0], &[0, 1, 0]),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn determinants() {
        assert_eq!(lat(StandardLattice::U).det(), (-1).into());
        assert_eq!(lat(StandardLattice::U2).det(), (-4).into());
        assert_eq!(lat(StandardLattice::E8_2).det(), 256.into());
        let lm = lat(StandardLattice::LambdaMinus);
        assert_eq!(lm.rank(), 12);
        assert_eq!(lm.det(), 1024.into());
        assert!(lm.is_even());
    }

    #[test]
    fn direct_sums() {
        let s = lat(StandardLattice::U).direct_sum(&lat(StandardLattice::U2));
        assert_eq!(s.rank(), 4);
        assert_eq!(s.det(), 4.into());
        let l = lat(StandardLattice::E8_2);
        assert_eq!(l.direct_sum(&IntegralLattice::zero_rank()), l);
        let d = IntegralLattice::scalar(2).direct_sum(&IntegralLattice::scalar(-2));
        assert_eq!(d, IntegralLattice::diagonal(&[2, -2]));
    }

    #[test]
    fn signatures() {
        let sig = lat(StandardLattice::LambdaMinus).signature();
        assert_eq!(sig, Signature { positive: 2, negative: 10, zero: 0 });
        assert_eq!(lat(StandardLattice::U).signature(), Signature { positive: 1, negative: 1, zero: 0 });
        let degenerate = IntegralLattice::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(degenerate.signature(), Signature { positive: 1, negative: 0, zero: 1 });
        assert!(lat(StandardLattice::E8_2).is_negative_definite());
        assert!(!lat(StandardLattice::U).is_negative_definite());
    }

    #[test]
    fn rejects_asymmetric() {
        assert_eq!(
            IntegralLattice::from_rows(&[vec![0, 1], vec![2, 0]]),
            Err(Error::NotSymmetric)
        );
    }
}
