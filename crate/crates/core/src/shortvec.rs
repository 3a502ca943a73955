//! Complete enumeration of vectors of prescribed (negative) norm in a
//! negative definite integral lattice.
//!
//! The search is Fincke–Pohst style but entirely in integers. With `Q = -G`
//! (after LLL), fixing the trailing coordinates `x_{p+1..}` and minimizing
//! over the leading ones leaves the Schur complement form
//! `S_p = B_p / D_p`, where `B_p` is the Bareiss block after `p` pivots and
//! `D_p` the leading `p x p` minor. So `x_p` ranges over the integer roots of
//! `B_p[0][0] x² + 2 L x + C <= D_p R`, found with an exact integer sqrt.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};
use crate::lattice::IntegralLattice;
use crate::lll;
use crate::matrix::IntMatrix;

pub const DEFAULT_CEILING: u64 = 64;

/// Intermediate values stay below this in the `i128` fast path.
const I128_HEADROOM_BITS: u64 = 120;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormTarget {
    /// Vectors with `v·v` equal to this (negative) value.
    Exact(i64),
    /// All nonzero vectors with `v·v >= floor` (floor negative).
    AtLeast(i64),
}

#[derive(Clone, Debug)]
pub struct NormQuery {
    lattice: IntegralLattice,
    target: NormTarget,
    ceiling: u64,
}

impl NormQuery {
    pub fn new(lattice: IntegralLattice, target: NormTarget) -> Result<Self> {
        let value = match target {
            NormTarget::Exact(v) | NormTarget::AtLeast(v) => v,
        };
        if value >= 0 {
            return Err(Error::OutOfRange { what: "target norm (must be negative)".into(), param: value });
        }
        if !lattice.is_negative_definite() {
            return Err(Error::NotNegativeDefinite);
        }
        Ok(Self { lattice, target, ceiling: DEFAULT_CEILING })
    }

    pub fn exact(lattice: IntegralLattice, norm: i64) -> Result<Self> {
        Self::new(lattice, NormTarget::Exact(norm))
    }

    pub fn at_least(lattice: IntegralLattice, floor: i64) -> Result<Self> {
        Self::new(lattice, NormTarget::AtLeast(floor))
    }

    pub fn with_ceiling(mut self, ceiling: u64) -> Self {
        self.ceiling = ceiling;
        self
    }

    pub fn lattice(&self) -> &IntegralLattice {
        &self.lattice
    }

    pub fn target(&self) -> NormTarget {
        self.target
    }

    fn radius(&self) -> u64 {
        match self.target {
            NormTarget::Exact(v) | NormTarget::AtLeast(v) => v.unsigned_abs(),
        }
    }
}

/// Every vector matching the query, one per `±` pair, normalized so that
/// the first nonzero coordinate is positive, in lexicographic order.
pub fn enumerate_norm(q: &NormQuery) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    visit(q, |v, _| {
        out.push(v.to_vec());
        ControlFlow::Continue(())
    })?;
    out.sort();
    Ok(out)
}

/// Whether any vector matches; stops at the first hit.
pub fn has_norm(q: &NormQuery) -> Result<bool> {
    let mut found = false;
    visit(q, |_, _| {
        found = true;
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// Calls `f(v, v·v)` once per `±` pair of matching vectors (in no
/// particular order) until it breaks.
pub fn visit(q: &NormQuery, mut f: impl FnMut(&[i64], i64) -> ControlFlow<()>) -> Result<()> {
    let radius = q.radius();
    if radius > q.ceiling {
        return Err(Error::CeilingExceeded { norm: -(radius as i64), ceiling: q.ceiling });
    }
    let n = q.lattice.rank();
    if n == 0 {
        return Ok(());
    }
    let neg = IntMatrix::from_fn(n, n, |i, j| -q.lattice.gram()[(i, j)].clone());
    let red = lll::reduce_gram(&neg).map_err(|_| Error::NotNegativeDefinite)?;
    let plan = Plan::new(&red.reduced, radius)?;
    let transform = red.transform.to_i64_rows().ok_or(Error::Overflow("reduction transform"))?;

    // |output coordinate| <= sum_i X_i max_j |H_ij|
    let out_bound: BigInt = plan
        .coord_bounds
        .iter()
        .zip(&transform)
        .map(|(x, row)| x * BigInt::from(row.iter().map(|h| h.unsigned_abs()).max().unwrap_or(0)))
        .sum();
    if out_bound.bits() > 62 {
        return Err(Error::Overflow("output coordinates"));
    }

    let exact = matches!(q.target, NormTarget::Exact(_));
    let mut v = vec![0i64; n];
    let mut emit = |x: &[i128], value: i128| -> ControlFlow<()> {
        if exact && value != radius as i128 {
            return ControlFlow::Continue(());
        }
        for (j, vj) in v.iter_mut().enumerate() {
            *vj = x.iter().zip(&transform).map(|(xi, row)| xi * row[j] as i128).sum::<i128>() as i64;
        }
        if v.iter().find(|c| **c != 0).is_some_and(|c| *c < 0) {
            v.iter_mut().for_each(|c| *c = -*c);
        }
        f(&v, -(value as i64))
    };

    if plan.fits_i128() {
        plan.run::<i128>(&mut emit);
    } else {
        plan.run::<BigInt>(&mut emit);
    }
    Ok(())
}

/// Integer type the tree walk runs in.
trait Scalar: Clone + Ord + Integer + Roots + Signed {
    fn from_big(v: &BigInt) -> Self;
    fn to_i128(&self) -> i128;
}

impl Scalar for i128 {
    fn from_big(v: &BigInt) -> Self {
        ToPrimitive::to_i128(v).expect("checked by fits_i128")
    }

    fn to_i128(&self) -> i128 {
        *self
    }
}

impl Scalar for BigInt {
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }

    fn to_i128(&self) -> i128 {
        ToPrimitive::to_i128(self).expect("coordinates are bounded by the i64 output check")
    }
}

struct Plan {
    n: usize,
    /// `blocks[p]` is the Bareiss block on indices `p..n` after `p` pivots.
    blocks: Vec<Vec<Vec<BigInt>>>,
    /// `denoms[p]` is the leading `p x p` minor (`denoms[0] = 1`).
    denoms: Vec<BigInt>,
    radius: BigInt,
    coord_bounds: Vec<BigInt>,
}

impl Plan {
    fn new(q: &IntMatrix, radius: u64) -> Result<Self> {
        let n = q.nrows();
        let mut a = q.row_vecs();
        let mut blocks = Vec::with_capacity(n);
        let mut denoms = Vec::with_capacity(n);
        let mut prev = BigInt::one();
        for p in 0..n {
            blocks.push(a[p..].iter().map(|row| row[p..].to_vec()).collect::<Vec<_>>());
            denoms.push(prev.clone());
            if !a[p][p].is_positive() {
                return Err(Error::NotNegativeDefinite);
            }
            for i in p + 1..n {
                for j in p + 1..n {
                    let v = &a[p][p] * &a[i][j] - &a[i][p] * &a[p][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[p][p].clone();
        }
        let det = prev;
        let radius = BigInt::from(radius);
        // x_i^2 <= R (Q^-1)_ii = R adj_ii / det
        let coord_bounds = (0..n)
            .map(|i| {
                let minor: Vec<Vec<BigInt>> = (0..n)
                    .filter(|&r| r != i)
                    .map(|r| (0..n).filter(|&c| c != i).map(|c| q[(r, c)].clone()).collect())
                    .collect();
                let adj = crate::matrix::bareiss_det(minor);
                (&radius * adj / &det).sqrt() + BigInt::one()
            })
            .collect();
        Ok(Self { n, blocks, denoms, radius, coord_bounds })
    }

    fn fits_i128(&self) -> bool {
        let n = BigInt::from(self.n);
        let m_max = self
            .blocks
            .iter()
            .flat_map(|b| b.iter().flatten())
            .map(|v| v.abs())
            .max()
            .unwrap_or_default();
        let d_max = self.denoms.iter().max().cloned().unwrap_or_default();
        let x = self.coord_bounds.iter().max().cloned().unwrap_or_default();
        let l = &n * &m_max * &x;
        let c = &n * &n * &m_max * &x * &x;
        let disc = &l * &l + &m_max * (&c + &d_max * &self.radius);
        disc.bits() < I128_HEADROOM_BITS && (&m_max * &x * &x).bits() < I128_HEADROOM_BITS
    }

    fn run<T: Scalar>(&self, emit: &mut dyn FnMut(&[i128], i128) -> ControlFlow<()>) {
        let blocks: Vec<Vec<Vec<T>>> = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|row| row.iter().map(T::from_big).collect()).collect())
            .collect();
        let bounds: Vec<T> = self.denoms.iter().map(|d| T::from_big(&(d * &self.radius))).collect();
        let mut walk = Walk { blocks, bounds, x: vec![T::zero(); self.n], out: vec![0; self.n] };
        let _ = walk.descend(self.n - 1, true, emit);
    }
}

struct Walk<T> {
    blocks: Vec<Vec<Vec<T>>>,
    bounds: Vec<T>,
    x: Vec<T>,
    out: Vec<i128>,
}

impl<T: Scalar> Walk<T> {
    fn descend(
        &mut self,
        p: usize,
        zero_suffix: bool,
        emit: &mut dyn FnMut(&[i128], i128) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let block = &self.blocks[p];
        let tail = &self.x[p + 1..];
        let mut lin = T::zero();
        let mut constant = T::zero();
        for (i, xi) in tail.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            lin = lin + block[0][i + 1].clone() * xi.clone();
            let row: T = tail
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (j, xj)| acc + block[i + 1][j + 1].clone() * xj.clone());
            constant = constant + row * xi.clone();
        }
        let lead = block[0][0].clone();
        let bound = self.bounds[p].clone();
        let disc = lin.clone() * lin.clone() - lead.clone() * (constant.clone() - bound);
        if disc.is_negative() {
            return ControlFlow::Continue(());
        }
        let s = disc.sqrt();
        let zero = T::zero();
        let mut lo = (-s.clone() - lin.clone()).div_ceil(&lead);
        let hi = (s - lin.clone()).div_floor(&lead);
        if zero_suffix && lo < zero {
            lo = zero.clone();
        }
        let mut xp = lo;
        while xp <= hi {
            self.x[p] = xp.clone();
            let is_zero = xp.is_zero();
            if p == 0 {
                if !(zero_suffix && is_zero) {
                    let two = T::one() + T::one();
                    let value = lead.clone() * xp.clone() * xp.clone() + two * lin.clone() * xp.clone() + constant.clone();
                    for (o, xi) in self.out.iter_mut().zip(&self.x) {
                        *o = xi.to_i128();
                    }
                    emit(&self.out, value.to_i128())?;
                }
            } else {
                self.descend(p - 1, zero_suffix && is_zero, emit)?;
            }
            xp = xp + T::one();
        }
        self.x[p] = zero;
        ControlFlow::Continue(())
    }
}
