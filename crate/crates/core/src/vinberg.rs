//! The odd unimodular lattice `L = <-1> ⊕ <1>^10`, the region `P` cut out by
//!
//! * `gcd(x0, ..., x10) = 1`,
//! * `x1 >= x2 >= ... >= x10 > 0`,
//! * `x0 >= x1 + x2 + x3` and `3 x0 > x1 + ... + x10`,
//!
//! and searches for vectors of `P` with a prescribed norm.
//!
//! The slice `P(m)` fixes `x0 = m`. Dropping the gcd condition gives the
//! *cone slice*, which is what the slice maxima are computed over.

use std::ops::ControlFlow;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest slice `enumerate_cone_slice` accepts.
pub const SLICE_CAP: i128 = 20;

/// Slices searched when certifying that norms −1, −2 and −4 do not occur.
pub const SMALL_NORM_SLICES: i128 = 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VinbergVector(pub [i128; 11]);

impl VinbergVector {
    /// `-x0² + x1² + ... + x10²`.
    pub fn norm(&self) -> BigInt {
        let x = &self.0;
        let sq = |v: i128| BigInt::from(v) * v;
        x[1..].iter().map(|&v| sq(v)).sum::<BigInt>() - sq(x[0])
    }

    /// Membership in `P`; the norm plays no role.
    pub fn in_p(&self) -> bool {
        let x = &self.0;
        let gcd = x.iter().fold(0i128, |g, v| g.gcd(v));
        if gcd != 1 || x[10] <= 0 || x[1..].windows(2).any(|w| w[0] < w[1]) {
            return false;
        }
        let big = |v: i128| BigInt::from(v);
        let head = big(x[1]) + x[2] + x[3];
        let total: BigInt = x[1..].iter().map(|&v| big(v)).sum();
        big(x[0]) >= head && big(x[0]) * 3 > total
    }

    pub fn coords(&self) -> &[i128; 11] {
        &self.0
    }
}

impl std::fmt::Display for VinbergVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i128::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A family of vectors `x_i = slope_i k + offset_i` with norm
/// `-(norm_slope k + norm_offset)`, valid for `param_min <= k <= param_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub name: String,
    pub param_min: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param_max: Option<i64>,
    /// `(slope, offset)` for each of the 11 coordinates.
    pub coords: Vec<(i64, i64)>,
    /// `(slope, offset)` of `-norm`.
    pub norm: (i64, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyTable {
    pub families: Vec<FamilySpec>,
}

/// Where a norm witness came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessSource {
    Family { name: String, param: i64 },
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormWitness {
    pub vector: VinbergVector,
    pub source: WitnessSource,
}

impl NormWitness {
    pub fn verify(&self, n: i64) -> Result<()> {
        if !self.vector.in_p() {
            return Err(Error::Verification(format!("{} is not in P", self.vector)));
        }
        if self.vector.norm() != BigInt::from(-n) {
            return Err(Error::Verification(format!("{} does not have norm -{n}", self.vector)));
        }
        if let WitnessSource::Family { name, param } = &self.source {
            let regenerated = family_vector(name, *param)?;
            if regenerated != self.vector {
                return Err(Error::Verification(format!("{name}({param}) is {regenerated}, not {}", self.vector)));
            }
        }
        Ok(())
    }
}

/// Builds a family from runs `(slope, offset, count)` covering 11 coordinates.
fn family(name: &str, param_min: i64, param_max: Option<i64>, runs: &[(i64, i64, usize)], norm: (i64, i64)) -> FamilySpec {
    let coords: Vec<(i64, i64)> = runs.iter().flat_map(|&(s, o, n)| std::iter::repeat_n((s, o), n)).collect();
    debug_assert_eq!(coords.len(), 11, "{name}");
    FamilySpec { name: name.into(), param_min, param_max, coords, norm }
}

impl FamilyTable {
    pub fn standard() -> Self {
        let x = |m: i64, min, runs: &[(i64, i64, usize)]| family(&format!("X{m}"), min, None, runs, (24, m));
        let y = |m: i64, runs: &[(i64, i64, usize)]| family(&format!("Y{m}"), 0, Some(0), runs, (0, m));
        Self {
            families: vec![
                x(0, 1, &[(9, 4, 1), (3, 2, 1), (3, 1, 7), (3, -1, 1), (0, 2, 1)]),
                x(2, 1, &[(9, 4, 1), (3, 2, 1), (3, 1, 6), (3, 0, 2), (0, 2, 1)]),
                x(4, 1, &[(12, 4, 1), (4, 2, 1), (4, 1, 7), (4, 0, 1), (0, 1, 1)]),
                x(6, 1, &[(9, 5, 1), (3, 2, 2), (3, 1, 7), (0, 2, 1)]),
                x(8, 1, &[(9, 7, 1), (3, 3, 1), (3, 2, 7), (3, 0, 1), (0, 2, 1)]),
                x(10, 0, &[(12, 7, 1), (4, 3, 1), (4, 2, 7), (4, 1, 1), (0, 1, 1)]),
                x(12, 0, &[(12, 9, 1), (4, 3, 7), (4, 2, 1), (4, 1, 1), (0, 1, 1)]),
                x(14, 0, &[(9, 8, 1), (3, 3, 2), (3, 2, 7), (0, 2, 1)]),
                x(16, 1, &[(9, 10, 1), (3, 4, 1), (3, 3, 7), (3, 1, 1), (0, 2, 1)]),
                x(18, 0, &[(12, 12, 1), (4, 4, 7), (4, 3, 1), (4, 2, 1), (0, 1, 1)]),
                x(20, 1, &[(6, 12, 1), (2, 6, 1), (2, 3, 8), (0, 4, 1)]),
                x(22, 0, &[(9, 11, 1), (3, 4, 2), (3, 3, 7), (0, 2, 1)]),
                y(6, &[(0, 4, 1), (0, 1, 10)]),
                y(8, &[(0, 6, 1), (0, 2, 6), (0, 1, 4)]),
                y(20, &[(0, 6, 1), (0, 2, 2), (0, 1, 8)]),
                family("Z", 1, None, &[(3, 1, 1), (1, 1, 1), (1, 0, 8), (0, 1, 1)], (4, -1)),
                family("W", 2, None, &[(3, 0, 1), (1, 0, 7), (1, -1, 2), (0, 1, 1)], (4, -3)),
            ],
        }
    }

    pub fn get(&self, name: &str) -> Result<&FamilySpec> {
        self.families.iter().find(|f| f.name == name).ok_or_else(|| Error::UnknownFamily(name.into()))
    }

    /// The family member with parameter `k`, coordinates 1..10 sorted
    /// descending, checked for membership in `P` and for its advertised norm.
    pub fn family_vector(&self, name: &str, k: i64) -> Result<VinbergVector> {
        self.get(name)?.vector(k)
    }

    /// First family instance whose advertised norm is `-n`.
    pub fn family_hit(&self, n: i64) -> Option<(&FamilySpec, i64)> {
        self.families.iter().find_map(|f| f.param_for_norm(n).map(|k| (f, k)))
    }
}

impl FamilySpec {
    pub fn in_range(&self, k: i64) -> bool {
        k >= self.param_min && self.param_max.is_none_or(|hi| k <= hi)
    }

    /// Advertised norm at parameter `k`.
    pub fn advertised_norm(&self, k: i64) -> i128 {
        -(self.norm.0 as i128 * k as i128 + self.norm.1 as i128)
    }

    /// The parameter `k` in range with advertised norm `-n`, if any.
    pub fn param_for_norm(&self, n: i64) -> Option<i64> {
        let (s, o) = self.norm;
        let k = if s == 0 {
            if o != n {
                return None;
            }
            self.param_min
        } else {
            let diff = n.checked_sub(o)?;
            if diff % s != 0 {
                return None;
            }
            diff / s
        };
        self.in_range(k).then_some(k)
    }

    pub fn vector(&self, k: i64) -> Result<VinbergVector> {
        if !self.in_range(k) {
            return Err(Error::OutOfRange { what: format!("family {}", self.name), param: k });
        }
        let check = |reason: String| Error::FamilyCheck { name: self.name.clone(), param: k, reason };
        if self.coords.len() != 11 {
            return Err(check(format!("{} coordinates instead of 11", self.coords.len())));
        }
        let mut x = [0i128; 11];
        for (xi, &(s, o)) in x.iter_mut().zip(&self.coords) {
            *xi = s as i128 * k as i128 + o as i128;
        }
        x[1..].sort_unstable_by(|a, b| b.cmp(a));
        let v = VinbergVector(x);
        if !v.in_p() {
            return Err(check(format!("{v} is not in P")));
        }
        if v.norm() != BigInt::from(self.advertised_norm(k)) {
            return Err(check(format!("{v} has norm {} instead of {}", v.norm(), self.advertised_norm(k))));
        }
        Ok(v)
    }
}

/// Member of the standard table.
pub fn family_vector(name: &str, k: i64) -> Result<VinbergVector> {
    FamilyTable::standard().family_vector(name, k)
}

/// Default slice cap for the exhaustive fallback.
pub fn default_x0_cap(n: i64) -> i128 {
    (3 * n as i128).max(SMALL_NORM_SLICES)
}

/// A vector of `P` with norm `-n`, preferring a family instance and falling
/// back to exhaustive search over slices `x0 <= x0_cap`.
pub fn search_norm(n: i64, x0_cap: i128) -> Option<NormWitness> {
    search_norm_with(&FamilyTable::standard(), n, x0_cap)
}

pub fn search_norm_with(table: &FamilyTable, n: i64, x0_cap: i128) -> Option<NormWitness> {
    if n < 1 {
        return None;
    }
    if let Some((f, k)) = table.family_hit(n) {
        if let Ok(vector) = f.vector(k) {
            return Some(NormWitness { vector, source: WitnessSource::Family { name: f.name.clone(), param: k } });
        }
    }
    exhaustive_search(n, x0_cap).map(|vector| NormWitness { vector, source: WitnessSource::Exhaustive })
}

/// First vector of `P` with norm `-n` in slices `3..=x0_cap`.
pub fn exhaustive_search(n: i64, x0_cap: i128) -> Option<VinbergVector> {
    for m in 3..=x0_cap {
        let squares = m * m - n as i128;
        let mut found = None;
        walk_slice(m, Some(squares), &mut |x| {
            let v = VinbergVector(*x);
            if v.in_p() {
                found = Some(v);
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

fn check_slice(m: i128) -> Result<()> {
    if !(3..=SLICE_CAP).contains(&m) {
        return Err(Error::OutOfRange { what: format!("slice (allowed 3..={SLICE_CAP})"), param: m as i64 });
    }
    Ok(())
}

/// All vectors of the cone slice `x0 = m` (gcd condition dropped), in
/// descending lexicographic order.
pub fn enumerate_cone_slice(m: i128) -> Result<Vec<VinbergVector>> {
    check_slice(m)?;
    let mut out = Vec::new();
    walk_slice(m, None, &mut |x| {
        out.push(VinbergVector(*x));
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// All members of `P(m)`, in descending lexicographic order.
pub fn enumerate_p_slice(m: i128) -> Result<Vec<VinbergVector>> {
    let mut out = enumerate_cone_slice(m)?;
    out.retain(VinbergVector::in_p);
    Ok(out)
}

/// Maximum norm over the cone slice `x0 = m`; `None` for an empty slice.
pub fn max_norm_in_slice(m: i128) -> Result<Option<i128>> {
    slice_max(m, false)
}

/// Maximum norm over `P(m)` itself (gcd enforced).
pub fn max_primitive_norm_in_slice(m: i128) -> Result<Option<i128>> {
    slice_max(m, true)
}

fn slice_max(m: i128, primitive: bool) -> Result<Option<i128>> {
    check_slice(m)?;
    let mut best: Option<i128> = None;
    walk_slice(m, None, &mut |x| {
        let v = VinbergVector(*x);
        if !primitive || v.in_p() {
            let norm = x[1..].iter().map(|v| v * v).sum::<i128>() - m * m;
            best = Some(best.map_or(norm, |b| b.max(norm)));
        }
        ControlFlow::Continue(())
    });
    Ok(best)
}

/// Closed-form slice maximum, where one is known.
pub fn slice_max_formula(m: i128) -> Option<i128> {
    match (m, m.div_rem(&3)) {
        (5, _) => Some(-7),
        (6, _) => Some(-5),
        (8, _) => Some(-12),
        (_, (q, 0)) if q > 2 => Some(5 - 4 * q),
        (_, (q, 1)) if q >= 1 => Some(1 - 4 * q),
        (_, (q, 2)) if q >= 3 => Some(9 - 8 * q),
        _ => None,
    }
}

/// The vector attaining [`slice_max_formula`].
pub fn slice_maximizer(m: i128) -> Option<VinbergVector> {
    let build = |head: &[i128], body: i128, tail: &[i128]| {
        let mut x = [0i128; 11];
        let n_body = 11 - head.len() - tail.len();
        let coords = head.iter().copied().chain(std::iter::repeat_n(body, n_body)).chain(tail.iter().copied());
        for (xi, c) in x.iter_mut().zip(coords) {
            *xi = c;
        }
        VinbergVector(x)
    };
    slice_max_formula(m)?;
    Some(match (m, m.div_rem(&3)) {
        (5, _) => build(&[5, 3], 1, &[]),
        (6, _) => build(&[6], 2, &[1, 1, 1]),
        (8, _) => build(&[8, 4], 2, &[]),
        (_, (q, 0)) => build(&[m], q, &[q - 2, 1]),
        (_, (q, 1)) => build(&[m, q + 1], q, &[1]),
        (_, (q, _)) => build(&[m, q + 2], q, &[3]),
    })
}

/// Depth-first walk over the cone slice `x0 = m` in descending
/// lexicographic order. With `squares = Some(s)` only vectors with
/// `x1² + ... + x10² = s` are visited.
fn walk_slice(m: i128, squares: Option<i128>, f: &mut dyn FnMut(&[i128; 11]) -> ControlFlow<()>) {
    if squares.is_some_and(|s| s < 10) {
        return;
    }
    let mut x = [0i128; 11];
    x[0] = m;
    let _ = descend(1, m, 0, 0, m, squares, &mut x, f);
}

#[allow(clippy::too_many_arguments)]
fn descend(
    pos: usize,
    prev: i128,
    sum: i128,
    sq: i128,
    m: i128,
    squares: Option<i128>,
    x: &mut [i128; 11],
    f: &mut dyn FnMut(&[i128; 11]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    if pos == 11 {
        return f(x);
    }
    // coordinates after this one, each at least 1
    let rest = (10 - pos) as i128;
    let mut hi = prev.min(3 * m - 1 - sum - rest);
    if pos <= 3 {
        let head_rest = (3 - pos) as i128;
        let head = x[1..pos].iter().sum::<i128>();
        hi = hi.min(m - head - head_rest);
    }
    for v in (1..=hi).rev() {
        if let Some(s) = squares {
            let lo_sq = sq + v * v + rest;
            let hi_sq = sq + v * v * (rest + 1);
            if lo_sq > s {
                continue;
            }
            if hi_sq < s {
                break;
            }
        }
        x[pos] = v;
        descend(pos + 1, v, sum + v, sq + v * v, m, squares, x, f)?;
    }
    ControlFlow::Continue(())
}
