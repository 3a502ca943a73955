//! The transcendental lattice of a singular K3 surface, written as the
//! positive definite even Gram matrix `[[2a, c], [c, 2b]]`.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::IntegralLattice;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawForm", into = "RawForm")]
pub struct TranscendentalForm {
    a: i64,
    b: i64,
    c: i64,
    delta: i128,
}

#[derive(Serialize, Deserialize)]
struct RawForm {
    a: i64,
    b: i64,
    c: i64,
}

impl TryFrom<RawForm> for TranscendentalForm {
    type Error = Error;

    fn try_from(raw: RawForm) -> Result<Self> {
        Self::new(raw.a, raw.b, raw.c)
    }
}

impl From<TranscendentalForm> for RawForm {
    fn from(t: TranscendentalForm) -> Self {
        RawForm { a: t.a, b: t.b, c: t.c }
    }
}

/// The four parity classes of `(a, b, c)`, each stable under `SL2(Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParityClass {
    /// `a`, `b`, `c` all even.
    AllEven,
    /// `c` odd, `ab` even.
    OddCEvenProduct,
    /// `c` even, `a` or `b` odd.
    EvenCOddEntry,
    /// `abc` odd.
    AllOdd,
}

impl TranscendentalForm {
    /// Validates `a > 0`, `b > 0` and `Δ = 4ab - c² > 0`.
    ///
    /// `Δ` must also fit in an `i128`, which only excludes forms with
    /// `ab` close to `2^125`.
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let invalid = |reason| Error::InvalidForm { a, b, c, reason };
        if a <= 0 {
            return Err(invalid("a must be positive"));
        }
        if b <= 0 {
            return Err(invalid("b must be positive"));
        }
        let delta = BigInt::from(4) * a * b - BigInt::from(c) * c;
        if delta <= BigInt::from(0) {
            return Err(invalid("4ab - c^2 must be positive"));
        }
        let delta = delta.to_i128().ok_or(invalid("4ab - c^2 exceeds the supported range"))?;
        Ok(Self { a, b, c, delta })
    }

    /// Accepts the raw Gram entries `(2a, c, 2b)`; the diagonal must be even.
    pub fn from_gram(two_a: i64, c: i64, two_b: i64) -> Result<Self> {
        if two_a % 2 != 0 || two_b % 2 != 0 {
            return Err(Error::InvalidForm {
                a: two_a,
                b: two_b,
                c,
                reason: "gram diagonal must be even",
            });
        }
        Self::new(two_a / 2, two_b / 2, c)
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    /// `Δ = 4ab - c²`, the determinant of the Gram matrix.
    pub fn delta(&self) -> i128 {
        self.delta
    }

    pub fn to_lattice(&self) -> IntegralLattice {
        IntegralLattice::from_rows(&[vec![2 * self.a as i128, self.c as i128], vec![self.c as i128, 2 * self.b as i128]])
            .expect("symmetric")
    }

    pub fn parity_class(&self) -> ParityClass {
        let (a, b, c) = (self.a % 2 != 0, self.b % 2 != 0, self.c % 2 != 0);
        match (c, a || b, a && b) {
            (false, false, _) => ParityClass::AllEven,
            (false, true, _) => ParityClass::EvenCOddEntry,
            (true, _, false) => ParityClass::OddCEvenProduct,
            (true, _, true) => ParityClass::AllOdd,
        }
    }

    /// The form in the basis `(x u + z v, y u + w v)`, i.e. `γᵀ T γ`.
    pub fn apply_basis_change(&self, g: &Sl2Matrix) -> Result<Self> {
        let (a, b, c) = (BigInt::from(self.a), BigInt::from(self.b), BigInt::from(self.c));
        let (x, y, z, w) = g.entries_big();
        let a2 = &a * &x * &x + &c * &x * &z + &b * &z * &z;
        let b2 = &a * &y * &y + &c * &y * &w + &b * &w * &w;
        let c2 = BigInt::from(2) * &a * &x * &y + &c * (&x * &w + &y * &z) + BigInt::from(2) * &b * &w * &z;
        let fit = |v: BigInt| v.to_i64().ok_or(Error::Overflow("transformed form leaves the i64 range"));
        Self::new(fit(a2)?, fit(b2)?, fit(c2)?)
    }
}

impl std::fmt::Display for TranscendentalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(a={}, b={}, c={})", self.a, self.b, self.c)
    }
}

/// `[[x, y], [z, w]]` with `xw - yz = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[[i128; 2]; 2]", into = "[[i128; 2]; 2]")]
pub struct Sl2Matrix {
    x: i128,
    y: i128,
    z: i128,
    w: i128,
}

impl Sl2Matrix {
    pub const IDENTITY: Self = Self { x: 1, y: 0, z: 0, w: 1 };

    pub fn new(x: i128, y: i128, z: i128, w: i128) -> Result<Self> {
        let det = BigInt::from(x) * w - BigInt::from(y) * z;
        if det != BigInt::from(1) {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(Self { x, y, z, w })
    }

    pub fn entries(&self) -> [[i128; 2]; 2] {
        [[self.x, self.y], [self.z, self.w]]
    }

    pub(crate) fn entries_big(&self) -> (BigInt, BigInt, BigInt, BigInt) {
        (self.x.into(), self.y.into(), self.z.into(), self.w.into())
    }

    /// Matrix product `self * other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let (a, b, c, d) = self.entries_big();
        let (e, f, g, h) = other.entries_big();
        let fit = |v: BigInt| v.to_i128().ok_or(Error::Overflow("SL2 product leaves the i128 range"));
        Ok(Self {
            x: fit(&a * &e + &b * &g)?,
            y: fit(&a * &f + &b * &h)?,
            z: fit(&c * &e + &d * &g)?,
            w: fit(&c * &f + &d * &h)?,
        })
    }
}

impl TryFrom<[[i128; 2]; 2]> for Sl2Matrix {
    type Error = Error;

    fn try_from(m: [[i128; 2]; 2]) -> Result<Self> {
        Self::new(m[0][0], m[0][1], m[1][0], m[1][1])
    }
}

impl From<Sl2Matrix> for [[i128; 2]; 2] {
    fn from(g: Sl2Matrix) -> Self {
        g.entries()
    }
}
