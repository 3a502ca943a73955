//! Positive definite binary quadratic forms `p x² + q xy + r y²`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::form::{Sl2Matrix, TranscendentalForm};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinaryForm {
    p: BigInt,
    q: BigInt,
    r: BigInt,
}

impl BinaryForm {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>, r: impl Into<BigInt>) -> Result<Self> {
        let f = Self { p: p.into(), q: q.into(), r: r.into() };
        if !f.p.is_positive() || !f.discriminant().is_negative() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(f)
    }

    /// The form `a x² + c xy + b y²` attached to `[[2a, c], [c, 2b]]`.
    pub fn from_transcendental(t: &TranscendentalForm) -> Self {
        Self::new(t.a(), t.c(), t.b()).expect("transcendental forms are positive definite")
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn r(&self) -> &BigInt {
        &self.r
    }

    pub fn coefficients_i64(&self) -> Option<(i64, i64, i64)> {
        Some((self.p.to_i64()?, self.q.to_i64()?, self.r.to_i64()?))
    }

    /// `q² - 4pr`, negative for every valid form.
    pub fn discriminant(&self) -> BigInt {
        &self.q * &self.q - BigInt::from(4) * &self.p * &self.r
    }

    pub fn evaluate(&self, x: impl Into<BigInt>, y: impl Into<BigInt>) -> BigInt {
        let (x, y) = (x.into(), y.into());
        &self.p * &x * &x + &self.q * &x * &y + &self.r * &y * &y
    }

    /// `f(x x' + y y', z x' + w y')` for `g = [[x, y], [z, w]]`.
    pub fn transform(&self, g: &Sl2Matrix) -> Self {
        let (x, y, z, w) = g.entries_big();
        let (p, q, r) = (&self.p, &self.q, &self.r);
        Self {
            p: p * &x * &x + q * &x * &z + r * &z * &z,
            q: BigInt::from(2) * p * &x * &y + q * (&x * &w + &y * &z) + BigInt::from(2) * r * &z * &w,
            r: p * &y * &y + q * &y * &w + r * &w * &w,
        }
    }

    /// `|q| <= p <= r`, with `q >= 0` whenever `|q| = p` or `p = r`.
    pub fn is_reduced(&self) -> bool {
        let aq = self.q.abs();
        if aq > self.p || self.p > self.r {
            return false;
        }
        if (aq == self.p || self.p == self.r) && self.q.is_negative() {
            return false;
        }
        true
    }

    /// Gauss reduction. Returns the unique reduced form in the class and a
    /// matrix `g` with `self.transform(g) == reduced`.
    pub fn reduce(&self) -> (BinaryForm, Sl2Matrix) {
        let mut f = self.clone();
        // accumulated transform [x, y, z, w], kept wide until the end
        let [mut x, mut y, mut z, mut w] = [BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one()];
        loop {
            // translate by [[1, t], [0, 1]] so that q lands in (-p, p]
            let two_p = BigInt::from(2) * &f.p;
            let t = (&f.p - &f.q).div_floor(&two_p);
            if !t.is_zero() {
                f.r = &f.p * &t * &t + &f.q * &t + &f.r;
                f.q += &two_p * &t;
                y += &x * &t;
                w += &z * &t;
            }
            if f.p > f.r || (f.p == f.r && f.q.is_negative()) {
                // swap by [[0, -1], [1, 0]]
                std::mem::swap(&mut f.p, &mut f.r);
                f.q = -std::mem::take(&mut f.q);
                (x, y) = (y, -x);
                (z, w) = (w, -z);
                continue;
            }
            break;
        }
        let fit = |v: BigInt| v.to_i128().expect("reduction transform fits in i128");
        let g = Sl2Matrix::new(fit(x), fit(y), fit(z), fit(w)).expect("product of unimodular steps");
        (f, g)
    }

    /// Whether `f(x, y) = 1` has an integer solution: the minimum of a
    /// reduced positive definite form is its leading coefficient.
    pub fn represents_one(&self) -> bool {
        self.reduce().0.p.is_one()
    }

    /// A solution of `f(x, y) = 1`, if one exists.
    pub fn representation_of_one(&self) -> Option<(i128, i128)> {
        let (red, g) = self.reduce();
        if !red.p.is_one() {
            return None;
        }
        let [[x, _], [z, _]] = g.entries();
        Some((x, z))
    }

    /// The form `a x² + (c - 2a) xy + (a + b - c) y²` whose values govern
    /// roots in the complement of the even-`c` embedding. It is `(a, c, b)`
    /// after `x -> x - y`.
    pub fn shifted(t: &TranscendentalForm) -> Self {
        let (a, b, c) = (BigInt::from(t.a()), BigInt::from(t.b()), BigInt::from(t.c()));
        Self::new(a.clone(), &c - BigInt::from(2) * &a, &a + &b - &c).expect("equivalent to a definite form")
    }
}

impl std::fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.p, self.q, self.r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(p: i64, q: i64, r: i64) -> BinaryForm {
        BinaryForm::new(p, q, r).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(form(1, 0, 1).evaluate(1, 0), 1.into());
        assert_eq!(form(2, 2, 3).evaluate(1, -1), 3.into());
        assert_eq!(form(1, 1, 1).evaluate(1, 1), 3.into());
    }

    #[test]
    fn rejects_indefinite() {
        assert_eq!(BinaryForm::new(1, 3, 1), Err(Error::NotPositiveDefinite));
        assert_eq!(BinaryForm::new(-1, 0, -1), Err(Error::NotPositiveDefinite));
        assert_eq!(BinaryForm::new(1, 2, 1), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn reduce_examples() {
        let (r, g) = form(1, 0, 1).reduce();
        assert_eq!(r, form(1, 0, 1));
        assert_eq!(g, Sl2Matrix::IDENTITY);

        let (r, g) = form(5, 4, 1).reduce();
        assert_eq!(r, form(1, 0, 1));
        assert_eq!(form(5, 4, 1).transform(&g), r);

        let (r, g) = form(1, -2, 4).reduce();
        assert_eq!(r, form(1, 0, 3));
        assert_eq!(form(1, -2, 4).transform(&g), r);
    }

    #[test]
    fn reduce_boundary_normalization() {
        // (2, -2, 3) ~ (2, 2, 3): |q| = p forces q >= 0
        assert_eq!(form(2, -2, 3).reduce().0, form(2, 2, 3));
        // (3, -1, 3) ~ (3, 1, 3): p = r forces q >= 0
        assert_eq!(form(3, -1, 3).reduce().0, form(3, 1, 3));
    }

    #[test]
    fn represents_one_examples() {
        assert!(form(1, 0, 5).represents_one());
        assert!(!form(2, 2, 3).represents_one());
        assert!(form(5, 4, 1).represents_one());
        let f = form(5, 4, 1);
        let (x, y) = f.representation_of_one().unwrap();
        assert_eq!(f.evaluate(x, y), 1.into());
        assert_eq!(form(2, 2, 3).representation_of_one(), None);
    }

    #[test]
    fn shifted_examples() {
        let t = TranscendentalForm::new(1, 1, 0).unwrap();
        assert_eq!(BinaryForm::shifted(&t), form(1, -2, 2));
        let t = TranscendentalForm::new(2, 3, 2).unwrap();
        assert_eq!(BinaryForm::shifted(&t), form(2, -2, 3));
    }

    #[test]
    fn huge_coefficients() {
        let t = TranscendentalForm::new(i64::MAX / 4, i64::MAX / 4, i64::MAX / 3).unwrap();
        let f = BinaryForm::from_transcendental(&t);
        let (red, g) = f.reduce();
        assert!(red.is_reduced());
        assert_eq!(f.transform(&g), red);
        assert_eq!(red.discriminant(), f.discriminant());
    }
}
