//! Exact arithmetic in the quadratic field Q(sqrt 3).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// `a + b*sqrt(3)` with rational `a`, `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    pub a: Q,
    pub b: Q,
}

impl ExactScalar {
    pub fn new(a: Q, b: Q) -> Self {
        ExactScalar { a, b }
    }

    pub fn rational(a: Q) -> Self {
        ExactScalar { a, b: Q::zero() }
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::rational(q(n, d))
    }

    pub fn int(n: i64) -> Self {
        Self::rational(qi(n))
    }

    pub fn sqrt3() -> Self {
        ExactScalar { a: Q::zero(), b: Q::one() }
    }

    /// `b*sqrt(3)`.
    pub fn surd(b: Q) -> Self {
        ExactScalar { a: Q::zero(), b }
    }

    pub fn zero() -> Self {
        Self::rational(Q::zero())
    }

    pub fn one() -> Self {
        Self::rational(Q::one())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        ExactScalar { a: self.a.clone(), b: -self.b.clone() }
    }

    /// Field norm `a^2 - 3 b^2`.
    pub fn norm(&self) -> Q {
        &self.a * &self.a - qi(3) * &self.b * &self.b
    }

    pub fn scale(&self, r: &Q) -> Self {
        ExactScalar { a: &self.a * r, b: &self.b * r }
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::ZeroScalar);
        }
        let c = self.conj();
        Ok(ExactScalar { a: c.a / &n, b: c.b / &n })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact square root inside Q(sqrt 3), if one exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.b.is_zero() {
            if let Some(r) = rational_sqrt(&self.a) {
                return Some(Self::rational(r));
            }
            // a = 3 q^2 gives q sqrt 3
            return rational_sqrt(&(&self.a / qi(3))).map(Self::surd);
        }
        // (p + q sqrt3)^2 = p^2 + 3q^2 + 2pq sqrt3, with P = p^2 a root of
        // P^2 - a P + 3 b^2 / 4 = 0
        let disc = rational_sqrt(&self.norm())?;
        let two = qi(2);
        for cand in [(&self.a + &disc) / &two, (&self.a - &disc) / &two] {
            if cand.is_positive() {
                if let Some(p) = rational_sqrt(&cand) {
                    let qv = &self.b / (&two * &p);
                    let r = ExactScalar { a: p, b: qv };
                    if &(&r * &r) == self {
                        return Some(r);
                    }
                }
            }
        }
        None
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * 3f64.sqrt()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }
}

fn rational_sqrt(r: &Q) -> Option<Q> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(BigRational::new(sn, sd))
    } else {
        None
    }
}

impl From<Q> for ExactScalar {
    fn from(a: Q) -> Self {
        Self::rational(a)
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar { a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar { a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar {
            a: &self.a * &o.a + qi(3) * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: ExactScalar) -> ExactScalar {
        &self + &o
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: ExactScalar) -> ExactScalar {
        &self - &o
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: ExactScalar) -> ExactScalar {
        &self * &o
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, o: &ExactScalar) {
        self.a += &o.a;
        self.b += &o.b;
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { a: -self.a, b: -self.b }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { a: -self.a.clone(), b: -self.b.clone() }
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*sqrt(3)", self.b),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{} - {}*sqrt(3)", self.a, -self.b.clone())
                } else {
                    write!(f, "{} + {}*sqrt(3)", self.a, self.b)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt3_squares_to_three() {
        let s = ExactScalar::sqrt3();
        assert_eq!(&s * &s, ExactScalar::int(3));
    }

    #[test]
    fn inverse_roundtrip() {
        let x = ExactScalar::new(q(1, 4), q(-2, 7));
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        assert!(ExactScalar::zero().inv().is_err());
    }

    #[test]
    fn exact_square_roots() {
        let x = ExactScalar::new(q(2, 3), q(1, 5));
        let sq = &x * &x;
        let r = sq.sqrt().unwrap();
        assert!(r == x || r == -x.clone());
        assert_eq!(ExactScalar::ratio(3, 16).sqrt(), Some(ExactScalar::surd(q(1, 4))));
        assert_eq!(ExactScalar::int(2).sqrt(), None);
        assert_eq!(ExactScalar::int(-4).sqrt(), None);
    }

    #[test]
    fn float_value() {
        let x = ExactScalar::new(q(1, 2), q(1, 1));
        assert!((x.to_f64() - (0.5 + 3f64.sqrt())).abs() < 1e-15);
    }
}
