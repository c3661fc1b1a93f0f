use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use super::scalar::{q, Q};
use crate::error::{Error, Result};

/// Half-integer exponent, stored as a count of halves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exponent(i64);

impl Exponent {
    pub const ZERO: Exponent = Exponent(0);

    pub fn halves(h: i64) -> Self {
        Exponent(h)
    }

    pub fn int(n: i64) -> Self {
        Exponent(2 * n)
    }

    /// `num/den`; anything that does not reduce to a denominator of 1 or 2 is rejected.
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::ExponentDenominator { num, den });
        }
        let twice = 2 * num;
        if twice % den != 0 {
            return Err(Error::ExponentDenominator { num, den });
        }
        Ok(Exponent(twice / den))
    }

    pub fn from_rational(r: &Q) -> Result<Self> {
        let n: i64 = r.numer().try_into().map_err(|_| Error::ExponentDenominator { num: 0, den: 0 })?;
        let d: i64 = r.denom().try_into().map_err(|_| Error::ExponentDenominator { num: n, den: 0 })?;
        Self::new(n, d)
    }

    pub fn in_halves(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Reduced `(num, den)` with `den` in {1, 2}.
    pub fn num_den(self) -> (i64, i64) {
        if self.is_integer() {
            (self.0 / 2, 1)
        } else {
            (self.0, 2)
        }
    }

    pub fn to_rational(self) -> Q {
        q(self.0, 2)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// Half of this exponent; fails unless the result is still a half-integer.
    pub fn half(self) -> Result<Self> {
        if self.0 % 2 != 0 {
            return Err(Error::ExponentDenominator { num: self.0, den: 4 });
        }
        Ok(Exponent(self.0 / 2))
    }

    pub fn times(self, k: i64) -> Self {
        Exponent(self.0 * k)
    }

    pub fn is_zero(self) -> bool {
        self.0.is_zero()
    }
}

impl Add for Exponent {
    type Output = Exponent;
    fn add(self, o: Exponent) -> Exponent {
        Exponent(self.0 + o.0)
    }
}

impl Sub for Exponent {
    type Output = Exponent;
    fn sub(self, o: Exponent) -> Exponent {
        Exponent(self.0 - o.0)
    }
}

impl Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        Exponent(-self.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.num_den() {
            (n, 1) => write!(f, "{n}"),
            (n, d) => write!(f, "{n}/{d}"),
        }
    }
}
