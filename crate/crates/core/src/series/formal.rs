//! Composition of a convergent power series with a formal series of positive valuation.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::scalar::{qi, Q};
use crate::error::{Error, Result};

/// Minimal interface shared by the truncated series types.
///
/// Valuations and truncations are measured in a common integer unit
/// (halves of an exponent for Puiseux series, powers of `1/eta` for eta expansions).
pub trait FormalSeries: Clone + Sized {
    fn unit_like(&self) -> Self;
    fn add_series(&self, other: &Self) -> Result<Self>;
    fn mul_series(&self, other: &Self) -> Result<Self>;
    fn scale_rational(&self, c: &Q) -> Self;
    /// Smallest stored key; `None` when no term is stored.
    fn valuation_key(&self) -> Option<i64>;
    /// Exclusive bound on the known keys; `None` for an exact value.
    fn truncation_key(&self) -> Option<i64>;
}

/// Evaluates `sum_k coeff(k) r^k`.
pub fn compose<T: FormalSeries>(r: &T, coeff: impl Fn(u64) -> Q, op: &'static str) -> Result<T> {
    let one = r.unit_like();
    let mut acc = one.scale_rational(&coeff(0));
    let v = match r.valuation_key() {
        Some(v) if v > 0 => v,
        Some(v) => {
            return Err(Error::Valuation(format!(
                "{op} needs an argument of positive valuation, got key {v}"
            )))
        }
        None => {
            // r is zero or O(t): only the constant term survives
            let tail = r.scale_rational(&coeff(1));
            return acc.add_series(&tail);
        }
    };
    let t = r.truncation_key().ok_or(Error::NeedsTruncation(op))?;
    let mut pow = r.clone();
    let mut k = 1u64;
    loop {
        let c = coeff(k);
        if !c.is_zero() {
            acc = acc.add_series(&pow.scale_rational(&c))?;
        }
        k += 1;
        if (k as i64) * v >= t {
            break;
        }
        pow = pow.mul_series(r)?;
    }
    Ok(acc)
}

pub fn exp_coeff(k: u64) -> Q {
    let mut f = BigInt::one();
    for j in 2..=k {
        f *= BigInt::from(j);
    }
    Q::new(BigInt::one(), f)
}

pub fn log1p_coeff(k: u64) -> Q {
    if k == 0 {
        Q::zero()
    } else {
        let s = if k % 2 == 1 { 1 } else { -1 };
        Q::new(BigInt::from(s), BigInt::from(k))
    }
}

/// Generalized binomial coefficient `binom(alpha, k)`.
pub fn binomial_coeff(alpha: &Q, k: u64) -> Q {
    let mut c = Q::one();
    for j in 0..k {
        c = c * (alpha - qi(j as i64)) / qi(j as i64 + 1);
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::scalar::q;

    #[test]
    fn coefficient_tables() {
        assert_eq!(exp_coeff(4), q(1, 24));
        assert_eq!(log1p_coeff(2), q(-1, 2));
        assert_eq!(binomial_coeff(&q(-1, 2), 2), q(3, 8));
        assert_eq!(binomial_coeff(&q(1, 2), 1), q(1, 2));
    }
}
