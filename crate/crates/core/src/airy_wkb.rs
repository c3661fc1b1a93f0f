//! Formal WKB data of the Airy equation.
//!
//! The logarithmic derivative `S = psi'/psi` solves `S' + S^2 = eta^2 x`; expanding
//! `S = sum_{j >= -1} eta^{-j} S_j` gives a recursion in which every `S_j` is the single
//! monomial `c_j x^{-(3j+2)/2}`.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::series::{q, qi, EtaExpansion, ExactScalar, Exponent, PuiseuxSeries, Q};
use crate::Sign;

pub const DEFAULT_ORDER: usize = 24;
const X: &str = "x";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiccatiSolution {
    pub branch_sign: Sign,
    /// `S_{-1}, S_0, ..., S_order`.
    pub s_terms: EtaExpansion,
}

impl RiccatiSolution {
    pub fn order(&self) -> i64 {
        self.s_terms.truncation()
    }

    /// `S_j` for `j >= -1`.
    pub fn s(&self, j: i64) -> PuiseuxSeries {
        self.s_terms.coeff(j)
    }

    /// Rational coefficient `c_j` of the monomial `S_j = c_j x^{-(3j+2)/2}`.
    pub fn coefficient(&self, j: i64) -> Q {
        self.s(j).coeff(s_exponent(j)).a
    }
}

/// Exponent of `x` in `S_j`.
pub fn s_exponent(j: i64) -> Exponent {
    Exponent::halves(-(3 * j + 2))
}

pub fn riccati_recurrence(order: usize, sign: Sign) -> RiccatiSolution {
    let lead = PuiseuxSeries::monomial(X, Exponent::halves(1), ExactScalar::int(sign.factor()));
    let factor = PuiseuxSeries::monomial(X, Exponent::halves(-1), ExactScalar::ratio(-sign.factor(), 2));
    let mut s: Vec<PuiseuxSeries> = vec![lead];
    // s[i] holds S_{i-1}
    for j in -1..order as i64 {
        let mut acc = s[(j + 1) as usize].derivative();
        for k in 0..=j {
            let prod = s[(k + 1) as usize].mul(&s[(j - k + 1) as usize]).expect("same variable");
            acc = acc.add(&prod).expect("same variable");
        }
        s.push(acc.mul(&factor).expect("same variable"));
    }
    let s_terms = EtaExpansion::from_terms(X, s.into_iter().enumerate().map(|(i, t)| (i as i64 - 1, t)), order as i64)
        .expect("single variable");
    RiccatiSolution { branch_sign: sign, s_terms }
}

/// `S' + S^2 - eta^2 x` for the truncated sum; only powers `eta^{-k}` with `k >= order` survive.
pub fn riccati_residual(r: &RiccatiSolution) -> Result<EtaExpansion> {
    let mut s = EtaExpansion::zero(X, i64::MAX / 4);
    for (k, a) in r.s_terms.terms() {
        s = s.add(&EtaExpansion::single(*k, a.clone(), i64::MAX / 4))?;
    }
    let x2 = EtaExpansion::single(-2, PuiseuxSeries::monomial(X, Exponent::int(1), ExactScalar::one()), i64::MAX / 4);
    s.derivative().add(&s.mul(&s)?)?.sub(&x2)
}

/// Splits `S^{(sign)} = sign * S_odd + S_even` by the parity of `j`.
pub fn split_odd_even(r: &RiccatiSolution) -> Result<(EtaExpansion, EtaExpansion)> {
    let n = r.order();
    if n < 2 {
        return Err(Error::InsufficientOrder { needed: 2, got: n });
    }
    let sign = ExactScalar::int(r.branch_sign.factor());
    let mut odd = EtaExpansion::zero(X, n);
    let mut even = EtaExpansion::zero(X, n);
    for (k, a) in r.s_terms.terms() {
        if k.rem_euclid(2) == 1 {
            odd = odd.add(&EtaExpansion::single(*k, a.scale(&sign), n))?;
        } else {
            even = even.add(&EtaExpansion::single(*k, a.clone(), n))?;
        }
    }
    Ok((odd, even))
}

/// `-1/2 d/dx log S_odd`, expanded to the truncation of `s_odd`.
pub fn log_derivative_half(s_odd: &EtaExpansion) -> Result<EtaExpansion> {
    let n = s_odd.truncation();
    let ratio = normalized_ratio(s_odd)?;
    let one = EtaExpansion::single(0, PuiseuxSeries::one(X), n);
    let log_r = ratio.sub(&one)?.log1p()?;
    // d/dx log(eta x^{1/2}) = 1/(2x)
    let base = EtaExpansion::single(0, PuiseuxSeries::monomial(X, Exponent::int(-1), ExactScalar::ratio(1, 2)), n);
    let half = ExactScalar::ratio(-1, 2);
    Ok(base.add(&log_r.derivative())?.map(|a| a.scale(&half)))
}

/// `S_odd / (eta x^{1/2}) = 1 + eta^{-2} A`.
fn normalized_ratio(s_odd: &EtaExpansion) -> Result<EtaExpansion> {
    s_odd.mul_monomial(1, &PuiseuxSeries::monomial(X, Exponent::halves(-1), ExactScalar::one()))
}

/// Termwise primitive in `x`, with no constants of integration.
pub fn integrate_s_odd(s_odd: &EtaExpansion) -> Result<EtaExpansion> {
    s_odd.try_map(PuiseuxSeries::integrate)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WkbCoefficientStream {
    pub sign: Sign,
    /// `c_n`, the coefficient of `(eta^{-1} x^{-3/2})^n`.
    pub coeffs: Vec<Q>,
}

/// Expands `eta^{1/2} x^{1/4} e^{-+(2/3) x^{3/2} eta} psi_+-` as
/// `(1 + eta^{-2} A)^{-1/2} exp(+-eta^{-1} B)` and reads off the coefficients.
pub fn wkb_coefficient_stream(order: usize, sign: Sign) -> Result<WkbCoefficientStream> {
    let n = order.max(2) as i64;
    let r = riccati_recurrence(n as usize, Sign::Plus);
    let (s_odd, _) = split_odd_even(&r)?;
    let prim = integrate_s_odd(&s_odd)?;
    let b = prim.sub(&EtaExpansion::single(-1, prim.coeff(-1), n))?;
    let signed_b = b.map(|a| a.scale(&ExactScalar::int(sign.factor())));
    let one = EtaExpansion::single(0, PuiseuxSeries::one(X), n);
    let ratio_minus_one = normalized_ratio(&s_odd)?.sub(&one)?;
    let prefactor = ratio_minus_one.one_plus_pow(&q(-1, 2))?;
    let psi = prefactor.mul(&signed_b.exp()?)?;
    let mut coeffs = Vec::with_capacity(order + 1);
    for k in 0..=order as i64 {
        let a = psi.coeff(k);
        let want = Exponent::halves(-3 * k);
        if a.len() > 1 || a.terms().keys().any(|e| *e != want) {
            return Err(Error::Verification(format!("coefficient of eta^-{k} is not a multiple of x^(-3{k}/2): {a}")));
        }
        let c = a.coeff(want);
        if !c.is_rational() {
            return Err(Error::Verification(format!("coefficient of eta^-{k} is irrational")));
        }
        coeffs.push(c.a);
    }
    Ok(WkbCoefficientStream { sign, coeffs })
}

/// Pochhammer symbol `(a)_n`.
pub fn pochhammer(a: &Q, n: u64) -> Q {
    let mut p = Q::one();
    for j in 0..n {
        p *= a + qi(j as i64);
    }
    p
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// `(+-3/4)^n (1/6)_n (5/6)_n / n!`, the coefficients of the explicit gamma-function form.
pub fn closed_form_coefficients(order: usize, sign: Sign) -> Vec<Q> {
    let ratio = q(3 * sign.factor(), 4);
    (0..=order as u64)
        .map(|n| {
            let mut p = pochhammer(&q(1, 6), n) * pochhammer(&q(5, 6), n) / Q::from_integer(factorial(n));
            for _ in 0..n {
                p *= &ratio;
            }
            p
        })
        .collect()
}

/// Checks that `(x, eta) -> (l^2 x, l^{-3} eta)` multiplies every term of `s_odd` by `l^{-2}`,
/// i.e. `3k + 2e = -2` for each stored `eta^{-k} x^e`.
pub fn homogeneity_defect(s_odd: &EtaExpansion) -> Option<(i64, Exponent)> {
    for (k, a) in s_odd.terms() {
        for e in a.terms().keys() {
            if 3 * k + e.in_halves() != -2 {
                return Some((*k, *e));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_terms() {
        let r = riccati_recurrence(3, Sign::Plus);
        assert_eq!(r.coefficient(-1), qi(1));
        assert_eq!(r.coefficient(0), q(-1, 4));
        assert_eq!(r.coefficient(1), q(-5, 32));
        assert_eq!(r.coefficient(2), q(-15, 64));
        assert_eq!(r.coefficient(3), q(-1105, 2048));
        for j in -1..=3 {
            assert_eq!(r.s(j).len(), 1);
            assert_eq!(r.s(j).valuation(), Some(s_exponent(j)));
        }
    }

    #[test]
    fn residual_lives_beyond_the_truncation() {
        for n in [2usize, 5, 9] {
            let r = riccati_recurrence(n, Sign::Minus);
            let res = riccati_residual(&r).unwrap();
            assert!(res.terms().keys().all(|k| *k >= n as i64), "order {n}: {res}");
            assert!(!res.terms().is_empty());
        }
    }

    #[test]
    fn odd_even_split() {
        let plus = riccati_recurrence(6, Sign::Plus);
        let minus = riccati_recurrence(6, Sign::Minus);
        let (odd, even) = split_odd_even(&plus).unwrap();
        let (odd_m, even_m) = split_odd_even(&minus).unwrap();
        assert_eq!(odd, odd_m);
        assert_eq!(even, even_m);
        assert_eq!(log_derivative_half(&odd).unwrap(), even);
        assert!(split_odd_even(&riccati_recurrence(1, Sign::Plus)).is_err());
    }

    #[test]
    fn primitive_of_s_odd() {
        let (odd, _) = split_odd_even(&riccati_recurrence(3, Sign::Plus)).unwrap();
        let p = integrate_s_odd(&odd).unwrap();
        assert_eq!(p.coeff(-1).coeff(Exponent::halves(3)), ExactScalar::ratio(2, 3));
        assert_eq!(p.coeff(1).coeff(Exponent::halves(-3)), ExactScalar::ratio(5, 48));
        assert_eq!(p.coeff(3).coeff(Exponent::halves(-9)), ExactScalar::ratio(1105, 9216));
        assert_eq!(homogeneity_defect(&odd), None);
    }

    #[test]
    fn stream_matches_closed_form() {
        for sign in [Sign::Plus, Sign::Minus] {
            let s = wkb_coefficient_stream(12, sign).unwrap();
            assert_eq!(s.coeffs, closed_form_coefficients(12, sign));
        }
        let p = wkb_coefficient_stream(2, Sign::Plus).unwrap();
        assert_eq!(p.coeffs, vec![qi(1), q(5, 48), q(385, 4608)]);
    }
}
