//! Borel transforms of the normalized Airy WKB solutions.
//!
//! With `s = 3y/(4 x^{3/2}) + 1/2` the transform of `psi_+` is
//! `sqrt(3)/(2 sqrt(pi) x) * sum_n b_n s^{n-1/2}` with `b_n = c_n (4/3)^n / (1/2)_n`.
//! For `psi_-` the same coefficients appear in powers of `1 - s`, together with a factor
//! `i` coming from `(s-1)^{1/2} = e^{-i pi/2} (1-s)^{1/2}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::airy_wkb::{factorial, pochhammer, WkbCoefficientStream};
use crate::series::{q, ExactScalar, Exponent, PuiseuxSeries, Q};
use crate::Sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BasePoint {
    /// `s = 0`, i.e. `y = -(2/3) x^{3/2}`.
    S0,
    /// `s = 1`, i.e. `y = +(2/3) x^{3/2}`.
    S1,
}

/// Symbolic factor kept outside the rational coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Prefactor {
    /// `sqrt(3) / (2 sqrt(pi) x)` is always present.
    pub imaginary_unit: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BorelSeries {
    pub sign: Sign,
    pub base_point: BasePoint,
    /// Series in `s` (sign +) or `1-s` (sign -), starting at exponent -1/2.
    pub terms: PuiseuxSeries,
    pub prefactor: Prefactor,
}

pub const VAR_S: &str = "s";
pub const VAR_ONE_MINUS_S: &str = "1-s";

/// `b_n = c_n (4/3)^n / (1/2)_n`.
pub fn borel_coefficients(stream: &WkbCoefficientStream) -> Vec<Q> {
    stream
        .coeffs
        .iter()
        .enumerate()
        .map(|(n, c)| {
            let mut b = c / pochhammer(&q(1, 2), n as u64);
            for _ in 0..n {
                b *= q(4, 3);
            }
            b
        })
        .collect()
}

/// Term-by-term Borel transform of a normalized WKB stream.
///
/// For sign - the raw coefficients of `(s-1)^{n-1/2}` are `(-1)^n b_n`; rewriting in
/// `1-s` cancels the sign and leaves the factor `i` recorded in the prefactor.
pub fn borel_transform(stream: &WkbCoefficientStream) -> BorelSeries {
    let b = borel_coefficients(stream);
    let n = b.len() as i64;
    let (var, base, imaginary_unit) = match stream.sign {
        Sign::Plus => (VAR_S, BasePoint::S0, false),
        Sign::Minus => (VAR_ONE_MINUS_S, BasePoint::S1, true),
    };
    let sign_flip = |k: usize| if stream.sign == Sign::Minus && k % 2 == 1 { -1 } else { 1 };
    let terms = PuiseuxSeries::from_terms(
        var,
        b.iter().enumerate().map(|(k, bk)| {
            // bk carries (-1)^k from c_k^-, and (s-1)^k = (-1)^k (1-s)^k cancels it
            let c = bk.clone() * Q::from_integer(sign_flip(k).into());
            (Exponent::halves(2 * k as i64 - 1), ExactScalar::rational(c))
        }),
        Some(Exponent::halves(2 * n - 1)),
    );
    BorelSeries { sign: stream.sign, base_point: base, terms, prefactor: Prefactor { imaginary_unit } }
}

/// Gauss coefficients `(1/6)_n (5/6)_n / ((1/2)_n n!)` of `2F1(1/6, 5/6; 1/2; .)`.
///
/// Both signs share the coefficients; the sign only selects the argument `s` or `1-s`.
pub fn hypergeometric_oracle(_sign: Sign, n_terms: usize) -> Vec<Q> {
    (0..n_terms as u64)
        .map(|n| {
            pochhammer(&q(1, 6), n) * pochhammer(&q(5, 6), n)
                / (pochhammer(&q(1, 2), n) * Q::from_integer(factorial(n)))
        })
        .collect()
}

/// `s = 3y / (4 x^{3/2}) + 1/2` with the principal `x^{3/2}`.
pub fn s_of_y(x: Complex64, y: Complex64) -> Complex64 {
    y * 3.0 / (x.powf(1.5) * 4.0) + 0.5
}

pub fn y_of_s(x: Complex64, s: Complex64) -> Complex64 {
    (s - 0.5) * x.powf(1.5) * (4.0 / 3.0)
}

impl BorelSeries {
    /// Rational coefficient of `sigma^{n-1/2}`.
    pub fn coefficient(&self, n: usize) -> Q {
        self.terms.coeff(Exponent::halves(2 * n as i64 - 1)).a
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Partial sum at `s`, including the prefactor; `sigma^{1/2}` is taken principal.
    pub fn eval(&self, x: Complex64, s: Complex64) -> Complex64 {
        let sigma = match self.base_point {
            BasePoint::S0 => s,
            BasePoint::S1 => 1.0 - s,
        };
        let pre = 3f64.sqrt() / (2.0 * std::f64::consts::PI.sqrt() * x);
        let i = if self.prefactor.imaginary_unit { Complex64::i() } else { Complex64::new(1.0, 0.0) };
        pre * i * self.terms.eval_at_sqrt(sigma.sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy_wkb::wkb_coefficient_stream;
    use crate::series::qi;

    #[test]
    fn first_coefficients() {
        let plus = borel_transform(&wkb_coefficient_stream(4, Sign::Plus).unwrap());
        assert_eq!(plus.coefficient(0), qi(1));
        assert_eq!(plus.coefficient(1), q(5, 18));
        assert_eq!(plus.coefficient(2), q(385, 1944));
        assert_eq!(plus.terms.valuation(), Some(Exponent::halves(-1)));
        assert!(!plus.prefactor.imaginary_unit);
        let minus = borel_transform(&wkb_coefficient_stream(4, Sign::Minus).unwrap());
        assert!(minus.prefactor.imaginary_unit);
        assert_eq!(minus.terms.rename(VAR_S), plus.terms);
    }

    #[test]
    fn oracle_agrees() {
        let h = hypergeometric_oracle(Sign::Plus, 3);
        assert_eq!(h, vec![qi(1), q(5, 18), q(385, 1944)]);
        for sign in [Sign::Plus, Sign::Minus] {
            let b = borel_transform(&wkb_coefficient_stream(10, sign).unwrap());
            let h = hypergeometric_oracle(sign, 11);
            for (n, hn) in h.iter().enumerate() {
                assert_eq!(&b.coefficient(n), hn);
            }
        }
    }

    #[test]
    fn singular_points_map_to_anchors() {
        let x = Complex64::from_polar(1.3, 0.4);
        let y0 = -x.powf(1.5) * (2.0 / 3.0);
        assert!(s_of_y(x, y0).norm() < 1e-14);
        assert!((s_of_y(x, -y0) - 1.0).norm() < 1e-14);
        let s = Complex64::new(0.3, -0.2);
        assert!((s_of_y(x, y_of_s(x, s)) - s).norm() < 1e-14);
    }
}
