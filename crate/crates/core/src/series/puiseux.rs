use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde_json::{json, Number, Value};

use super::exponent::Exponent;
use super::formal::{binomial_coeff, compose, exp_coeff, log1p_coeff, FormalSeries};
use super::scalar::{q, ExactScalar, Q};
use crate::error::{Error, Result};

/// Truncated series in half-integer powers of one variable with coefficients in Q(sqrt 3).
///
/// `truncation == None` marks an exact (finite) expression; otherwise every stored
/// exponent is strictly below the truncation and the remainder is `O(var^truncation)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PuiseuxSeries {
    variable: String,
    terms: BTreeMap<Exponent, ExactScalar>,
    truncation: Option<Exponent>,
}

fn min_opt(a: Option<Exponent>, b: Option<Exponent>) -> Option<Exponent> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl PuiseuxSeries {
    pub fn zero(variable: &str) -> Self {
        PuiseuxSeries { variable: variable.to_string(), terms: BTreeMap::new(), truncation: None }
    }

    pub fn one(variable: &str) -> Self {
        Self::monomial(variable, Exponent::ZERO, ExactScalar::one())
    }

    pub fn monomial(variable: &str, e: Exponent, c: ExactScalar) -> Self {
        Self::from_terms(variable, [(e, c)], None)
    }

    /// `O(var^t)`.
    pub fn big_o(variable: &str, t: Exponent) -> Self {
        Self::from_terms(variable, std::iter::empty(), Some(t))
    }

    pub fn from_terms(
        variable: &str,
        terms: impl IntoIterator<Item = (Exponent, ExactScalar)>,
        truncation: Option<Exponent>,
    ) -> Self {
        let mut map: BTreeMap<Exponent, ExactScalar> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert_with(ExactScalar::zero) += &c;
        }
        let mut s = PuiseuxSeries { variable: variable.to_string(), terms: map, truncation };
        s.normalize();
        s
    }

    /// Rational coefficients given as `(halves, num, den)`.
    pub fn from_rationals(variable: &str, terms: &[(i64, i64, i64)], truncation: Option<i64>) -> Self {
        Self::from_terms(
            variable,
            terms.iter().map(|&(h, n, d)| (Exponent::halves(h), ExactScalar::ratio(n, d))),
            truncation.map(Exponent::halves),
        )
    }

    fn normalize(&mut self) {
        let t = self.truncation;
        self.terms.retain(|e, c| !c.is_zero() && t.is_none_or(|t| *e < t));
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, ExactScalar> {
        &self.terms
    }

    pub fn truncation(&self) -> Option<Exponent> {
        self.truncation
    }

    pub fn is_exact(&self) -> bool {
        self.truncation.is_none()
    }

    pub fn coeff(&self, e: Exponent) -> ExactScalar {
        self.terms.get(&e).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn valuation(&self) -> Option<Exponent> {
        self.terms.keys().next().copied()
    }

    pub fn leading(&self) -> Option<(Exponent, &ExactScalar)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lower bound on the true valuation, `None` for the exact zero.
    fn effective_valuation(&self) -> Option<Exponent> {
        self.valuation().or(self.truncation)
    }

    /// Drops everything at or above `t` and tightens the truncation.
    pub fn truncate(&self, t: Exponent) -> Self {
        let mut s = self.clone();
        s.truncation = min_opt(s.truncation, Some(t));
        s.normalize();
        s
    }

    pub fn rename(&self, variable: &str) -> Self {
        let mut s = self.clone();
        s.variable = variable.to_string();
        s
    }

    fn check_var(&self, other: &Self) -> Result<()> {
        if self.variable != other.variable {
            return Err(Error::VariableMismatch(self.variable.clone(), other.variable.clone()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(*e).or_insert_with(ExactScalar::zero) += c;
        }
        let mut s = PuiseuxSeries {
            variable: self.variable.clone(),
            terms,
            truncation: min_opt(self.truncation, other.truncation),
        };
        s.normalize();
        Ok(s)
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in s.terms.values_mut() {
            *c = -&*c;
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            let mut z = Self::zero(&self.variable);
            z.truncation = self.truncation;
            return z;
        }
        let mut s = self.clone();
        for v in s.terms.values_mut() {
            *v = &*v * c;
        }
        s
    }

    /// Multiplies by `c * var^e`.
    pub fn mul_monomial(&self, e: Exponent, c: &ExactScalar) -> Self {
        let mut s = self.scale(c);
        s.terms = s.terms.into_iter().map(|(k, v)| (k + e, v)).collect();
        s.truncation = s.truncation.map(|t| t + e);
        s
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        if (self.is_exact() && self.is_zero()) || (other.is_exact() && other.is_zero()) {
            return Ok(Self::zero(&self.variable));
        }
        let truncation = min_opt(
            self.truncation.zip(other.effective_valuation()).map(|(t, v)| t + v),
            other.truncation.zip(self.effective_valuation()).map(|(t, v)| t + v),
        );
        let mut terms: BTreeMap<Exponent, ExactScalar> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = *ea + *eb;
                if truncation.is_none_or(|t| e < t) {
                    *terms.entry(e).or_insert_with(ExactScalar::zero) += &(ca * cb);
                }
            }
        }
        let mut s = PuiseuxSeries { variable: self.variable.clone(), terms, truncation };
        s.normalize();
        Ok(s)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one(&self.variable);
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Splits `self = c * var^v * (1 + r)`.
    fn factor_leading(&self) -> Result<(Exponent, ExactScalar, Self)> {
        let (v, c) = match self.leading() {
            Some((v, c)) => (v, c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let rest = self
            .mul_monomial(-v, &c.inv()?)
            .sub(&Self::one(&self.variable))?;
        Ok((v, c, rest))
    }

    pub fn inv(&self) -> Result<Self> {
        let (v, c, r) = self.factor_leading()?;
        let g = compose(&r, |k| if k % 2 == 0 { Q::one() } else { -Q::one() }, "inv")?;
        Ok(g.mul_monomial(-v, &c.inv()?))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_var(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.mul(&other.inv()?)
    }

    pub fn derivative(&self) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (*e - Exponent::int(1), c.scale(&e.to_rational())));
        Self::from_terms(&self.variable, terms, self.truncation.map(|t| t - Exponent::int(1)))
    }

    /// Termwise primitive without constant of integration.
    pub fn integrate(&self) -> Result<Self> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            if *e == Exponent::int(-1) {
                return Err(Error::LogarithmicTerm);
            }
            let e1 = *e + Exponent::int(1);
            out.push((e1, c.scale(&(Q::one() / e1.to_rational()))));
        }
        Ok(Self::from_terms(&self.variable, out, self.truncation.map(|t| t + Exponent::int(1))))
    }

    fn require_positive_valuation(&self, op: &str) -> Result<()> {
        match self.valuation() {
            Some(v) if v <= Exponent::ZERO => Err(Error::Valuation(format!(
                "{op} requires positive valuation, series starts at {}^{v}",
                self.variable
            ))),
            _ => Ok(()),
        }
    }

    pub fn exp(&self) -> Result<Self> {
        self.require_positive_valuation("exp")?;
        compose(self, exp_coeff, "exp")
    }

    pub fn log1p(&self) -> Result<Self> {
        self.require_positive_valuation("log1p")?;
        compose(self, log1p_coeff, "log1p")
    }

    /// `self^alpha` via the leading monomial; needs an exact root of the leading coefficient.
    fn power_half(&self, numer: i64) -> Result<Self> {
        let (v, c, r) = self.factor_leading()?;
        let root = c.sqrt().ok_or_else(|| Error::NotASquare(c.to_string()))?;
        let alpha = q(numer, 2);
        let g = compose(&r, |k| binomial_coeff(&alpha, k), "sqrt")?;
        let lead = if numer > 0 { root } else { root.inv()? };
        Ok(g.mul_monomial(v.times(numer).half()?, &lead))
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Valuation("sqrt of a series with no known terms".into()));
        }
        self.power_half(1)
    }

    pub fn inv_sqrt(&self) -> Result<Self> {
        self.power_half(-1)
    }

    /// Numeric value, given a chosen square root `t` of the variable.
    pub fn eval_at_sqrt(&self, t: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| c.to_c64() * t.powi(e.in_halves() as i32))
            .sum()
    }

    /// Exact agreement of all coefficients strictly below `order`.
    pub fn agrees_below(&self, other: &Self, order: Exponent) -> bool {
        self.variable == other.variable
            && self.truncate(order).terms == other.truncate(order).terms
            && self.truncation.is_none_or(|t| t >= order)
            && other.truncation.is_none_or(|t| t >= order)
    }

    pub fn to_json(&self) -> Value {
        let num = |b: &BigInt| Value::Number(Number::from_str(&b.to_string()).expect("integer literal"));
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let (n, d) = e.num_den();
                json!([n, d, num(c.a.numer()), num(c.a.denom()), num(c.b.numer()), num(c.b.denom())])
            })
            .collect();
        let truncation = match self.truncation {
            Some(t) => {
                let (n, d) = t.num_den();
                json!([n, d])
            }
            None => Value::Null,
        };
        json!({ "variable": self.variable, "terms": terms, "truncation": truncation })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Precondition(format!("malformed series JSON: {m}"));
        let int = |v: &Value| -> Result<BigInt> {
            match v {
                Value::Number(n) => BigInt::from_str(&n.to_string()).map_err(|_| bad("integer")),
                _ => Err(bad("integer")),
            }
        };
        let small = |v: &Value| -> Result<i64> { v.as_i64().ok_or_else(|| bad("exponent")) };
        let variable = v["variable"].as_str().ok_or_else(|| bad("variable"))?;
        let mut terms = Vec::new();
        for t in v["terms"].as_array().ok_or_else(|| bad("terms"))? {
            let t = t.as_array().filter(|t| t.len() == 6).ok_or_else(|| bad("term arity"))?;
            let e = Exponent::new(small(&t[0])?, small(&t[1])?)?;
            let rat = |n: &Value, d: &Value| -> Result<Q> {
                let d = int(d)?;
                if d.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Ok(Q::new(int(n)?, d))
            };
            terms.push((e, ExactScalar::new(rat(&t[2], &t[3])?, rat(&t[4], &t[5])?)));
        }
        let truncation = match &v["truncation"] {
            Value::Null => None,
            Value::Array(a) if a.len() == 2 => Some(Exponent::new(small(&a[0])?, small(&a[1])?)?),
            _ => return Err(bad("truncation")),
        };
        Ok(Self::from_terms(variable, terms, truncation))
    }
}

impl FormalSeries for PuiseuxSeries {
    fn unit_like(&self) -> Self {
        Self::one(&self.variable)
    }
    fn add_series(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }
    fn mul_series(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }
    fn scale_rational(&self, c: &Q) -> Self {
        self.scale(&ExactScalar::rational(c.clone()))
    }
    fn valuation_key(&self) -> Option<i64> {
        self.valuation().map(Exponent::in_halves)
    }
    fn truncation_key(&self) -> Option<i64> {
        self.truncation.map(Exponent::in_halves)
    }
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c})*{}^({e})", self.variable)?;
            }
        }
        if let Some(t) = self.truncation {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "O({}^({t}))", self.variable)?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}
