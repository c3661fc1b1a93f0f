use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;
use serde_json::{json, Value};

use super::formal::{binomial_coeff, compose, exp_coeff, log1p_coeff, FormalSeries};
use super::scalar::{ExactScalar, Q};
use super::PuiseuxSeries;
use crate::error::{Error, Result};

/// Formal expansion `sum_k eta^{-k} a_k(x)`, known exactly for `k <= truncation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaExpansion {
    variable: String,
    terms: BTreeMap<i64, PuiseuxSeries>,
    truncation: i64,
}

impl EtaExpansion {
    pub fn zero(variable: &str, truncation: i64) -> Self {
        EtaExpansion { variable: variable.to_string(), terms: BTreeMap::new(), truncation }
    }

    /// `eta^{-k} * a(x)`.
    pub fn single(k: i64, a: PuiseuxSeries, truncation: i64) -> Self {
        let mut e = Self::zero(a.variable(), truncation);
        e.insert(k, a);
        e
    }

    pub fn from_terms(variable: &str, terms: impl IntoIterator<Item = (i64, PuiseuxSeries)>, truncation: i64) -> Result<Self> {
        let mut e = Self::zero(variable, truncation);
        for (k, a) in terms {
            if a.variable() != variable {
                return Err(Error::VariableMismatch(variable.into(), a.variable().into()));
            }
            let sum = e.coeff(k).add(&a)?;
            e.insert(k, sum);
        }
        Ok(e)
    }

    fn insert(&mut self, k: i64, a: PuiseuxSeries) {
        if k > self.truncation || (a.is_zero() && a.is_exact()) {
            self.terms.remove(&k);
        } else {
            self.terms.insert(k, a);
        }
    }

    pub fn variable(&self) -> &str {
        &self.variable
    }

    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    pub fn terms(&self) -> &BTreeMap<i64, PuiseuxSeries> {
        &self.terms
    }

    /// Coefficient of `eta^{-k}`.
    pub fn coeff(&self, k: i64) -> PuiseuxSeries {
        self.terms.get(&k).cloned().unwrap_or_else(|| PuiseuxSeries::zero(&self.variable))
    }

    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn with_truncation(&self, n: i64) -> Self {
        let mut e = self.clone();
        e.truncation = e.truncation.min(n);
        e.terms.retain(|k, _| *k <= e.truncation);
        e
    }

    fn check(&self, o: &Self) -> Result<()> {
        if self.variable != o.variable {
            return Err(Error::VariableMismatch(self.variable.clone(), o.variable.clone()));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let mut out = Self::zero(&self.variable, self.truncation.min(o.truncation));
        for k in self.terms.keys().chain(o.terms.keys()) {
            if !out.terms.contains_key(k) {
                out.insert(*k, self.coeff(*k).add(&o.coeff(*k))?);
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn map(&self, f: impl Fn(&PuiseuxSeries) -> PuiseuxSeries) -> Self {
        let mut out = Self::zero(&self.variable, self.truncation);
        for (k, a) in &self.terms {
            out.insert(*k, f(a));
        }
        out
    }

    pub fn try_map(&self, f: impl Fn(&PuiseuxSeries) -> Result<PuiseuxSeries>) -> Result<Self> {
        let mut out = Self::zero(&self.variable, self.truncation);
        for (k, a) in &self.terms {
            out.insert(*k, f(a)?);
        }
        Ok(out)
    }

    /// Termwise derivative in the series variable.
    pub fn derivative(&self) -> Self {
        self.map(PuiseuxSeries::derivative)
    }

    /// Multiplies by `eta^{-k} * a(x)`.
    pub fn mul_monomial(&self, k: i64, a: &PuiseuxSeries) -> Result<Self> {
        let mut out = Self::zero(&self.variable, self.truncation + k);
        for (j, b) in &self.terms {
            out.insert(j + k, b.mul(a)?);
        }
        Ok(out)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check(o)?;
        let va = self.valuation().unwrap_or(self.truncation + 1);
        let vb = o.valuation().unwrap_or(o.truncation + 1);
        let truncation = (self.truncation + vb).min(o.truncation + va);
        let mut out = Self::zero(&self.variable, truncation);
        for (i, a) in &self.terms {
            for (j, b) in &o.terms {
                let k = i + j;
                if k <= truncation {
                    let sum = out.coeff(k).add(&a.mul(b)?)?;
                    out.insert(k, sum);
                }
            }
        }
        Ok(out)
    }

    fn require_positive(&self, op: &str) -> Result<()> {
        match self.valuation() {
            Some(v) if v < 1 => Err(Error::Valuation(format!(
                "{op} needs an expansion starting at eta^-1 or beyond, found eta^{}",
                -v
            ))),
            _ => Ok(()),
        }
    }

    pub fn exp(&self) -> Result<Self> {
        self.require_positive("exp")?;
        compose(self, exp_coeff, "exp")
    }

    pub fn log1p(&self) -> Result<Self> {
        self.require_positive("log1p")?;
        compose(self, log1p_coeff, "log1p")
    }

    /// `(1 + self)^alpha`.
    pub fn one_plus_pow(&self, alpha: &Q) -> Result<Self> {
        self.require_positive("binomial")?;
        compose(self, |k| binomial_coeff(alpha, k), "binomial")
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self.terms.iter().map(|(k, a)| json!({ "eta_power": -k, "coefficient": a.to_json() })).collect();
        json!({ "variable": self.variable, "terms": terms, "truncation": self.truncation })
    }
}

impl FormalSeries for EtaExpansion {
    fn unit_like(&self) -> Self {
        Self::single(0, PuiseuxSeries::one(&self.variable), i64::MAX / 4)
    }
    fn add_series(&self, other: &Self) -> Result<Self> {
        self.add(other)
    }
    fn mul_series(&self, other: &Self) -> Result<Self> {
        self.mul(other)
    }
    fn scale_rational(&self, c: &Q) -> Self {
        let s = ExactScalar::rational(c.clone());
        if c == &Q::one() {
            return self.clone();
        }
        self.map(|a| a.scale(&s))
    }
    fn valuation_key(&self) -> Option<i64> {
        self.valuation()
    }
    fn truncation_key(&self) -> Option<i64> {
        Some(self.truncation + 1)
    }
}

impl fmt::Display for EtaExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (k, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "eta^({})*[{a}]", -k)?;
        }
        write!(f, " + O(eta^({}))", -(self.truncation + 1))
    }
}
