//! Polynomials in `(x1, x2)` with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::series::{qi, Q};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Q>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn monomial(i: u32, j: u32, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Poly2 { terms }
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(qi(n))
    }

    pub fn x1() -> Self {
        Self::monomial(1, 0, qi(1))
    }

    pub fn x2() -> Self {
        Self::monomial(0, 1, qi(1))
    }

    /// `D = 27 x1^2 + 8 x2^3`, the discriminant factor of `4S^3 + 2 x2 S + x1`.
    pub fn disc() -> Self {
        &Self::monomial(2, 0, qi(27)) + &Self::monomial(0, 3, qi(8))
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(qi(0)),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    fn push(&mut self, key: (u32, u32), c: Q) {
        let e = self.terms.entry(key).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly2 { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::int(1), |acc, _| &acc * self)
    }

    /// Partial derivative in `x1` (`var = 0`) or `x2` (`var = 1`).
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            let e = if var == 0 { i } else { j };
            if e == 0 {
                continue;
            }
            let key = if var == 0 { (i - 1, j) } else { (i, j - 1) };
            out.push(key, c * qi(e as i64));
        }
        out
    }

    /// Exact quotient by `D`, if `D` divides the polynomial.
    pub fn div_disc(&self) -> Option<Self> {
        // division in x1 by 27 x1^2 + 8 x2^3
        let mut rem = self.clone();
        let mut quo = Self::zero();
        loop {
            let top = rem.terms.keys().filter(|(i, _)| *i >= 2).max_by_key(|(i, j)| (*i, *j)).copied();
            let Some((i, j)) = top else { break };
            let c = &rem.terms[&(i, j)] / qi(27);
            let t = Self::monomial(i - 2, j, c);
            rem = &rem - &(&t * &Self::disc());
            quo = &quo + &t;
        }
        rem.is_zero().then_some(quo)
    }

    pub fn eval(&self, x1: Complex64, x2: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| x1.powu(i) * x2.powu(j) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.push(*k, v.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.push(*k, -v.clone());
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 { terms: self.terms.iter().map(|(k, v)| (*k, -v.clone())).collect() }
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.push((i + k, j + l), a * b);
            }
        }
        out
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&(i, j), c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            if i > 0 {
                write!(f, "*x1^{i}")?;
            }
            if j > 0 {
                write!(f, "*x2^{j}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn division_by_discriminant() {
        let p = &(&Poly2::x1() * &Poly2::x2()) + &Poly2::int(3);
        let prod = &p * &Poly2::disc();
        assert_eq!(prod.div_disc(), Some(p.clone()));
        assert_eq!(p.div_disc(), None);
        assert_eq!(Poly2::disc().derivative(1), Poly2::monomial(0, 2, qi(24)));
    }
}
