//! The ring `Q(x1, x2)[S] / (4S^3 + 2 x2 S + x1)`, localised at `D = 27 x1^2 + 8 x2^3`.
//!
//! Elements are `(a0 + a1 S + a2 S^2) / D^m` with polynomial `a_i`; the power `m` is kept
//! minimal. Inverses exist exactly for elements whose norm is a constant times a power of `D`,
//! which covers `6S^2 + x2` and everything the WKB recursion divides by.

use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use num_traits::Zero;

use super::poly2::Poly2;
use crate::error::{Error, Result};
use crate::series::{q, qi, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicFieldElement {
    num: [Poly2; 3],
    dpow: u32,
}

/// `S^3 = -(x1 + 2 x2 S) / 4` applied to a numerator of degree at most 4 in `S`.
fn reduce(mut c: [Poly2; 5]) -> [Poly2; 3] {
    let x1 = Poly2::x1().scale(&q(-1, 4));
    let x2 = Poly2::x2().scale(&q(-1, 2));
    for deg in [4usize, 3] {
        let top = std::mem::take(&mut c[deg]);
        if top.is_zero() {
            continue;
        }
        // S^deg = S^{deg-3} (-(x1/4) - (x2/2) S)
        c[deg - 3] = &c[deg - 3] + &(&top * &x1);
        c[deg - 2] = &c[deg - 2] + &(&top * &x2);
    }
    let [a0, a1, a2, _, _] = c;
    [a0, a1, a2]
}

fn d_pow(n: u32) -> Poly2 {
    Poly2::disc().pow(n)
}

impl CubicFieldElement {
    pub fn new(num: [Poly2; 3], dpow: u32) -> Self {
        let mut e = CubicFieldElement { num, dpow };
        e.normalize();
        e
    }

    fn normalize(&mut self) {
        if self.num.iter().all(Poly2::is_zero) {
            self.dpow = 0;
            return;
        }
        while self.dpow > 0 {
            let q: Option<Vec<Poly2>> = self.num.iter().map(Poly2::div_disc).collect();
            match q {
                Some(v) => {
                    let [a, b, c]: [Poly2; 3] = v.try_into().expect("three components");
                    self.num = [a, b, c];
                    self.dpow -= 1;
                }
                None => break,
            }
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly2::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly2::int(1))
    }

    pub fn from_poly(p: Poly2) -> Self {
        Self::new([p, Poly2::zero(), Poly2::zero()], 0)
    }

    pub fn rational(c: Q) -> Self {
        Self::from_poly(Poly2::constant(c))
    }

    /// The generator `S`, the root of `4S^3 + 2 x2 S + x1`.
    pub fn s() -> Self {
        Self::new([Poly2::zero(), Poly2::int(1), Poly2::zero()], 0)
    }

    pub fn numerator(&self) -> &[Poly2; 3] {
        &self.num
    }

    /// Power of `D` in the denominator.
    pub fn disc_power(&self) -> u32 {
        self.dpow
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Poly2::is_zero)
    }

    fn lifted(&self, dpow: u32) -> [Poly2; 3] {
        let f = d_pow(dpow - self.dpow);
        [&self.num[0] * &f, &self.num[1] * &f, &self.num[2] * &f]
    }

    pub fn add(&self, other: &Self) -> Self {
        let m = self.dpow.max(other.dpow);
        let (a, b) = (self.lifted(m), other.lifted(m));
        Self::new([&a[0] + &b[0], &a[1] + &b[1], &a[2] + &b[2]], m)
    }

    pub fn neg(&self) -> Self {
        CubicFieldElement { num: [-&self.num[0], -&self.num[1], -&self.num[2]], dpow: self.dpow }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new([self.num[0].scale(c), self.num[1].scale(c), self.num[2].scale(c)], self.dpow)
    }

    pub fn mul_poly(&self, p: &Poly2) -> Self {
        Self::new([&self.num[0] * p, &self.num[1] * p, &self.num[2] * p], self.dpow)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut c: [Poly2; 5] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                c[i + j] = &c[i + j] + &(&self.num[i] * &other.num[j]);
            }
        }
        Self::new(reduce(c), self.dpow + other.dpow)
    }

    /// `num * S`, reduced.
    fn times_s(v: &[Poly2; 3]) -> [Poly2; 3] {
        reduce([Poly2::zero(), v[0].clone(), v[1].clone(), v[2].clone(), Poly2::zero()])
    }

    /// Exact inverse via the adjugate of the multiplication matrix.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NonUnit);
        }
        // columns: num, num*S, num*S^2 in the basis 1, S, S^2
        let c0 = self.num.clone();
        let c1 = Self::times_s(&c0);
        let c2 = Self::times_s(&c1);
        let m = |r: usize, c: usize| -> &Poly2 {
            match c {
                0 => &c0[r],
                1 => &c1[r],
                _ => &c2[r],
            }
        };
        let minor = |r0: usize, r1: usize, k0: usize, k1: usize| &(m(r0, k0) * m(r1, k1)) - &(m(r0, k1) * m(r1, k0));
        // first column of the adjugate: cofactors of the first row
        let adj = [minor(1, 2, 1, 2), -&minor(1, 2, 0, 2), minor(1, 2, 0, 1)];
        let det = &(&(m(0, 0) * &adj[0]) + &(m(0, 1) * &adj[1])) + &(m(0, 2) * &adj[2]);
        if det.is_zero() {
            return Err(Error::NonUnit);
        }
        let mut j = 0u32;
        let mut rest = det;
        while let Some(qq) = rest.div_disc() {
            rest = qq;
            j += 1;
        }
        let c = rest.as_constant().filter(|c| !c.is_zero()).ok_or(Error::NonUnit)?;
        let factor = d_pow(self.dpow).scale(&(qi(1) / c));
        Ok(Self::new([&adj[0] * &factor, &adj[1] * &factor, &adj[2] * &factor], j))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// `6S^2 + x2`, half the derivative of the defining cubic in `S`.
    pub fn l() -> Self {
        Self::new([Poly2::x2(), Poly2::zero(), Poly2::int(6)], 0)
    }

    fn partials_of_s() -> &'static [CubicFieldElement; 2] {
        static CELL: OnceLock<[CubicFieldElement; 2]> = OnceLock::new();
        CELL.get_or_init(|| {
            let inv_l = Self::l().inv().expect("6S^2 + x2 is a unit");
            [inv_l.scale(&q(-1, 2)), inv_l.mul(&Self::s()).neg()]
        })
    }

    /// `dS/dx1 = -1 / (2 (6S^2 + x2))` (`var = 0`) or `dS/dx2 = -S / (6S^2 + x2)` (`var = 1`).
    pub fn ds(var: usize) -> Self {
        Self::partials_of_s()[var].clone()
    }

    /// Total derivative in `x1` (`var = 0`) or `x2` (`var = 1`).
    pub fn d(&self, var: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let m = self.dpow;
        let dd = Poly2::disc().derivative(var);
        let mlt = Poly2::int(m as i64);
        let explicit: [Poly2; 3] = std::array::from_fn(|i| {
            &(&self.num[i].derivative(var) * &Poly2::disc()) - &(&(&self.num[i] * &dd) * &mlt)
        });
        let part = Self::new(explicit, m + 1);
        // (a1 + 2 a2 S) dS / D^m
        let ds_coeff = Self::new([self.num[1].clone(), self.num[2].scale(&qi(2)), Poly2::zero()], m);
        part.add(&ds_coeff.mul(&Self::ds(var)))
    }

    /// Value at numeric `(x1, x2)` and a root `s` of the cubic.
    pub fn eval(&self, x1: Complex64, x2: Complex64, s: Complex64) -> Complex64 {
        let num = self.num[0].eval(x1, x2) + self.num[1].eval(x1, x2) * s + self.num[2].eval(x1, x2) * s * s;
        num / Poly2::disc().eval(x1, x2).powu(self.dpow)
    }

    /// Number of nonzero rational coefficients, a size measure.
    pub fn size(&self) -> usize {
        self.num.iter().map(|p| p.terms().len()).sum()
    }
}

impl fmt::Display for CubicFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[({}) + ({})*S + ({})*S^2] / D^{}", self.num[0], self.num[1], self.num[2], self.dpow)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_of_s_reduces() {
        let s = CubicFieldElement::s();
        let s3 = s.mul(&s).mul(&s);
        let want = CubicFieldElement::new([Poly2::x1().scale(&q(-1, 4)), Poly2::x2().scale(&q(-1, 2)), Poly2::zero()], 0);
        assert_eq!(s3, want);
    }

    #[test]
    fn inverse_of_l() {
        let l = CubicFieldElement::l();
        let inv = l.inv().unwrap();
        assert_eq!(inv.disc_power(), 1);
        assert_eq!(l.mul(&inv), CubicFieldElement::one());
    }

    #[test]
    fn implicit_derivatives_of_s() {
        // differentiate 4S^3 + 2 x2 S + x1 = 0 in both variables
        let s = CubicFieldElement::s();
        let s2 = s.mul(&s);
        let f1 = s2.scale(&qi(12)).add(&CubicFieldElement::from_poly(Poly2::x2().scale(&qi(2)))).mul(&s.d(0));
        assert_eq!(f1.add(&CubicFieldElement::one()), CubicFieldElement::zero());
        let f2 = s2.scale(&qi(12)).add(&CubicFieldElement::from_poly(Poly2::x2().scale(&qi(2)))).mul(&s.d(1));
        assert_eq!(f2.add(&s.scale(&qi(2))), CubicFieldElement::zero());
    }

    #[test]
    fn non_units_are_rejected() {
        assert!(matches!(CubicFieldElement::zero().inv(), Err(Error::NonUnit)));
        let x = CubicFieldElement::from_poly(&Poly2::x1() + &Poly2::int(1));
        assert!(matches!(x.inv(), Err(Error::NonUnit)));
    }

    #[test]
    fn numeric_evaluation_agrees() {
        let (x1, x2) = (Complex64::new(0.3, 0.1), Complex64::new(-0.5, 0.2));
        let roots = crate::numeric::roots::poly_roots(&[x1, 2.0 * x2, Complex64::zero(), Complex64::new(4.0, 0.0)]).unwrap();
        let l = CubicFieldElement::l();
        for s in roots {
            let v = l.inv().unwrap().eval(x1, x2, s);
            assert!((v * (6.0 * s * s + x2) - 1.0).norm() < 1e-12);
        }
    }
}
