//! Normal-ordered arithmetic in the Weyl algebra of `(x1, x2, eta)`, localised at `eta`,
//! and the operator identities of the Pearcey system.
//!
//! A monomial is `x1^a x2^b eta^c d1^d d2^e d_eta^f` with all coordinates to the left.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::series::{qi, Q};

/// Exponents `[a, b, c, d, e, f]` of `x1, x2, eta, d1, d2, d_eta`; only `c` may be negative.
pub type WeylKey = [i64; 6];

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct WeylElement {
    terms: BTreeMap<WeylKey, Q>,
}

/// `k`-th falling factorial of an integer (also for negative `n`).
fn falling(n: i64, k: i64) -> Q {
    (0..k).fold(Q::one(), |acc, j| acc * qi(n - j))
}

fn binomial(n: i64, k: i64) -> Q {
    falling(n, k) / falling(k, k)
}

impl WeylElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(key: WeylKey, c: Q) -> Self {
        let mut w = Self::zero();
        w.push(key, c);
        w
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial([0; 6], c)
    }

    pub fn int(n: i64) -> Self {
        Self::constant(qi(n))
    }

    fn generator(slot: usize) -> Self {
        let mut k = [0; 6];
        k[slot] = 1;
        Self::monomial(k, Q::one())
    }

    pub fn x1() -> Self {
        Self::generator(0)
    }
    pub fn x2() -> Self {
        Self::generator(1)
    }
    pub fn eta() -> Self {
        Self::generator(2)
    }
    pub fn d1() -> Self {
        Self::generator(3)
    }
    pub fn d2() -> Self {
        Self::generator(4)
    }
    pub fn d_eta() -> Self {
        Self::generator(5)
    }

    /// `eta^n` for any integer `n`.
    pub fn eta_pow(n: i64) -> Self {
        Self::monomial([0, 0, n, 0, 0, 0], Q::one())
    }

    pub fn terms(&self) -> &BTreeMap<WeylKey, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push(&mut self, key: WeylKey, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.push(*k, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&qi(-1)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.push(*k, v * c);
        }
        out
    }

    /// Normal-ordered product, using `d^m x^n = sum_k C(m,k) n^(k) x^{n-k} d^{m-k}` in each pair.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (l, a) in &self.terms {
            for (r, b) in &other.terms {
                // per variable: list of (x exponent, d exponent, coefficient)
                let pair = |v: usize| -> Vec<(i64, i64, Q)> {
                    let (dl, xr) = (l[v + 3], r[v]);
                    (0..=dl)
                        .filter_map(|k| {
                            let c = binomial(dl, k) * falling(xr, k);
                            (!c.is_zero()).then(|| (l[v] + xr - k, dl - k + r[v + 3], c))
                        })
                        .collect()
                };
                let (p0, p1, p2) = (pair(0), pair(1), pair(2));
                let ab = a * b;
                for (x0, d0, c0) in &p0 {
                    for (x1, d1, c1) in &p1 {
                        for (x2, d2, c2) in &p2 {
                            out.push([*x0, *x1, *x2, *d0, *d1, *d2], &ab * c0 * c1 * c2);
                        }
                    }
                }
            }
        }
        out
    }

    /// Applies the operator to a Laurent polynomial in `(x1, x2, eta)`.
    pub fn apply(&self, p: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::default();
        for (k, c) in &self.terms {
            for (m, v) in &p.terms {
                let mut coeff = c * v;
                let mut e = *m;
                for var in 0..3 {
                    coeff *= falling(e[var], k[var + 3]);
                    e[var] -= k[var + 3];
                }
                if coeff.is_zero() {
                    continue;
                }
                for var in 0..3 {
                    e[var] += k[var];
                }
                out.push(e, coeff);
            }
        }
        out
    }

    /// Largest `d_eta` order and whether any negative `eta` power occurs.
    pub fn eta_profile(&self) -> (i64, bool) {
        let deta = self.terms.keys().map(|k| k[5]).max().unwrap_or(0);
        let neg = self.terms.keys().any(|k| k[2] < 0);
        (deta, neg)
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = ["x1", "x2", "eta", "d1", "d2", "d_eta"];
        let mut first = true;
        for (k, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({c})")?;
            for (n, e) in names.iter().zip(k) {
                match e {
                    0 => {}
                    1 => write!(f, "*{n}")?,
                    _ => write!(f, "*{n}^{e}")?,
                }
            }
        }
        Ok(())
    }
}

/// Laurent polynomial in `(x1, x2, eta)` with exponent triples as keys.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    pub terms: BTreeMap<[i64; 3], Q>,
}

impl LaurentPoly {
    pub fn push(&mut self, key: [i64; 3], c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

fn sum(parts: &[WeylElement]) -> WeylElement {
    parts.iter().fold(WeylElement::zero(), |acc, p| acc.add(p))
}

fn term(c: i64, factors: &[WeylElement]) -> WeylElement {
    factors.iter().fold(WeylElement::int(c), |acc, f| acc.mul(f))
}

/// The operators `P1, P2, P3, P4, Q1, Q2`.
#[derive(Clone, Debug)]
pub struct PearceyOperators {
    pub p1: WeylElement,
    pub p2: WeylElement,
    pub p3: WeylElement,
    pub p4: WeylElement,
    pub q1: WeylElement,
    pub q2: WeylElement,
}

impl PearceyOperators {
    pub fn new() -> Self {
        use WeylElement as W;
        let (x1, x2, e, d1, d2, de) = (W::x1(), W::x2(), W::eta(), W::d1(), W::d2(), W::d_eta());
        let p1 = sum(&[term(4, &[d1.clone(), d2.clone()]), term(2, &[e.clone(), x2.clone(), d1.clone()]), term(1, &[e.clone(), e.clone(), x1.clone()])]);
        let p2 = sum(&[
            term(4, &[d2.clone(), d2.clone()]),
            term(1, &[e.clone(), x1.clone(), d1.clone()]),
            term(2, &[e.clone(), x2.clone(), d2.clone()]),
            e.clone(),
        ]);
        let p3 = term(1, &[e.clone(), d2.clone()]).sub(&term(1, &[d1.clone(), d1.clone()]));
        let p4 = sum(&[
            term(3, &[x1.clone(), d1.clone()]),
            term(2, &[x2.clone(), d2.clone()]),
            term(-4, &[e.clone(), de]),
            W::int(-1),
        ]);
        let q1 = sum(&[
            term(4, &[d1.clone(), d1.clone(), d1.clone()]),
            term(2, &[x2.clone(), e.clone(), e.clone(), d1.clone()]),
            term(1, &[x1, e.clone(), e.clone(), e]),
        ]);
        let q2 = p3.clone();
        PearceyOperators { p1, p2, p3, p4, q1, q2 }
    }
}

impl Default for PearceyOperators {
    fn default() -> Self {
        Self::new()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    /// Power of `eta` multiplied through before comparing.
    pub clearing_power: i64,
    pub holds: bool,
    /// Normal form of `lhs - rhs` when it is not zero.
    pub difference: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylReport {
    pub identities: Vec<IdentityCheck>,
}

impl WeylReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|c| c.holds)
    }
}

fn check(name: &'static str, clearing_power: i64, lhs: &WeylElement, rhs: &WeylElement) -> IdentityCheck {
    let diff = lhs.sub(rhs);
    IdentityCheck { name, clearing_power, holds: diff.is_zero(), difference: (!diff.is_zero()).then(|| diff.to_string()) }
}

/// The relations between `P1, P2, P3` and `Q1, Q2`, in `eta`-cleared form and in
/// the Laurent form with `eta^{-1}`.
pub fn verify_operator_identities() -> WeylReport {
    use WeylElement as W;
    let o = PearceyOperators::new();
    let d1 = W::d1();
    let d2 = W::d2();
    let e = W::eta();
    let e2 = e.mul(&e);
    let x2 = W::x2();
    let inv = W::eta_pow(-1);
    let inv2 = W::eta_pow(-2);

    let p1_rhs = o.q1.add(&term(4, &[d1.clone(), o.q2.clone()]));
    let p2_rhs = d1.mul(&o.q1).add(
        &sum(&[o.q2.scale(&qi(4)), term(8, &[d1.clone(), d1.clone()]), term(2, &[e2.clone(), x2.clone()])]).mul(&o.q2),
    );
    let q1_rhs = e.mul(&o.p1).sub(&term(4, &[d1.clone(), o.p3.clone()]));
    let note_rhs = d1.mul(&o.p1).add(&sum(&[term(2, std::slice::from_ref(&d2)), e.mul(&x2)]).scale(&qi(2)).mul(&o.p3));

    let laurent_p2 = sum(&[
        inv2.mul(&d1).mul(&o.q1),
        sum(&[inv2.mul(&o.q2).scale(&qi(4)), inv2.mul(&term(8, &[d1.clone(), d1.clone()])), x2.scale(&qi(2))]).mul(&o.q2),
    ]);
    let laurent_note = inv.mul(&d1).mul(&o.p1).add(&sum(&[inv.mul(&d2).scale(&qi(2)), x2.clone()]).scale(&qi(2)).mul(&o.p3));

    WeylReport {
        identities: vec![
            check("eta P1 = Q1 + 4 d1 Q2", 1, &e.mul(&o.p1), &p1_rhs),
            check("eta^2 P2 = d1 Q1 + (4 Q2 + 8 d1^2 + 2 eta^2 x2) Q2", 2, &e2.mul(&o.p2), &p2_rhs),
            check("Q1 = eta P1 - 4 d1 P3", 0, &o.q1, &q1_rhs),
            check("eta P2 = d1 P1 + 2 (2 d2 + eta x2) P3", 1, &e.mul(&o.p2), &note_rhs),
            check("P1 = eta^-1 (Q1 + 4 d1 Q2)", 0, &o.p1, &inv.mul(&p1_rhs)),
            check("P2 = eta^-2 d1 Q1 + (4 eta^-2 Q2 + 8 eta^-2 d1^2 + 2 x2) Q2", 0, &o.p2, &laurent_p2),
            check("P2 = eta^-1 d1 P1 + 2 (2 eta^-1 d2 + x2) P3", 0, &o.p2, &laurent_note),
        ],
    }
}
