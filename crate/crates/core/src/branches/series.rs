//! Exact Puiseux expansions of the branches at `s = 0, 1/2, 1`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;

use super::{Anchor, BranchLabel, Family};
use crate::error::Result;
use crate::series::{q, ExactScalar, Exponent, PuiseuxSeries};

fn poly(var: &str, terms: &[(i64, ExactScalar)], trunc: Exponent) -> PuiseuxSeries {
    PuiseuxSeries::from_terms(var, terms.iter().map(|(h, c)| (Exponent::halves(*h), c.clone())), Some(trunc))
}

/// `c = sigma^{1/2} (1 - sigma)^{1/2}`, the same function at both end anchors.
fn c_end(var: &str, trunc: Exponent) -> Result<PuiseuxSeries> {
    let one_minus = poly(var, &[(0, ExactScalar::one()), (2, ExactScalar::int(-1))], trunc - Exponent::halves(1));
    Ok(one_minus.sqrt()?.mul_monomial(Exponent::halves(1), &ExactScalar::one()))
}

/// `c = (1/2) sqrt(1 - 4u^2)` at `u = s - 1/2`.
fn c_half(var: &str, trunc: Exponent) -> Result<PuiseuxSeries> {
    let base = poly(var, &[(0, ExactScalar::one()), (4, ExactScalar::int(-4))], trunc);
    Ok(base.sqrt()?.scale(&ExactScalar::ratio(1, 2)))
}

fn cubic_value(x: &PuiseuxSeries, c: &PuiseuxSeries) -> Result<PuiseuxSeries> {
    let x3 = x.mul(x)?.mul(x)?;
    x3.scale(&ExactScalar::int(16)).sub(&x.scale(&ExactScalar::int(3)))?.sub(c)
}

/// Fixed-point iteration `X <- X - F(X)/F'(a0)` until the truncated series stabilises.
fn simple_root(a0: ExactScalar, c: &PuiseuxSeries, trunc: Exponent) -> Result<PuiseuxSeries> {
    let var = c.variable();
    let d = (&(&a0 * &a0) * &ExactScalar::int(48)) - ExactScalar::int(3);
    let dinv = d.inv()?;
    let mut x = PuiseuxSeries::monomial(var, Exponent::ZERO, a0).truncate(trunc);
    for _ in 0..(4 * trunc.in_halves().max(1) + 8) {
        let next = x.sub(&cubic_value(&x, c)?.scale(&dinv))?.truncate(trunc);
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Ok(x)
}

/// Crossing pair at `s = 1/2`: with `v = X + 1/4`, `12 v^2 - 16 v^3 = 1/2 - c(u)`.
fn crossing_root(sign: i64, c: &PuiseuxSeries, trunc: Exponent) -> Result<PuiseuxSeries> {
    let var = c.variable();
    let w = PuiseuxSeries::monomial(var, Exponent::ZERO, ExactScalar::ratio(1, 2)).sub(c)?;
    let w_over_u2 = w.mul_monomial(Exponent::int(-2), &ExactScalar::one());
    let root = w_over_u2.sqrt()?;
    // u / (2 sqrt 3) = (sqrt3 / 6) u
    let lin = ExactScalar::surd(q(sign, 6));
    let scaled = root.mul_monomial(Exponent::int(1), &lin);
    let mut v = PuiseuxSeries::big_o(var, Exponent::int(1));
    for _ in 0..(2 * trunc.in_halves().max(1) + 8) {
        let inner = PuiseuxSeries::one(var).sub(&v.scale(&ExactScalar::ratio(4, 3)))?;
        let next = scaled.mul(&inner.inv_sqrt()?)?.truncate(trunc);
        if next == v {
            break;
        }
        v = next;
    }
    v.add(&PuiseuxSeries::monomial(var, Exponent::ZERO, ExactScalar::ratio(-1, 4)))
}

fn end_constant(anchor: Anchor, index: usize) -> ExactScalar {
    let r = ExactScalar::surd(q(1, 4));
    match (anchor, index) {
        (_, 1) => r,
        (Anchor::Zero, 2) | (Anchor::One, 3) => -r,
        _ => ExactScalar::zero(),
    }
}

/// X-branch expansion keeping every exponent strictly below `trunc`.
fn x_series(anchor: Anchor, index: usize, trunc: Exponent) -> Result<PuiseuxSeries> {
    let var = anchor.variable();
    let work = trunc + Exponent::int(2);
    match anchor {
        Anchor::Zero | Anchor::One => {
            let c = c_end(var, work)?;
            Ok(simple_root(end_constant(anchor, index), &c, work)?.truncate(trunc))
        }
        Anchor::Half => {
            let c = c_half(var, work)?;
            let x = match index {
                1 => simple_root(ExactScalar::ratio(1, 2), &c, work)?,
                2 => crossing_root(1, &c, work)?,
                _ => crossing_root(-1, &c, work)?,
            };
            Ok(x.truncate(trunc))
        }
    }
}

/// `c` at the label's anchor, to the given truncation.
pub(crate) fn c_series(anchor: Anchor, trunc: Exponent) -> Result<PuiseuxSeries> {
    match anchor {
        Anchor::Zero | Anchor::One => c_end(anchor.variable(), trunc),
        Anchor::Half => c_half(anchor.variable(), trunc),
    }
}

/// Expansion of a branch through exponent `order` inclusive.
///
/// Family `X` gives `X_j`; family `G` gives `x * g_j = X_j / (s^{1/2} (1-s)^{1/2})`.
pub fn branch_series(label: BranchLabel, order: usize) -> Result<PuiseuxSeries> {
    let trunc = Exponent::halves(2 * order as i64 + 1);
    match label.family {
        Family::X => x_series(label.anchor, label.index, trunc),
        Family::G => {
            let extra = Exponent::int(1);
            let x = x_series(label.anchor, label.index, trunc + extra)?;
            let c = c_series(label.anchor, trunc + extra + extra)?;
            Ok(x.div(&c)?.truncate(trunc))
        }
    }
}

/// Floating-point copy of an X expansion for seeding numeric continuation.
#[derive(Clone, Debug)]
pub struct NumericSeries {
    terms: Vec<(i32, Complex64)>,
}

impl NumericSeries {
    /// Value at a chosen square root `t` of the local variable.
    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.terms.iter().map(|(h, c)| c * t.powi(*h)).sum()
    }
}

const NUMERIC_ORDER: usize = 12;

/// Cached floating-point X expansion of a label (order 12 in the local variable).
pub fn numeric_series(anchor: Anchor, index: usize) -> NumericSeries {
    static CACHE: OnceLock<Mutex<HashMap<(Anchor, usize), NumericSeries>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("series cache").get(&(anchor, index)) {
        return s.clone();
    }
    let exact = branch_series(BranchLabel::x(index, anchor), NUMERIC_ORDER).expect("anchor expansions exist");
    let ns = NumericSeries {
        terms: exact.terms().iter().map(|(e, c)| (e.in_halves() as i32, c.to_c64())).collect(),
    };
    cache.lock().expect("series cache").insert((anchor, index), ns.clone());
    ns
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r3(n: i64, d: i64) -> ExactScalar {
        ExactScalar::surd(q(n, d))
    }

    #[test]
    fn expansions_at_zero() {
        let x1 = branch_series(BranchLabel::x(1, Anchor::Zero), 1).unwrap();
        assert_eq!(x1.coeff(Exponent::ZERO), r3(1, 4));
        assert_eq!(x1.coeff(Exponent::halves(1)), ExactScalar::ratio(1, 6));
        // -1/(6 sqrt3) = -sqrt3/18
        assert_eq!(x1.coeff(Exponent::int(1)), r3(-1, 18));
        let x2 = branch_series(BranchLabel::x(2, Anchor::Zero), 1).unwrap();
        assert_eq!(x2.coeff(Exponent::int(1)), r3(1, 18));
        let x3 = branch_series(BranchLabel::x(3, Anchor::Zero), 2).unwrap();
        assert_eq!(x3.coeff(Exponent::ZERO), ExactScalar::zero());
        assert_eq!(x3.coeff(Exponent::halves(1)), ExactScalar::ratio(-1, 3));
        assert_eq!(x3.coeff(Exponent::halves(3)), ExactScalar::ratio(-5, 162));
    }

    #[test]
    fn expansions_at_one_and_half() {
        let x2 = branch_series(BranchLabel::x(2, Anchor::One), 2).unwrap();
        assert_eq!(x2.variable(), "1-s");
        assert_eq!(x2.coeff(Exponent::halves(1)), ExactScalar::ratio(-1, 3));
        assert_eq!(x2.coeff(Exponent::halves(3)), ExactScalar::ratio(-5, 162));
        for (idx, sgn) in [(2, 1), (3, -1)] {
            let x = branch_series(BranchLabel::x(idx, Anchor::Half), 3).unwrap();
            assert_eq!(x.coeff(Exponent::ZERO), ExactScalar::ratio(-1, 4));
            assert_eq!(x.coeff(Exponent::int(1)), r3(sgn, 6));
            assert_eq!(x.coeff(Exponent::int(2)), ExactScalar::ratio(1, 18));
        }
        let x1 = branch_series(BranchLabel::x(1, Anchor::Half), 3).unwrap();
        assert_eq!(x1.coeff(Exponent::ZERO), ExactScalar::ratio(1, 2));
    }

    #[test]
    fn series_satisfy_the_cubic() {
        for anchor in [Anchor::Zero, Anchor::Half, Anchor::One] {
            for idx in 1..=3 {
                let order = 6;
                let x = branch_series(BranchLabel::x(idx, anchor), order).unwrap();
                let c = c_series(anchor, x.truncation().unwrap()).unwrap();
                let f = cubic_value(&x, &c).unwrap();
                assert!(f.is_zero(), "{anchor:?} X{idx}: {f}");
            }
        }
    }

    #[test]
    fn g_series_at_zero() {
        let g1 = branch_series(BranchLabel::g(1, Anchor::Zero), 1).unwrap();
        assert_eq!(g1.coeff(Exponent::halves(-1)), r3(1, 4));
        assert_eq!(g1.coeff(Exponent::ZERO), ExactScalar::ratio(1, 6));
        // 5/(24 sqrt3) = 5 sqrt3 / 72
        assert_eq!(g1.coeff(Exponent::halves(1)), r3(5, 72));
        let g2 = branch_series(BranchLabel::g(2, Anchor::One), 1).unwrap();
        assert_eq!(g2.coeff(Exponent::ZERO), ExactScalar::ratio(-1, 3));
        // X2 / c = (-1/3 - (5/162) sigma)(1 + sigma/2 + ...)
        assert_eq!(g2.coeff(Exponent::int(1)), ExactScalar::ratio(-16, 81));
    }
}
