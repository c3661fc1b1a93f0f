use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::roots::{horner, newton_polish, poly_roots};

/// How `c = s^{1/2} (1-s)^{1/2}` is fixed at a numeric `s`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SqrtRule {
    /// Principal square roots of `s` and `1-s`; `c > 0` on `(0, 1)`, and for `s > 1`
    /// approached from above `(1-s)^{1/2} = e^{-i pi/2} (s-1)^{1/2}`.
    Principal,
    /// `(1-s)^{1/2} = i (s-1)^{1/2}` with the principal `(s-1)^{1/2}`, the branch that
    /// matches the Borel transform of `psi_-` on its integration ray.
    BorelMinus,
    /// A value of `c` supplied by the caller.
    Explicit(Complex64),
}

pub fn cubic_c(s: Complex64, rule: SqrtRule) -> Complex64 {
    match rule {
        SqrtRule::Principal => s.sqrt() * (1.0 - s).sqrt(),
        SqrtRule::BorelMinus => s.sqrt() * Complex64::i() * (s - 1.0).sqrt(),
        SqrtRule::Explicit(c) => c,
    }
}

fn coeffs(c: Complex64) -> [Complex64; 4] {
    [-c, Complex64::new(-3.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(16.0, 0.0)]
}

/// Roots of `16 X^3 - 3 X - c`, sorted by decreasing real part.
///
/// The best-separated root is polished first and the other two come from the deflated
/// quadratic, which keeps the double root at `c = +-1/2` accurate.
pub fn solve_cubic_c(c: Complex64) -> Result<[Complex64; 3]> {
    if !c.is_finite() {
        return Err(Error::NonConvergence(format!("non-finite cubic coefficient {c}")));
    }
    let p = coeffs(c);
    let approx = poly_roots(&p)?;
    let sep = |i: usize| {
        (0..3).filter(|&j| j != i).map(|j| (approx[i] - approx[j]).norm()).fold(f64::INFINITY, f64::min)
    };
    let best = (0..3).max_by(|&a, &b| sep(a).total_cmp(&sep(b))).unwrap_or(0);
    let r0 = newton_polish(&p, approx[best], 6);
    // 16X^3 - 3X - c = (X - r0)(16X^2 + b X + k)
    let b = 16.0 * r0;
    let k = 16.0 * r0 * r0 - 3.0;
    let disc = (b * b - 64.0 * k).sqrt();
    let q = if (b.conj() * disc).re >= 0.0 { -(b + disc) / 2.0 } else { -(b - disc) / 2.0 };
    let (r1, r2) = if q.norm() == 0.0 {
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
    } else {
        (q / 16.0, k / q)
    };
    let polish = |r: Complex64, other: Complex64| {
        if (r - other).norm() > 1e-4 {
            newton_polish(&p, r, 3)
        } else {
            r
        }
    };
    let mut roots = [r0, polish(r1, r2), polish(r2, r1)];
    for r in &roots {
        let (v, _) = horner(&p, *r);
        if !v.is_finite() {
            return Err(Error::NonConvergence(format!("cubic refinement at c = {c}")));
        }
    }
    roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    Ok(roots)
}

pub fn solve_cubic_x(s: Complex64, rule: SqrtRule) -> Result<[Complex64; 3]> {
    solve_cubic_c(cubic_c(s, rule))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(got: [Complex64; 3], want: [f64; 3], tol: f64) -> bool {
        got.iter().zip(want).all(|(g, w)| (g - w).norm() < tol)
    }

    #[test]
    fn anchor_root_sets() {
        let r3 = 3f64.sqrt() / 4.0;
        let z = Complex64::new(0.0, 0.0);
        assert!(close(solve_cubic_x(z, SqrtRule::Principal).unwrap(), [r3, 0.0, -r3], 1e-14));
        let one = Complex64::new(1.0, 0.0);
        assert!(close(solve_cubic_x(one, SqrtRule::Principal).unwrap(), [r3, 0.0, -r3], 1e-14));
        let half = Complex64::new(0.5, 0.0);
        assert!(close(solve_cubic_x(half, SqrtRule::Principal).unwrap(), [0.5, -0.25, -0.25], 1e-12));
    }

    #[test]
    fn symmetric_functions() {
        for s in [Complex64::new(0.3, 0.2), Complex64::new(2.0, -1.0), Complex64::new(-0.7, 0.01)] {
            let c = cubic_c(s, SqrtRule::Principal);
            let r = solve_cubic_c(c).unwrap();
            let e1 = r[0] + r[1] + r[2];
            let e2 = r[0] * r[1] + r[0] * r[2] + r[1] * r[2];
            let e3 = r[0] * r[1] * r[2];
            assert!(e1.norm() < 1e-13);
            assert!((e2 + 3.0 / 16.0).norm() < 1e-13);
            assert!((e3 - c / 16.0).norm() < 1e-13);
        }
    }

    #[test]
    fn borel_rule_differs_by_sign_above_the_cut() {
        let s = Complex64::new(1.5, 1e-9);
        let a = cubic_c(s, SqrtRule::Principal);
        let b = cubic_c(s, SqrtRule::BorelMinus);
        assert!((a + b).norm() < 1e-6);
    }
}
