//! The quartic relation for the Borel-plane function `g(x1, x2, y)` and the numeric checks
//! of the operators `P_{k,B}`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::mpoly::{ImplicitSystem, IntPoly};
use crate::numeric::roots::{newton_polish, poly_roots};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PearceyBranch {
    #[serde(with = "crate::util::c64")]
    pub x1: Complex64,
    #[serde(with = "crate::util::c64")]
    pub x2: Complex64,
    #[serde(with = "crate::util::c64")]
    pub y: Complex64,
    #[serde(with = "crate::util::c64")]
    pub g: Complex64,
    /// 1 to 4, in order of decreasing real part.
    pub label: usize,
}

/// `A g^4 + B g^2 - 8 x1 g + 1` in the variables `(x1, x2, y, g)`.
pub fn quartic_polynomial() -> IntPoly {
    IntPoly::new(
        4,
        &[
            (&[2, 1, 1, 4], 144),
            (&[2, 3, 0, 4], -4),
            (&[0, 4, 1, 4], 16),
            (&[0, 2, 2, 4], -128),
            (&[0, 0, 3, 4], 256),
            (&[4, 0, 0, 4], -27),
            (&[0, 1, 1, 2], -16),
            (&[0, 3, 0, 2], 4),
            (&[2, 0, 0, 2], 18),
            (&[1, 0, 0, 1], -8),
            (&[0, 0, 0, 0], 1),
        ],
    )
}

/// `A = 4 x1^2 x2 (36y - x2^2) + 16 y (x2^2 - 4y)^2 - 27 x1^4`, `B = 2(-8 x2 y + 2 x2^3 + 9 x1^2)`.
pub fn quartic_coefficients(x1: Complex64, x2: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let a = 4.0 * x1 * x1 * x2 * (36.0 * y - x2 * x2) + 16.0 * y * (x2 * x2 - 4.0 * y).powu(2) - 27.0 * x1.powu(4);
    let b = 2.0 * (-8.0 * x2 * y + 2.0 * x2.powu(3) + 9.0 * x1 * x1);
    (a, b)
}

/// Relative size of the leading coefficient below which a point counts as on the singular locus.
pub const LOCUS_EPS: f64 = 1e-9;

pub fn quartic_g_roots(x1: Complex64, x2: Complex64, y: Complex64) -> Result<[PearceyBranch; 4]> {
    let (a, b) = quartic_coefficients(x1, x2, y);
    let scale = 4.0 * (x1 * x1 * x2).norm() * (36.0 * y.norm() + x2.norm_sqr())
        + 16.0 * y.norm() * (x2.norm_sqr() + 4.0 * y.norm()).powi(2)
        + 27.0 * x1.norm().powi(4);
    if a.norm() <= LOCUS_EPS * scale.max(1.0) {
        return Err(Error::SingularLocus { value: a.norm() });
    }
    let zero = Complex64::new(0.0, 0.0);
    let coeffs = [Complex64::new(1.0, 0.0), -8.0 * x1, b, zero, a];
    let mut roots = poly_roots(&coeffs)?;
    for r in roots.iter_mut() {
        *r = newton_polish(&coeffs, *r, 3);
    }
    roots.sort_by(|p, q| q.re.total_cmp(&p.re).then(q.im.total_cmp(&p.im)));
    Ok(std::array::from_fn(|k| PearceyBranch { x1, x2, y, g: roots[k], label: k + 1 }))
}

impl PearceyBranch {
    /// `|F(g)|` relative to the sum of the moduli of its terms.
    pub fn quartic_residual(&self) -> f64 {
        let (a, b) = quartic_coefficients(self.x1, self.x2, self.y);
        let g = self.g;
        let terms = [a * g.powu(4), b * g * g, -8.0 * self.x1 * g, Complex64::new(1.0, 0.0)];
        terms.iter().sum::<Complex64>().norm() / terms.iter().map(|t| t.norm()).sum::<f64>()
    }
}

/// `|g1 + g2 + g3 + g4|` relative to `max |g_k|`.
pub fn root_sum_defect(b: &[PearceyBranch; 4]) -> f64 {
    let sum: Complex64 = b.iter().map(|r| r.g).sum();
    sum.norm() / b.iter().map(|r| r.g.norm()).fold(0.0, f64::max)
}

/// Residuals of `P_{1,B} .. P_{4,B}` applied to the branch, each relative to its terms.
///
/// `P1 = 4 d1 d2 + 2 x2 dy d1 + x1 dy^2`, `P2 = 4 d2^2 + x1 dy d1 + 2 x2 dy d2 + dy`,
/// `P3 = dy d2 - d1^2`, `P4 = 3 x1 d1 + 2 x2 d2 + 4 y dy + 3`.
pub fn annihilation_residuals(branch: &PearceyBranch) -> [f64; 4] {
    let sys = ImplicitSystem::new(quartic_polynomial());
    let (x1, x2, y, g) = (branch.x1, branch.x2, branch.y, branch.g);
    let d = sys.derivatives(&[x1, x2, y], g);
    let (g1, g2, gy) = (d.first[0], d.first[1], d.first[2]);
    let h = |i: usize, j: usize| d.second[i][j];
    let rel = |terms: &[Complex64]| {
        terms.iter().sum::<Complex64>().norm() / terms.iter().map(|t| t.norm()).sum::<f64>().max(f64::MIN_POSITIVE)
    };
    [
        rel(&[4.0 * h(0, 1), 2.0 * x2 * h(2, 0), x1 * h(2, 2)]),
        rel(&[4.0 * h(1, 1), x1 * h(2, 0), 2.0 * x2 * h(2, 1), gy]),
        rel(&[h(2, 1), -h(0, 0)]),
        rel(&[3.0 * x1 * g1, 2.0 * x2 * g2, 4.0 * y * gy, 3.0 * g]),
    ]
}

/// Largest relative mismatch between `lambda^3 g(lambda^3 x1, lambda^2 x2, lambda^4 y)` and
/// the nearest root at the base point.
pub fn homogeneity_defect(x1: Complex64, x2: Complex64, y: Complex64, lambda: f64) -> Result<f64> {
    let base = quartic_g_roots(x1, x2, y)?;
    let scaled = quartic_g_roots(x1 * lambda.powi(3), x2 * lambda.powi(2), y * lambda.powi(4))?;
    let mut worst: f64 = 0.0;
    for b in &base {
        let best = scaled
            .iter()
            .map(|s| (s.g * lambda.powi(3) - b.g).norm() / b.g.norm())
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(best);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unit_point() {
        let one = c(1.0, 0.0);
        let b = quartic_g_roots(one, one, one).unwrap();
        for r in &b {
            assert!(r.quartic_residual() < 1e-12);
            assert!(annihilation_residuals(r).iter().all(|&e| e < 1e-8), "{:?}", annihilation_residuals(r));
        }
        assert!(root_sum_defect(&b) < 1e-12);
    }

    #[test]
    fn even_when_x1_vanishes() {
        let b = quartic_g_roots(c(0.0, 0.0), c(0.4, 0.3), c(-0.7, 0.2)).unwrap();
        for r in &b {
            assert!(b.iter().any(|s| (s.g + r.g).norm() < 1e-10 * r.g.norm()));
        }
    }

    #[test]
    fn relation_to_the_phase_function() {
        // g = 1/(4t^3 + 2 x2 t + x1) with t^4 + x2 t^2 + x1 t = -y; the quartic with the
        // -8 x1 g term is satisfied by -g, and the operators are linear
        let (x1, x2, y) = (c(0.7, 0.2), c(-0.4, 1.1), c(0.3, -0.5));
        let ts = poly_roots(&[y, x1, x2, c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let b = quartic_g_roots(x1, x2, y).unwrap();
        for t in ts {
            let g = 1.0 / (4.0 * t * t * t + 2.0 * x2 * t + x1);
            assert!(b.iter().any(|r| (r.g + g).norm() < 1e-10 * g.norm()));
        }
    }

    #[test]
    fn scaling() {
        assert!(homogeneity_defect(c(0.3, -0.2), c(0.9, 0.1), c(0.5, 0.6), 2.0).unwrap() < 1e-10);
    }

    #[test]
    fn singular_locus_rejected() {
        // y = 0, x1 = 0: A = 0
        assert!(matches!(quartic_g_roots(c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)), Err(Error::SingularLocus { .. })));
    }
}
