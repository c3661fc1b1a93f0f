use num_complex::Complex64;
use serde::Serialize;

use super::series::branch_series;
use super::track::{continue_branch, BranchValue, TrackOptions};
use super::{Anchor, BranchLabel};
use crate::airy_borel::borel_transform;
use crate::airy_wkb::wkb_coefficient_stream;
use crate::error::{Error, Result};
use crate::numeric::mpoly::{ImplicitSystem, IntPoly};
use crate::numeric::roots::poly_roots;
use crate::series::{ExactScalar, Exponent, PuiseuxSeries};
use crate::Sign;

#[derive(Clone, Debug, Serialize)]
pub struct BorelBranchReport {
    pub order: usize,
    /// `sqrt(pi) x psi_{+,B} = x (g1 - g2)` at `s = 0`.
    pub plus_at_zero: bool,
    /// `sqrt(pi) x psi_{-,B} / i = x (g1 - g3)` at `s = 1`.
    pub minus_at_one: bool,
    /// `g3 = -g1 - g2` at `s = 0` and at `s = 1`.
    pub g_sum_zero: [bool; 2],
    /// `g1 - g3 = 2 g1 + g2` at `s = 1`.
    pub minus_form: bool,
    /// First exponent (in the local variable) where an identity fails.
    pub first_mismatch: Option<String>,
}

impl BorelBranchReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Smallest exponent where two truncated series differ.
fn mismatch(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Option<Exponent> {
    let diff = a.sub(b).ok()?;
    diff.terms().keys().next().copied()
}

pub fn borel_branch_identities(order: usize) -> Result<BorelBranchReport> {
    if order < 1 {
        return Err(Error::Precondition("borel_branch_identities needs order >= 1".into()));
    }
    let trunc = Exponent::halves(2 * order as i64 + 1);
    let g = |k, a| -> Result<PuiseuxSeries> { branch_series(BranchLabel::g(k, a), order) };
    // sqrt(pi) x psi_B = (sqrt3/2) sum b_n sigma^{n-1/2}
    let half_r3 = ExactScalar::surd(crate::series::q(1, 2));
    let lhs = |sign| -> Result<PuiseuxSeries> {
        let b = borel_transform(&wkb_coefficient_stream(order + 1, sign)?);
        Ok(b.terms.scale(&half_r3).truncate(trunc))
    };
    let mut failures: Vec<String> = Vec::new();
    let mut check = |name: &str, a: &PuiseuxSeries, b: &PuiseuxSeries| -> bool {
        match mismatch(a, b) {
            None => true,
            Some(e) => {
                failures.push(format!("{name}: exponent {e}"));
                false
            }
        }
    };

    let (g1z, g2z, g3z) = (g(1, Anchor::Zero)?, g(2, Anchor::Zero)?, g(3, Anchor::Zero)?);
    let (g1o, g2o, g3o) = (g(1, Anchor::One)?, g(2, Anchor::One)?, g(3, Anchor::One)?);

    let plus = lhs(Sign::Plus)?;
    let plus_at_zero = check("psi_+ at s=0", &plus, &g1z.sub(&g2z)?);
    let minus = lhs(Sign::Minus)?;
    let minus_at_one = check("psi_- at s=1", &minus, &g1o.sub(&g3o)?);
    let zero_sum = g1z.add(&g2z)?.add(&g3z)?;
    let sum0 = check("g sum at s=0", &zero_sum, &PuiseuxSeries::zero("s").truncate(trunc));
    let one_sum = g1o.add(&g2o)?.add(&g3o)?;
    let sum1 = check("g sum at s=1", &one_sum, &PuiseuxSeries::zero("1-s").truncate(trunc));
    let two_g1_g2 = g1o.scale(&ExactScalar::int(2)).add(&g2o)?;
    let minus_form = check("2 g1 + g2 at s=1", &minus, &two_g1_g2);

    Ok(BorelBranchReport {
        order,
        plus_at_zero,
        minus_at_one,
        g_sum_zero: [sum0, sum1],
        minus_form,
        first_mismatch: failures.into_iter().next(),
    })
}

/// Centre of the loop used by [`discontinuity`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum SingularPoint {
    /// `y = -(2/3) x^{3/2}`, i.e. `s = 0`.
    YMinus,
    /// `y = +(2/3) x^{3/2}`, i.e. `s = 1`.
    YPlus,
}

impl SingularPoint {
    pub fn s(self) -> Complex64 {
        match self {
            SingularPoint::YMinus => Complex64::new(0.0, 0.0),
            SingularPoint::YPlus => Complex64::new(1.0, 0.0),
        }
    }
}

const LOOP_RADIUS: f64 = 0.1;
const LOOP_POINTS: usize = 96;

/// Closed polyline from `s`: radially in to radius 0.1 (if further out), once around
/// `center` counterclockwise, and back.
fn loop_path(center: Complex64, s: Complex64) -> Vec<Complex64> {
    let d = s - center;
    let r = d.norm();
    let rho = r.min(LOOP_RADIUS);
    let foot = center + d * (rho / r);
    let phi0 = d.arg();
    let mut path = Vec::with_capacity(LOOP_POINTS + 2);
    if r > rho {
        path.push(foot);
    }
    for k in 1..=LOOP_POINTS {
        let phi = phi0 + 2.0 * std::f64::consts::PI * k as f64 / LOOP_POINTS as f64;
        path.push(center + Complex64::from_polar(rho, phi));
    }
    path.pop();
    path.push(foot);
    if r > rho {
        path.push(s);
    }
    path
}

/// Continuation of a branch once around `center` (counterclockwise) minus the branch.
pub fn discontinuity_around(label: BranchLabel, center: Complex64, x: Complex64, s: Complex64) -> Result<Complex64> {
    let opts = TrackOptions::default();
    if (s - center).norm() == 0.0 {
        return Err(Error::Precondition("the evaluation point coincides with the loop centre".into()));
    }
    let start = BranchValue::new(label, s, x, &opts)?;
    let end = continue_branch(&start, &loop_path(center, s), &opts)?;
    Ok(end.value - start.value)
}

/// `Delta` of a branch at the given singular point, evaluated at `s`.
///
/// Counterclockwise in `y` is counterclockwise in `s`, the map being affine.
pub fn discontinuity(label: BranchLabel, point: SingularPoint, x: Complex64, s: Complex64) -> Result<Complex64> {
    discontinuity_around(label, point.s(), x, s)
}

/// `F(x, y, g) = (9y^2 - 4x^3) g^3 + 3 x g + 1` in variables `(x, y, g)`.
pub fn g_cubic() -> IntPoly {
    IntPoly::new(3, &[(&[0, 2, 3], 9), (&[3, 0, 3], -4), (&[1, 0, 1], 3), (&[0, 0, 0], 1)])
}

pub fn g_cubic_residual(x: Complex64, y: Complex64, g: Complex64) -> Complex64 {
    (9.0 * y * y - 4.0 * x * x * x) * g * g * g + 3.0 * x * g + 1.0
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct GSystemResidual {
    #[serde(with = "crate::util::c64")]
    pub g: Complex64,
    /// `|(-d_x^2 + x d_y^2) g|` relative to its terms.
    pub wave: f64,
    /// `|(2x d_x + 3y d_y + 2) g|` relative to its terms.
    pub euler: f64,
}

/// Residuals of both differential equations for each root `g` at `(x, y)`.
pub fn g_system_residuals(x: Complex64, y: Complex64) -> Result<Vec<GSystemResidual>> {
    let lead = 9.0 * y * y - 4.0 * x * x * x;
    if lead.norm() < 1e-12 {
        return Err(Error::Precondition("(x, y) lies on the discriminant 9y^2 = 4x^3".into()));
    }
    let zero = Complex64::new(0.0, 0.0);
    let roots = poly_roots(&[Complex64::new(1.0, 0.0), 3.0 * x, zero, lead])?;
    let sys = ImplicitSystem::new(g_cubic());
    roots
        .iter()
        .map(|&g| {
            let d = sys.derivatives(&[x, y], g);
            let (gx, gy) = (d.first[0], d.first[1]);
            let (gxx, gyy) = (d.second[0][0], d.second[1][1]);
            let wave = (-gxx + x * gyy).norm() / (gxx.norm() + (x * gyy).norm());
            let euler_terms = [2.0 * x * gx, 3.0 * y * gy, 2.0 * g];
            let euler = euler_terms.iter().sum::<Complex64>().norm() / euler_terms.iter().map(|t| t.norm()).sum::<f64>();
            Ok(GSystemResidual { g, wave, euler })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branches::{BranchState, Family};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn termwise_identities_hold() {
        let r = borel_branch_identities(8).unwrap();
        assert!(r.passed(), "{:?}", r.first_mismatch);
    }

    #[test]
    fn discontinuities_match_branch_differences() {
        let x = c(1.0, 0.0);
        let opts = TrackOptions::default();
        let s = c(0.04, 0.0);
        let g = BranchState::at(Anchor::Zero, s, &opts).unwrap().g(x);
        let d = discontinuity(BranchLabel::g(2, Anchor::Zero), SingularPoint::YMinus, x, s).unwrap();
        assert!((d - (g[0] - g[1])).norm() < 1e-8);

        let s = c(0.96, 0.0);
        let g = BranchState::at(Anchor::One, s, &opts).unwrap().g(x);
        let d = discontinuity(BranchLabel::g(3, Anchor::One), SingularPoint::YPlus, x, s).unwrap();
        assert!((d - (g[0] - g[2])).norm() < 1e-8);

        let d = discontinuity_around(BranchLabel::g(1, Anchor::Zero), c(0.5, 0.3), x, c(0.5, 0.35)).unwrap();
        assert!(d.norm() < 1e-10);
    }

    #[test]
    fn roots_of_g_cubic_solve_the_system() {
        for (x, y) in [(c(1.0, 0.2), c(0.3, -0.4)), (c(-0.7, 1.1), c(2.0, 0.5))] {
            for r in g_system_residuals(x, y).unwrap() {
                assert!(g_cubic_residual(x, y, r.g).norm() < 1e-10);
                assert!(r.wave < 1e-10 && r.euler < 1e-10, "{r:?}");
            }
        }
    }

    #[test]
    fn label_family_is_respected() {
        let v = BranchValue::new(BranchLabel::x(1, Anchor::Zero), c(0.2, 0.0), c(2.0, 0.0), &TrackOptions::default())
            .unwrap();
        assert_eq!(v.label.family, Family::X);
        assert!((16.0 * v.value.powi(3) - 3.0 * v.value - v.state.c()).norm() < 1e-12);
    }
}
