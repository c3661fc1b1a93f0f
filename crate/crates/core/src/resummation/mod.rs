//! Borel sums of the Airy WKB solutions as Laplace integrals of the algebraic branches,
//! their continuation across the Stokes line `arg x = 0`, and the link with Ai and Bi.

mod airy;
mod quadrature;
mod ray;
mod verify;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::airy_wkb::closed_form_coefficients;
use crate::error::{Error, Result};
use crate::Sign;
use ray::{Combination, Ray};

pub use airy::{airy_reference, AiryValues};
pub use quadrature::{integrate, kronrod_nodes, QuadResult};
pub use verify::{
    default_voros_grid, verify_airy_link, voros_grid, voros_point, AiryLinkReport, VorosRow,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    /// `-2 pi/3 < arg x < 0`.
    I,
    /// `0 < arg x < 2 pi/3`.
    II,
    /// On one of the Stokes lines `arg x = 0, +-2 pi/3`.
    Boundary,
    Outside,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct StokesContext {
    #[serde(with = "crate::util::c64")]
    pub x: Complex64,
    pub region: Region,
    /// `y = -(2/3) x^{3/2}` and `y = +(2/3) x^{3/2}`.
    #[serde(with = "crate::util::c64_array")]
    pub singular_points: [Complex64; 2],
}

impl StokesContext {
    /// Start of the integration ray `l_+` (sign +) or `l_-` (sign -).
    pub fn ray_base(&self, sign: Sign) -> Complex64 {
        match sign {
            Sign::Plus => self.singular_points[0],
            Sign::Minus => self.singular_points[1],
        }
    }
}

const BOUNDARY_EPS: f64 = 1e-12;

pub fn classify_stokes(x: Complex64) -> Result<StokesContext> {
    if x.norm() == 0.0 {
        return Err(Error::TurningPoint);
    }
    if !x.is_finite() {
        return Err(Error::Precondition(format!("non-finite x = {x}")));
    }
    let a = x.arg();
    let edge = 2.0 * PI / 3.0;
    let region = if a.abs() < BOUNDARY_EPS || (a.abs() - edge).abs() < BOUNDARY_EPS {
        Region::Boundary
    } else if a < 0.0 && a > -edge {
        Region::I
    } else if a > 0.0 && a < edge {
        Region::II
    } else {
        Region::Outside
    };
    let y = x.powf(1.5) * (2.0 / 3.0);
    Ok(StokesContext { x, region, singular_points: [-y, y] })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BorelSum {
    pub sign: Sign,
    pub region: Region,
    pub eta: f64,
    /// Direction `e^{i theta}` of the integration ray.
    pub theta: f64,
    #[serde(with = "crate::util::c64")]
    pub x: Complex64,
    #[serde(with = "crate::util::c64")]
    pub value: Complex64,
    pub quadrature_error_estimate: f64,
    pub evaluations: usize,
}

fn ray_integral(mut ray: Ray, region: Region, tol: f64) -> Result<BorelSum> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Precondition(format!("tolerance {tol} must lie in (0, 1)")));
    }
    let upper = ray.cutoff(tol);
    let r = integrate(|u| ray.integrand(u), 0.0, upper, 8, tol, 0.0, 400_000)?;
    // Gaussian tail beyond the cutoff, with room for the slow growth of the branches
    let tail = 2.0 * ray.integrand(upper)?.norm() / (2.0 * upper * ray.eta * ray.theta.cos());
    let f = ray.exp_factor();
    Ok(BorelSum {
        sign: ray.sign(),
        region,
        eta: ray.eta,
        theta: ray.theta,
        x: ray.x,
        value: r.value * f,
        quadrature_error_estimate: (r.error + tail) * f.norm(),
        evaluations: r.evaluations,
    })
}

fn combination(sign: Sign) -> Combination {
    match sign {
        Sign::Plus => Combination::Plus,
        Sign::Minus => Combination::Minus,
    }
}

/// `Psi_{+-}^J`: the Laplace integral of `psi_{+-,B}` along the horizontal ray `l_{+-}(x)`.
pub fn laplace_sum(sign: Sign, ctx: &StokesContext, eta: f64, tol: f64) -> Result<BorelSum> {
    match ctx.region {
        Region::I | Region::II => {}
        other => {
            return Err(Error::Precondition(format!(
                "Borel sums are defined in the open regions I and II; x = {} is {other:?}",
                ctx.x
            )))
        }
    }
    ray_integral(Ray::new(combination(sign), ctx.x, eta, 0.0)?, ctx.region, tol)
}

/// Laplace integral along the ray `y0 + t e^{i theta}`, `t >= 0`.
pub fn laplace_sum_on_ray(sign: Sign, x: Complex64, eta: f64, theta: f64, tol: f64) -> Result<BorelSum> {
    let ctx = classify_stokes(x)?;
    ray_integral(Ray::new(combination(sign), x, eta, theta)?, ctx.region, tol)
}

/// Ray direction that carries `Psi_+^I` into region II without meeting `y = (2/3) x^{3/2}`:
/// the midpoint of `((3/2) arg x, pi/2)`, available for `0 < arg x < pi/3`.
pub fn tilted_direction(x: Complex64) -> Option<f64> {
    let lo = 1.5 * x.arg();
    (lo > 0.0 && lo < PI / 2.0).then_some(0.5 * (lo + PI / 2.0))
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ContinuedPsiPlus {
    pub psi_plus_ii: BorelSum,
    pub psi_minus_ii: BorelSum,
    /// `-(1/sqrt pi) int_{l_-} (Delta g3) e^{-y eta} dy`.
    #[serde(with = "crate::util::c64")]
    pub gamma: Complex64,
    pub gamma_error_estimate: f64,
    /// Branch that `g3` becomes after a loop around `y = (2/3) x^{3/2}` (0-based).
    pub monodromy_slot: usize,
    /// `Psi_+^II + Gamma`.
    pub via_discontinuity: BorelSum,
    /// Laplace integral along a tilted ray, when one exists.
    pub via_tilted_ray: Option<BorelSum>,
}

impl ContinuedPsiPlus {
    /// `|Psi_+^I - Psi_+^II - i Psi_-^II| / |Psi_+^II|` for both routes.
    pub fn voros_residuals(&self) -> (f64, Option<f64>) {
        let target = self.psi_plus_ii.value + Complex64::i() * self.psi_minus_ii.value;
        let norm = self.psi_plus_ii.value.norm();
        let a = (self.via_discontinuity.value - target).norm() / norm;
        let b = self.via_tilted_ray.map(|t| (t.value - target).norm() / norm);
        (a, b)
    }
}

/// Continues `Psi_+^I` from region I across `arg x = 0` to `x` in region II.
pub fn continue_psi_plus_across(ctx: &StokesContext, eta: f64, tol: f64) -> Result<ContinuedPsiPlus> {
    if ctx.region != Region::II {
        return Err(Error::Precondition(format!("x = {} is not in region II", ctx.x)));
    }
    let psi_plus_ii = laplace_sum(Sign::Plus, ctx, eta, tol)?;
    let psi_minus_ii = laplace_sum(Sign::Minus, ctx, eta, tol)?;
    let probe = Ray::new(Combination::Minus, ctx.x, eta, 0.0)?;
    let slot = probe.monodromy_of_g3()?;
    let gamma_sum = ray_integral(Ray::new(Combination::Gamma { slot }, ctx.x, eta, 0.0)?, ctx.region, tol)?;
    let mut via_discontinuity = psi_plus_ii;
    via_discontinuity.value += gamma_sum.value;
    via_discontinuity.quadrature_error_estimate += gamma_sum.quadrature_error_estimate;
    via_discontinuity.evaluations += gamma_sum.evaluations;
    let via_tilted_ray = match tilted_direction(ctx.x) {
        Some(theta) => Some(laplace_sum_on_ray(Sign::Plus, ctx.x, eta, theta, tol)?),
        None => None,
    };
    Ok(ContinuedPsiPlus {
        psi_plus_ii,
        psi_minus_ii,
        gamma: gamma_sum.value,
        gamma_error_estimate: gamma_sum.quadrature_error_estimate,
        monodromy_slot: slot,
        via_discontinuity,
        via_tilted_ray,
    })
}

/// `Psi_-^I` continued to `x` in region II, computed on a tilted ray (no singular point is
/// crossed, so it should equal `Psi_-^II`).
pub fn continue_psi_minus_across(ctx: &StokesContext, eta: f64, tol: f64) -> Result<BorelSum> {
    if ctx.region != Region::II {
        return Err(Error::Precondition(format!("x = {} is not in region II", ctx.x)));
    }
    let theta = tilted_direction(ctx.x).unwrap_or(PI / 4.0);
    laplace_sum_on_ray(Sign::Minus, ctx.x, eta, theta, tol)
}

/// Truncated WKB series `psi_{+-}` with `n_terms` terms, and the size of the first omitted term.
pub fn formal_sum(sign: Sign, x: Complex64, eta: f64, n_terms: usize) -> Result<(Complex64, f64)> {
    let c = closed_form_coefficients(n_terms, sign);
    let x32 = x.powf(1.5);
    let front = (x32 * (2.0 / 3.0) * eta * sign.factor() as f64).exp() / (eta.sqrt() * x.powf(0.25));
    let mut sum = Complex64::new(0.0, 0.0);
    let term = |n: usize| {
        let cn = num_traits::ToPrimitive::to_f64(&c[n]).unwrap_or(f64::NAN);
        front * cn / (x32 * eta).powi(n as i32)
    };
    for n in 0..n_terms {
        sum += term(n);
    }
    Ok((sum, term(n_terms).norm()))
}

/// `|Psi(lambda^2 x, lambda^{-3} eta) - lambda Psi(x, eta)| / |lambda Psi(x, eta)|`.
pub fn homogeneity_defect(sign: Sign, x: Complex64, eta: f64, lambda: f64, tol: f64) -> Result<f64> {
    let base = laplace_sum(sign, &classify_stokes(x)?, eta, tol)?;
    let scaled = laplace_sum(sign, &classify_stokes(x * lambda * lambda)?, eta / lambda.powi(3), tol)?;
    Ok((scaled.value - base.value * lambda).norm() / (base.value * lambda).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regions() {
        let r = |a: f64| classify_stokes(Complex64::from_polar(1.0, a)).unwrap().region;
        assert_eq!(r(-PI / 3.0), Region::I);
        assert_eq!(r(PI / 3.0), Region::II);
        assert_eq!(r(0.0), Region::Boundary);
        assert_eq!(r(2.0 * PI / 3.0), Region::Boundary);
        assert_eq!(r(3.0), Region::Outside);
        assert!(matches!(classify_stokes(Complex64::new(0.0, 0.0)), Err(Error::TurningPoint)));
    }

    #[test]
    fn boundary_is_rejected() {
        let ctx = classify_stokes(Complex64::new(1.0, 0.0)).unwrap();
        assert!(laplace_sum(Sign::Plus, &ctx, 5.0, 1e-8).is_err());
    }

    #[test]
    fn minus_sum_gives_ai() {
        let x = Complex64::from_polar(1.0, -1e-3);
        let eta = 10.0;
        let ctx = classify_stokes(x).unwrap();
        let s = laplace_sum(Sign::Minus, &ctx, eta, 1e-11).unwrap();
        let ai = airy_reference(x * eta.powf(2.0 / 3.0), 1e-13).unwrap().ai;
        let got = s.value * eta.cbrt() / (2.0 * PI.sqrt());
        assert!((got - ai).norm() < 1e-8 * ai.norm(), "{got} vs {ai}");
    }

    #[test]
    fn leading_behaviour_matches_formal_series() {
        let x = Complex64::from_polar(1.0, -PI / 3.0);
        let ctx = classify_stokes(x).unwrap();
        for eta in [10.0, 20.0, 40.0] {
            for sign in [Sign::Plus, Sign::Minus] {
                let s = laplace_sum(sign, &ctx, eta, 1e-12).unwrap();
                let (approx, omitted) = formal_sum(sign, x, eta, 3).unwrap();
                let ratio = (s.value - approx).norm() / omitted;
                assert!(ratio > 0.2 && ratio < 5.0, "sign {sign}, eta {eta}: ratio {ratio}");
            }
        }
    }

    #[test]
    fn halving_tolerance_stays_within_estimate() {
        let ctx = classify_stokes(Complex64::from_polar(1.1, -0.7)).unwrap();
        let a = laplace_sum(Sign::Plus, &ctx, 6.0, 1e-6).unwrap();
        let b = laplace_sum(Sign::Plus, &ctx, 6.0, 5e-7).unwrap();
        assert!((a.value - b.value).norm() <= a.quadrature_error_estimate, "{a:?} {b:?}");
    }
}
