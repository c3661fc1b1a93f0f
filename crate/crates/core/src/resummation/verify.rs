//! Cross-checks of the Borel sums against the Airy reference values and the Voros formula.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{
    airy_reference, classify_stokes, continue_psi_minus_across, continue_psi_plus_across, laplace_sum, Region,
};
use crate::error::{Error, Result};
use crate::Sign;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AiryLinkReport {
    #[serde(with = "crate::util::c64")]
    pub x: Complex64,
    pub eta: f64,
    pub region: Region,
    #[serde(with = "crate::util::c64")]
    pub psi_plus: Complex64,
    #[serde(with = "crate::util::c64")]
    pub psi_minus: Complex64,
    #[serde(with = "crate::util::c64")]
    pub ai_reference: Complex64,
    #[serde(with = "crate::util::c64")]
    pub bi_reference: Complex64,
    #[serde(with = "crate::util::c64")]
    pub ai_from_sums: Complex64,
    #[serde(with = "crate::util::c64")]
    pub bi_from_sums: Complex64,
    pub ai_residual: f64,
    pub bi_residual: f64,
    /// Residuals of `Psi_- = 2 sqrt(pi) eta^{-1/3} Ai` and `Psi_+ = sqrt(pi) eta^{-1/3} (Bi +- i Ai)`.
    pub psi_minus_residual: f64,
    pub psi_plus_residual: f64,
}

impl AiryLinkReport {
    pub fn max_residual(&self) -> f64 {
        self.ai_residual.max(self.bi_residual).max(self.psi_minus_residual).max(self.psi_plus_residual)
    }
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

/// Ai and Bi at `eta^{2/3} x` from the Borel sums in the region of `x`.
///
/// Region I: `Bi = eta^{1/3} Psi_+ / sqrt(pi) - i eta^{1/3} Psi_- / (2 sqrt(pi))`;
/// region II uses `+i` in front of `Psi_-`.
pub fn verify_airy_link(x: Complex64, eta: f64, tol: f64) -> Result<AiryLinkReport> {
    let ctx = classify_stokes(x)?;
    let side = match ctx.region {
        Region::I => -1.0,
        Region::II => 1.0,
        other => return Err(Error::Precondition(format!("x = {x} lies in {other:?}, not in region I or II"))),
    };
    let plus = laplace_sum(Sign::Plus, &ctx, eta, tol)?.value;
    let minus = laplace_sum(Sign::Minus, &ctx, eta, tol)?.value;
    let reference = airy_reference(x * eta.powf(2.0 / 3.0), tol.min(1e-13))?;
    let e13 = eta.cbrt();
    let sp = PI.sqrt();
    let i = Complex64::i();
    let ai = e13 * minus / (2.0 * sp);
    let bi = e13 * plus / sp + side * i * e13 * minus / (2.0 * sp);
    let minus_pred = 2.0 * sp * reference.ai / e13;
    let plus_pred = sp * (reference.bi - side * i * reference.ai) / e13;
    Ok(AiryLinkReport {
        x,
        eta,
        region: ctx.region,
        psi_plus: plus,
        psi_minus: minus,
        ai_reference: reference.ai,
        bi_reference: reference.bi,
        ai_from_sums: ai,
        bi_from_sums: bi,
        ai_residual: rel(ai, reference.ai),
        bi_residual: rel(bi, reference.bi),
        psi_minus_residual: rel(minus, minus_pred),
        psi_plus_residual: rel(plus, plus_pred),
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct VorosRow {
    #[serde(with = "crate::util::c64")]
    pub x: Complex64,
    pub eta: f64,
    #[serde(with = "crate::util::c64")]
    pub psi_plus_ii: Complex64,
    #[serde(with = "crate::util::c64")]
    pub psi_minus_ii: Complex64,
    #[serde(with = "crate::util::c64")]
    pub gamma: Complex64,
    #[serde(with = "crate::util::c64")]
    pub psi_plus_i_via_discontinuity: Complex64,
    #[serde(with = "crate::util::c64_opt")]
    pub psi_plus_i_via_tilted_ray: Option<Complex64>,
    #[serde(with = "crate::util::c64")]
    pub psi_minus_i: Complex64,
    pub residual_discontinuity: f64,
    pub residual_tilted_ray: Option<f64>,
    pub residual_minus: f64,
    pub error_estimate: f64,
}

impl VorosRow {
    /// Worst `Psi_+` residual over the available routes.
    pub fn plus_residual(&self) -> f64 {
        self.residual_discontinuity.max(self.residual_tilted_ray.unwrap_or(0.0))
    }
}

pub fn voros_point(x: Complex64, eta: f64, tol: f64) -> Result<VorosRow> {
    let ctx = classify_stokes(x)?;
    let plus = continue_psi_plus_across(&ctx, eta, tol)?;
    let minus_i = continue_psi_minus_across(&ctx, eta, tol)?;
    let (ra, rb) = plus.voros_residuals();
    let minus_ii = plus.psi_minus_ii.value;
    Ok(VorosRow {
        x,
        eta,
        psi_plus_ii: plus.psi_plus_ii.value,
        psi_minus_ii: minus_ii,
        gamma: plus.gamma,
        psi_plus_i_via_discontinuity: plus.via_discontinuity.value,
        psi_plus_i_via_tilted_ray: plus.via_tilted_ray.map(|b| b.value),
        psi_minus_i: minus_i.value,
        residual_discontinuity: ra,
        residual_tilted_ray: rb,
        residual_minus: rel(minus_i.value, minus_ii),
        error_estimate: plus.via_discontinuity.quadrature_error_estimate / plus.psi_plus_ii.value.norm(),
    })
}

/// Ten points `r e^{i pi/6}` with `r` evenly spaced in `[0.8, 1.2]`, crossed with `eta`.
pub fn default_voros_grid() -> Vec<(Complex64, f64)> {
    let mut out = Vec::new();
    for eta in [5.0, 8.0, 12.0] {
        for k in 0..10 {
            let r = 0.8 + 0.4 * k as f64 / 9.0;
            out.push((Complex64::from_polar(r, PI / 6.0), eta));
        }
    }
    out
}

/// Evaluates [`voros_point`] over a grid in parallel; rows keep the input order.
pub fn voros_grid(points: &[(Complex64, f64)], tol: f64) -> Result<Vec<VorosRow>> {
    points.par_iter().map(|&(x, eta)| voros_point(x, eta, tol)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_one_identities() {
        let x = Complex64::from_polar(1.0, -PI / 6.0);
        for eta in [5.0, 10.0] {
            let r = verify_airy_link(x, eta, 1e-11).unwrap();
            assert!(r.max_residual() < 1e-8, "{r:?}");
        }
        let r = verify_airy_link(x, 5.0, 1e-11).unwrap();
        assert!((r.ai_from_sums - Complex64::new(-0.01583647658622698, 0.01244057754865971)).norm() < 1e-12);
        assert!((r.bi_from_sums - Complex64::new(-2.734940822434453, -3.696_454_079_559_47)).norm() < 1e-9);
    }

    #[test]
    fn region_two_variant() {
        let r = verify_airy_link(Complex64::from_polar(1.0, PI / 6.0), 8.0, 1e-11).unwrap();
        assert!(r.max_residual() < 1e-8, "{r:?}");
    }

    #[test]
    fn connection_formula_at_one_point() {
        let row = voros_point(Complex64::from_polar(1.0, PI / 6.0), 8.0, 1e-11).unwrap();
        let tilted = row.psi_plus_i_via_tilted_ray.unwrap();
        assert!((tilted - Complex64::new(-13.689_991_130_679_5, -7.273092027032427)).norm() < 1e-8);
        assert!(row.residual_discontinuity < 1e-8 && row.residual_tilted_ray.unwrap() < 1e-8, "{row:?}");
        assert!(row.residual_minus < 1e-9, "{row:?}");
    }
}
