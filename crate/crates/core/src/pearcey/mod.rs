//! The Pearcey system: exact WKB recursion in the cubic quotient ring, closedness and
//! primitive checks, and the quartic algebraic function `g` of the Borel plane.

mod field;
mod poly2;
mod quartic;
mod recursion;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;

pub use field::CubicFieldElement;
pub use poly2::Poly2;
pub use quartic::{
    annihilation_residuals, homogeneity_defect, quartic_coefficients, quartic_g_roots, quartic_polynomial,
    root_sum_defect, PearceyBranch,
};
pub use recursion::{check_closedness, check_primitives, pearcey_recursion, primitive, IdentityReport, PearceyWkb};

/// Uniform complex points in the box `[-1.5, 1.5]^2` per coordinate, skipping points
/// close to the singular locus.
pub fn sample_points(n: usize, seed: u64) -> Vec<[Complex64; 3]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let mut c = || Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
        let p = [c(), c(), c()];
        let (a, _) = quartic_coefficients(p[0], p[1], p[2]);
        if a.norm() > 1e-2 {
            out.push(p);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct PearceyReport {
    pub order: usize,
    pub seed: u64,
    pub points: usize,
    pub annihilation_points: usize,
    pub closedness: IdentityReport,
    pub primitives: IdentityReport,
    pub max_quartic_residual: f64,
    pub max_root_sum: f64,
    /// Worst residual of `P_{1,B} .. P_{4,B}` over all sampled branches.
    pub max_annihilation: [f64; 4],
    pub max_homogeneity_defect: f64,
}

impl PearceyReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.closedness.passed()
            && self.primitives.passed()
            && self.max_quartic_residual < 1e-12
            && self.max_root_sum < 1e-12
            && self.max_annihilation.iter().all(|&r| r < tol)
            && self.max_homogeneity_defect < 1e-10
    }
}

/// Quartic residual, root sum, and (annihilation, homogeneity) where checked.
type PointRow = (f64, f64, Option<([f64; 4], f64)>);

/// Runs the symbolic suite to `order` and the numeric checks at seeded random points
/// (annihilation and scaling at the first `annihilation_points` of them).
pub fn pearcey_verify(order: usize, points: usize, annihilation_points: usize, seed: u64) -> Result<PearceyReport> {
    let w = pearcey_recursion(order)?;
    let closedness = check_closedness(&w);
    let primitives = check_primitives(&w)?;
    let pts = sample_points(points, seed);
    let rows: Vec<PointRow> = pts
        .par_iter()
        .enumerate()
        .map(|(i, p)| -> Result<_> {
            let b = quartic_g_roots(p[0], p[1], p[2])?;
            let quart = b.iter().map(|r| r.quartic_residual()).fold(0.0, f64::max);
            let sum = root_sum_defect(&b);
            let extra = if i < annihilation_points {
                let mut worst = [0.0f64; 4];
                for r in &b {
                    for (w, v) in worst.iter_mut().zip(annihilation_residuals(r)) {
                        *w = w.max(v);
                    }
                }
                Some((worst, homogeneity_defect(p[0], p[1], p[2], 2.0)?))
            } else {
                None
            };
            Ok((quart, sum, extra))
        })
        .collect::<Result<_>>()?;
    let mut max_annihilation = [0.0f64; 4];
    let mut max_homogeneity_defect: f64 = 0.0;
    for (_, _, extra) in &rows {
        if let Some((a, h)) = extra {
            for (m, v) in max_annihilation.iter_mut().zip(a) {
                *m = m.max(*v);
            }
            max_homogeneity_defect = max_homogeneity_defect.max(*h);
        }
    }
    Ok(PearceyReport {
        order,
        seed,
        points,
        annihilation_points: annihilation_points.min(points),
        closedness,
        primitives,
        max_quartic_residual: rows.iter().map(|r| r.0).fold(0.0, f64::max),
        max_root_sum: rows.iter().map(|r| r.1).fold(0.0, f64::max),
        max_annihilation,
        max_homogeneity_defect,
    })
}
