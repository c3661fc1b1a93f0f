//! Simultaneous polynomial root finding (Aberth-Ehrlich) with Newton polishing.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Evaluates `p(z)` and `p'(z)` for coefficients in ascending order.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of `sum_k coeffs[k] z^k`; the leading coefficient must be nonzero.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    if lead.norm() == 0.0 {
        return Err(Error::Precondition("leading coefficient vanishes".into()));
    }
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let bound = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    // geometric-mean radius from the constant term keeps the start circle reasonable
    let r0 = monic[0].norm().powf(1.0 / n as f64).clamp(1e-3, bound);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(r0, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut converged = false;
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (p, dp) = horner(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * sum);
            if w.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    if !converged && z.iter().any(|r| !r.is_finite()) {
        return Err(Error::NonConvergence("Aberth iteration".into()));
    }
    for r in z.iter_mut() {
        *r = newton_polish(&monic, *r, 3);
    }
    Ok(z)
}

/// A few Newton steps, each accepted only if it reduces `|p|`.
pub fn newton_polish(coeffs: &[Complex64], mut z: Complex64, steps: usize) -> Complex64 {
    let (mut p, _) = horner(coeffs, z);
    for _ in 0..steps {
        let (_, dp) = horner(coeffs, z);
        if dp.norm() == 0.0 {
            break;
        }
        let cand = z - p / dp;
        let (pc, _) = horner(coeffs, cand);
        if pc.norm() < p.norm() {
            z = cand;
            p = pc;
        } else {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn recovers_known_roots() {
        let want = [c(1.0, 0.0), c(-2.0, 0.5), c(0.3, -1.0), c(0.0, 2.0)];
        // expand prod (z - r)
        let mut p = vec![c(1.0, 0.0)];
        for r in want {
            let mut q = vec![c(0.0, 0.0); p.len() + 1];
            for (k, a) in p.iter().enumerate() {
                q[k + 1] += a;
                q[k] -= a * r;
            }
            p = q;
        }
        let got = poly_roots(&p).unwrap();
        for r in want {
            let d = got.iter().map(|g| (g - r).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-13, "{r} missing, nearest {d}");
        }
    }
}
