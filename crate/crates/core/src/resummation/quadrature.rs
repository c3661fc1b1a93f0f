//! Globally adaptive Gauss-Kronrod (7, 15) quadrature for complex integrands on an interval.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then(other.a.total_cmp(&self.a))
    }
}

/// Nodes of the 15-point rule on `[a, b]`, in increasing order.
pub fn kronrod_nodes(a: f64, b: f64) -> [f64; 15] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [0.0; 15];
    for k in 0..7 {
        out[k] = c - h * XGK[k];
        out[14 - k] = c + h * XGK[k];
    }
    out[7] = c;
    out
}

fn panel<F: FnMut(f64) -> Result<Complex64>>(f: &mut F, a: f64, b: f64) -> Result<Panel> {
    let nodes = kronrod_nodes(a, b);
    let mut vals = [Complex64::new(0.0, 0.0); 15];
    for (v, x) in vals.iter_mut().zip(nodes) {
        *v = f(x)?;
        if !v.is_finite() {
            return Err(Error::Quadrature(format!("integrand is not finite at {x}")));
        }
    }
    let h = 0.5 * (b - a);
    let mut k = vals[7] * WGK[7];
    let mut g = vals[7] * WG[3];
    for j in 0..7 {
        let pair = vals[j] + vals[14 - j];
        k += pair * WGK[j];
        if j % 2 == 1 {
            g += pair * WG[j / 2];
        }
    }
    Ok(Panel { a, b, value: k * h, error: ((k - g) * h).norm() })
}

/// Integrates `f` over `[a, b]` until the summed panel error is below
/// `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: FnMut(f64) -> Result<Complex64>>(
    mut f: F,
    a: f64,
    b: f64,
    initial_panels: usize,
    rel_tol: f64,
    abs_tol: f64,
    max_evaluations: usize,
) -> Result<QuadResult> {
    let n = initial_panels.max(1);
    let mut heap = BinaryHeap::new();
    let mut evals = 0;
    for k in 0..n {
        let lo = a + (b - a) * k as f64 / n as f64;
        let hi = a + (b - a) * (k + 1) as f64 / n as f64;
        heap.push(panel(&mut f, lo, hi)?);
        evals += 15;
    }
    loop {
        let value: Complex64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        if error <= abs_tol.max(rel_tol * value.norm()) {
            return Ok(QuadResult { value, error, evaluations: evals });
        }
        if evals + 30 > max_evaluations {
            return Err(Error::Quadrature(format!(
                "error estimate {error:.3e} above tolerance after {evals} evaluations"
            )));
        }
        let worst = heap.pop().expect("non-empty panel set");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(Error::Quadrature(format!("panel [{}, {}] cannot be split further", worst.a, worst.b)));
        }
        heap.push(panel(&mut f, worst.a, mid)?);
        heap.push(panel(&mut f, mid, worst.b)?);
        evals += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integral() {
        let r = integrate(|u| Ok(Complex64::new((-u * u).exp(), 0.0)), 0.0, 8.0, 4, 1e-13, 0.0, 10_000).unwrap();
        assert!((r.value.re - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_complex() {
        let w = Complex64::new(3.0, 7.0);
        let r = integrate(|u| Ok((w * u).exp()), 0.0, 1.0, 1, 1e-13, 0.0, 10_000).unwrap();
        let exact = (w.exp() - 1.0) / w;
        assert!((r.value - exact).norm() < 1e-12 * exact.norm());
    }
}
