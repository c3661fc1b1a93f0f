//! Multivariate polynomials with integer coefficients and implicit differentiation
//! of an algebraic function `g` defined by `F(vars, g) = 0`.

use std::collections::BTreeMap;

use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

impl IntPoly {
    pub fn new(nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        let mut p = IntPoly { nvars, terms: BTreeMap::new() };
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent arity");
            *p.terms.entry(e.to_vec()).or_insert(0) += c;
        }
        p.terms.retain(|_, c| *c != 0);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                *terms.entry(e2).or_insert(0) += c * e[var] as i64;
            }
        }
        terms.retain(|_, c: &mut i64| *c != 0);
        IntPoly { nvars: self.nvars, terms }
    }

    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(z).fold(Complex64::new(*c as f64, 0.0), |acc, (k, v)| acc * v.powu(*k))
            })
            .sum()
    }

    /// Sum of the absolute values of the evaluated monomials, a scale for residuals.
    pub fn eval_magnitude(&self, z: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| e.iter().zip(z).fold((*c as f64).abs(), |acc, (k, v)| acc * v.norm().powi(*k as i32)))
            .sum()
    }

    /// Coefficients in ascending powers of variable `var`, evaluated at the other variables.
    pub fn coefficients_in(&self, var: usize, z: &[Complex64]) -> Vec<Complex64> {
        let deg = self.terms.keys().map(|e| e[var]).max().unwrap_or(0) as usize;
        let mut out = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (e, c) in &self.terms {
            let mut v = Complex64::new(*c as f64, 0.0);
            for (i, (k, zi)) in e.iter().zip(z).enumerate() {
                if i != var {
                    v *= zi.powu(*k);
                }
            }
            out[e[var] as usize] += v;
        }
        out
    }
}

/// First and second partial derivatives of `g` with respect to the first `n` variables,
/// where the last variable of `f` is `g` itself.
#[derive(Clone, Debug)]
pub struct ImplicitDerivatives {
    pub first: Vec<Complex64>,
    /// Symmetric matrix of second partials.
    pub second: Vec<Vec<Complex64>>,
}

/// Symbolic partials of `F` needed by the implicit-function formulas, computed once.
#[derive(Clone, Debug)]
pub struct ImplicitSystem {
    f: IntPoly,
    f_g: IntPoly,
    f_gg: IntPoly,
    f_i: Vec<IntPoly>,
    f_ig: Vec<IntPoly>,
    f_ij: Vec<Vec<IntPoly>>,
}

impl ImplicitSystem {
    pub fn new(f: IntPoly) -> Self {
        let n = f.nvars() - 1;
        let f_g = f.derivative(n);
        let f_gg = f_g.derivative(n);
        let f_i: Vec<IntPoly> = (0..n).map(|i| f.derivative(i)).collect();
        let f_ig = f_i.iter().map(|p| p.derivative(n)).collect();
        let f_ij = f_i.iter().map(|p| (0..n).map(|j| p.derivative(j)).collect()).collect();
        ImplicitSystem { f, f_g, f_gg, f_i, f_ig, f_ij }
    }

    pub fn polynomial(&self) -> &IntPoly {
        &self.f
    }

    /// `g_i = -F_i/F_g`, `g_ij = -(F_ij + F_ig g_j + F_jg g_i + F_gg g_i g_j)/F_g`.
    pub fn derivatives(&self, vars: &[Complex64], g: Complex64) -> ImplicitDerivatives {
        let n = self.f_i.len();
        let mut z = vars.to_vec();
        z.push(g);
        let fg = self.f_g.eval(&z);
        let fgg = self.f_gg.eval(&z);
        let first: Vec<Complex64> = self.f_i.iter().map(|p| -p.eval(&z) / fg).collect();
        let fig: Vec<Complex64> = self.f_ig.iter().map(|p| p.eval(&z)).collect();
        let mut second = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for j in 0..n {
                let fij = self.f_ij[i][j].eval(&z);
                second[i][j] = -(fij + fig[i] * first[j] + fig[j] * first[i] + fgg * first[i] * first[j]) / fg;
            }
        }
        ImplicitDerivatives { first, second }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implicit_derivatives_of_a_circle_like_curve() {
        // g^2 - x = 0, so g = sqrt(x), g' = 1/(2g), g'' = -1/(4 g^3)
        let f = IntPoly::new(2, &[(&[0, 2], 1), (&[1, 0], -1)]);
        let sys = ImplicitSystem::new(f);
        let x = Complex64::new(0.7, 0.2);
        let g = x.sqrt();
        let d = sys.derivatives(&[x], g);
        assert!((d.first[0] - 0.5 / g).norm() < 1e-14);
        assert!((d.second[0][0] + 0.25 / (g * g * g)).norm() < 1e-14);
    }

    #[test]
    fn derivative_and_coefficients() {
        // 3 x^2 y + y^3
        let p = IntPoly::new(2, &[(&[2, 1], 3), (&[0, 3], 1)]);
        assert_eq!(p.derivative(0), IntPoly::new(2, &[(&[1, 1], 6)]));
        let c = p.coefficients_in(1, &[Complex64::new(2.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert_eq!(c.len(), 4);
        assert!((c[1] - 12.0).norm() < 1e-15 && (c[3] - 1.0).norm() < 1e-15);
    }
}
