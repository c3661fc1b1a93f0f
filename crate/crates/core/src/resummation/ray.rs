//! Integrands of the Laplace integrals along `y = y0 + u^2 e^{i theta}`, with branch values
//! supplied by continuation along the image ray in the `s`-plane.

use num_complex::Complex64;

use crate::branches::{Anchor, BranchState, TrackOptions};
use crate::error::{Error, Result};
use crate::Sign;

/// Which combination of branches is integrated.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Combination {
    /// `psi_{+,B} = (g1 - g2) / sqrt(pi)` on the ray from `s = 0`.
    Plus,
    /// `psi_{-,B} = i (g1 - g3) / sqrt(pi)` on the ray from `s = 1`.
    Minus,
    /// `-(g_m - g3) / sqrt(pi)` on the ray from `s = 1`, the discontinuity of `g3`.
    Gamma { slot: usize },
}

const CHECKPOINT_SPACING: f64 = 0.05;

pub(crate) struct Ray {
    pub x: Complex64,
    pub eta: f64,
    pub theta: f64,
    omega: Complex64,
    delta: Complex64,
    anchor: Anchor,
    combo: Combination,
    seed_u: f64,
    opts: TrackOptions,
    checkpoints: Vec<(f64, BranchState)>,
}

impl Ray {
    pub fn new(combo: Combination, x: Complex64, eta: f64, theta: f64) -> Result<Self> {
        if x.norm() == 0.0 {
            return Err(Error::TurningPoint);
        }
        if eta.is_nan() || eta <= 0.0 {
            return Err(Error::Precondition("eta must be positive".into()));
        }
        if theta.cos() <= 1e-3 {
            return Err(Error::Precondition(format!("ray direction {theta} gives no exponential decay")));
        }
        let omega = Complex64::from_polar(1.0, theta);
        let delta = (omega * 3.0 / (x.powf(1.5) * 4.0)).sqrt();
        let anchor = match combo {
            Combination::Plus => Anchor::Zero,
            _ => Anchor::One,
        };
        // the image ray must keep away from the other branch point
        let dir = delta * delta;
        let other = match anchor {
            Anchor::Zero => Complex64::new(1.0, 0.0),
            _ => Complex64::new(-1.0, 0.0),
        };
        let along = (other * dir.conj()).re / dir.norm_sqr();
        let miss = (other - dir * along.max(0.0)).norm();
        if miss < 1e-6 {
            return Err(Error::Precondition(format!(
                "the integration ray at arg x = {:.6}, theta = {theta:.6} runs into the other singular point",
                x.arg()
            )));
        }
        let opts = TrackOptions::default();
        let seed_u = opts.seed_radius.sqrt() / delta.norm();
        Ok(Ray { x, eta, theta, omega, delta, anchor, combo, seed_u, opts, checkpoints: Vec::new() })
    }

    pub fn sign(&self) -> Sign {
        match self.combo {
            Combination::Plus => Sign::Plus,
            _ => Sign::Minus,
        }
    }

    /// `y0 = -(2/3) x^{3/2}` for the `+` ray, `+(2/3) x^{3/2}` otherwise.
    pub fn base(&self) -> Complex64 {
        let y = self.x.powf(1.5) * (2.0 / 3.0);
        match self.anchor {
            Anchor::Zero => -y,
            _ => y,
        }
    }

    /// `u` beyond which `|e^{-u^2 omega eta}| < tol e^{-10}`.
    pub fn cutoff(&self, tol: f64) -> f64 {
        (((1.0 / tol).ln() + 10.0) / (self.eta * self.theta.cos())).sqrt()
    }

    fn local(&self, u: f64) -> Complex64 {
        match self.anchor {
            Anchor::Zero => self.delta * u,
            _ => Complex64::i() * self.delta * u,
        }
    }

    fn s_of_u(&self, u: f64) -> Complex64 {
        let t = self.local(u);
        match self.anchor {
            Anchor::Zero => t * t,
            _ => 1.0 - t * t,
        }
    }

    pub fn state_at(&mut self, u: f64) -> Result<BranchState> {
        if u <= self.seed_u {
            return BranchState::seed(self.anchor, self.local(u));
        }
        if self.checkpoints.is_empty() {
            let st = BranchState::seed(self.anchor, self.local(self.seed_u))?;
            self.checkpoints.push((self.seed_u, st));
        }
        loop {
            let (last_u, last) = *self.checkpoints.last().expect("checkpoint");
            if u <= last_u + CHECKPOINT_SPACING {
                break;
            }
            let next_u = last_u + CHECKPOINT_SPACING;
            let st = last.continue_to(self.s_of_u(next_u), &self.opts)?;
            self.checkpoints.push((next_u, st));
        }
        let idx = self.checkpoints.partition_point(|(cu, _)| *cu <= u).saturating_sub(1);
        let (_, from) = self.checkpoints[idx];
        from.continue_to(self.s_of_u(u), &self.opts)
    }

    /// Integrand in `u` with the factor `e^{-y0 eta}` removed.
    pub fn integrand(&mut self, u: f64) -> Result<Complex64> {
        let st = self.state_at(u)?;
        let sqrt_pi = std::f64::consts::PI.sqrt();
        let decay = (-self.omega * self.eta * u * u).exp();
        let front = 2.0 * self.omega / (sqrt_pi * self.x * self.delta) * decay;
        let r = &st.roots;
        Ok(match self.combo {
            Combination::Plus => front * (r[0] - r[1]) / st.q,
            Combination::Minus => front * (r[0] - r[2]) / st.p,
            Combination::Gamma { slot } => -front * (r[slot] - r[2]) / (st.p * Complex64::i()),
        })
    }

    /// `e^{-y0 eta}`.
    pub fn exp_factor(&self) -> Complex64 {
        (-self.base() * self.eta).exp()
    }

    /// Slot that `g3` turns into after a counterclockwise loop around `s = 1` at the ray base.
    pub fn monodromy_of_g3(&self) -> Result<usize> {
        let start = BranchState::seed(Anchor::One, self.local(self.seed_u))?;
        let s0 = start.s;
        let path: Vec<Complex64> =
            (1..=64).map(|k| 1.0 + (s0 - 1.0) * Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 64.0)).collect();
        let end = start.continue_along(&path, &self.opts)?;
        // q changed sign, so the new roots are the negatives of a permutation of the old ones
        let target = -end.roots[2];
        let (best, dist) = start
            .roots
            .iter()
            .enumerate()
            .map(|(j, r)| (j, (r - target).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("three roots");
        if dist > 1e-8 {
            return Err(Error::NonConvergence("monodromy loop around s = 1 did not close".into()));
        }
        Ok(best)
    }
}
