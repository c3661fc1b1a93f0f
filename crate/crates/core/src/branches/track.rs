//! Predictor-corrector continuation of the three roots along paths in the `s`-plane.

use num_complex::Complex64;
use serde::Serialize;

use super::cubic::solve_cubic_c;
use super::series::numeric_series;
use super::{Anchor, BranchLabel, Family};
use crate::error::{Error, Result};
use crate::numeric::roots::newton_polish;

#[derive(Clone, Copy, Debug)]
pub struct TrackOptions {
    /// Step bound `|ds| <= max_step * max(1, |s|)`.
    pub max_step: f64,
    pub min_step: f64,
    /// The matched root must be this many times closer than any other.
    pub match_ratio: f64,
    /// Radius of the local chart around the crossing point `s = 1/2`.
    pub chart_radius: f64,
    /// Segments passing closer than this to `s = 1/2` go through the chart.
    pub chart_trigger: f64,
    /// Distance from an end anchor below which values come straight from the series.
    pub seed_radius: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions {
            max_step: 0.01,
            min_step: 1e-12,
            match_ratio: 3.0,
            chart_radius: 0.05,
            chart_trigger: 0.03,
            seed_radius: 0.01,
        }
    }
}

/// Point on the Riemann surface: `s`, the chosen `s^{1/2}` and `(1-s)^{1/2}`, and the
/// three roots in label order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BranchState {
    #[serde(with = "crate::util::c64")]
    pub s: Complex64,
    #[serde(with = "crate::util::c64")]
    pub p: Complex64,
    #[serde(with = "crate::util::c64")]
    pub q: Complex64,
    #[serde(with = "crate::util::c64_array")]
    pub roots: [Complex64; 3],
}

fn cubic_coeffs(c: Complex64) -> [Complex64; 4] {
    [-c, Complex64::new(-3.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(16.0, 0.0)]
}

/// Square root of `z` on the sheet closest to `prev`.
fn follow_sqrt(z: Complex64, prev: Complex64) -> Complex64 {
    let r = z.sqrt();
    if (r - prev).norm() <= (r + prev).norm() {
        r
    } else {
        -r
    }
}

fn local_series_roots(anchor: Anchor, t: Complex64) -> [Complex64; 3] {
    [1, 2, 3].map(|k| numeric_series(anchor, k).eval(t))
}

/// Distance from `z0` to the segment `[a, b]`, and the parameter interval inside radius `r`.
fn segment_disc(a: Complex64, b: Complex64, z0: Complex64, r: f64) -> (f64, Option<(f64, f64)>) {
    let d = b - a;
    let len2 = d.norm_sqr();
    let w = a - z0;
    if len2 == 0.0 {
        let dist = w.norm();
        return (dist, (dist < r).then_some((0.0, 0.0)));
    }
    let t_star = (-(w.re * d.re + w.im * d.im) / len2).clamp(0.0, 1.0);
    let dist = (w + d * t_star).norm();
    // |w + t d|^2 = r^2
    let bq = 2.0 * (w.re * d.re + w.im * d.im);
    let cq = w.norm_sqr() - r * r;
    let disc = bq * bq - 4.0 * len2 * cq;
    if disc <= 0.0 {
        return (dist, None);
    }
    let sq = disc.sqrt();
    let t0 = ((-bq - sq) / (2.0 * len2)).max(0.0);
    let t1 = ((-bq + sq) / (2.0 * len2)).min(1.0);
    (dist, (t0 <= t1).then_some((t0, t1)))
}

impl BranchState {
    pub fn c(&self) -> Complex64 {
        self.p * self.q
    }

    /// `g_j = X_j / (x c)`.
    pub fn g(&self, x: Complex64) -> [Complex64; 3] {
        let d = x * self.c();
        self.roots.map(|r| r / d)
    }

    /// Largest `|16X^3 - 3X - c|` over the three roots.
    pub fn residual(&self) -> f64 {
        let c = self.c();
        self.roots.iter().map(|x| (16.0 * x * x * x - 3.0 * x - c).norm()).fold(0.0, f64::max)
    }

    /// State from the anchor expansion; `t` is `s^{1/2}`, `(1-s)^{1/2}` or `s - 1/2`.
    pub fn seed(anchor: Anchor, t: Complex64) -> Result<Self> {
        let one = Complex64::new(1.0, 0.0);
        let (s, p, q, roots) = match anchor {
            Anchor::Zero => {
                let s = t * t;
                (s, t, (one - s).sqrt(), local_series_roots(anchor, t))
            }
            Anchor::One => {
                let s = one - t * t;
                (s, s.sqrt(), t, local_series_roots(anchor, t))
            }
            Anchor::Half => {
                let s = 0.5 + t;
                (s, s.sqrt(), (one - s).sqrt(), local_series_roots(anchor, t.sqrt()))
            }
        };
        let coeffs = cubic_coeffs(p * q);
        let roots = roots.map(|r| newton_polish(&coeffs, r, 4));
        let st = BranchState { s, p, q, roots };
        if st.residual() > 1e-10 {
            return Err(Error::NonConvergence(format!("seeding from the {anchor:?} expansion at t = {t}")));
        }
        Ok(st)
    }

    /// State at `s` reached along the straight segment from the anchor, with principal
    /// square roots of the local variable on that segment.
    pub fn at(anchor: Anchor, s: Complex64, opts: &TrackOptions) -> Result<Self> {
        let a = Complex64::new(anchor.point(), 0.0);
        let sigma = match anchor {
            Anchor::One => a - s,
            _ => s - a,
        };
        let r = sigma.norm();
        if anchor != Anchor::Half {
            let other = Complex64::new(1.0 - anchor.point(), 0.0);
            let (dist, _) = segment_disc(a, s, other, 0.0);
            if dist < 1e-9 {
                return Err(Error::Precondition(format!(
                    "segment from the anchor {} to s = {s} runs through the other branch point",
                    anchor.point()
                )));
            }
        }
        if r == 0.0 && anchor != Anchor::Half {
            return Err(Error::Precondition("branch values are not defined at the branch point itself".into()));
        }
        let seed_r = if anchor == Anchor::Half { opts.chart_radius * 0.5 } else { opts.seed_radius };
        if r <= seed_r {
            let t = if anchor == Anchor::Half { sigma } else { sigma.sqrt() };
            return Self::seed(anchor, t);
        }
        let sigma0 = sigma * (seed_r / r);
        let t = if anchor == Anchor::Half { sigma0 } else { sigma0.sqrt() };
        Self::seed(anchor, t)?.continue_to(s, opts)
    }

    fn try_step(&self, s_new: Complex64, ratio: f64) -> Option<Self> {
        let p = follow_sqrt(s_new, self.p);
        let q = follow_sqrt(1.0 - s_new, self.q);
        let c_new = p * q;
        let fresh = solve_cubic_c(c_new).ok()?;
        let dc = c_new - self.c();
        let mut roots = [Complex64::new(0.0, 0.0); 3];
        let mut used = [false; 3];
        for (i, r) in self.roots.iter().enumerate() {
            let deriv = 48.0 * r * r - 3.0;
            let pred = if deriv.norm() > 0.3 { r + dc / deriv } else { *r };
            let mut dist: Vec<(f64, usize)> = fresh.iter().enumerate().map(|(j, f)| ((f - pred).norm(), j)).collect();
            dist.sort_by(|a, b| a.0.total_cmp(&b.0));
            if dist[1].0 < ratio * dist[0].0 || used[dist[0].1] {
                return None;
            }
            used[dist[0].1] = true;
            roots[i] = fresh[dist[0].1];
        }
        Some(BranchState { s: s_new, p, q, roots })
    }

    fn step_plain(&self, target: Complex64, opts: &TrackOptions) -> Result<Self> {
        let mut st = *self;
        let mut h_scale = 1.0;
        while st.s != target {
            let rem = target - st.s;
            let near = st.s.norm().min((1.0 - st.s).norm());
            let mut h = (opts.max_step * st.s.norm().max(1.0)).min(0.25 * near) * h_scale;
            loop {
                if h < opts.min_step {
                    return Err(Error::StepUnderflow { s: st.s });
                }
                let s_new = if rem.norm() <= h { target } else { st.s + rem * (h / rem.norm()) };
                match st.try_step(s_new, opts.match_ratio) {
                    Some(next) => {
                        st = next;
                        h_scale = (h_scale * 2.0).min(1.0);
                        break;
                    }
                    None => {
                        h *= 0.5;
                        h_scale *= 0.5;
                    }
                }
            }
        }
        Ok(st)
    }

    /// Crosses the neighbourhood of `s = 1/2` using the local expansions.
    fn chart_jump(&self, target: Complex64, opts: &TrackOptions) -> Result<Self> {
        let c = self.c();
        let eps = if c.re >= 0.0 { 1.0 } else { -1.0 };
        let local = |s: Complex64| local_series_roots(Anchor::Half, (s - 0.5).sqrt()).map(|r| r * eps);
        let here = local(self.s);
        let mut label = [0usize; 3];
        for (i, r) in self.roots.iter().enumerate() {
            let mut dist: Vec<(f64, usize)> = here.iter().enumerate().map(|(j, f)| ((f - r).norm(), j)).collect();
            dist.sort_by(|a, b| a.0.total_cmp(&b.0));
            if dist[1].0 < opts.match_ratio * dist[0].0 {
                return Err(Error::StepUnderflow { s: self.s });
            }
            label[i] = dist[0].1;
        }
        if label[0] == label[1] || label[1] == label[2] || label[0] == label[2] {
            return Err(Error::StepUnderflow { s: self.s });
        }
        let p = follow_sqrt(target, self.p);
        let q = follow_sqrt(1.0 - target, self.q);
        let there = local(target);
        let coeffs = cubic_coeffs(p * q);
        let roots = [0, 1, 2].map(|i| newton_polish(&coeffs, there[label[i]], 3));
        let st = BranchState { s: target, p, q, roots };
        if st.residual() > 1e-9 {
            return Err(Error::NonConvergence(format!("chart crossing near s = 1/2 ended off the curve at {target}")));
        }
        Ok(st)
    }

    /// Continues along the straight segment to `target`.
    pub fn continue_to(&self, target: Complex64, opts: &TrackOptions) -> Result<Self> {
        let half = Complex64::new(0.5, 0.0);
        let (dist, inside) = segment_disc(self.s, target, half, opts.chart_radius);
        let start_inside = (self.s - half).norm() < opts.chart_radius;
        match inside {
            Some((t0, t1)) if dist < opts.chart_trigger || start_inside => {
                let d = target - self.s;
                let entry = self.s + d * t0;
                let exit = self.s + d * t1;
                let st = if t0 > 0.0 { self.step_plain(entry, opts)? } else { *self };
                let st = st.chart_jump(exit, opts)?;
                if t1 < 1.0 {
                    st.step_plain(target, opts)
                } else {
                    Ok(st)
                }
            }
            _ => self.step_plain(target, opts),
        }
    }

    pub fn continue_along(&self, path: &[Complex64], opts: &TrackOptions) -> Result<Self> {
        let mut st = *self;
        for w in path {
            st = st.continue_to(*w, opts)?;
        }
        Ok(st)
    }
}

/// A single labeled branch value together with the state that carries it.
#[derive(Clone, Debug, Serialize)]
pub struct BranchValue {
    pub label: BranchLabel,
    #[serde(with = "crate::util::c64")]
    pub s: Complex64,
    #[serde(with = "crate::util::c64")]
    pub value: Complex64,
    /// `x` for the `g` family, 1 otherwise.
    #[serde(with = "crate::util::c64")]
    pub x: Complex64,
    pub state: BranchState,
    /// Position of this branch in `state.roots` (it moves under monodromy).
    pub slot: usize,
    #[serde(with = "crate::util::c64_vec")]
    pub path_history: Vec<Complex64>,
}

impl BranchValue {
    pub fn new(label: BranchLabel, s: Complex64, x: Complex64, opts: &TrackOptions) -> Result<Self> {
        let state = BranchState::at(label.anchor, s, opts)?;
        let slot = label.index - 1;
        let x = if label.family == Family::G { x } else { Complex64::new(1.0, 0.0) };
        Ok(Self::from_state(label, state, slot, x, vec![s]))
    }

    fn from_state(label: BranchLabel, state: BranchState, slot: usize, x: Complex64, path_history: Vec<Complex64>) -> Self {
        let value = match label.family {
            Family::X => state.roots[slot],
            Family::G => state.g(x)[slot],
        };
        BranchValue { label, s: state.s, value, x, state, slot, path_history }
    }
}

pub fn continue_branch(start: &BranchValue, path: &[Complex64], opts: &TrackOptions) -> Result<BranchValue> {
    let state = start.state.continue_along(path, opts)?;
    let mut history = start.path_history.clone();
    history.extend_from_slice(path);
    Ok(BranchValue::from_state(start.label, state, start.slot, start.x, history))
}

/// Samples a branch at `n + 1` equally spaced points of the segment `[from, to]`.
pub fn trace_real(
    label: BranchLabel,
    from: Complex64,
    to: Complex64,
    n: usize,
    x: Complex64,
    opts: &TrackOptions,
) -> Result<Vec<BranchValue>> {
    let mut base = BranchValue::new(label, from, x, opts)?;
    let mut out = vec![base.clone()];
    for k in 1..=n {
        let s = from + (to - from) * (k as f64 / n as f64);
        let v = continue_branch(&base, &[s], opts)?;
        // a sample on the collision at s = 1/2 is reached but never continued from
        if (s - 0.5).norm() > opts.min_step {
            base = v.clone();
        }
        out.push(v);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::branches::series::branch_series;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trace_through_the_collision_point() {
        let opts = TrackOptions::default();
        let label = BranchLabel::x(3, Anchor::Zero);
        let coarse = trace_real(label, c(0.01, 0.0), c(0.99, 0.0), 4, c(1.0, 0.0), &opts).unwrap();
        assert!((coarse[2].value - c(-0.25, 0.0)).norm() < 1e-6);
        let fine = trace_real(label, c(0.01, 0.0), c(0.99, 0.0), 7, c(1.0, 0.0), &opts).unwrap();
        assert!((coarse[4].value - fine[7].value).norm() < 1e-12);
    }

    #[test]
    fn real_axis_continuation_reaches_the_far_anchor() {
        let opts = TrackOptions::default();
        let st = BranchState::at(Anchor::Zero, c(0.01, 0.0), &opts).unwrap();
        let end = st.continue_to(c(0.99, 0.0), &opts).unwrap();
        let t = c(0.01f64.sqrt(), 0.0);
        let r3 = 3f64.sqrt() / 4.0;
        // labels at s = 1: (sqrt3/4, 0, -sqrt3/4)
        let far = [1, 2, 3].map(|k| {
            branch_series(BranchLabel::x(k, Anchor::One), 12).unwrap().eval_at_sqrt(t)
        });
        assert!((end.roots[0] - far[0]).norm() < 1e-6);
        assert!((end.roots[1] - far[1]).norm() < 1e-6);
        assert!((end.roots[2] - far[2]).norm() < 1e-6);
        assert!((end.roots[0].re - r3).abs() < 0.1 && end.roots[2].re < -0.3);
    }

    #[test]
    fn loop_around_zero_swaps_first_two_g() {
        let opts = TrackOptions::default();
        let x = c(1.0, 0.0);
        let st = BranchState::at(Anchor::Zero, c(0.04, 0.0), &opts).unwrap();
        let circle: Vec<Complex64> =
            (1..=64).map(|k| Complex64::from_polar(0.04, 2.0 * std::f64::consts::PI * k as f64 / 64.0)).collect();
        let end = st.continue_along(&circle, &opts).unwrap();
        let g0 = st.g(x);
        let g1 = end.g(x);
        assert!((g1[0] - g0[1]).norm() < 1e-10);
        assert!((g1[1] - g0[0]).norm() < 1e-10);
        assert!((g1[2] - g0[2]).norm() < 1e-10);
    }

    #[test]
    fn refinement_does_not_move_the_endpoint() {
        let opts = TrackOptions::default();
        let st = BranchState::at(Anchor::Zero, c(0.05, 0.05), &opts).unwrap();
        let coarse = st.continue_along(&[c(0.8, 0.3), c(1.4, -0.2)], &opts).unwrap();
        let fine = st.continue_along(&[c(0.425, 0.175), c(0.8, 0.3), c(1.1, 0.05), c(1.4, -0.2)], &opts).unwrap();
        for k in 0..3 {
            assert!((coarse.roots[k] - fine.roots[k]).norm() < 1e-12);
        }
    }
}
