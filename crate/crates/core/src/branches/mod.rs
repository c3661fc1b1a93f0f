//! Branches of the cubic `16 X^3 - 3 X - s^{1/2}(1-s)^{1/2} = 0` and of
//! `g = X / (x s^{1/2} (1-s)^{1/2})`, which solves `(9y^2 - 4x^3) g^3 + 3 x g + 1 = 0`.
//!
//! Labels follow the expansions at the anchors: at `s = 0` the roots start at
//! `(sqrt3/4, -sqrt3/4, 0)`, at `s = 1` at `(sqrt3/4, 0, -sqrt3/4)`.

mod checks;
mod cubic;
mod series;
mod track;

use std::fmt;

use serde::Serialize;

pub use checks::{
    discontinuity, discontinuity_around, g_cubic_residual, g_system_residuals, borel_branch_identities, GSystemResidual,
    SingularPoint, BorelBranchReport,
};
pub use cubic::{cubic_c, solve_cubic_c, solve_cubic_x, SqrtRule};
pub use series::{branch_series, numeric_series, NumericSeries};
pub use track::{continue_branch, trace_real, BranchState, BranchValue, TrackOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    X,
    G,
}

/// Expansion point of a branch label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Anchor {
    /// `s = 0`, series in `s^{1/2}`.
    Zero,
    /// `s = 1/2`, series in `s - 1/2`; index 1 is the simple root, 2 and 3 the crossing pair.
    Half,
    /// `s = 1`, series in `(1-s)^{1/2}`.
    One,
}

impl Anchor {
    pub fn point(self) -> f64 {
        match self {
            Anchor::Zero => 0.0,
            Anchor::Half => 0.5,
            Anchor::One => 1.0,
        }
    }

    pub fn variable(self) -> &'static str {
        match self {
            Anchor::Zero => "s",
            Anchor::Half => "s-1/2",
            Anchor::One => "1-s",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BranchLabel {
    pub family: Family,
    /// 1, 2 or 3.
    pub index: usize,
    pub anchor: Anchor,
}

impl BranchLabel {
    pub fn new(family: Family, index: usize, anchor: Anchor) -> Self {
        assert!((1..=3).contains(&index), "branch index must be 1, 2 or 3");
        BranchLabel { family, index, anchor }
    }

    pub fn x(index: usize, anchor: Anchor) -> Self {
        Self::new(Family::X, index, anchor)
    }

    pub fn g(index: usize, anchor: Anchor) -> Self {
        Self::new(Family::G, index, anchor)
    }
}

impl fmt::Display for BranchLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match self.family {
            Family::X => "X",
            Family::G => "g",
        };
        write!(f, "{fam}{}@{}", self.index, self.anchor.point())
    }
}

impl std::str::FromStr for BranchLabel {
    type Err = String;
    /// `X3`, `g1`, optionally suffixed with `@0`, `@0.5` or `@1` (default anchor `s = 0`).
    fn from_str(s: &str) -> Result<Self, String> {
        let (name, anchor) = match s.split_once('@') {
            Some((n, a)) => (n, a),
            None => (s, "0"),
        };
        let anchor = match anchor {
            "0" => Anchor::Zero,
            "0.5" | "1/2" => Anchor::Half,
            "1" => Anchor::One,
            other => return Err(format!("unknown anchor `{other}`")),
        };
        let mut chars = name.chars();
        let family = match chars.next() {
            Some('X') | Some('x') => Family::X,
            Some('g') | Some('G') => Family::G,
            _ => return Err(format!("label `{s}` must start with X or g")),
        };
        let index: usize = chars.as_str().parse().map_err(|_| format!("bad branch index in `{s}`"))?;
        if !(1..=3).contains(&index) {
            return Err(format!("branch index {index} out of range"));
        }
        Ok(BranchLabel { family, index, anchor })
    }
}
