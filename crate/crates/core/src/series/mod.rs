//! Exact arithmetic substrate: Q(sqrt 3) scalars, half-integer Puiseux series and
//! formal expansions in inverse powers of the large parameter.

mod eta;
mod exponent;
pub mod formal;
mod puiseux;
mod scalar;

pub use eta::EtaExpansion;
pub use exponent::Exponent;
pub use formal::FormalSeries;
pub use puiseux::PuiseuxSeries;
pub use scalar::{q, qi, ExactScalar, Q};

/// The three binary operations exposed for series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComposeMode {
    Exp,
    Sqrt,
    InvSqrt,
    Log1p,
}

pub fn series_arith(a: &PuiseuxSeries, b: &PuiseuxSeries, op: ArithOp) -> crate::Result<PuiseuxSeries> {
    match op {
        ArithOp::Add => a.add(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b),
    }
}

pub fn series_compose(a: &PuiseuxSeries, mode: ComposeMode) -> crate::Result<PuiseuxSeries> {
    match mode {
        ComposeMode::Exp => a.exp(),
        ComposeMode::Sqrt => a.sqrt(),
        ComposeMode::InvSqrt => a.inv_sqrt(),
        ComposeMode::Log1p => a.log1p(),
    }
}
