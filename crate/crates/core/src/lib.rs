//! Exact WKB analysis of the Airy equation `(-d^2/dx^2 + eta^2 x) psi = 0` and of the
//! Pearcey system: formal WKB series, Borel transforms realised as branches of explicit
//! algebraic functions, numerical Borel summation and the connection formula across
//! the Stokes line, together with exact checks of the Pearcey operator identities.

pub mod airy_borel;
pub mod airy_wkb;
pub mod branches;
pub mod cli;
pub mod error;
pub mod numeric;
pub mod pearcey;
pub mod resummation;
pub mod series;
mod util;
pub mod weyl;

use std::fmt;
use std::str::FromStr;

pub use error::{Error, ErrorClass, Result};

/// Choice of the WKB branch `psi_+` or `psi_-`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn factor(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "+" | "plus" | "p" => Ok(Sign::Plus),
            "-" | "minus" | "m" => Ok(Sign::Minus),
            other => Err(format!("expected + or -, got `{other}`")),
        }
    }
}
