//! Floating-point helpers shared by the numeric modules.

pub mod mpoly;
pub mod roots;
