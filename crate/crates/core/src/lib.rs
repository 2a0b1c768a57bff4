//! Exact exponential-polynomial algebra and numerical growth analysis.

pub mod algebra;
pub mod banklaine;
pub mod classn;
pub mod cli;
pub mod error;
pub mod expoly;
pub mod hfun;
pub mod indicator;
pub mod nevanlinna;
pub mod parse;
pub mod quad;
pub mod tc;

pub use algebra::{GaussianRational, Poly, RatFunc};
pub use error::{Error, Result};
pub use expoly::{ExpPoly, ExpTerm};
