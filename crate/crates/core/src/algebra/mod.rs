//! Exact arithmetic substrate: Gaussian rationals, dense polynomials and
//! reduced rational functions. Floats appear only at evaluation boundaries.

mod gaussian;
mod linsolve;
mod poly;
mod ratfunc;

pub use gaussian::{rat_string, rat_to_f64, GaussianRational};
pub use linsolve::solve_linear;
pub use poly::Poly;
pub use ratfunc::RatFunc;

use num_rational::BigRational;

/// Shorthand for a real rational `n/d`.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
