//! Exact arithmetic: rationals, sparse multivariate polynomials over ℚ and
//! truncated power series.
//!
//! One unit of polynomial exponent stands for cohomological degree 2, so a
//! class in `H^{2e}` is a polynomial of total exponent `e`.

mod poly;
mod rational;
mod series;

pub use poly::{Exponents, MultiPoly};
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use series::{series_invert, TruncSeries};
