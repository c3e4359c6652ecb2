//! Exact laboratory for partial-feedback online learning games.
//!
//! Everything is finite and exact: label and hypothesis sets are bitmasks,
//! probabilities are rationals on a fixed grid, and every value is computed
//! by exhaustive minimax search with memoization.

pub mod adversaries;
pub mod bits;
pub mod dims;
mod error;
pub mod game;
pub mod games;
pub mod harness;
pub mod learners;
pub mod measure_dims;
pub mod setsys;

pub use error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
