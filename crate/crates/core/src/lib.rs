//! Exact distributions of length-3 vincular pattern occurrences on
//! flattened permutations.
//!
//! A permutation is flattened by writing it in standard cycle form (each
//! cycle led by its minimum, cycles ordered by their minima) and erasing the
//! parentheses. For a pattern `p` the distribution is
//! `g_n(q) = sum over S_n of q^(occurrences of p in the flattened form)`.

pub mod bijections;
pub mod closed_forms;
pub mod error;
pub mod numbers;
pub mod perm;
pub mod qpoly;
pub mod recurrences;
pub mod scalar;
pub mod series;
pub mod verify;

use num_bigint::BigInt;

pub use bijections::MarkedPartition;
pub use error::{Error, Result};
pub use perm::{BruteForce, CycleForm, Permutation, VincularPattern3};
pub use qpoly::Poly;
pub use recurrences::{DistributionTable, PatternId, RefinedTable};
pub use scalar::{Field, Scalar};
pub use series::Series;
pub use verify::{Report, Suite, Verifier};

/// Exact integer.
pub type Integer = BigInt;
/// Polynomials in `q` with exact integer coefficients.
pub type QPoly = Poly<BigInt>;
/// Exact rational.
pub type Rational = num_rational::BigRational;
/// Truncated power series with exact rational coefficients.
pub type PowerSeries = series::Series<Rational>;
