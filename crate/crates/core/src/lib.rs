//! Finite Ramanujan expansions of arithmetic functions and their use in
//! shifted convolution sums.
//!
//! Two numeric backends share every algorithm through [`Scalar`]: exact
//! rationals ([`Exact`]) and `f64` with compensated summation.

pub mod cli;
pub mod custom;
pub mod decay;
pub mod error;
pub mod expansion;
pub mod family;
pub mod ramanujan;
pub mod scalar;
pub mod shifted;
pub mod sieve;
pub mod table;

pub use error::{Error, Result};
pub use expansion::{dual_invert, evaluate, expansion_coeffs, truncate_support, FiniteExpansion};
pub use family::{Family, FamilySpec};
pub use ramanujan::{cr_row, lemma1_indicator, ramanujan_sum, ramanujan_sum_direct, RamanujanRow};
pub use scalar::{CompensatedSum, Exact, Scalar, Value, ValueKind};
pub use shifted::{
    brute_force, double_expansion, main_term, report, singular_series, theorem_bound, BoundKind,
    ConvolutionProblem, ConvolutionReport, Envelope,
};
pub use sieve::SieveTables;
pub use table::ArithTable;
