//! Symbolic sequences and their suspensions: substitution, circle-map and
//! Bernoulli words, continued fractions, Gordon block statistics.

mod cf;
mod circle;
mod gordon;
pub mod quad;
mod suspension;
mod word;

pub use cf::{continued_fraction, convergents_within_bound, CFExpansion, KaminagaReport};
pub use circle::{bernoulli_word, circle_map_word, CircleWord, BOUNDARY_GUARD};
pub use gordon::{gordon_scan, GordonRow};
pub use quad::{QuadIrr, RealInput};
pub use suspension::{suspend, suspend_with_profiles, SuspensionParams};
pub use word::{
    count_occurrences, fibonacci_word, substitution_fixed_point, substitution_word, Substitution, Word,
};

use thiserror::Error;

use crate::exact::LengthError;
use crate::measure::MeasureError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SymbolicError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("unknown symbol `{0}`")]
    InvalidSymbol(String),
    #[error("seed `{0}` does not extend under the substitution")]
    NonExtendingSeed(String),
    #[error("n = {n}: n*alpha mod 1 lies within {distance:e} of a cut point")]
    BoundaryHit { n: i64, distance: f64 },
    #[error("precision exhausted after {trusted} trusted coefficient(s) {prefix:?}")]
    PrecisionExhausted { trusted: usize, prefix: Vec<u64> },
    #[error("word of length {len} cannot hold three blocks of length {p}")]
    InsufficientWindow { p: usize, len: usize },
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<LengthError> for SymbolicError {
    fn from(e: LengthError) -> Self {
        SymbolicError::Measure(e.into())
    }
}
