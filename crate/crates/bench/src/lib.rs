//! Fixtures shared by the kernel benchmarks.

use qcflc_core::exact::{Basis, ExactLength};
use qcflc_core::flc::{recode_by_occurrences, Decomposition, PieceSet};
use qcflc_core::measure::{MeasureWindow, Piece};
use qcflc_core::symbolic::{fibonacci_word, suspend};
use qcflc_core::Rational;

/// Fibonacci point-mass comb with gaps 1 and phi.
pub fn fibonacci_comb(order: usize) -> MeasureWindow {
    let b = Basis::golden();
    let lengths = [ExactLength::parse(&b, "1").unwrap(), ExactLength::parse(&b, "phi").unwrap()];
    suspend(&fibonacci_word(order), &lengths).unwrap()
}

/// The comb cut at its atoms.
pub fn comb_decomposition(w: &MeasureWindow) -> Decomposition {
    let half = ExactLength::parse(w.basis(), "1/2").unwrap();
    let weights: Vec<Rational> = {
        let mut v: Vec<Rational> = w.content().atoms().iter().map(|a| a.weight).collect();
        v.sort();
        v.dedup();
        v
    };
    let pilots = weights
        .iter()
        .map(|c| Piece::atom(half.clone(), ExactLength::zero(w.basis()), *c).unwrap())
        .collect();
    recode_by_occurrences(w, &PieceSet::new(pilots).unwrap()).unwrap()
}
