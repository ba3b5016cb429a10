#![allow(dead_code)]

use proptest::prelude::*;

use qcflc_core::exact::{Basis, ExactLength, Rational};
use qcflc_core::measure::{Atom, Piece, PieceContent, Step};

pub fn g(s: &str) -> ExactLength {
    ExactLength::parse(&Basis::golden(), s).unwrap()
}

pub fn q(n: i128) -> Rational {
    Rational::from_integer(n)
}

pub const LENGTHS: [&str; 5] = ["1", "phi", "1/2", "3/2", "phi+1"];

/// Atoms and steps at multiples of `len / 8`, weights in quarters.
pub fn piece() -> impl Strategy<Value = Piece> {
    (
        0..LENGTHS.len(),
        prop::collection::vec((0i128..8, -12i128..=12), 0..3),
        prop::collection::vec((0i128..8, 1i128..=8, -20i128..=20), 0..3),
    )
        .prop_map(|(li, atoms, steps)| {
            let len = g(LENGTHS[li]);
            let at = |k: i128| len.scale(&Rational::new(k, 8));
            let atoms = atoms.into_iter().map(|(k, w)| Atom { at: at(k), weight: Rational::new(w, 4) }).collect();
            let steps = steps
                .into_iter()
                .map(|(k, d, v)| Step { start: at(k), end: at((k + d).min(8)), value: Rational::new(v, 2) })
                .filter(|s| s.start != s.end)
                .collect();
            Piece::new(len, PieceContent::new(atoms, steps).unwrap(), None).unwrap()
        })
}
