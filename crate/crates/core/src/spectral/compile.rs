use crate::exact::{rational_to_f64, sort_by_length, ExactLength};
use crate::measure::{MeasureWindow, Piece};

use super::mat::{Mat2, ScaledMat2};

/// One step of the propagation through a piece.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Factor {
    Atom(f64),
    /// Length and constant potential.
    Segment { len: f64, v: f64 },
}

impl Factor {
    pub fn matrix(&self, e: f64) -> Mat2 {
        match *self {
            Factor::Atom(c) => Mat2::atom(c),
            Factor::Segment { len, v } => Mat2::segment(e - v, len),
        }
    }
}

/// A piece flattened into factors in position order, energy independent.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CompiledPiece {
    factors: Vec<Factor>,
    len: f64,
}

impl CompiledPiece {
    pub fn from_factors(factors: Vec<Factor>) -> Self {
        let len = factors
            .iter()
            .map(|f| match f {
                Factor::Segment { len, .. } => *len,
                Factor::Atom(_) => 0.0,
            })
            .sum();
        CompiledPiece { factors, len }
    }

    /// Walks the breakpoints of `p` left to right: at each breakpoint the
    /// atom (if any) acts, then the segment up to the next breakpoint with
    /// the density found on its left end.
    pub fn new(p: &Piece) -> Self {
        let c = p.content();
        let zero = ExactLength::zero(p.basis());
        let mut cuts: Vec<ExactLength> = c.feature_offsets();
        cuts.push(zero.clone());
        cuts.push(p.len().clone());
        sort_by_length(&mut cuts, |x| x).expect("piece breakpoints are ordered at construction");
        cuts.dedup();

        let mut factors = Vec::with_capacity(2 * cuts.len());
        let mut atoms = c.atoms().iter().peekable();
        let mut steps = c.steps().iter().peekable();
        for w in cuts.windows(2) {
            let (x, next) = (&w[0], &w[1]);
            if let Some(a) = atoms.next_if(|a| &a.at == x) {
                factors.push(Factor::Atom(rational_to_f64(&a.weight)));
            }
            while steps.next_if(|s| le(&s.end, x)).is_some() {}
            let v = match steps.peek() {
                Some(s) if le(&s.start, x) => rational_to_f64(&s.value),
                _ => 0.0,
            };
            factors.push(Factor::Segment { len: (next - x).value(), v });
        }
        CompiledPiece::from_factors(factors)
    }

    pub fn window(w: &MeasureWindow) -> Self {
        Self::new(w.as_piece())
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> f64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Plain product, later factors on the left.
    pub fn transfer(&self, e: f64) -> Mat2 {
        self.factors.iter().fold(Mat2::IDENTITY, |m, f| f.matrix(e) * m)
    }

    pub fn propagate(&self, e: f64) -> ScaledMat2 {
        let mut s = ScaledMat2::identity();
        self.propagate_into(&mut s, e);
        s
    }

    pub fn propagate_into(&self, s: &mut ScaledMat2, e: f64) {
        for f in &self.factors {
            s.push(&f.matrix(e));
        }
    }
}

// breakpoints come from canonical content, so their order is never ambiguous
fn le(a: &ExactLength, b: &ExactLength) -> bool {
    a.try_le(b).expect("piece breakpoints are ordered at construction")
}

/// Transfer matrix of `p` at energy `e`: `T(concat(p, q)) = T(q) T(p)`.
pub fn transfer_matrix(p: &Piece, e: f64) -> Mat2 {
    CompiledPiece::new(p).transfer(e)
}

/// Scaled product across a whole window.
pub fn propagate(w: &MeasureWindow, e: f64) -> ScaledMat2 {
    CompiledPiece::window(w).propagate(e)
}
