//! Window-level checkers for the finite local complexity hierarchy
//! (f.l.p, f.d.p, s.f.d.p, f.e.p, u.d.p), recodings along occurrence sets,
//! and eventual-periodicity detection.
//!
//! Every verdict is about the finite window handed in, never about the
//! infinite measure it was cut from.

mod decompose;
mod delone_measure;
mod local;
mod period;
mod recode;
pub mod report;
mod sfdp;
mod udp;

pub use decompose::decompose;
pub use delone_measure::{check_delone_measure_flc, DeloneMeasureReport};
pub use local::{check_fep, check_flp, FepReport, FlpReport};
pub use period::detect_eventual_period;
pub use recode::{build_delone_decomposition, recode_by_occurrences};
pub use sfdp::{check_sfdp, SfdpCounterexample, SfdpVerdict};
pub use udp::{check_udp, UdpVerdict};

use std::collections::HashMap;

use thiserror::Error;

use crate::exact::{ExactLength, LengthError};
use crate::measure::{concat, restrict, MeasureError, MeasureWindow, Piece};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FlcError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("no decomposition of the window tail from {from} into the given pieces")]
    NoDecomposition { from: ExactLength },
    #[error("window too short: {0}")]
    WindowTooShort(String),
    #[error("occurrences accumulate (gap {gap} below threshold {threshold})")]
    AccumulatingOccurrences { gap: String, threshold: String },
    #[error("occurrences are not relatively dense on the window: {0}")]
    NotRelativelyDense(String),
    #[error("invalid piece set: {0}")]
    InvalidPieceSet(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("decomposition does not reproduce the window")]
    InvalidDecomposition,
    #[error("search exceeded {0} states")]
    SearchLimit(usize),
}

impl From<LengthError> for FlcError {
    fn from(e: LengthError) -> Self {
        FlcError::Measure(e.into())
    }
}

pub type Result<T, E = FlcError> = std::result::Result<T, E>;

/// Finite set of local pieces with distinct labels.
#[derive(Debug, Clone, PartialEq)]
pub struct PieceSet {
    pieces: Vec<Piece>,
}

impl PieceSet {
    /// Unlabelled pieces get `p0`, `p1`, ... by position.
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(FlcError::InvalidPieceSet("empty".into()));
        }
        let basis = pieces[0].basis().clone();
        let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
        for (i, p) in pieces.into_iter().enumerate() {
            if p.basis() != &basis {
                return Err(LengthError::BasisMismatch.into());
            }
            let p = if p.label().is_none() { p.with_label(format!("p{i}")) } else { p };
            if out.iter().any(|q| q.label() == p.label()) {
                return Err(FlcError::InvalidPieceSet(format!("duplicate label `{}`", p.label().unwrap())));
            }
            out.push(p);
        }
        Ok(PieceSet { pieces: out })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn get(&self, i: usize) -> &Piece {
        &self.pieces[i]
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        self.pieces[i].label().expect("piece sets label every piece")
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.pieces.iter().position(|p| p.label() == Some(label))
    }

    /// Shortest piece length `l_P`.
    pub fn min_len(&self) -> Result<ExactLength> {
        let mut m = self.pieces[0].len().clone();
        for p in &self.pieces[1..] {
            m = m.try_min(p.len())?;
        }
        Ok(m)
    }

    /// Longest piece length `L_P`.
    pub fn max_len(&self) -> Result<ExactLength> {
        let mut m = self.pieces[0].len().clone();
        for p in &self.pieces[1..] {
            m = m.try_max(p.len())?;
        }
        Ok(m)
    }

    /// Collects distinct pieces in order of first appearance, labelling them
    /// `{prefix}0`, `{prefix}1`, ...; returns the set and the index sequence.
    pub(crate) fn intern(seq: Vec<Piece>, prefix: &str) -> Result<(PieceSet, Vec<usize>)> {
        let mut seen: HashMap<Piece, usize> = HashMap::new();
        let mut distinct = Vec::new();
        let mut indices = Vec::with_capacity(seq.len());
        for p in seq {
            let next = distinct.len();
            let idx = *seen.entry(p.clone()).or_insert_with(|| {
                distinct.push(p.with_label(format!("{prefix}{next}")));
                next
            });
            indices.push(idx);
        }
        Ok((PieceSet::new(distinct)?, indices))
    }
}

/// A window tail written as a concatenation of pieces from a [`PieceSet`],
/// starting at `x0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    x0: ExactLength,
    pieces: PieceSet,
    indices: Vec<usize>,
}

impl Decomposition {
    pub fn new(x0: ExactLength, pieces: PieceSet, indices: Vec<usize>) -> Result<Self> {
        if let Some(&i) = indices.iter().find(|&&i| i >= pieces.len()) {
            return Err(FlcError::InvalidPieceSet(format!("index {i} outside piece set")));
        }
        Ok(Decomposition { x0, pieces, indices })
    }

    pub fn from_labels(x0: ExactLength, pieces: PieceSet, labels: &[&str]) -> Result<Self> {
        let indices = labels
            .iter()
            .map(|l| pieces.index_of(l).ok_or_else(|| FlcError::InvalidPieceSet(format!("unknown label `{l}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(x0, pieces, indices)
    }

    pub fn x0(&self) -> &ExactLength {
        &self.x0
    }

    pub fn piece_set(&self) -> &PieceSet {
        &self.pieces
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn labels(&self) -> Vec<&str> {
        self.indices.iter().map(|&i| self.pieces.label(i)).collect()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Grid points `x_0 < x_1 < ... < x_n` (one more than the piece count).
    pub fn grid(&self) -> Vec<ExactLength> {
        let mut g = Vec::with_capacity(self.indices.len() + 1);
        let mut x = self.x0.clone();
        g.push(x.clone());
        for &i in &self.indices {
            x = &x + self.pieces.get(i).len();
            g.push(x.clone());
        }
        g
    }

    pub fn end(&self) -> ExactLength {
        self.grid().pop().expect("grid is never empty")
    }

    /// The concatenation of the labelled pieces.
    pub fn concatenation(&self) -> Result<Piece> {
        let seq: Vec<Piece> = self.indices.iter().map(|&i| self.pieces.get(i).clone()).collect();
        Ok(concat(&seq)?)
    }

    /// Round-trip law: the concatenation equals the window restricted to
    /// `[x0, x0 + total length)`.
    pub fn reproduces(&self, w: &MeasureWindow) -> Result<bool> {
        if self.indices.is_empty() {
            return Ok(true);
        }
        let c = self.concatenation()?;
        if self.x0.try_lt(w.origin())? || w.end().try_lt(&(&self.x0 + c.len()))? {
            return Ok(false);
        }
        Ok(restrict(w, &self.x0, c.len())? == c)
    }
}
