//! Pieces, windows and colored Delone sets, with the concatenation,
//! restriction, occurrence and convolution calculus on them.
//!
//! All intervals are half-open: a piece of length `l` lives on `[0, l)` and
//! an atom sitting exactly on a restriction boundary belongs to the
//! left-closed side.

mod content;
mod delone;
pub mod json;
mod ops;

pub use content::{Atom, PieceContent, Step};
pub use delone::{analyze_point_set, ColoredDeloneSet, PointSetReport};
pub use ops::{
    check_translation_bound, concat, convolve, occurrences, restrict, OccurrenceRange, Occurrences,
};
pub(crate) use ops::sorted_unique;

use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::exact::{Basis, ExactLength, LengthError, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Length(#[from] LengthError),
    #[error("empty list")]
    Empty,
    #[error("length must be positive, got {0}")]
    NonPositiveLength(String),
    #[error("content outside [0, {len}): {detail}")]
    OutOfSupport { len: String, detail: String },
    #[error("request {request} is outside the window {window}")]
    OutOfRange { request: String, window: String },
    #[error("invalid content: {0}")]
    InvalidContent(String),
    #[error("invalid point set: {0}")]
    InvalidPointSet(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T, E = MeasureError> = std::result::Result<T, E>;

/// A finite measure on `[0, len)`.
///
/// Equality and hashing ignore the label: two pieces are equal exactly when
/// their lengths and measure contents agree coefficient-wise.
#[derive(Debug, Clone)]
pub struct Piece {
    len: ExactLength,
    content: PieceContent,
    label: Option<String>,
}

impl Piece {
    pub fn new(len: ExactLength, content: PieceContent, label: Option<String>) -> Result<Self> {
        if !len.is_positive()? {
            return Err(MeasureError::NonPositiveLength(len.to_string()));
        }
        content.check_within(&len)?;
        Ok(Piece { len, content, label })
    }

    pub fn zero(len: ExactLength) -> Result<Self> {
        Self::new(len, PieceContent::empty(), None)
    }

    /// Single atom of `weight` at offset `at`.
    pub fn atom(len: ExactLength, at: ExactLength, weight: Rational) -> Result<Self> {
        let content = PieceContent::new(vec![Atom { at, weight }], Vec::new())?;
        Self::new(len, content, None)
    }

    /// Constant density `value` on `[start, end)`.
    pub fn step(len: ExactLength, start: ExactLength, end: ExactLength, value: Rational) -> Result<Self> {
        let content = PieceContent::new(Vec::new(), vec![Step { start, end, value }])?;
        Self::new(len, content, None)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn len(&self) -> &ExactLength {
        &self.len
    }

    pub fn content(&self) -> &PieceContent {
        &self.content
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn basis(&self) -> &Basis {
        self.len.basis()
    }

    /// True when the piece is `c * Lebesgue` on its whole interval (including `c = 0`).
    pub fn is_lebesgue_multiple(&self) -> bool {
        self.content.atoms().is_empty()
            && match self.content.steps() {
                [] => true,
                [s] => s.start.is_zero() && s.end == self.len,
                _ => false,
            }
    }

    /// Largest support point (`sup supp`), or `None` for the zero measure.
    pub fn support_end(&self) -> Option<ExactLength> {
        let a = self.content.atoms().last().map(|a| a.at.clone());
        let s = self.content.steps().last().map(|s| s.end.clone());
        match (a, s) {
            (Some(a), Some(s)) => Some(a.try_max(&s).unwrap_or(s)),
            (a, s) => a.or(s),
        }
    }

    /// Multiplies every weight and density by `c`.
    pub fn scaled(&self, c: &Rational) -> Piece {
        Piece { len: self.len.clone(), content: self.content.scaled(c), label: self.label.clone() }
    }
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.content == other.content
    }
}

impl Eq for Piece {}

impl Hash for Piece {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.len.hash(state);
        self.content.hash(state);
    }
}

/// Finite restriction of a measure to `[origin, origin + len)`; content is
/// stored relative to the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureWindow {
    origin: ExactLength,
    body: Piece,
}

impl MeasureWindow {
    pub fn new(origin: ExactLength, len: ExactLength, content: PieceContent) -> Result<Self> {
        if !origin.same_basis(&len) {
            return Err(LengthError::BasisMismatch.into());
        }
        Ok(MeasureWindow { origin, body: Piece::new(len, content, None)? })
    }

    /// Places a piece at `origin`.
    pub fn from_piece(origin: ExactLength, piece: Piece) -> Result<Self> {
        if !origin.same_basis(piece.len()) {
            return Err(LengthError::BasisMismatch.into());
        }
        Ok(MeasureWindow { origin, body: Piece { label: None, ..piece } })
    }

    pub fn origin(&self) -> &ExactLength {
        &self.origin
    }

    pub fn end(&self) -> ExactLength {
        &self.origin + self.body.len()
    }

    pub fn len(&self) -> &ExactLength {
        self.body.len()
    }

    pub fn content(&self) -> &PieceContent {
        self.body.content()
    }

    pub fn basis(&self) -> &Basis {
        self.origin.basis()
    }

    /// The window content as a piece on `[0, len)`.
    pub fn as_piece(&self) -> &Piece {
        &self.body
    }

    /// Sorted, de-duplicated absolute positions of atoms and step edges.
    pub fn breakpoints(&self) -> Result<Vec<ExactLength>> {
        let mut pts: Vec<ExactLength> = self
            .content()
            .feature_offsets()
            .into_iter()
            .map(|o| &self.origin + &o)
            .collect();
        crate::exact::sort_by_length(&mut pts, |p| p)?;
        pts.dedup();
        Ok(pts)
    }
}
