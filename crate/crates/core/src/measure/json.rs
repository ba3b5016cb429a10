//! Canonical JSON for pieces, windows and colored point sets.
//!
//! Every document starts with the basis declaration; lengths are arrays of
//! `{num, den}` coefficients over that basis. Content is written in its
//! canonical (sorted, merged) order, so serialization is byte-stable.

use serde::{Deserialize, Serialize};

use super::{Atom, ColoredDeloneSet, MeasureError, MeasureWindow, Piece, PieceContent, Result, Step};
use crate::exact::{Basis, BasisElement, ExactLength, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: i128,
    pub den: i128,
}

impl From<&Rational> for RationalJson {
    fn from(q: &Rational) -> Self {
        RationalJson { num: *q.numer(), den: *q.denom() }
    }
}

impl RationalJson {
    pub fn to_rational(self) -> Result<Rational> {
        if self.den == 0 {
            return Err(MeasureError::Json("zero denominator".into()));
        }
        Ok(Rational::new(self.num, self.den))
    }
}

pub type LengthJson = Vec<RationalJson>;

pub fn length_to_json(l: &ExactLength) -> LengthJson {
    l.coeffs().iter().map(RationalJson::from).collect()
}

pub fn length_from_json(basis: &Basis, j: &LengthJson) -> Result<ExactLength> {
    let coeffs = j.iter().map(|r| r.to_rational()).collect::<Result<Vec<_>>>()?;
    Ok(ExactLength::from_coeffs(basis, coeffs)?)
}

/// Exact length plus its float value and display form, for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LengthReport {
    pub exact: String,
    pub coeffs: LengthJson,
    pub value: f64,
}

impl From<&ExactLength> for LengthReport {
    fn from(l: &ExactLength) -> Self {
        LengthReport { exact: l.to_string(), coeffs: length_to_json(l), value: l.value() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct AtomJson {
    at: LengthJson,
    weight: RationalJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct StepJson {
    start: LengthJson,
    end: LengthJson,
    value: RationalJson,
}

/// Atoms and steps of a content block; flattened into the owning document.
#[derive(Debug, Clone, PartialEq)]
pub struct ContentJson {
    atoms: Vec<AtomJson>,
    steps: Vec<StepJson>,
}

impl ContentJson {
    pub fn from_content(c: &PieceContent) -> Self {
        ContentJson {
            atoms: c
                .atoms()
                .iter()
                .map(|a| AtomJson { at: length_to_json(&a.at), weight: (&a.weight).into() })
                .collect(),
            steps: c
                .steps()
                .iter()
                .map(|s| StepJson {
                    start: length_to_json(&s.start),
                    end: length_to_json(&s.end),
                    value: (&s.value).into(),
                })
                .collect(),
        }
    }

    pub fn to_content(&self, basis: &Basis) -> Result<PieceContent> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Ok(Atom { at: length_from_json(basis, &a.at)?, weight: a.weight.to_rational()? }))
            .collect::<Result<Vec<_>>>()?;
        let steps = self
            .steps
            .iter()
            .map(|s| {
                Ok(Step {
                    start: length_from_json(basis, &s.start)?,
                    end: length_from_json(basis, &s.end)?,
                    value: s.value.to_rational()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        PieceContent::new(atoms, steps)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PieceJson {
    pub basis: Vec<BasisElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub len: LengthJson,
    atoms: Vec<AtomJson>,
    steps: Vec<StepJson>,
}

impl PieceJson {
    pub fn from_piece(p: &Piece) -> Self {
        PieceJson {
            basis: p.basis().elements().to_vec(),
            label: p.label().map(str::to_string),
            len: length_to_json(p.len()),
            atoms: ContentJson::from_content(p.content()).atoms,
            steps: ContentJson::from_content(p.content()).steps,
        }
    }

    pub fn to_piece(&self) -> Result<Piece> {
        let basis = Basis::new(self.basis.clone())?;
        self.to_piece_in(&basis)
    }

    /// Decodes against an already-shared basis (must match the declaration).
    pub fn to_piece_in(&self, basis: &Basis) -> Result<Piece> {
        check_basis(basis, &self.basis)?;
        let len = length_from_json(basis, &self.len)?;
        let content = ContentJson { atoms: self.atoms.clone(), steps: self.steps.clone() };
        Piece::new(len, content.to_content(basis)?, self.label.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowJson {
    pub basis: Vec<BasisElement>,
    pub origin: LengthJson,
    pub len: LengthJson,
    atoms: Vec<AtomJson>,
    steps: Vec<StepJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct PointJson {
    at: LengthJson,
    color: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct DeloneJson {
    basis: Vec<BasisElement>,
    alphabet_size: usize,
    points: Vec<PointJson>,
}

fn check_basis(basis: &Basis, declared: &[BasisElement]) -> Result<()> {
    if basis.elements() != declared {
        return Err(MeasureError::Json("basis declaration does not match".into()));
    }
    Ok(())
}

fn to_string<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("measure documents always serialize")
}

fn from_str<'a, T: Deserialize<'a>>(s: &'a str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| MeasureError::Json(e.to_string()))
}

pub fn piece_to_json(p: &Piece) -> String {
    to_string(&PieceJson::from_piece(p))
}

pub fn piece_from_json(s: &str) -> Result<Piece> {
    from_str::<PieceJson>(s)?.to_piece()
}

pub fn window_to_json(w: &MeasureWindow) -> String {
    to_string(&WindowJson {
        basis: w.basis().elements().to_vec(),
        origin: length_to_json(w.origin()),
        len: length_to_json(w.len()),
        atoms: ContentJson::from_content(w.content()).atoms,
        steps: ContentJson::from_content(w.content()).steps,
    })
}

pub fn window_from_json(s: &str) -> Result<MeasureWindow> {
    let j: WindowJson = from_str(s)?;
    let basis = Basis::new(j.basis.clone())?;
    MeasureWindow::new(
        length_from_json(&basis, &j.origin)?,
        length_from_json(&basis, &j.len)?,
        ContentJson { atoms: j.atoms, steps: j.steps }.to_content(&basis)?,
    )
}

pub fn delone_to_json(d: &ColoredDeloneSet) -> Result<String> {
    let first = d.points().first().ok_or(MeasureError::Empty)?;
    Ok(to_string(&DeloneJson {
        basis: first.basis().elements().to_vec(),
        alphabet_size: d.alphabet_size(),
        points: d
            .points()
            .iter()
            .zip(d.colors())
            .map(|(p, &c)| PointJson { at: length_to_json(p), color: c })
            .collect(),
    }))
}

pub fn delone_from_json(s: &str) -> Result<ColoredDeloneSet> {
    let j: DeloneJson = from_str(s)?;
    let basis = Basis::new(j.basis)?;
    let points = j.points.iter().map(|p| length_from_json(&basis, &p.at)).collect::<Result<Vec<_>>>()?;
    ColoredDeloneSet::new(points, j.points.iter().map(|p| p.color).collect(), j.alphabet_size)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_json_is_byte_stable() {
        let b = Basis::golden();
        let phi = b.unit(1);
        let one = ExactLength::integer(&b, 1);
        let content = PieceContent::new(
            vec![Atom { at: phi.clone(), weight: Rational::new(-3, 2) }, Atom { at: one.clone(), weight: Rational::from_integer(2) }],
            vec![Step { start: ExactLength::zero(&b), end: one.clone(), value: Rational::new(1, 3) }],
        )
        .unwrap();
        let w = MeasureWindow::new(one.clone(), &phi + &phi, content).unwrap();
        let s = window_to_json(&w);
        let back = window_from_json(&s).unwrap();
        assert_eq!(back, w);
        assert_eq!(window_to_json(&back), s);
        assert!(s.starts_with("{\n  \"basis\""));
    }

    #[test]
    fn rejects_zero_denominator() {
        let s = r#"{"basis":[{"name":"1","value":1.0}],"len":[{"num":1,"den":0}],"atoms":[],"steps":[]}"#;
        assert!(piece_from_json(s).is_err());
    }
}
