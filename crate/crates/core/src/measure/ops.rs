use num_traits::{Signed, Zero};

use super::{ColoredDeloneSet, MeasureError, MeasureWindow, Piece, PieceContent, Result};
use crate::exact::{rational_to_f64, sort_by_length, ExactLength, LengthError, Rational};

/// Lays the pieces end to end, each translated by the total length of its
/// predecessors.
pub fn concat(pieces: &[Piece]) -> Result<Piece> {
    let first = pieces.first().ok_or(MeasureError::Empty)?;
    let basis = first.basis();
    let mut offset = ExactLength::zero(basis);
    let mut atoms = Vec::new();
    let mut steps = Vec::new();
    for p in pieces {
        if p.basis() != basis {
            return Err(LengthError::BasisMismatch.into());
        }
        let shifted = p.content().translated(&offset);
        atoms.extend(shifted.atoms().iter().cloned());
        steps.extend(shifted.steps().iter().cloned());
        offset = &offset + p.len();
    }
    Piece::new(offset, PieceContent::new(atoms, steps)?, None)
}

/// The piece seen in `w` on `[x, x + len)`, moved to `[0, len)`.
pub fn restrict(w: &MeasureWindow, x: &ExactLength, len: &ExactLength) -> Result<Piece> {
    if !x.same_basis(w.origin()) || !len.same_basis(w.origin()) {
        return Err(LengthError::BasisMismatch.into());
    }
    let from = x - w.origin();
    let to = &from + len;
    if from.is_negative()? || w.len().try_lt(&to)? {
        return Err(MeasureError::OutOfRange {
            request: format!("[{x}, {})", x + len),
            window: format!("[{}, {})", w.origin(), w.end()),
        });
    }
    let content = w.content().slice(&from, &to)?;
    Piece::new(len.clone(), content, None)
}

/// A continuum of occurrence positions `x` with `start < x <= end`
/// (or `start <= x` when `start_inclusive`).
#[derive(Debug, Clone, PartialEq)]
pub struct OccurrenceRange {
    pub start: ExactLength,
    pub start_inclusive: bool,
    pub end: ExactLength,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Occurrences {
    /// Isolated occurrence positions, sorted.
    pub points: Vec<ExactLength>,
    /// Intervals of occurrences; only nonempty when the piece is a multiple
    /// of Lebesgue measure.
    pub ranges: Vec<OccurrenceRange>,
}

impl Occurrences {
    pub fn is_discrete(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.ranges.is_empty()
    }
}

/// All positions where `p` occurs in `w` (half-open restriction equality).
pub fn occurrences(w: &MeasureWindow, p: &Piece) -> Result<Occurrences> {
    if !p.basis().eq(w.basis()) {
        return Err(LengthError::BasisMismatch.into());
    }
    let mut out = Occurrences::default();
    if w.len().try_lt(p.len())? {
        return Ok(out);
    }
    let last_start = &w.end() - p.len();

    // Anchor on the first feature inside the piece; every occurrence must
    // map it onto a feature of the same kind in the window.
    let zero = ExactLength::zero(p.basis());
    let anchor: Option<(ExactLength, bool)> = if let Some(a) = p.content().atoms().first() {
        Some((a.at.clone(), true))
    } else {
        let mut edges: Vec<ExactLength> = p
            .content()
            .steps()
            .iter()
            .flat_map(|s| [s.start.clone(), s.end.clone()])
            .filter(|e| !e.is_zero() && e != p.len())
            .collect();
        sort_by_length(&mut edges, |e| e)?;
        edges.into_iter().next().map(|e| (e, false))
    };

    if let Some((offset, is_atom)) = anchor {
        let targets: Vec<ExactLength> = if is_atom {
            w.content().atoms().iter().map(|a| a.at.clone()).collect()
        } else {
            w.content()
                .steps()
                .iter()
                .flat_map(|s| [s.start.clone(), s.end.clone()])
                .collect()
        };
        let mut cands: Vec<ExactLength> =
            targets.iter().map(|t| &(w.origin() + t) - &offset).collect();
        sort_by_length(&mut cands, |c| c)?;
        cands.dedup();
        for x in cands {
            if x.try_lt(w.origin())? || last_start.try_lt(&x)? {
                continue;
            }
            if restrict(w, &x, p.len())? == *p {
                out.points.push(x);
            }
        }
        return Ok(out);
    }

    // Lebesgue multiple c * 1_[0,len): scan maximal atom-free constant regions.
    let c = p.content().steps().first().map(|s| s.value).unwrap_or_else(Rational::zero);
    let mut feats: Vec<(ExactLength, bool)> = w
        .content()
        .atoms()
        .iter()
        .map(|a| (a.at.clone(), true))
        .chain(w.content().steps().iter().flat_map(|s| [(s.start.clone(), false), (s.end.clone(), false)]))
        .filter(|(f, _)| !f.is_zero() && f != w.len())
        .collect();
    sort_by_length(&mut feats, |f| &f.0)?;
    let mut bounds: Vec<(ExactLength, bool)> = vec![(zero.clone(), w.content().atoms().first().is_some_and(|a| a.at.is_zero()))];
    for (f, is_atom) in feats {
        match bounds.last_mut() {
            Some(last) if last.0 == f => last.1 |= is_atom,
            _ => bounds.push((f, is_atom)),
        }
    }
    bounds.push((w.len().clone(), false));
    for pair in bounds.windows(2) {
        let (s, s_atom) = (&pair[0].0, pair[0].1);
        let e = &pair[1].0;
        if w.content().density_at(s)? != c {
            continue;
        }
        let hi = e - p.len();
        match s.try_cmp(&hi)? {
            std::cmp::Ordering::Greater => {}
            std::cmp::Ordering::Equal => {
                if !s_atom {
                    out.points.push(w.origin() + s);
                }
            }
            std::cmp::Ordering::Less => out.ranges.push(OccurrenceRange {
                start: w.origin() + s,
                start_inclusive: !s_atom,
                end: w.origin() + &hi,
            }),
        }
    }
    Ok(out)
}

/// `sum_{x in D} T_x profile_{color(x)}` as a window starting at the first point.
pub fn convolve(d: &ColoredDeloneSet, profiles: &[Piece]) -> Result<MeasureWindow> {
    let first = d.points().first().ok_or(MeasureError::Empty)?;
    let basis = first.basis();
    let mut end = first.clone();
    let mut atoms = Vec::new();
    let mut steps = Vec::new();
    for (x, &color) in d.points().iter().zip(d.colors()) {
        let prof = profiles.get(color).ok_or_else(|| {
            MeasureError::InvalidPointSet(format!("no profile for color {color}"))
        })?;
        if prof.basis() != basis {
            return Err(LengthError::BasisMismatch.into());
        }
        let rel = x - first;
        let shifted = prof.content().translated(&rel);
        atoms.extend(shifted.atoms().iter().cloned());
        steps.extend(shifted.steps().iter().cloned());
        end = end.try_max(&(x + prof.len()))?;
    }
    MeasureWindow::new(first.clone(), &end - first, PieceContent::new(atoms, steps)?)
}

/// Checks `|w|(J) <= c * max(|J|, 1)` over every closed subinterval `J` of
/// the window. Evaluated in floating point with a 1e-12 relative slack.
pub fn check_translation_bound(w: &MeasureWindow, c: f64) -> Result<bool> {
    let content = w.content();
    // Breakpoints in relative coordinates, window ends included.
    let mut pts: Vec<f64> = content.feature_offsets().iter().map(ExactLength::value).collect();
    pts.push(0.0);
    pts.push(w.len().value());
    pts.sort_by(f64::total_cmp);
    pts.dedup();

    let atoms: Vec<(f64, f64)> = content
        .atoms()
        .iter()
        .map(|a| (a.at.value(), rational_to_f64(&a.weight.abs())))
        .collect();
    let mut atom_prefix = vec![0.0];
    for a in &atoms {
        atom_prefix.push(atom_prefix.last().unwrap() + a.1);
    }
    let steps: Vec<(f64, f64, f64)> = content
        .steps()
        .iter()
        .map(|s| (s.start.value(), s.end.value(), rational_to_f64(&s.value.abs())))
        .collect();
    // Integral of |density| over [0, x].
    let density_mass = |x: f64| -> f64 {
        steps.iter().map(|&(s, e, v)| (x.min(e) - s).max(0.0) * v).sum()
    };
    let atoms_upto = |x: f64, inclusive: bool| -> f64 {
        let i = if inclusive {
            atoms.partition_point(|a| a.0 <= x)
        } else {
            atoms.partition_point(|a| a.0 < x)
        };
        atom_prefix[i]
    };
    let mass = |s: f64, t: f64| -> f64 { atoms_upto(t, true) - atoms_upto(s, false) + density_mass(t) - density_mass(s) };
    let slack = |m: f64| 1e-12 * 1f64.max(m.abs());
    let total = w.len().value();

    // Short intervals: the worst closed unit interval has an end on a breakpoint.
    for &p in &pts {
        for (s, t) in [(p, p + 1.0), (p - 1.0, p)] {
            let (s, t) = (s.max(0.0), t.min(total));
            if t < s {
                continue;
            }
            let m = mass(s, t);
            if m > c + slack(m) {
                return Ok(false);
            }
        }
    }
    // Long intervals: maximise mass(s,t) - c(t-s) over breakpoint pairs with t - s > 1.
    let left: Vec<f64> = pts.iter().map(|&s| -(atoms_upto(s, false) + density_mass(s)) + c * s).collect();
    let mut best_left = f64::NEG_INFINITY;
    let mut j = 0;
    for &t in &pts {
        while j < pts.len() && pts[j] < t - 1.0 {
            best_left = best_left.max(left[j]);
            j += 1;
        }
        if best_left.is_finite() {
            let val = atoms_upto(t, true) + density_mass(t) - c * t + best_left;
            if val > slack(val) + 1e-12 * c * total {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Distinct positions of a set of lengths, sorted.
pub(crate) fn sorted_unique(mut v: Vec<ExactLength>) -> Result<Vec<ExactLength>> {
    sort_by_length(&mut v, |x| x)?;
    v.dedup();
    Ok(v)
}
