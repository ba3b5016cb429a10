use super::recode::occurrence_grid;
use super::{FlcError, PieceSet, Result};
use crate::exact::{sort_by_length, ExactLength};
use crate::measure::MeasureWindow;

#[derive(Debug, Clone, PartialEq)]
pub struct DeloneMeasureReport {
    pub holds: bool,
    /// Size of the union of the profile occurrence sets.
    pub occurrences: usize,
    /// Why the check failed, when it did.
    pub reason: Option<String>,
}

/// Whether `w` looks like a Delone measure built from `profiles`: their
/// occurrences must form a discrete, relatively dense set on the window,
/// and every atom and every stretch of nonzero density must be covered by
/// some occurrence `[x, x + len)`.
pub fn check_delone_measure_flc(w: &MeasureWindow, profiles: &PieceSet) -> Result<DeloneMeasureReport> {
    let pts = match occurrence_grid(w, profiles) {
        Ok(p) => p,
        Err(e @ (FlcError::AccumulatingOccurrences { .. } | FlcError::NotRelativelyDense(_))) => {
            return Ok(DeloneMeasureReport { holds: false, occurrences: 0, reason: Some(e.to_string()) });
        }
        Err(e) => return Err(e),
    };

    // covered intervals [x, x + len) of every occurrence, merged
    let mut cover: Vec<(ExactLength, ExactLength)> = Vec::new();
    for p in profiles.pieces() {
        for x in crate::measure::occurrences(w, p)?.points {
            let e = &x + p.len();
            cover.push((x, e));
        }
    }
    sort_by_length(&mut cover, |c| &c.0)?;
    let mut merged: Vec<(ExactLength, ExactLength)> = Vec::new();
    for (s, e) in cover {
        match merged.last_mut() {
            Some(last) if s.try_le(&last.1)? => last.1 = last.1.try_max(&e)?,
            _ => merged.push((s, e)),
        }
    }
    let covered = |x: &ExactLength, to: &ExactLength| -> Result<bool> {
        for (s, e) in &merged {
            if s.try_le(x)? && to.try_le(e)? {
                return Ok(true);
            }
        }
        Ok(false)
    };

    let a = w.origin();
    for at in w.content().atoms() {
        let x = a + &at.at;
        if !covers_point(&merged, &x)? {
            return Ok(uncovered(pts.len(), format!("atom at {x}")));
        }
    }
    for st in w.content().steps() {
        let (s, e) = (a + &st.start, a + &st.end);
        if !covered(&s, &e)? {
            return Ok(uncovered(pts.len(), format!("density on [{s}, {e})")));
        }
    }
    Ok(DeloneMeasureReport { holds: true, occurrences: pts.len(), reason: None })
}

fn covers_point(merged: &[(ExactLength, ExactLength)], x: &ExactLength) -> Result<bool> {
    for (s, e) in merged {
        if s.try_le(x)? && x.try_lt(e)? {
            return Ok(true);
        }
    }
    Ok(false)
}

fn uncovered(n: usize, what: String) -> DeloneMeasureReport {
    DeloneMeasureReport { holds: false, occurrences: n, reason: Some(format!("{what} not covered by any occurrence")) }
}
