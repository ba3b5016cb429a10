use std::collections::HashSet;

use super::{MeasureError, Result};
use crate::exact::{lower_bound, upper_bound, ExactLength, LengthError, Rational};

/// Finite window of a colored point set; colors index a finite alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct ColoredDeloneSet {
    points: Vec<ExactLength>,
    colors: Vec<usize>,
    alphabet_size: usize,
}

impl ColoredDeloneSet {
    pub fn new(points: Vec<ExactLength>, colors: Vec<usize>, alphabet_size: usize) -> Result<Self> {
        if points.len() != colors.len() {
            return Err(MeasureError::InvalidPointSet("one color per point required".into()));
        }
        if let Some(c) = colors.iter().find(|&&c| c >= alphabet_size) {
            return Err(MeasureError::InvalidPointSet(format!("color {c} outside alphabet")));
        }
        for w in points.windows(2) {
            if !w[0].same_basis(&w[1]) {
                return Err(LengthError::BasisMismatch.into());
            }
            if !w[0].try_lt(&w[1])? {
                return Err(MeasureError::InvalidPointSet(format!(
                    "points must increase strictly ({} then {})",
                    w[0], w[1]
                )));
            }
        }
        Ok(ColoredDeloneSet { points, colors, alphabet_size })
    }

    /// Single-color set.
    pub fn uncolored(points: Vec<ExactLength>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![0; n], 1)
    }

    /// Points `start, start + g_0, start + g_0 + g_1, ...`.
    pub fn from_gaps(start: ExactLength, gaps: &[ExactLength]) -> Result<Self> {
        let mut pts = Vec::with_capacity(gaps.len() + 1);
        let mut x = start;
        for g in gaps {
            let next = x.checked_add(g)?;
            pts.push(x);
            x = next;
        }
        pts.push(x);
        Self::uncolored(pts)
    }

    pub fn points(&self) -> &[ExactLength] {
        &self.points
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn gaps(&self) -> Vec<ExactLength> {
        self.points.windows(2).map(|w| &w[1] - &w[0]).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointSetReport {
    pub is_delone: bool,
    /// Distinct colored patches `(D - x) ∩ [-L, L]` over interior anchors.
    pub patch_count: usize,
    /// Anchors whose ball lies inside the window.
    pub interior_anchors: usize,
    pub distinct_gaps: usize,
}

/// Delone test (every gap in `[2r, R]`) and colored patch census at radius `l`.
pub fn analyze_point_set(
    d: &ColoredDeloneSet,
    r: &ExactLength,
    big_r: &ExactLength,
    l: &ExactLength,
) -> Result<PointSetReport> {
    if d.is_empty() {
        return Err(MeasureError::Empty);
    }
    let two_r = r.scale(&Rational::from_integer(2));
    let gaps = d.gaps();
    let mut is_delone = true;
    for g in &gaps {
        if g.try_lt(&two_r)? || big_r.try_lt(g)? {
            is_delone = false;
            break;
        }
    }
    let distinct_gaps = gaps.iter().collect::<HashSet<_>>().len();

    let first = &d.points[0];
    let last = &d.points[d.len() - 1];
    let mut patches: HashSet<Vec<(ExactLength, usize)>> = HashSet::new();
    let mut interior = 0;
    for x in &d.points {
        let lo = x - l;
        let hi = x + l;
        if lo.try_lt(first)? || last.try_lt(&hi)? {
            continue;
        }
        interior += 1;
        let i = lower_bound(&d.points, |p| p, &lo)?;
        let j = upper_bound(&d.points, |p| p, &hi)?;
        let patch = (i..j).map(|k| (&d.points[k] - x, d.colors[k])).collect();
        patches.insert(patch);
    }
    Ok(PointSetReport { is_delone, patch_count: patches.len(), interior_anchors: interior, distinct_gaps })
}
