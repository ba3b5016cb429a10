use num_traits::Zero;

use super::{MeasureError, Result};
use crate::exact::{lower_bound, sort_by_length, upper_bound, ExactLength, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub at: ExactLength,
    pub weight: Rational,
}

/// Constant density `value` on `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step {
    pub start: ExactLength,
    pub end: ExactLength,
    pub value: Rational,
}

/// Atoms plus a piecewise-constant density, in canonical form: atoms sorted
/// with co-located atoms merged and zero weights dropped; steps sorted,
/// disjoint, nonzero and with equal-valued neighbours fused. Canonical form
/// makes structural equality coincide with equality of measures.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PieceContent {
    atoms: Vec<Atom>,
    steps: Vec<Step>,
}

impl PieceContent {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds canonical content. Overlapping steps are summed.
    pub fn new(mut atoms: Vec<Atom>, steps: Vec<Step>) -> Result<Self> {
        sort_by_length(&mut atoms, |a| &a.at)?;
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.at == a.at => last.weight += a.weight,
                _ => merged.push(a),
            }
        }
        merged.retain(|a| !a.weight.is_zero());

        let mut events: Vec<(ExactLength, Rational)> = Vec::with_capacity(2 * steps.len());
        for s in steps {
            if !s.start.try_lt(&s.end)? {
                return Err(MeasureError::InvalidContent(format!(
                    "step range [{}, {}) is empty or reversed",
                    s.start, s.end
                )));
            }
            if s.value.is_zero() {
                continue;
            }
            events.push((s.start, s.value));
            events.push((s.end, -s.value));
        }
        sort_by_length(&mut events, |e| &e.0)?;
        let mut out: Vec<Step> = Vec::new();
        let mut level = Rational::zero();
        let mut i = 0;
        while i < events.len() {
            let pos = events[i].0.clone();
            while i < events.len() && events[i].0 == pos {
                level += events[i].1;
                i += 1;
            }
            if i < events.len() && !level.is_zero() {
                let next = events[i].0.clone();
                match out.last_mut() {
                    Some(last) if last.end == pos && last.value == level => last.end = next,
                    _ => out.push(Step { start: pos, end: next, value: level }),
                }
            }
        }
        Ok(PieceContent { atoms: merged, steps: out })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.steps.is_empty()
    }

    pub fn scaled(&self, c: &Rational) -> PieceContent {
        if c.is_zero() {
            return PieceContent::empty();
        }
        PieceContent {
            atoms: self.atoms.iter().map(|a| Atom { at: a.at.clone(), weight: a.weight * c }).collect(),
            steps: self
                .steps
                .iter()
                .map(|s| Step { start: s.start.clone(), end: s.end.clone(), value: s.value * c })
                .collect(),
        }
    }

    pub fn translated(&self, by: &ExactLength) -> PieceContent {
        PieceContent {
            atoms: self.atoms.iter().map(|a| Atom { at: &a.at + by, weight: a.weight }).collect(),
            steps: self
                .steps
                .iter()
                .map(|s| Step { start: &s.start + by, end: &s.end + by, value: s.value })
                .collect(),
        }
    }

    pub(crate) fn check_within(&self, len: &ExactLength) -> Result<()> {
        let zero = ExactLength::zero(len.basis());
        for a in &self.atoms {
            if !a.at.same_basis(len) {
                return Err(crate::exact::LengthError::BasisMismatch.into());
            }
            if a.at.try_lt(&zero)? || !a.at.try_lt(len)? {
                return Err(MeasureError::OutOfSupport {
                    len: len.to_string(),
                    detail: format!("atom at {}", a.at),
                });
            }
        }
        for s in &self.steps {
            if !s.start.same_basis(len) {
                return Err(crate::exact::LengthError::BasisMismatch.into());
            }
            if s.start.try_lt(&zero)? || len.try_lt(&s.end)? {
                return Err(MeasureError::OutOfSupport {
                    len: len.to_string(),
                    detail: format!("step [{}, {})", s.start, s.end),
                });
            }
        }
        Ok(())
    }

    /// Atom offsets and step edges, unsorted and possibly repeated.
    pub fn feature_offsets(&self) -> Vec<ExactLength> {
        let mut v: Vec<ExactLength> = self.atoms.iter().map(|a| a.at.clone()).collect();
        for s in &self.steps {
            v.push(s.start.clone());
            v.push(s.end.clone());
        }
        v
    }

    /// Density on the right of `x` (zero outside every step).
    pub fn density_at(&self, x: &ExactLength) -> Result<Rational> {
        let i = upper_bound(&self.steps, |s| &s.start, x)?;
        if i == 0 {
            return Ok(Rational::zero());
        }
        let s = &self.steps[i - 1];
        Ok(if x.try_lt(&s.end)? { s.value } else { Rational::zero() })
    }

    /// Canonical restriction to `[from, to)`, shifted so `from` maps to 0.
    pub(crate) fn slice(&self, from: &ExactLength, to: &ExactLength) -> Result<PieceContent> {
        let lo = lower_bound(&self.atoms, |a| &a.at, from)?;
        let hi = lower_bound(&self.atoms, |a| &a.at, to)?;
        let atoms = self.atoms[lo..hi.max(lo)]
            .iter()
            .map(|a| Atom { at: &a.at - from, weight: a.weight })
            .collect();
        let first = upper_bound(&self.steps, |s| &s.end, from)?;
        let mut steps = Vec::new();
        for s in &self.steps[first..] {
            if !s.start.try_lt(to)? {
                break;
            }
            let start = s.start.try_max(from)?;
            let end = s.end.try_min(to)?;
            steps.push(Step { start: &start - from, end: &end - from, value: s.value });
        }
        Ok(PieceContent { atoms, steps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Basis;

    fn l(n: i64) -> ExactLength {
        ExactLength::integer(&Basis::integer(), n)
    }

    fn q(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn colocated_atoms_merge_and_cancel() {
        let c = PieceContent::new(
            vec![
                Atom { at: l(1), weight: q(2) },
                Atom { at: l(0), weight: q(1) },
                Atom { at: l(1), weight: q(-2) },
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(c.atoms(), &[Atom { at: l(0), weight: q(1) }]);
    }

    #[test]
    fn adjacent_equal_steps_fuse() {
        let a = PieceContent::new(
            vec![],
            vec![
                Step { start: l(0), end: l(1), value: q(3) },
                Step { start: l(1), end: l(2), value: q(3) },
            ],
        )
        .unwrap();
        let b = PieceContent::new(vec![], vec![Step { start: l(0), end: l(2), value: q(3) }]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn overlapping_steps_sum() {
        let c = PieceContent::new(
            vec![],
            vec![
                Step { start: l(0), end: l(2), value: q(1) },
                Step { start: l(1), end: l(3), value: q(1) },
            ],
        )
        .unwrap();
        assert_eq!(c.steps().len(), 3);
        assert_eq!(c.steps()[1].value, q(2));
        assert_eq!(c.density_at(&l(1)).unwrap(), q(2));
        assert_eq!(c.density_at(&l(3)).unwrap(), q(0));
    }

    #[test]
    fn reversed_step_rejected() {
        assert!(PieceContent::new(vec![], vec![Step { start: l(2), end: l(1), value: q(1) }]).is_err());
    }
}
