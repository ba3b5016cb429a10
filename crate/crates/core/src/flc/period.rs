use super::Result;
use crate::exact::{sort_by_length, ExactLength};
use crate::measure::{restrict, MeasureWindow};

/// Smallest `p`, taken among differences of breakpoints, for which some tail
/// `[x0, b)` with `b - x0 >= 3p` satisfies `mu|[x0, b-p) = (T_p mu)|[x0, b-p)`,
/// together with the earliest such `x0` among `a` and the breakpoints.
///
/// Candidate `x0` can be confined to `[lo, hi]`. Returns `None` for measures
/// without breakpoints (every shift is a period) and when nothing repeats.
pub fn detect_eventual_period(
    w: &MeasureWindow,
    x0_range: Option<(&ExactLength, &ExactLength)>,
) -> Result<Option<(ExactLength, ExactLength)>> {
    let a = w.origin().clone();
    let b = w.end();
    let atoms: Vec<ExactLength> = w.content().atoms().iter().map(|t| &a + &t.at).collect();
    let features: Vec<ExactLength> = w
        .breakpoints()?
        .into_iter()
        .filter(|x| (x != &a && x != &b) || atoms.contains(x))
        .collect();
    let Some(last) = features.last() else {
        return Ok(None);
    };

    let mut periods: Vec<ExactLength> = features[..features.len() - 1].iter().map(|f| last - f).collect();
    sort_by_length(&mut periods, |p| p)?;
    periods.dedup();

    let mut starts = vec![a.clone()];
    starts.extend(features.iter().filter(|f| **f != a).cloned());
    if let Some((lo, hi)) = x0_range {
        let mut kept = Vec::new();
        for s in starts {
            if lo.try_le(&s)? && s.try_le(hi)? {
                kept.push(s);
            }
        }
        starts = kept;
    }

    let three = crate::exact::Rational::from_integer(3);
    for p in periods {
        let need = p.scale(&three);
        if (&b - &a).try_lt(&need)? {
            break;
        }
        // periodicity of a tail is inherited by later tails, so bisect
        let mut usable = Vec::new();
        for s in &starts {
            if need.try_le(&(&b - s))? {
                usable.push(s);
            }
        }
        if usable.is_empty() || !periodic_from(w, usable[usable.len() - 1], &p)? {
            continue;
        }
        let (mut lo, mut hi) = (0usize, usable.len() - 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if periodic_from(w, usable[mid], &p)? {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        return Ok(Some((usable[lo].clone(), p)));
    }
    Ok(None)
}

fn periodic_from(w: &MeasureWindow, x0: &ExactLength, p: &ExactLength) -> Result<bool> {
    let span = &(&w.end() - x0) - p;
    Ok(restrict(w, x0, &span)? == restrict(w, &(x0 + p), &span)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Basis, Rational};
    use crate::measure::{Atom, PieceContent};

    fn q(s: &str) -> ExactLength {
        ExactLength::parse(&Basis::integer(), s).unwrap()
    }

    fn window(atoms: Vec<(&str, i128)>, len: &str) -> MeasureWindow {
        let atoms = atoms.into_iter().map(|(at, wt)| Atom { at: q(at), weight: Rational::from_integer(wt) }).collect();
        MeasureWindow::new(q("0"), q(len), PieceContent::new(atoms, vec![]).unwrap()).unwrap()
    }

    #[test]
    fn integer_comb_period_one() {
        let names: Vec<String> = (0..50).map(|k| k.to_string()).collect();
        let w = window(names.iter().map(|s| (s.as_str(), 1)).collect(), "50");
        assert_eq!(detect_eventual_period(&w, None).unwrap(), Some((q("0"), q("1"))));
    }

    #[test]
    fn junk_then_comb() {
        let mut atoms = vec![("1/2", 2), ("5/2", 3)];
        let names: Vec<String> = (5..60).map(|k| k.to_string()).collect();
        atoms.extend(names.iter().map(|s| (s.as_str(), 1)));
        let w = window(atoms, "60");
        assert_eq!(detect_eventual_period(&w, None).unwrap(), Some((q("5"), q("1"))));
    }
}
