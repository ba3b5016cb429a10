use std::collections::{HashMap, HashSet};

use super::{FlcError, Result};
use crate::exact::{lower_bound, ExactLength, Rational};
use crate::measure::{restrict, MeasureWindow, PieceContent};

#[derive(Debug, Clone, PartialEq)]
pub struct FlpReport {
    pub rho: ExactLength,
    /// `(L, distinct restrictions to [x' - L, x' + L), anchors used)` per `L`.
    pub counts: Vec<(ExactLength, usize, usize)>,
}

/// Finite local patch census. Samples `x = a + k rho`, moves each sample
/// to the nearest breakpoint within `rho` (ties go left), and counts the
/// distinct patches of radius `L` around the moved anchors that fit in the
/// window.
pub fn check_flp(w: &MeasureWindow, rho: &ExactLength, radii: &[ExactLength]) -> Result<FlpReport> {
    if !rho.is_positive()? {
        return Err(FlcError::InvalidParameter(format!("rho = {rho} must be positive")));
    }
    let two_rho = rho.scale(&Rational::from_integer(2));
    for l in radii {
        if l.try_lt(&two_rho)? {
            return Err(FlcError::InvalidParameter(format!("L = {l} below 2 rho")));
        }
    }
    let bps = w.breakpoints()?;
    let end = w.end();
    let mut anchors = Vec::new();
    let mut x = w.origin().clone();
    while x.try_le(&end)? {
        anchors.push(snap(&bps, &x, rho)?);
        x = &x + rho;
    }
    anchors.dedup();

    let mut counts = Vec::with_capacity(radii.len());
    for l in radii {
        let two_l = l + l;
        let mut patches: HashSet<PieceContent> = HashSet::new();
        let mut used = 0;
        for a in &anchors {
            let lo = a - l;
            if lo.try_lt(w.origin())? || end.try_lt(&(a + l))? {
                continue;
            }
            used += 1;
            patches.insert(restrict(w, &lo, &two_l)?.content().clone());
        }
        counts.push((l.clone(), patches.len(), used));
    }
    Ok(FlpReport { rho: rho.clone(), counts })
}

fn snap(bps: &[ExactLength], x: &ExactLength, rho: &ExactLength) -> Result<ExactLength> {
    let i = lower_bound(bps, |p| p, x)?;
    let left = i.checked_sub(1).map(|j| (&bps[j], x - &bps[j]));
    let right = bps.get(i).map(|p| (p, p - x));
    let best = match (left, right) {
        (Some(l), Some(r)) => Some(if l.1.try_le(&r.1)? { l } else { r }),
        (l, r) => l.or(r),
    };
    Ok(match best {
        Some((p, d)) if d.try_le(rho)? => p.clone(),
        _ => x.clone(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct FepReport {
    /// Distinct prefixes `[x, x + r)` seen at breakpoint anchors.
    pub prefixes: usize,
    /// Distinct extensions `[x + r, x + r + L)` over all prefixes.
    pub extensions: usize,
    /// Largest number of extensions seen after a single prefix.
    pub max_per_prefix: usize,
    pub anchors: usize,
}

/// Finite extension census: for every breakpoint `x` with room, pairs the
/// prefix on `[x, x + r)` with the extension on `[x + r, x + r + L)`.
pub fn check_fep(w: &MeasureWindow, r: &ExactLength, l: &ExactLength) -> Result<FepReport> {
    if !r.is_positive()? || !l.is_positive()? {
        return Err(FlcError::InvalidParameter("r and L must be positive".into()));
    }
    let mut anchors = w.breakpoints()?;
    if anchors.is_empty() {
        anchors.push(w.origin().clone());
    }
    let end = w.end();
    let mut table: HashMap<PieceContent, HashSet<PieceContent>> = HashMap::new();
    let mut all: HashSet<PieceContent> = HashSet::new();
    let mut used = 0;
    for x in &anchors {
        let mid = x + r;
        if x.try_lt(w.origin())? || end.try_lt(&(&mid + l))? {
            continue;
        }
        used += 1;
        let pre = restrict(w, x, r)?.content().clone();
        let ext = restrict(w, &mid, l)?.content().clone();
        all.insert(ext.clone());
        table.entry(pre).or_default().insert(ext);
    }
    if used == 0 {
        return Err(FlcError::WindowTooShort(format!("no anchor leaves room for r + L = {}", r + l)));
    }
    Ok(FepReport {
        prefixes: table.len(),
        extensions: all.len(),
        max_per_prefix: table.values().map(HashSet::len).max().unwrap_or(0),
        anchors: used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Basis;
    use crate::measure::{Atom, Step};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn int(n: i64) -> ExactLength {
        ExactLength::integer(&Basis::integer(), n)
    }

    fn comb(at: impl Iterator<Item = i64>, len: i64) -> MeasureWindow {
        let atoms = at.map(|k| Atom { at: int(k), weight: Rational::from_integer(1) }).collect();
        MeasureWindow::new(int(0), int(len), PieceContent::new(atoms, vec![]).unwrap()).unwrap()
    }

    #[test]
    fn integer_comb_one_patch() {
        let w = comb(0..100, 100);
        let rho = ExactLength::rational(&Basis::integer(), Rational::new(1, 2));
        let rep = check_flp(&w, &rho, &[int(1), int(5)]).unwrap();
        assert!(rep.counts.iter().all(|c| c.1 == 1));
    }

    #[test]
    fn lebesgue_one_patch() {
        let c = PieceContent::new(vec![], vec![Step { start: int(0), end: int(50), value: Rational::from_integer(1) }]).unwrap();
        let w = MeasureWindow::new(int(0), int(50), c).unwrap();
        let rep = check_flp(&w, &int(1), &[int(2), int(4)]).unwrap();
        assert!(rep.counts.iter().all(|c| c.1 == 1));
        let f = check_fep(&w, &int(1), &int(1)).unwrap();
        assert_eq!(f.extensions, 1);
    }

    #[test]
    fn random_subset_two_extensions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let keep: Vec<i64> = (0..200).filter(|_| rng.random_bool(0.5)).collect();
        let w = comb(keep.into_iter(), 200);
        let f = check_fep(&w, &int(1), &int(1)).unwrap();
        assert_eq!(f.prefixes, 1);
        assert_eq!(f.extensions, 2);
        assert_eq!(f.max_per_prefix, 2);
        let g = check_fep(&comb(0..50, 50), &int(1), &int(1)).unwrap();
        assert_eq!(g.extensions, 1);
    }

    #[test]
    fn radius_below_two_rho_rejected() {
        let w = comb(0..10, 10);
        assert!(check_flp(&w, &int(1), &[int(1)]).is_err());
    }
}
