use super::{Decomposition, FlcError, PieceSet, Result};
use crate::exact::{ExactLength, Rational};
use crate::measure::{occurrences, restrict, sorted_unique, ColoredDeloneSet, MeasureWindow, Piece, PieceContent};

/// Union of the occurrence sets of `pilots` in `w`, checked for the
/// properties a recoding grid needs on a finite window.
pub(crate) fn occurrence_grid(w: &MeasureWindow, pilots: &PieceSet) -> Result<Vec<ExactLength>> {
    let mut pts = Vec::new();
    for p in pilots.pieces() {
        let occ = occurrences(w, p)?;
        if let Some(r) = occ.ranges.first() {
            return Err(FlcError::AccumulatingOccurrences {
                gap: "0".into(),
                threshold: format!("continuum of occurrences of `{}` from {}", pilots_label(p), r.start),
            });
        }
        pts.extend(occ.points);
    }
    let pts = sorted_unique(pts)?;
    if pts.len() < 3 {
        return Err(FlcError::NotRelativelyDense(format!("{} occurrence(s) in the window", pts.len())));
    }
    let threshold = pilots.min_len()?.scale(&Rational::new(1, 4));
    let dense_bound = w.len().scale(&Rational::new(1, 3));
    for g in pts.windows(2).map(|p| &p[1] - &p[0]) {
        if g.try_lt(&threshold)? {
            return Err(FlcError::AccumulatingOccurrences { gap: g.to_string(), threshold: threshold.to_string() });
        }
        if dense_bound.try_lt(&g)? {
            return Err(FlcError::NotRelativelyDense(format!("gap {g} exceeds a third of the window")));
        }
    }
    Ok(pts)
}

fn pilots_label(p: &Piece) -> &str {
    p.label().unwrap_or("?")
}

/// Recodes `w` along the occurrences `x_0 < x_1 < ...` of the pilot pieces:
/// the new pieces are `mu` restricted to `[x_k, x_{k+1})`, labelled `r0, r1,
/// ...` by first appearance.
pub fn recode_by_occurrences(w: &MeasureWindow, pilots: &PieceSet) -> Result<Decomposition> {
    let pts = occurrence_grid(w, pilots)?;
    let seq = pts
        .windows(2)
        .map(|p| restrict(w, &p[0], &(&p[1] - &p[0])))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let (set, idx) = PieceSet::intern(seq, "r")?;
    Decomposition::new(pts[0].clone(), set, idx)
}

/// Decomposition of `D * nu` along the points of `D`: the piece at `x_k` is
/// the sum of the translates `T_{x - x_k} nu` over `x` in `D` with
/// `x_k - s <= x <= x_k` (`s` the right end of the support of `nu`), cut
/// to `[0, x_{k+1} - x_k)`. Labels `g0, g1, ...` by first appearance.
pub fn build_delone_decomposition(d: &ColoredDeloneSet, nu: &Piece) -> Result<Decomposition> {
    if d.len() < 2 {
        return Err(FlcError::WindowTooShort("need at least two points".into()));
    }
    if d.points()[0].basis() != nu.basis() {
        return Err(crate::exact::LengthError::BasisMismatch.into());
    }
    let pts = d.points();
    let s = nu.support_end().unwrap_or_else(|| ExactLength::zero(nu.basis()));
    let zero = ExactLength::zero(nu.basis());
    let mut seq = Vec::with_capacity(pts.len() - 1);
    let mut first = 0;
    for k in 0..pts.len() - 1 {
        let xk = &pts[k];
        while s.try_lt(&(xk - &pts[first]))? {
            first += 1;
        }
        let mut atoms = Vec::new();
        let mut steps = Vec::new();
        for x in &pts[first..=k] {
            let t = nu.content().translated(&(x - xk));
            atoms.extend(t.atoms().iter().cloned());
            steps.extend(t.steps().iter().cloned());
        }
        let gap = &pts[k + 1] - xk;
        let content = PieceContent::new(atoms, steps)?.slice(&zero, &gap)?;
        seq.push(Piece::new(gap, content, None)?);
    }
    let (set, idx) = PieceSet::intern(seq, "g")?;
    Decomposition::new(pts[0].clone(), set, idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Basis;
    use crate::flc::{check_sfdp, decompose};
    use crate::measure::{convolve, Atom, Step};

    fn int(n: i64) -> ExactLength {
        ExactLength::integer(&Basis::integer(), n)
    }

    fn q(s: &str) -> ExactLength {
        ExactLength::parse(&Basis::integer(), s).unwrap()
    }

    #[test]
    fn recode_integer_comb() {
        let atoms = (0..10).map(|k| Atom { at: int(k), weight: Rational::from_integer(1) }).collect();
        let w = MeasureWindow::new(int(0), int(10), PieceContent::new(atoms, vec![]).unwrap()).unwrap();
        let pilot = PieceSet::new(vec![Piece::atom(int(1), int(0), Rational::from_integer(1)).unwrap()]).unwrap();
        let dec = recode_by_occurrences(&w, &pilot).unwrap();
        assert_eq!(dec.piece_set().len(), 1);
        assert_eq!(dec.len(), 9);
        assert!(dec.reproduces(&w).unwrap());
    }

    #[test]
    fn recode_rejects_lebesgue_pilot() {
        let c = PieceContent::new(vec![], vec![Step { start: int(0), end: int(10), value: Rational::from_integer(1) }]);
        let w = MeasureWindow::new(int(0), int(10), c.unwrap()).unwrap();
        let pilot = PieceSet::new(vec![Piece::step(int(1), int(0), int(1), Rational::from_integer(1)).unwrap()]).unwrap();
        assert!(matches!(recode_by_occurrences(&w, &pilot), Err(FlcError::AccumulatingOccurrences { .. })));
    }

    #[test]
    fn integer_lattice_overlapping_step() {
        let d = ColoredDeloneSet::uncolored((0..30).map(int).collect()).unwrap();
        let nu = Piece::step(q("3/2"), int(0), q("3/2"), Rational::from_integer(1)).unwrap();
        let dec = build_delone_decomposition(&d, &nu).unwrap();
        // the boundary piece at the first point, then one interior piece
        assert_eq!(dec.piece_set().len(), 2);
        let interior = dec.piece_set().get(dec.indices()[5]);
        let expect = PieceContent::new(
            vec![],
            vec![
                Step { start: int(0), end: q("1/2"), value: Rational::from_integer(2) },
                Step { start: q("1/2"), end: int(1), value: Rational::from_integer(1) },
            ],
        )
        .unwrap();
        assert_eq!(interior.content(), &expect);

        let w = convolve(&d, &[nu]).unwrap();
        assert!(dec.reproduces(&w).unwrap());
        assert!(check_sfdp(&w, &dec, &int(2)).unwrap().holds());
        let again = decompose(&w, dec.piece_set(), dec.x0()).unwrap();
        assert_eq!(again.indices()[..dec.len()], dec.indices()[..]);
    }
}
