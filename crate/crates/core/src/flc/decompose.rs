use std::collections::HashSet;

use super::{Decomposition, FlcError, PieceSet, Result};
use crate::exact::ExactLength;
use crate::measure::{restrict, MeasureWindow};

/// Splits the tail of `w` from `x0` into pieces of `set`. An exact cover of
/// `[x0, b)` is preferred; failing that, the search may stop once the
/// remaining stretch is shorter than the shortest piece, or is a proper
/// prefix of some piece that the window cuts off.
///
/// Depth-first in piece order; positions already shown to be dead ends are
/// remembered so the search stays linear in the number of reachable grid
/// positions.
pub fn decompose(w: &MeasureWindow, set: &PieceSet, x0: &ExactLength) -> Result<Decomposition> {
    if x0.try_lt(w.origin())? || !x0.try_lt(&w.end())? {
        return Err(FlcError::InvalidParameter(format!("x0 = {x0} outside the window")));
    }
    let lp = set.min_len()?;
    if (&w.end() - x0).try_lt(&lp)? {
        return Err(FlcError::WindowTooShort(format!("tail from {x0} is shorter than the shortest piece")));
    }
    for exact in [true, false] {
        if let Some(path) = search(w, set, x0, &lp, exact)? {
            return Decomposition::new(x0.clone(), set.clone(), path);
        }
    }
    Err(FlcError::NoDecomposition { from: x0.clone() })
}

fn search(
    w: &MeasureWindow,
    set: &PieceSet,
    x0: &ExactLength,
    lp: &ExactLength,
    exact: bool,
) -> Result<Option<Vec<usize>>> {
    let end = w.end();
    let mut dead: HashSet<ExactLength> = HashSet::new();
    // (position, next piece index to try)
    let mut stack: Vec<(ExactLength, usize)> = vec![(x0.clone(), 0)];
    let mut path: Vec<usize> = Vec::new();

    while let Some((pos, next)) = stack.last().cloned() {
        if pos == end || (!exact && (&end - &pos).try_lt(lp)?) {
            return Ok(Some(path));
        }
        let mut advanced = false;
        for j in next..set.len() {
            let p = set.get(j);
            let to = &pos + p.len();
            if end.try_lt(&to)? || dead.contains(&to) {
                continue;
            }
            if restrict(w, &pos, p.len())?.content() == p.content() {
                stack.last_mut().expect("nonempty").1 = j + 1;
                stack.push((to, 0));
                path.push(j);
                advanced = true;
                break;
            }
        }
        if !advanced {
            if !exact && is_cut_prefix(w, set, &pos)? {
                return Ok(Some(path));
            }
            dead.insert(pos);
            stack.pop();
            path.pop();
        }
    }
    Ok(None)
}

pub(super) fn is_cut_prefix(w: &MeasureWindow, set: &PieceSet, pos: &ExactLength) -> Result<bool> {
    let rest = &w.end() - pos;
    if !rest.is_positive()? {
        return Ok(true);
    }
    let seen = restrict(w, pos, &rest)?;
    let zero = ExactLength::zero(w.basis());
    for p in set.pieces() {
        if rest.try_lt(p.len())? && p.content().slice(&zero, &rest)? == *seen.content() {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Basis, Rational};
    use crate::measure::{Atom, Piece, PieceContent};

    fn int(n: i64) -> ExactLength {
        ExactLength::integer(&Basis::integer(), n)
    }

    #[test]
    fn integer_comb_single_piece() {
        let atoms = (0..10).map(|k| Atom { at: int(k), weight: Rational::from_integer(1) }).collect();
        let w = MeasureWindow::new(int(0), int(10), PieceContent::new(atoms, vec![]).unwrap()).unwrap();
        let set = PieceSet::new(vec![Piece::atom(int(1), int(0), Rational::from_integer(1)).unwrap()]).unwrap();
        let d = decompose(&w, &set, &int(0)).unwrap();
        assert_eq!(d.len(), 10);
        assert!(d.reproduces(&w).unwrap());
    }

    #[test]
    fn backtracks_out_of_greedy_dead_end() {
        // atoms at 0 and 3 on [0, 5); "a" first leads to a dead end at 2
        let atoms = vec![
            Atom { at: int(0), weight: Rational::from_integer(1) },
            Atom { at: int(3), weight: Rational::from_integer(1) },
        ];
        let w = MeasureWindow::new(int(0), int(5), PieceContent::new(atoms, vec![]).unwrap()).unwrap();
        let one = Rational::from_integer(1);
        let set = PieceSet::new(vec![
            Piece::atom(int(2), int(0), one).unwrap().with_label("a"),
            Piece::atom(int(3), int(0), one).unwrap().with_label("b"),
        ])
        .unwrap();
        let d = decompose(&w, &set, &int(0)).unwrap();
        assert_eq!(d.labels(), vec!["b", "a"]);
        assert!(d.reproduces(&w).unwrap());
    }

    #[test]
    fn no_decomposition() {
        let w = MeasureWindow::new(
            int(0),
            int(4),
            PieceContent::new(vec![Atom { at: int(1), weight: Rational::from_integer(1) }], vec![]).unwrap(),
        )
        .unwrap();
        let set = PieceSet::new(vec![Piece::atom(int(2), int(0), Rational::from_integer(1)).unwrap()]).unwrap();
        assert!(matches!(decompose(&w, &set, &int(0)), Err(FlcError::NoDecomposition { .. })));
    }

    #[test]
    fn truncated_last_piece_accepted() {
        // [0, 5) with atoms at 0, 3: pieces of length 3; the tail [3, 5) is a
        // prefix of the length-3 piece
        let one = Rational::from_integer(1);
        let atoms = vec![Atom { at: int(0), weight: one }, Atom { at: int(3), weight: one }];
        let w = MeasureWindow::new(int(0), int(5), PieceContent::new(atoms, vec![]).unwrap()).unwrap();
        let set = PieceSet::new(vec![Piece::atom(int(3), int(0), one).unwrap()]).unwrap();
        let d = decompose(&w, &set, &int(0)).unwrap();
        assert_eq!(d.len(), 1);
    }
}
