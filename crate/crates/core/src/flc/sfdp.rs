use std::collections::HashMap;

use super::{Decomposition, FlcError, Result};
use crate::exact::ExactLength;
use crate::measure::{restrict, MeasureWindow, PieceContent};

/// Two grid points that share a left collar of pieces and the same measure
/// on `[x, x + l)`, yet are followed by pieces of different lengths.
#[derive(Debug, Clone, PartialEq)]
pub struct SfdpCounterexample {
    pub y: ExactLength,
    pub z: ExactLength,
    /// Labels of the shared collar, left to right.
    pub collar: Vec<String>,
    pub next_at_y: String,
    pub next_at_z: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SfdpVerdict {
    /// Every tested grid point agreed with the first one sharing its key.
    Holds { tested: usize, classes: usize },
    Violated(Box<SfdpCounterexample>),
}

impl SfdpVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, SfdpVerdict::Holds { .. })
    }
}

/// Strong finite decomposition test at radius `l`: the minimal collar of
/// whole pieces of total length at least `l` to the left of a grid point,
/// together with the measure on `[x, x + l)`, must fix the length of the
/// next piece.
pub fn check_sfdp(w: &MeasureWindow, dec: &Decomposition, l: &ExactLength) -> Result<SfdpVerdict> {
    if !l.is_positive()? {
        return Err(FlcError::InvalidParameter(format!("l = {l} must be positive")));
    }
    if !dec.reproduces(w)? {
        return Err(FlcError::InvalidDecomposition);
    }
    let grid = dec.grid();
    let set = dec.piece_set();
    let idx = dec.indices();
    let end = w.end();

    let mut seen: HashMap<(Vec<usize>, PieceContent), usize> = HashMap::new();
    let mut tested = 0;
    // collar start pointer: smallest m with grid[k] - grid[m] >= l, kept monotone
    let mut m: Option<usize> = None;
    for k in 1..idx.len() {
        let x = &grid[k];
        let mut cand = m.unwrap_or(0);
        if (x - &grid[cand]).try_lt(l)? {
            continue;
        }
        while cand + 1 < k && l.try_le(&(x - &grid[cand + 1]))? {
            cand += 1;
        }
        m = Some(cand);
        if end.try_lt(&(x + l))? {
            break;
        }
        tested += 1;
        let key = (idx[cand..k].to_vec(), restrict(w, x, l)?.content().clone());
        match seen.get(&key) {
            None => {
                seen.insert(key, k);
            }
            Some(&first) => {
                if set.get(idx[first]).len() != set.get(idx[k]).len() {
                    return Ok(SfdpVerdict::Violated(Box::new(SfdpCounterexample {
                        y: grid[first].clone(),
                        z: x.clone(),
                        collar: key.0.iter().map(|&i| set.label(i).to_string()).collect(),
                        next_at_y: set.label(idx[first]).to_string(),
                        next_at_z: set.label(idx[k]).to_string(),
                    })));
                }
            }
        }
    }
    if tested < 2 {
        return Err(FlcError::WindowTooShort(format!(
            "only {tested} grid point(s) carry a full collar and look-ahead at l = {l}"
        )));
    }
    Ok(SfdpVerdict::Holds { tested, classes: seen.len() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Basis, Rational};
    use crate::flc::PieceSet;
    use crate::measure::Piece;

    fn gl(s: &str) -> ExactLength {
        ExactLength::parse(&Basis::golden(), s).unwrap()
    }

    /// Zero measure cut into S (length 1) and L (length phi), with runs of
    /// 1, 2, ..., `max_run` shorts separated by single longs.
    fn zero_runs(max_run: usize) -> (MeasureWindow, Decomposition) {
        let set = PieceSet::new(vec![
            Piece::zero(gl("1")).unwrap().with_label("S"),
            Piece::zero(gl("phi")).unwrap().with_label("L"),
        ])
        .unwrap();
        let mut idx = Vec::new();
        for run in 1..=max_run {
            idx.extend(std::iter::repeat_n(0, run));
            idx.push(1);
        }
        let dec = Decomposition::new(gl("0"), set, idx).unwrap();
        let w = MeasureWindow::from_piece(gl("0"), dec.concatenation().unwrap()).unwrap();
        (w, dec)
    }

    #[test]
    fn zero_measure_runs_violate_sfdp() {
        let (w, dec) = zero_runs(20);
        for l in ["2", "4", "8"] {
            let v = check_sfdp(&w, &dec, &gl(l)).unwrap();
            let SfdpVerdict::Violated(c) = v else { panic!("expected a counterexample at l = {l}") };
            assert_ne!(c.next_at_y, c.next_at_z);
            assert!(c.y.try_lt(&c.z).unwrap());
        }
    }

    #[test]
    fn fibonacci_comb_holds() {
        let one = Rational::from_integer(1);
        let a = Piece::atom(gl("1"), gl("0"), one).unwrap().with_label("a");
        let b = Piece::atom(gl("phi"), gl("0"), one).unwrap().with_label("b");
        let set = PieceSet::new(vec![a, b]).unwrap();
        // Fibonacci word over {b, a} by the substitution b -> ba, a -> b
        let mut word = vec![1usize];
        while word.len() < 200 {
            word = word.iter().flat_map(|&s| if s == 1 { vec![1, 0] } else { vec![1] }).collect();
        }
        let dec = Decomposition::new(gl("0"), set, word).unwrap();
        let w = MeasureWindow::from_piece(gl("0"), dec.concatenation().unwrap()).unwrap();
        for l in ["2", "3", "5"] {
            assert!(check_sfdp(&w, &dec, &gl(l)).unwrap().holds());
        }
    }

    #[test]
    fn too_short() {
        let (w, dec) = zero_runs(1);
        assert!(matches!(check_sfdp(&w, &dec, &gl("8")), Err(FlcError::WindowTooShort(_))));
    }
}
