use super::{SymbolicError, Word};
use crate::exact::{ExactLength, Rational};
use crate::measure::{concat, Atom, MeasureWindow, Piece, PieceContent};

/// Atom of weight `x(j)` at `sum_{k<j} l_{x(k)}`; lengths indexed by
/// alphabet position. The window covers `[0, sum_j l_{x(j)})`.
pub fn suspend(w: &Word, lengths: &[ExactLength]) -> Result<MeasureWindow, SymbolicError> {
    check_lengths(w, lengths)?;
    if w.is_empty() {
        return Err(SymbolicError::InvalidParameter("cannot suspend the empty word".into()));
    }
    let basis = lengths[0].basis();
    let mut at = ExactLength::zero(basis);
    let mut atoms = Vec::with_capacity(w.len());
    for &s in w.symbols() {
        atoms.push(Atom { at: at.clone(), weight: Rational::from_integer(w.letter_value(s) as i128) });
        at = &at + &lengths[s as usize];
    }
    Ok(MeasureWindow::new(ExactLength::zero(basis), at, PieceContent::new(atoms, vec![])?)?)
}

fn check_lengths(w: &Word, lengths: &[ExactLength]) -> Result<(), SymbolicError> {
    if lengths.len() != w.alphabet().len() {
        return Err(SymbolicError::InvalidParameter(format!(
            "{} lengths for an alphabet of {}",
            lengths.len(),
            w.alphabet().len()
        )));
    }
    for (i, l) in lengths.iter().enumerate() {
        if !l.same_basis(&lengths[0]) {
            return Err(crate::exact::LengthError::BasisMismatch.into());
        }
        if !l.is_positive()? {
            return Err(SymbolicError::InvalidParameter(format!("length of `{}` must be positive", w.alphabet()[i])));
        }
    }
    Ok(())
}

/// One profile per alphabet letter, each a piece whose length is the
/// letter's block length.
#[derive(Debug, Clone, PartialEq)]
pub struct SuspensionParams {
    profiles: Vec<Piece>,
}

impl SuspensionParams {
    /// Profiles must start their support at 0 and no two may be multiples of
    /// Lebesgue measure.
    pub fn new(profiles: Vec<Piece>) -> Result<Self, SymbolicError> {
        if profiles.is_empty() {
            return Err(SymbolicError::InvalidParameter("no profiles".into()));
        }
        let mut lebesgue = 0;
        for (j, p) in profiles.iter().enumerate() {
            if p.basis() != profiles[0].basis() {
                return Err(crate::exact::LengthError::BasisMismatch.into());
            }
            if p.is_lebesgue_multiple() {
                lebesgue += 1;
            }
            if !p.content().is_zero() && !min_support_is_zero(p.content()) {
                return Err(SymbolicError::InvalidProfile(format!("profile {j} does not start its support at 0")));
            }
        }
        if lebesgue > 1 {
            return Err(SymbolicError::InvalidProfile(format!(
                "{lebesgue} profiles are multiples of Lebesgue measure; at most one is allowed"
            )));
        }
        Ok(SuspensionParams { profiles })
    }

    /// Lengths from the profiles themselves: `sup supp nu_j`, or 1 for a
    /// point mass at 0. A profile whose support ends in an atom other than
    /// the lone one at 0 cannot be padded that way.
    pub fn from_profiles(contents: Vec<PieceContent>, basis: &crate::exact::Basis) -> Result<Self, SymbolicError> {
        let zero = ExactLength::zero(basis);
        let pieces = contents
            .into_iter()
            .enumerate()
            .map(|(j, c)| {
                let point_at_zero = c.steps().is_empty() && c.atoms().len() == 1 && c.atoms()[0].at == zero;
                let len = if point_at_zero {
                    ExactLength::integer(basis, 1)
                } else {
                    let last_step = c.steps().last().map(|s| s.end.clone());
                    let last_atom = c.atoms().last().map(|a| a.at.clone());
                    match (last_step, last_atom) {
                        (Some(s), Some(a)) if a.try_lt(&s)? => s,
                        (Some(s), None) => s,
                        _ => {
                            return Err(SymbolicError::InvalidProfile(format!(
                                "profile {j} ends in an atom or is empty; give its length explicitly"
                            )))
                        }
                    }
                };
                Ok(Piece::new(len, c, None)?)
            })
            .collect::<Result<Vec<_>, SymbolicError>>()?;
        Self::new(pieces)
    }

    pub fn profiles(&self) -> &[Piece] {
        &self.profiles
    }

    /// Profiles labelled by the alphabet letters, ready for decomposition.
    pub fn labelled(&self, alphabet: &[String]) -> Vec<Piece> {
        self.profiles.iter().zip(alphabet).map(|(p, a)| p.clone().with_label(a.clone())).collect()
    }
}

fn min_support_is_zero(c: &PieceContent) -> bool {
    c.atoms().first().is_some_and(|a| a.at.is_zero()) || c.steps().first().is_some_and(|s| s.start.is_zero())
}

/// Lays the profile of each letter end to end, starting at 0.
pub fn suspend_with_profiles(w: &Word, params: &SuspensionParams) -> Result<MeasureWindow, SymbolicError> {
    if params.profiles.len() != w.alphabet().len() {
        return Err(SymbolicError::InvalidParameter(format!(
            "{} profiles for an alphabet of {}",
            params.profiles.len(),
            w.alphabet().len()
        )));
    }
    if w.is_empty() {
        return Err(SymbolicError::InvalidParameter("cannot suspend the empty word".into()));
    }
    let seq: Vec<Piece> = w.symbols().iter().map(|&s| params.profiles[s as usize].clone()).collect();
    let body = concat(&seq)?;
    Ok(MeasureWindow::from_piece(ExactLength::zero(body.basis()), body)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Basis;
    use crate::flc::{decompose, detect_eventual_period, PieceSet};
    use crate::measure::Step;
    use crate::symbolic::fibonacci_word;

    fn gl(s: &str) -> ExactLength {
        ExactLength::parse(&Basis::golden(), s).unwrap()
    }

    #[test]
    fn suspend_examples() {
        let w = Word::from_letters("111", &["1"]).unwrap();
        let m = suspend(&w, &[gl("1")]).unwrap();
        let pts: Vec<_> = m.content().atoms().iter().map(|a| a.at.clone()).collect();
        assert_eq!(pts, vec![gl("0"), gl("1"), gl("2")]);

        let w = Word::from_letters("12", &["1", "2"]).unwrap();
        let m = suspend(&w, &[gl("1"), gl("phi")]).unwrap();
        assert_eq!(m.content().atoms()[1], Atom { at: gl("1"), weight: Rational::from_integer(2) });
        assert_eq!(m.end(), gl("1+phi"));

        let w = Word::from_letters("0101", &["0", "1"]).unwrap();
        let m = suspend(&w, &[gl("1"), gl("1")]).unwrap();
        assert_eq!(m.content().atoms().len(), 2);
    }

    #[test]
    fn delta_profiles_are_periodic() {
        let one = Rational::from_integer(1);
        let d = Piece::atom(gl("1"), gl("0"), one).unwrap();
        let params = SuspensionParams::new(vec![d.clone(), d]).unwrap();
        let m = suspend_with_profiles(&fibonacci_word(10), &params).unwrap();
        assert_eq!(detect_eventual_period(&m, None).unwrap(), Some((gl("0"), gl("1"))));
    }

    #[test]
    fn decompose_recovers_fibonacci_word() {
        let c = Rational::from_integer(3);
        let params = SuspensionParams::new(vec![
            Piece::atom(gl("1"), gl("0"), c).unwrap(),
            Piece::atom(gl("phi"), gl("0"), c).unwrap(),
        ])
        .unwrap();
        let word = fibonacci_word(12);
        let m = suspend_with_profiles(&word, &params).unwrap();
        let set = PieceSet::new(params.labelled(word.alphabet())).unwrap();
        let dec = decompose(&m, &set, &gl("0")).unwrap();
        let labels: String = dec.labels().concat();
        assert_eq!(labels, word.to_letters());
    }

    #[test]
    fn profile_guards() {
        let z = Rational::from_integer;
        let leb = |v| Piece::step(gl("1"), gl("0"), gl("1"), z(v)).unwrap();
        assert!(SuspensionParams::new(vec![leb(1), leb(2)]).is_err());
        let shifted = Piece::atom(gl("1"), gl("1/2"), z(1)).unwrap();
        assert!(SuspensionParams::new(vec![shifted]).is_err());

        let b = Basis::golden();
        let steps = vec![
            PieceContent::new(vec![], vec![Step { start: gl("0"), end: gl("1"), value: z(1) }]).unwrap(),
            PieceContent::new(vec![Atom { at: gl("0"), weight: z(2) }], vec![]).unwrap(),
        ];
        let p = SuspensionParams::from_profiles(steps, &b).unwrap();
        assert_eq!(p.profiles()[0].len(), &gl("1"));
        assert_eq!(p.profiles()[1].len(), &gl("1"));
    }
}
