mod common;

use common::{g, piece, q};
use proptest::prelude::*;

use qcflc_core::exact::{ExactLength, Rational};
use qcflc_core::flc::{
    build_delone_decomposition, check_sfdp, check_udp, decompose, detect_eventual_period, recode_by_occurrences,
    Decomposition, FlcError, PieceSet,
};
use qcflc_core::measure::{concat, convolve, restrict, Atom, ColoredDeloneSet, MeasureWindow, Piece, PieceContent, Step};
use qcflc_core::symbolic::substitution_fixed_point;
use qcflc_core::symbolic::Substitution;

const GAPS: [&str; 5] = ["1", "phi", "3/2", "2", "1/2+phi"];

fn comb_piece(gap: usize, weight: i128) -> Piece {
    Piece::atom(g(GAPS[gap]), g("0"), q(weight)).unwrap()
}

fn roundtrip(w: &MeasureWindow, dec: &Decomposition) -> bool {
    let total = &dec.end() - dec.x0();
    restrict(w, dec.x0(), &total).unwrap() == dec.concatenation().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn delone_decomposition_round_trips_and_is_sfdp(
        kinds in prop::collection::vec(0usize..5, 1..=4),
        picks in prop::collection::vec(0usize..4, 30..50),
        s in 0usize..4,
        v in (1i128..4, 1i128..4),
    ) {
        let gaps: Vec<ExactLength> = picks.iter().map(|&i| g(GAPS[kinds[i % kinds.len()]])).collect();
        let d = ColoredDeloneSet::from_gaps(g("0"), &gaps).unwrap();
        let s = g(["1/2", "phi", "2", "3"][s]);
        let half = s.scale(&Rational::new(1, 2));
        let nu = Piece::new(
            s.clone(),
            PieceContent::new(vec![], vec![
                Step { start: g("0"), end: half.clone(), value: q(v.0) },
                Step { start: half, end: s.clone(), value: q(v.1) },
            ]).unwrap(),
            None,
        ).unwrap();
        let w = convolve(&d, std::slice::from_ref(&nu)).unwrap();
        let dec = build_delone_decomposition(&d, &nu).unwrap();
        prop_assert!(roundtrip(&w, &dec));
        let lp = kinds.iter().map(|&k| g(GAPS[k])).fold(g("0"), |m, x| m.try_max(&x).unwrap());
        let ell = &s.try_max(&lp).unwrap() + &g("1/4");
        prop_assert!(check_sfdp(&w, &dec, &ell).unwrap().holds());
    }

    #[test]
    fn recoded_sturmian_comb_has_udp(offset in 0usize..200, len in 40usize..80) {
        let word = substitution_fixed_point(&Substitution::fibonacci(), "a", 300).unwrap();
        let gaps: Vec<ExactLength> =
            word.symbols()[offset..offset + len].iter().map(|&s| if s == 0 { g("1") } else { g("phi") }).collect();
        let d = ColoredDeloneSet::from_gaps(g("0"), &gaps).unwrap();
        let pilot = Piece::atom(g("1/2"), g("0"), q(1)).unwrap();
        let w = convolve(&d, std::slice::from_ref(&pilot)).unwrap();
        let dec = recode_by_occurrences(&w, &PieceSet::new(vec![pilot]).unwrap()).unwrap();
        prop_assert!(dec.reproduces(&w).unwrap());
        prop_assert!(roundtrip(&w, &dec));
        let r = &g("phi") + &g("1/2");
        let v = check_udp(&w, dec.piece_set(), dec.x0(), &r).unwrap();
        prop_assert!(v.holds, "{:?}", v.witness);
    }

    #[test]
    fn udp_implies_sfdp(
        pieces in prop::collection::vec((0usize..5, 1i128..3), 2..4),
        idx in prop::collection::vec(0usize..3, 20..40),
        r in 0usize..3,
    ) {
        let ps: Vec<Piece> = pieces.iter().map(|&(gap, wt)| comb_piece(gap, wt)).collect();
        let Ok(set) = PieceSet::new(ps) else { return Ok(()) };
        let idx: Vec<usize> = idx.into_iter().map(|i| i % set.len()).collect();
        let dec = Decomposition::new(g("0"), set.clone(), idx).unwrap();
        let w = MeasureWindow::from_piece(g("0"), dec.concatenation().unwrap()).unwrap();
        let r = g(["1", "2", "3"][r]);
        let udp = check_udp(&w, &set, &g("0"), &r).unwrap();
        if udp.holds {
            match check_sfdp(&w, &dec, &r.scale(&q(2))) {
                Ok(v) => prop_assert!(v.holds()),
                Err(FlcError::WindowTooShort(_)) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }

    #[test]
    fn detected_period_gives_sfdp_decomposition(prefix in piece(), period in piece(), copies in 6usize..10) {
        prop_assume!(!period.content().is_zero());
        let mut ps = vec![prefix];
        ps.extend(std::iter::repeat_n(period.clone(), copies));
        let w = MeasureWindow::from_piece(g("0"), concat(&ps).unwrap()).unwrap();
        let (x0, p) = detect_eventual_period(&w, None).unwrap().expect("periodic tail");
        let cell = restrict(&w, &x0, &p).unwrap();
        let mut n = 0;
        while (&x0 + &p.scale(&q(n as i128 + 1))).try_le(&w.end()).unwrap() {
            n += 1;
        }
        let dec = Decomposition::new(x0.clone(), PieceSet::new(vec![cell]).unwrap(), vec![0; n]).unwrap();
        prop_assert!(dec.reproduces(&w).unwrap());
        for k in 1..=2 {
            match check_sfdp(&w, &dec, &p.scale(&q(k))) {
                Ok(v) => prop_assert!(v.holds()),
                Err(FlcError::WindowTooShort(_)) => {}
                Err(e) => return Err(TestCaseError::fail(e.to_string())),
            }
        }
    }

    #[test]
    fn decompose_round_trips(ps in prop::collection::vec(0usize..3, 5..15), a in piece(), b in piece()) {
        let Ok(set) = PieceSet::new(vec![a.with_label("a"), b.with_label("b")]) else { return Ok(()) };
        let seq: Vec<Piece> = ps.iter().map(|&i| set.get(i % 2).clone()).collect();
        let w = MeasureWindow::from_piece(g("0"), concat(&seq).unwrap()).unwrap();
        let dec = decompose(&w, &set, &g("0")).unwrap();
        prop_assert!(roundtrip(&w, &dec));
    }
}

#[test]
fn comb_atoms_sit_on_points() {
    let d = ColoredDeloneSet::from_gaps(g("0"), &[g("1"), g("phi")]).unwrap();
    let w = convolve(&d, &[comb_piece(0, 1)]).unwrap();
    let at: Vec<&ExactLength> = w.content().atoms().iter().map(|a: &Atom| &a.at).collect();
    assert_eq!(at, vec![&g("0"), &g("1"), &g("1+phi")]);
}
