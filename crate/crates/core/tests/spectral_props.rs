mod common;

use common::{g, piece, q};
use proptest::prelude::*;

use qcflc_core::exact::{Basis, ExactLength, Rational};
use qcflc_core::measure::{concat, Atom, MeasureWindow, Piece, PieceContent, Step};
use qcflc_core::spectral::*;

/// `p` followed by its mirror image, an even piece about its midpoint.
/// Atoms at 0 are dropped so that the reflection stays inside the half-open
/// interval.
fn even_piece(p: &Piece) -> Piece {
    let len = p.len();
    let twice = len.scale(&q(2));
    let c = p.content();
    let mut atoms: Vec<Atom> = c.atoms().iter().filter(|a| !a.at.is_zero()).cloned().collect();
    atoms.extend(atoms.clone().into_iter().map(|a| Atom { at: &twice - &a.at, weight: a.weight }));
    let mut steps: Vec<Step> = c.steps().to_vec();
    steps.extend(
        c.steps().iter().map(|s| Step { start: &twice - &s.end, end: &twice - &s.start, value: s.value }),
    );
    Piece::new(twice, PieceContent::new(atoms, steps).unwrap(), None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn factors_are_unimodular(p in piece(), e in -10.0f64..100.0) {
        for f in CompiledPiece::new(&p).factors() {
            let m = f.matrix(e);
            prop_assert!((m.det() - 1.0).abs() <= 1e-12 * m.frobenius().powi(2).max(1.0));
        }
    }

    #[test]
    fn composition_law(p in piece(), r in piece(), e in -10.0f64..100.0) {
        let direct = transfer_matrix(&concat(&[p.clone(), r.clone()]).unwrap(), e);
        let composed = transfer_matrix(&r, e) * transfer_matrix(&p, e);
        prop_assert!(direct.max_diff(&composed) <= 1e-9 * direct.max_abs().max(1.0));
    }

    #[test]
    fn even_piece_has_equal_diagonal(p in piece(), e in -5.0f64..60.0) {
        let m = transfer_matrix(&even_piece(&p), e);
        prop_assert!((m.a - m.d).abs() <= 1e-9 * m.max_abs().max(1.0), "{:?}", m);
    }

    #[test]
    fn scaled_product_recomposes(ps in prop::collection::vec(piece(), 1..6), e in -3.0f64..40.0) {
        let w = MeasureWindow::from_piece(g("0"), concat(&ps).unwrap()).unwrap();
        let plain = CompiledPiece::window(&w).transfer(e);
        let scaled = propagate(&w, e);
        prop_assert!(scaled.recompose().max_diff(&plain) <= 1e-9 * plain.max_abs().max(1.0));
        let det = scaled.matrix().det() * (2.0 * scaled.logscale()).exp();
        let n = CompiledPiece::window(&w).factors().len() as f64;
        prop_assert!((det - 1.0).abs() <= 1e-9 * n * plain.frobenius().powi(2).max(1.0));
    }

    #[test]
    fn eigencount_is_monotone(ps in prop::collection::vec(piece(), 1..4), e1 in -20.0f64..80.0, de in 0.0f64..20.0) {
        let w = MeasureWindow::from_piece(g("0"), concat(&ps).unwrap()).unwrap();
        prop_assert!(dirichlet_eigencount(&w, e1) <= dirichlet_eigencount(&w, e1 + de));
    }

    #[test]
    fn lyapunov_not_below_noise(c in 0.5f64..5.0, e in 0.5f64..30.0) {
        let cell = CompiledPiece::from_factors(vec![Factor::Atom(c), Factor::Segment { len: 1.0, v: 0.0 }]);
        let est = lyapunov(&PeriodicSupplier::new(cell).unwrap(), e, 2000, 1).unwrap();
        prop_assert!(est.gamma >= -est.stderr);
        let fib = SequenceSupplier::fibonacci_kp(c, 500, 4).unwrap();
        let est = lyapunov(&fib, e, 500, 4).unwrap();
        prop_assert!(est.gamma >= -est.stderr);
    }
}

#[test]
fn delta_comb_matches_direct_arithmetic() {
    let b = Basis::integer();
    let c = 2.5;
    let atoms = (0..3).map(|k| Atom { at: ExactLength::integer(&b, k), weight: Rational::new(5, 2) }).collect();
    let w = MeasureWindow::new(ExactLength::zero(&b), ExactLength::integer(&b, 3), PieceContent::new(atoms, vec![]).unwrap())
        .unwrap();
    let e: f64 = 4.0;
    // direct 2x2 arithmetic
    let (s, co) = (2.0f64.sin(), 2.0f64.cos());
    let free = [[co, s / 2.0], [-2.0 * s, co]];
    let cell = [[free[0][0] + free[0][1] * c, free[0][1]], [free[1][0] + free[1][1] * c, free[1][1]]];
    let mut m = [[1.0, 0.0], [0.0, 1.0]];
    for _ in 0..3 {
        m = [
            [cell[0][0] * m[0][0] + cell[0][1] * m[1][0], cell[0][0] * m[0][1] + cell[0][1] * m[1][1]],
            [cell[1][0] * m[0][0] + cell[1][1] * m[1][0], cell[1][0] * m[0][1] + cell[1][1] * m[1][1]],
        ];
    }
    let got = propagate(&w, e).recompose();
    let expect = Mat2::new(m[0][0], m[0][1], m[1][0], m[1][1]);
    assert!(got.max_diff(&expect) < 1e-12 * expect.max_abs().max(1.0), "{got:?} vs {expect:?}");
}

#[test]
fn empty_product_is_identity() {
    let s = CompiledPiece::default().propagate(3.0);
    assert_eq!(*s.matrix(), Mat2::IDENTITY);
    assert_eq!(s.logscale(), 0.0);
}

#[test]
fn fibonacci_window_matches_unscaled_product() {
    let p = fibonacci_kp_period(10, q(3)).unwrap();
    let w = MeasureWindow::from_piece(g("0"), p).unwrap();
    let cell = CompiledPiece::window(&w);
    let mut checked = 0;
    for i in 0..200 {
        let e = 0.1 * i as f64;
        let plain = cell.transfer(e);
        if plain.max_abs() >= 1e6 {
            continue;
        }
        let scaled = propagate(&w, e).recompose();
        assert!(scaled.max_diff(&plain) <= 1e-9 * plain.max_abs().max(1.0), "E = {e}");
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn periodic_exponent_decays_inside_bands() {
    let kp = kp_period(q(3)).unwrap();
    let bands = floquet_bands(&kp, 0.0, 60.0, 1e-3).unwrap().bands;
    let sup = PeriodicSupplier::new(CompiledPiece::new(&kp)).unwrap();
    for &(lo, hi) in &bands[..3] {
        let e = lo + 0.37 * (hi - lo);
        let gs: Vec<f64> = [1_000, 10_000, 100_000].iter().map(|&n| lyapunov(&sup, e, n, 1).unwrap().gamma).collect();
        // bounded products: gamma falls roughly like 1/L
        assert!(gs[1] < 0.5 * gs[0] && gs[2] < 0.5 * gs[1], "E = {e}: {gs:?}");
        assert!(gs[2] < 1e-3);
    }
}
