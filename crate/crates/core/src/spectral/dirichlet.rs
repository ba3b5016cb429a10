use std::f64::consts::PI;

use super::compile::{CompiledPiece, Factor};
use super::mat::Mat2;
use crate::measure::MeasureWindow;

/// Number of Dirichlet eigenvalues strictly below `e` on the window, by
/// counting zeros in the open interval of the solution with `u(0) = 0`,
/// `u'(0) = 1`.
pub fn dirichlet_eigencount(w: &MeasureWindow, e: f64) -> u64 {
    dirichlet_eigencount_compiled(&CompiledPiece::window(w), e)
}

pub fn dirichlet_eigencount_compiled(cell: &CompiledPiece, e: f64) -> u64 {
    let factors = cell.factors();
    let last_seg = factors.iter().rposition(|f| matches!(f, Factor::Segment { .. }));
    let (mut u, mut du) = (0.0f64, 1.0f64);
    let mut zeros: i64 = 0;
    for (i, f) in factors.iter().enumerate() {
        match *f {
            Factor::Atom(c) => du += c * u,
            Factor::Segment { len, v } => {
                let last = Some(i) == last_seg;
                let q = e - v;
                let (u1, du1) = Mat2::segment(q, len).apply((u, du));
                if q > 0.0 {
                    let k = q.sqrt();
                    // u = A sin(phi), u'/k = A cos(phi), phi advancing by k*len
                    let phi0 = (u + 0.0).atan2(du / k);
                    let phi1 = phi0 + k * len;
                    let below = (phi0 / PI).floor() as i64;
                    zeros += if last { (phi1 / PI).ceil() as i64 - 1 - below } else { (phi1 / PI).floor() as i64 - below };
                } else if u != 0.0 && (u * u1 < 0.0 || (u1 == 0.0 && !last)) {
                    zeros += 1;
                }
                u = u1;
                du = du1;
            }
        }
        let n = u.hypot(du);
        u /= n;
        du /= n;
    }
    zeros.max(0) as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Basis, ExactLength, Rational};
    use crate::measure::{Piece, PieceContent};

    fn free_pi() -> MeasureWindow {
        let b = Basis::with_pi();
        MeasureWindow::new(ExactLength::zero(&b), b.unit(1), PieceContent::empty()).unwrap()
    }

    #[test]
    fn free_interval_counts() {
        let w = free_pi();
        assert_eq!(dirichlet_eigencount(&w, 10.0), 3);
        assert_eq!(dirichlet_eigencount(&w, 1.0), 0);
        assert_eq!(dirichlet_eigencount(&w, 4.0), 1);
        assert_eq!(dirichlet_eigencount(&w, 4.0 + 1e-9), 2);
        assert_eq!(dirichlet_eigencount(&w, -3.0), 0);
    }

    #[test]
    fn constant_step_shifts_spectrum() {
        let b = Basis::with_pi();
        let p = Piece::step(b.unit(1), ExactLength::zero(&b), b.unit(1), Rational::from_integer(2)).unwrap();
        let w = MeasureWindow::from_piece(ExactLength::zero(&b), p).unwrap();
        // eigenvalues n^2 + 2
        assert_eq!(dirichlet_eigencount(&w, 2.5), 0);
        assert_eq!(dirichlet_eigencount(&w, 3.5), 1);
        assert_eq!(dirichlet_eigencount(&w, 11.5), 3);
    }

    /// Counts sign changes of a finely stepped shooting solution.
    fn shooting(cell: &CompiledPiece, e: f64) -> u64 {
        let mut st = (0.0, 1.0);
        let mut zeros = 0;
        for f in cell.factors() {
            match *f {
                Factor::Atom(c) => st.1 += c * st.0,
                Factor::Segment { len, v } => {
                    let n = 2000;
                    let m = Mat2::segment(e - v, len / n as f64);
                    for _ in 0..n {
                        let next = m.apply(st);
                        if st.0 != 0.0 && st.0 * next.0 < 0.0 {
                            zeros += 1;
                        }
                        st = next;
                    }
                }
            }
        }
        zeros
    }

    #[test]
    fn kp_comb_matches_shooting() {
        let cell = [Factor::Atom(5.0), Factor::Segment { len: 1.0, v: 0.0 }];
        let comb = CompiledPiece::from_factors(cell.iter().cycle().take(20).copied().collect());
        assert_eq!(dirichlet_eigencount_compiled(&comb, 1.0), 0);
        for e in [-2.0, 3.0, 7.7, 15.0, 40.0, 90.0] {
            assert_eq!(dirichlet_eigencount_compiled(&comb, e), shooting(&comb, e), "E = {e}");
        }
    }
}
