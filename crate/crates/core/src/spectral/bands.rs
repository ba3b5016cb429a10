use rayon::prelude::*;
use serde::Serialize;

use super::compile::CompiledPiece;
use super::SpectralError;
use crate::measure::Piece;

/// Bisection stops once the bracket is this narrow in energy.
pub const EDGE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandReport {
    /// Closed intervals where `|D(E)| <= 2`, in increasing order.
    pub bands: Vec<(f64, f64)>,
    /// Total Lebesgue measure of the bands.
    pub measure: f64,
}

/// Floquet discriminant `D(E)`: trace of the period transfer matrix.
pub fn discriminant(cell: &CompiledPiece, e: f64) -> f64 {
    cell.transfer(e).trace()
}

fn in_band(cell: &CompiledPiece, e: f64) -> bool {
    discriminant(cell, e).abs() <= 2.0
}

/// Bands of the periodic operator with period `period` inside `[lo, hi]`:
/// a grid scan at step `resolution`, then bisection on `|D| - 2` at every
/// change of band membership.
pub fn floquet_bands(period: &Piece, lo: f64, hi: f64, resolution: f64) -> Result<BandReport, SpectralError> {
    floquet_bands_compiled(&CompiledPiece::new(period), lo, hi, resolution)
}

pub fn floquet_bands_compiled(
    cell: &CompiledPiece,
    lo: f64,
    hi: f64,
    resolution: f64,
) -> Result<BandReport, SpectralError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(SpectralError::InvalidParameter(format!("energy range [{lo}, {hi}]")));
    }
    if resolution.is_nan() || resolution <= 0.0 {
        return Err(SpectralError::InvalidParameter(format!("resolution {resolution}")));
    }
    let n = ((hi - lo) / resolution).ceil() as usize;
    let grid: Vec<f64> = (0..=n).map(|i| if i == n { hi } else { lo + i as f64 * resolution }).collect();
    let flags: Vec<bool> = grid.par_iter().map(|&e| in_band(cell, e)).collect();

    let mut bands = Vec::new();
    let mut start = if flags[0] { Some(lo) } else { None };
    for i in 1..grid.len() {
        match (flags[i - 1], flags[i]) {
            (false, true) => start = Some(edge(cell, grid[i - 1], grid[i])),
            (true, false) => {
                let end = edge(cell, grid[i - 1], grid[i]);
                bands.push((start.take().expect("band open"), end));
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        bands.push((s, hi));
    }
    let measure = bands.iter().map(|(a, b)| b - a).sum();
    Ok(BandReport { bands, measure })
}

/// Bisects a bracket whose ends differ in band membership.
fn edge(cell: &CompiledPiece, mut a: f64, mut b: f64) -> f64 {
    let fa = in_band(cell, a);
    while b - a > EDGE_TOL {
        let m = 0.5 * (a + b);
        if in_band(cell, m) == fa {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{Basis, ExactLength, Rational};
    use std::f64::consts::PI;

    fn kp(c: i128) -> Piece {
        let b = Basis::integer();
        Piece::atom(ExactLength::integer(&b, 1), ExactLength::zero(&b), Rational::from_integer(c)).unwrap()
    }

    #[test]
    fn free_line_is_one_band() {
        let b = Basis::integer();
        let free = Piece::zero(ExactLength::integer(&b, 1)).unwrap();
        let r = floquet_bands(&free, 0.0, 50.0, 0.01).unwrap();
        assert_eq!(r.bands.len(), 1);
        assert!((r.measure - 50.0).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn kp_edges_at_n_pi_squared() {
        let r = floquet_bands(&kp(3), 0.0, 100.0, 0.01).unwrap();
        for n in 1..=3 {
            let e = (n as f64 * PI).powi(2);
            let best = r.bands.iter().map(|&(_, hi)| (hi - e).abs()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-6, "n = {n}: {best}");
        }
    }

    #[test]
    fn edges_stable_under_refinement() {
        let a = floquet_bands(&kp(3), 0.0, 60.0, 0.02).unwrap();
        let b = floquet_bands(&kp(3), 0.0, 60.0, 0.01).unwrap();
        assert_eq!(a.bands.len(), b.bands.len());
        for (x, y) in a.bands.iter().zip(&b.bands) {
            assert!((x.0 - y.0).abs() < 1e-6 && (x.1 - y.1).abs() < 1e-6);
        }
    }
}
