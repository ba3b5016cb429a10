//! Transfer matrices for `-u'' + mu u = E u` with `mu` an atom+step
//! measure, in the column convention acting on `(u, u')`. Atoms impose
//! `u'(x+) - u'(x-) = c u(x)`; a product over a concatenation is
//! `T(concat(p, q)) = T(q) T(p)`.

mod bands;
mod compile;
mod dirichlet;
mod lyapunov;
mod mat;
mod scan;
mod trace_map;

pub use bands::{discriminant, floquet_bands, floquet_bands_compiled, BandReport, EDGE_TOL};
pub use compile::{propagate, transfer_matrix, CompiledPiece, Factor};
pub use dirichlet::{dirichlet_eigencount, dirichlet_eigencount_compiled};
pub use lyapunov::{
    fibonacci_kp_cells, lyapunov, FreeSupplier, LyapunovEstimate, PeriodicSupplier, SequenceSupplier,
    WindowSupplier, SAMPLE_STRIDE,
};
pub use mat::{Mat2, ScaledMat2};
pub use scan::{energy_grid, scan_lyapunov, scan_period, ScanRecord, SpectralScan};
pub use trace_map::{fibonacci_trace_sequence, fibonacci_transfer_products, TraceMapReport, OVERFLOW_BOUND};

use thiserror::Error;

use crate::exact::{Basis, ExactLength, Rational};
use crate::measure::{concat, MeasureError, Piece};
use crate::symbolic::fibonacci_word;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Measure(#[from] MeasureError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("transfer products overflow beyond order {effective}")]
    Overflow { effective: usize },
}

/// Exact period piece of the order-`k` Fibonacci Kronig-Penney approximant
/// over `{1, phi}`: one atom of strength `c` at the start of each cell, cells
/// of length 1 for `a` and phi for `b`.
pub fn fibonacci_kp_period(order: usize, c: Rational) -> Result<Piece, SpectralError> {
    let basis = Basis::golden();
    let zero = ExactLength::zero(&basis);
    let cell = |len: ExactLength| -> Result<Piece, MeasureError> {
        if c == Rational::from_integer(0) {
            Piece::zero(len)
        } else {
            Piece::atom(len, zero.clone(), c)
        }
    };
    let a = cell(basis.unit(0))?;
    let b = cell(basis.unit(1))?;
    let w = fibonacci_word(order);
    let pieces: Vec<Piece> = w.symbols().iter().map(|&s| if s == 0 { a.clone() } else { b.clone() }).collect();
    Ok(concat(&pieces)?)
}

/// Kronig-Penney period cell: length 1 with an atom of strength `c` at 0.
pub fn kp_period(c: Rational) -> Result<Piece, SpectralError> {
    let basis = Basis::integer();
    Ok(Piece::atom(ExactLength::integer(&basis, 1), ExactLength::zero(&basis), c)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_period_lengths() {
        let p = fibonacci_kp_period(4, Rational::from_integer(3)).unwrap();
        // abaab: three a, two b
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((p.len().value() - (3.0 + 2.0 * phi)).abs() < 1e-12);
        assert_eq!(p.content().atoms().len(), 5);
        let c = CompiledPiece::new(&p);
        assert_eq!(c.factors().len(), 10);
    }

    #[test]
    fn bands_shrink_between_orders() {
        let m4 = floquet_bands(&fibonacci_kp_period(4, Rational::from_integer(3)).unwrap(), 0.0, 20.0, 1e-3)
            .unwrap()
            .measure;
        let m7 = floquet_bands(&fibonacci_kp_period(7, Rational::from_integer(3)).unwrap(), 0.0, 20.0, 1e-3)
            .unwrap()
            .measure;
        assert!(m7 < m4, "{m7} vs {m4}");
    }
}
