use serde::Serialize;

use super::compile::{CompiledPiece, Factor};
use super::mat::ScaledMat2;
use super::SpectralError;
use crate::symbolic::{substitution_fixed_point, Substitution, Word};

/// Offset between the starting cells of consecutive samples of a sequence
/// supplier.
pub const SAMPLE_STRIDE: usize = 7919;

/// Source of arbitrarily long windows, addressed by sample index and size in
/// cells.
pub trait WindowSupplier: Sync {
    fn window(&self, sample: usize, cells: usize) -> Result<CompiledPiece, SpectralError>;
}

/// Repeats one period cell.
#[derive(Debug, Clone)]
pub struct PeriodicSupplier {
    cell: CompiledPiece,
}

impl PeriodicSupplier {
    pub fn new(cell: CompiledPiece) -> Result<Self, SpectralError> {
        if cell.len().is_nan() || cell.len() <= 0.0 {
            return Err(SpectralError::InvalidParameter("period cell must have positive length".into()));
        }
        Ok(PeriodicSupplier { cell })
    }
}

impl WindowSupplier for PeriodicSupplier {
    fn window(&self, _sample: usize, cells: usize) -> Result<CompiledPiece, SpectralError> {
        let f = self.cell.factors();
        Ok(CompiledPiece::from_factors(f.iter().cycle().take(f.len() * cells).copied().collect()))
    }
}

/// Unit free segments: the free line.
#[derive(Debug, Clone, Copy, Default)]
pub struct FreeSupplier;

impl WindowSupplier for FreeSupplier {
    fn window(&self, _sample: usize, cells: usize) -> Result<CompiledPiece, SpectralError> {
        Ok(CompiledPiece::from_factors(vec![Factor::Segment { len: 1.0, v: 0.0 }; cells]))
    }
}

/// Cells laid out along a fixed symbol sequence; sample `s` starts at cell
/// `s * SAMPLE_STRIDE`.
#[derive(Debug, Clone)]
pub struct SequenceSupplier {
    symbols: Vec<u16>,
    cells: Vec<CompiledPiece>,
}

impl SequenceSupplier {
    pub fn new(symbols: Vec<u16>, cells: Vec<CompiledPiece>) -> Result<Self, SpectralError> {
        if let Some(&s) = symbols.iter().find(|&&s| s as usize >= cells.len()) {
            return Err(SpectralError::InvalidParameter(format!("symbol {s} has no cell")));
        }
        Ok(SequenceSupplier { symbols, cells })
    }

    pub fn from_word(w: &Word, cells: Vec<CompiledPiece>) -> Result<Self, SpectralError> {
        Self::new(w.symbols().to_vec(), cells)
    }

    /// Fibonacci Kronig-Penney: atoms of strength `c` separated by 1 (`a`)
    /// or phi (`b`) along the Fibonacci fixed point, long enough for
    /// `samples` windows of `cells` cells.
    pub fn fibonacci_kp(c: f64, cells: usize, samples: usize) -> Result<Self, SpectralError> {
        let need = samples.saturating_sub(1) * SAMPLE_STRIDE + cells;
        let w = substitution_fixed_point(&Substitution::fibonacci(), "a", need)
            .map_err(|e| SpectralError::InvalidParameter(e.to_string()))?;
        let (a, b) = fibonacci_kp_cells(c);
        Self::from_word(&w, vec![a, b])
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

impl WindowSupplier for SequenceSupplier {
    fn window(&self, sample: usize, cells: usize) -> Result<CompiledPiece, SpectralError> {
        let start = sample * SAMPLE_STRIDE;
        let Some(run) = self.symbols.get(start..start + cells) else {
            return Err(SpectralError::InvalidParameter(format!(
                "sample {sample} needs cells {start}..{} but the sequence has {}",
                start + cells,
                self.symbols.len()
            )));
        };
        let factors = run.iter().flat_map(|&s| self.cells[s as usize].factors().iter().copied()).collect();
        Ok(CompiledPiece::from_factors(factors))
    }
}

/// The two Fibonacci Kronig-Penney cells: an atom of strength `c` followed by
/// a free gap of 1 (`a`) or phi (`b`).
pub fn fibonacci_kp_cells(c: f64) -> (CompiledPiece, CompiledPiece) {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let cell = |len| CompiledPiece::from_factors(vec![Factor::Atom(c), Factor::Segment { len, v: 0.0 }]);
    (cell(1.0), cell(phi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovEstimate {
    pub gamma: f64,
    /// Standard error of the mean over samples (0 for a single sample).
    pub stderr: f64,
    pub samples: usize,
}

/// Mean over samples of `logscale / length` for the product across `cells`
/// cells at energy `e`.
pub fn lyapunov(
    supplier: &dyn WindowSupplier,
    e: f64,
    cells: usize,
    samples: usize,
) -> Result<LyapunovEstimate, SpectralError> {
    if cells == 0 || samples == 0 {
        return Err(SpectralError::InvalidParameter("lyapunov needs cells >= 1 and samples >= 1".into()));
    }
    let mut gammas = Vec::with_capacity(samples);
    for s in 0..samples {
        let w = supplier.window(s, cells)?;
        let mut m = ScaledMat2::identity();
        w.propagate_into(&mut m, e);
        gammas.push(m.logscale() / w.len());
    }
    let n = samples as f64;
    let gamma = gammas.iter().sum::<f64>() / n;
    let stderr = if samples > 1 {
        let var = gammas.iter().map(|g| (g - gamma).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    Ok(LyapunovEstimate { gamma, stderr, samples })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kp_cell(c: f64) -> CompiledPiece {
        CompiledPiece::from_factors(vec![Factor::Atom(c), Factor::Segment { len: 1.0, v: 0.0 }])
    }

    #[test]
    fn free_line_has_zero_exponent() {
        let g = lyapunov(&FreeSupplier, 1.0, 10_000, 1).unwrap();
        assert!(g.gamma.abs() < 1e-3, "{g:?}");
    }

    #[test]
    fn kp_gap_is_positive_band_is_small() {
        let p = PeriodicSupplier::new(kp_cell(3.0)).unwrap();
        // first gap of the c = 3 comb sits just above pi^2
        let gap = lyapunov(&p, 10.5, 10_000, 1).unwrap();
        assert!(gap.gamma > 0.05, "{gap:?}");
        let band = lyapunov(&p, 5.0, 10_000, 1).unwrap();
        assert!(band.gamma < 1e-3, "{band:?}");
    }

    #[test]
    fn sequence_samples_are_distinct_offsets() {
        let s = SequenceSupplier::fibonacci_kp(3.0, 100, 3).unwrap();
        assert!(s.len() >= 2 * SAMPLE_STRIDE + 100);
        let w0 = s.window(0, 100).unwrap();
        let w2 = s.window(2, 100).unwrap();
        assert_eq!(w0.factors().len(), 200);
        assert!(s.window(3, 100).is_err());
        assert!(w2.len() > 100.0);
        let g = lyapunov(&s, 3.3, 100, 3).unwrap();
        assert!(g.gamma >= -g.stderr);
    }
}
