use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use super::compile::CompiledPiece;
use super::lyapunov::{lyapunov, WindowSupplier};
use super::SpectralError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRecord {
    pub energy: f64,
    /// Trace of the unit-Frobenius part of the product.
    pub trace: f64,
    pub logscale: f64,
    pub gamma: f64,
    /// `|trace * exp(logscale)| <= 2`.
    pub band: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralScan {
    pub records: Vec<ScanRecord>,
}

/// `n` equally spaced energies from `lo` to `hi` inclusive.
pub fn energy_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, SpectralError> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) || n < 2 {
        return Err(SpectralError::InvalidParameter(format!("energy grid [{lo}, {hi}] with {n} points")));
    }
    let h = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|i| if i == n - 1 { hi } else { lo + i as f64 * h }).collect())
}

fn check_grid(energies: &[f64]) -> Result<(), SpectralError> {
    if energies.is_empty() || energies.iter().any(|e| !e.is_finite()) || energies.windows(2).any(|w| w[0] >= w[1]) {
        return Err(SpectralError::InvalidParameter("energy grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, SpectralError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| SpectralError::InvalidParameter(format!("thread pool: {e}")))
}

fn record(cell: &CompiledPiece, e: f64) -> ScanRecord {
    let m = cell.propagate(e);
    let true_trace = m.true_trace();
    ScanRecord {
        energy: e,
        trace: m.trace(),
        logscale: m.logscale(),
        gamma: m.logscale() / cell.len(),
        band: true_trace.abs() <= 2.0,
    }
}

/// Per-energy propagation across one declared period (or finite window).
/// Records are computed independently and kept in grid order, so the output
/// does not depend on `threads` (0 means rayon's default).
pub fn scan_period(cell: &CompiledPiece, energies: &[f64], threads: usize) -> Result<SpectralScan, SpectralError> {
    check_grid(energies)?;
    if cell.len().is_nan() || cell.len() <= 0.0 {
        return Err(SpectralError::InvalidParameter("scanned window must have positive length".into()));
    }
    let records = pool(threads)?.install(|| energies.par_iter().map(|&e| record(cell, e)).collect());
    Ok(SpectralScan { records })
}

/// Lyapunov estimates on a grid; `trace`, `logscale` and `band` describe the
/// first sample window.
pub fn scan_lyapunov(
    supplier: &dyn WindowSupplier,
    energies: &[f64],
    cells: usize,
    samples: usize,
    threads: usize,
) -> Result<SpectralScan, SpectralError> {
    check_grid(energies)?;
    let first = supplier.window(0, cells)?;
    let records: Result<Vec<_>, SpectralError> = pool(threads)?.install(|| {
        energies
            .par_iter()
            .map(|&e| {
                let est = lyapunov(supplier, e, cells, samples)?;
                Ok(ScanRecord { gamma: est.gamma, ..record(&first, e) })
            })
            .collect()
    });
    Ok(SpectralScan { records: records? })
}

impl SpectralScan {
    /// CSV with columns `E,trace,logscale,gamma,band_flag`; each header line
    /// is written as a `#` comment first.
    pub fn to_csv(&self, header: &[String]) -> String {
        let mut s = String::new();
        for h in header {
            let _ = writeln!(s, "# {h}");
        }
        s.push_str("E,trace,logscale,gamma,band_flag\n");
        for r in &self.records {
            let _ = writeln!(s, "{},{},{},{},{}", r.energy, r.trace, r.logscale, r.gamma, u8::from(r.band));
        }
        s
    }
}
