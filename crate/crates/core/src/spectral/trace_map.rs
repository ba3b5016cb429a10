use serde::Serialize;

use super::lyapunov::fibonacci_kp_cells;
use super::mat::Mat2;
use super::SpectralError;

/// Products are abandoned once an entry exceeds this.
pub const OVERFLOW_BOUND: f64 = 1e150;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceMapReport {
    pub energy: f64,
    pub coupling: f64,
    /// Half-traces `x_0 ..= x_{effective_n}` of the order-k transfer products.
    pub half_traces: Vec<f64>,
    /// `(k, r)`: relative residual of `x_k = 2 x_{k-1} x_{k-2} - x_{k-3}`.
    pub recursion_residuals: Vec<(usize, f64)>,
    /// `(k, I_k)` with `I_k = x_{k+1}^2 + x_k^2 + x_{k-1}^2 - 2 x_{k+1} x_k x_{k-1} - 1`.
    pub invariants: Vec<(usize, f64)>,
    /// Largest relative deviation of `I_k` from `I_1`.
    pub invariant_drift: f64,
    pub requested_n: usize,
    pub effective_n: usize,
}

impl TraceMapReport {
    pub fn max_recursion_residual(&self) -> f64 {
        self.recursion_residuals.iter().map(|r| r.1).fold(0.0, f64::max)
    }
}

/// Order-k products `M_0 = T(b)`, `M_1 = T(a)`, `M_{k+1} = M_{k-1} M_k` for
/// the Fibonacci Kronig-Penney cells, up to order `n` or the last order
/// before an entry passes [`OVERFLOW_BOUND`].
pub fn fibonacci_transfer_products(e: f64, c: f64, n: usize) -> Vec<Mat2> {
    let (a, b) = fibonacci_kp_cells(c);
    let mut ms = vec![b.transfer(e), a.transfer(e)];
    while ms.len() <= n {
        let k = ms.len();
        let next = ms[k - 2] * ms[k - 1];
        if next.max_abs().is_nan() || next.max_abs() > OVERFLOW_BOUND {
            break;
        }
        ms.push(next);
    }
    ms.truncate(n + 1);
    ms
}

pub fn fibonacci_trace_sequence(e: f64, c: f64, n: usize) -> Result<TraceMapReport, SpectralError> {
    if n < 3 {
        return Err(SpectralError::InvalidParameter("trace map needs n >= 3".into()));
    }
    let x: Vec<f64> = fibonacci_transfer_products(e, c, n).iter().map(|m| 0.5 * m.trace()).collect();
    let effective_n = x.len() - 1;
    if effective_n < 3 {
        return Err(SpectralError::Overflow { effective: effective_n });
    }

    let recursion_residuals = (3..=effective_n)
        .map(|k| {
            let pred = 2.0 * x[k - 1] * x[k - 2] - x[k - 3];
            let scale = 1f64.max((2.0 * x[k - 1] * x[k - 2]).abs() + x[k - 3].abs());
            (k, (x[k] - pred).abs() / scale)
        })
        .collect();

    let inv = |k: usize| {
        let (p, q, r) = (x[k + 1], x[k], x[k - 1]);
        let terms = [p * p, q * q, r * r, 2.0 * p * q * r];
        let value = terms[0] + terms[1] + terms[2] - terms[3] - 1.0;
        (value, terms.iter().map(|t| t.abs()).sum::<f64>().max(1.0))
    };
    let (i1, _) = inv(1);
    let mut invariants = Vec::new();
    let mut invariant_drift: f64 = 0.0;
    for k in 1..effective_n {
        let (ik, scale) = inv(k);
        invariants.push((k, ik));
        invariant_drift = invariant_drift.max((ik - i1).abs() / scale);
    }

    Ok(TraceMapReport {
        energy: e,
        coupling: c,
        half_traces: x,
        recursion_residuals,
        invariants,
        invariant_drift,
        requested_n: n,
        effective_n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::compile::CompiledPiece;
    use crate::symbolic::fibonacci_word;

    #[test]
    fn free_half_traces_are_cosines() {
        let e = 2.3f64;
        let r = fibonacci_trace_sequence(e, 0.0, 12).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        for (k, &xk) in r.half_traces.iter().enumerate() {
            let w = fibonacci_word(k);
            let len: f64 = w.symbols().iter().map(|&s| if s == 0 { 1.0 } else { phi }).sum();
            assert!((xk - (e.sqrt() * len).cos()).abs() < 1e-9, "k = {k}");
        }
        assert!(r.max_recursion_residual() < 1e-9);
    }

    #[test]
    fn matches_direct_products() {
        let (e, c) = (2.0, 3.0);
        let r = fibonacci_trace_sequence(e, c, 12).unwrap();
        assert_eq!(r.effective_n, 12);
        let (a, b) = fibonacci_kp_cells(c);
        for k in 0..=12 {
            let w = fibonacci_word(k);
            let mut m = Mat2::IDENTITY;
            for &s in w.symbols() {
                let cell: &CompiledPiece = if s == 0 { &a } else { &b };
                m = cell.transfer(e) * m;
            }
            let direct = 0.5 * m.trace();
            assert!((direct - r.half_traces[k]).abs() <= 1e-8 * direct.abs().max(1.0), "k = {k}");
        }
        assert!(r.max_recursion_residual() < 1e-8);
        assert!(r.invariant_drift < 1e-8);
    }

    #[test]
    fn overflow_truncates() {
        let r = fibonacci_trace_sequence(-50.0, 3.0, 40).unwrap();
        assert!(r.effective_n < 40);
        assert_eq!(r.half_traces.len(), r.effective_n + 1);
    }
}
