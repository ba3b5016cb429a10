use rayon::prelude::*;

use super::{SymbolicError, Word};

#[derive(Debug, Clone, PartialEq)]
pub struct GordonRow {
    pub p: usize,
    /// Origins `i` with `p <= i <= len - 2p`, i.e. with the whole block
    /// triple inside the word.
    pub tested: usize,
    /// Origins where `w[i-p..i] = w[i..i+p] = w[i+p..i+2p]`.
    pub hits: Vec<usize>,
    pub density: f64,
}

/// Triple-block census for each `p`: the fraction of admissible origins
/// around which three consecutive copies of a length-`p` block sit.
pub fn gordon_scan(w: &Word, ps: &[usize]) -> Result<Vec<GordonRow>, SymbolicError> {
    let s = w.symbols();
    ps.iter()
        .map(|&p| {
            if p == 0 || 3 * p > s.len() {
                return Err(SymbolicError::InsufficientWindow { p, len: s.len() });
            }
            let origins = p..=s.len() - 2 * p;
            let tested = origins.clone().count();
            let hits: Vec<usize> = origins
                .into_par_iter()
                .filter(|&i| s[i - p..i] == s[i..i + p] && s[i..i + p] == s[i + p..i + 2 * p])
                .collect();
            let density = hits.len() as f64 / tested as f64;
            Ok(GordonRow { p, tested, hits, density })
        })
        .collect()
}
