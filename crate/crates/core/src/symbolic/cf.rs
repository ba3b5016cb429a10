use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::quad::{QuadIrr, RealInput};
use super::SymbolicError;

/// Coefficients `a_0; a_1, a_2, ...` of a continued fraction expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CFExpansion {
    pub a0: BigInt,
    /// Partial quotients `a_1, a_2, ...`, each at least 1.
    pub partial: Vec<u64>,
    /// True when the expansion ended (rational input) before the requested order.
    pub terminated: bool,
}

impl CFExpansion {
    /// Convergents `p_k / q_k` for `k = 0..=partial.len()`.
    pub fn convergents(&self) -> Vec<(BigInt, BigInt)> {
        let mut out = Vec::with_capacity(self.partial.len() + 1);
        let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
        let (mut p1, mut q1) = (self.a0.clone(), BigInt::one());
        out.push((p1.clone(), q1.clone()));
        for &a in &self.partial {
            let a = BigInt::from(a);
            let p2 = &a * &p1 + &p0;
            let q2 = &a * &q1 + &q0;
            (p0, q0, p1, q1) = (p1, q1, p2.clone(), q2.clone());
            out.push((p2, q2));
        }
        out
    }

    /// Denominators `q_k` of the convergents.
    pub fn denominators(&self) -> Vec<BigInt> {
        self.convergents().into_iter().map(|(_, q)| q).collect()
    }

    pub fn kaminaga(&self) -> KaminagaReport {
        let positions: Vec<usize> =
            self.partial.iter().enumerate().filter(|(_, &a)| a >= 4).map(|(i, _)| i + 1).collect();
        KaminagaReport { examined: self.partial.len(), count: positions.len(), positions }
    }
}

/// Partial quotients of value at least 4 among those computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KaminagaReport {
    pub examined: usize,
    pub count: usize,
    /// 1-based indices `k` with `a_k >= 4`.
    pub positions: Vec<usize>,
}

/// Up to `n` partial quotients of `alpha` by the Gauss map. Exact inputs
/// are expanded exactly; decimal inputs are expanded at both ends of their
/// uncertainty interval and only the common prefix is trusted.
pub fn continued_fraction(alpha: &RealInput, n: usize) -> Result<CFExpansion, SymbolicError> {
    if n == 0 {
        return Err(SymbolicError::InvalidParameter("need at least one coefficient".into()));
    }
    let f = alpha.to_f64();
    if !(f > 0.0 && f < 1.0) {
        return Err(SymbolicError::InvalidParameter("alpha must lie in (0, 1)".into()));
    }
    match alpha {
        RealInput::Exact(q) => expand_quad(q, n),
        RealInput::Decimal { value, half_ulp } => {
            let lo = expand_quad(&QuadIrr::rational(value - half_ulp), n + 1)?;
            let hi = expand_quad(&QuadIrr::rational(value + half_ulp), n + 1)?;
            let mut trusted = 0;
            while trusted < n
                && trusted + 1 < lo.partial.len().min(hi.partial.len())
                && lo.partial[trusted] == hi.partial[trusted]
            {
                trusted += 1;
            }
            if lo.a0 != hi.a0 || trusted < n {
                return Err(SymbolicError::PrecisionExhausted {
                    trusted,
                    prefix: lo.partial[..trusted.min(lo.partial.len())].to_vec(),
                });
            }
            Ok(CFExpansion { a0: lo.a0, partial: lo.partial[..n].to_vec(), terminated: false })
        }
    }
}

fn expand_quad(x: &QuadIrr, n: usize) -> Result<CFExpansion, SymbolicError> {
    let a0 = x.floor();
    let mut r = x.add_int(&-a0.clone());
    let mut partial = Vec::with_capacity(n);
    let mut terminated = false;
    while partial.len() < n {
        if r.is_zero() {
            terminated = true;
            break;
        }
        let inv = r.recip().expect("nonzero");
        let a = inv.floor();
        partial.push(a.to_u64().ok_or_else(|| SymbolicError::PrecisionExhausted {
            trusted: partial.len(),
            prefix: partial.clone(),
        })?);
        r = inv.add_int(&-a);
    }
    Ok(CFExpansion { a0, partial, terminated })
}

/// `|alpha - p_k/q_k| < 1/q_k^2` for every convergent, in floating point.
pub fn convergents_within_bound(alpha: f64, cf: &CFExpansion) -> bool {
    cf.convergents().iter().all(|(p, q)| {
        let q = q.to_f64().unwrap_or(f64::INFINITY);
        let p = p.to_f64().unwrap_or(f64::INFINITY);
        let err = (alpha - p / q).abs();
        // equality at a terminating last convergent
        err < 1.0 / (q * q) || err <= 4.0 * f64::EPSILON * alpha.abs()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(s: &str, n: usize) -> CFExpansion {
        continued_fraction(&RealInput::parse(s).unwrap(), n).unwrap()
    }

    #[test]
    fn golden_all_ones() {
        let c = cf("phi-1", 30);
        assert_eq!(c.a0, BigInt::zero());
        assert!(c.partial.iter().all(|&a| a == 1));
        assert_eq!(c.kaminaga().count, 0);
        assert!(convergents_within_bound(5f64.sqrt() / 2.0 - 0.5, &c));
    }

    #[test]
    fn sqrt5_minus_2_all_fours() {
        let c = cf("sqrt5-2", 25);
        assert!(c.partial.iter().all(|&a| a == 4));
        assert_eq!(c.kaminaga().count, 25);
        let q: Vec<i64> = c.denominators().iter().take(6).map(|q| q.to_i64().unwrap()).collect();
        assert_eq!(q, vec![1, 4, 17, 72, 305, 1292]);
    }

    #[test]
    fn one_third_terminates() {
        let c = cf("1/3", 10);
        assert_eq!(c.partial, vec![3]);
        assert!(c.terminated);
    }

    #[test]
    fn decimal_trusted_prefix() {
        let short = continued_fraction(&RealInput::parse("0.2360679775").unwrap(), 30);
        let Err(SymbolicError::PrecisionExhausted { trusted, prefix }) = short else { panic!("{short:?}") };
        assert!((5..30).contains(&trusted));
        assert!(prefix.iter().all(|&a| a == 4));
        let ok = cf("0.2360679775", 5);
        assert_eq!(ok.partial, vec![4; 5]);
    }
}
