use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::quad::{QuadIrr, RealInput};
use super::{SymbolicError, Word};

/// Decimal inputs may not land closer than this to a cut point.
pub const BOUNDARY_GUARD: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct CircleWord {
    pub word: Word,
    pub warnings: Vec<String>,
}

fn binary() -> Vec<String> {
    vec!["0".into(), "1".into()]
}

/// `V(n) = 1_{(1-beta, 1]}(n alpha mod 1)` for `n = m..=n`, with
/// `n alpha mod 1` taken in `[0, 1)`. The origin marks `n = 0` when it lies
/// in range.
pub fn circle_map_word(alpha: &RealInput, beta: &RealInput, m: i64, n: i64) -> Result<CircleWord, SymbolicError> {
    if n < m {
        return Err(SymbolicError::InvalidParameter(format!("empty range [{m}, {n}]")));
    }
    let af = alpha.to_f64();
    let bf = beta.to_f64();
    if !(af > 0.0 && af < 1.0) || !(bf > 0.0 && bf < 1.0) {
        return Err(SymbolicError::InvalidParameter("alpha and beta must lie in (0, 1)".into()));
    }
    let mut warnings = Vec::new();
    let symbols = match (alpha, beta) {
        (RealInput::Exact(a), RealInput::Exact(b)) => {
            if a.is_rational() {
                warnings.push(format!("alpha = {a} is rational; the word is periodic"));
            }
            exact_symbols(a, b, m, n)?
        }
        _ => {
            let (a, ea) = as_interval(alpha);
            let (b, eb) = as_interval(beta);
            decimal_symbols(&a, &ea, &b, &eb, m, n)?
        }
    };
    let origin = if m <= 0 && 0 <= n { (-m) as usize } else { 0 };
    Ok(CircleWord { word: Word::new(symbols, binary(), origin)?, warnings })
}

fn exact_symbols(a: &QuadIrr, b: &QuadIrr, m: i64, n: i64) -> Result<Vec<u16>, SymbolicError> {
    let one = QuadIrr::rational(BigRational::one());
    let cut = one
        .sub(b)
        .ok_or_else(|| SymbolicError::InvalidParameter("alpha and beta must share their square root".into()))?;
    if a.add(&cut).is_none() {
        return Err(SymbolicError::InvalidParameter("alpha and beta must share their square root".into()));
    }
    // step the fractional part instead of recomputing floor(n alpha)
    let mut x = a.mul_int(m).fract();
    let mut out = Vec::with_capacity((n - m + 1) as usize);
    for _ in m..=n {
        let above = x.try_cmp(&cut).expect("same radicand") == std::cmp::Ordering::Greater;
        out.push(u16::from(above));
        x = x.add(a).expect("same radicand");
        if x.try_cmp(&one).expect("rational") != std::cmp::Ordering::Less {
            x = x.add_int(&BigInt::from(-1));
        }
    }
    Ok(out)
}

fn as_interval(r: &RealInput) -> (BigRational, BigRational) {
    match r {
        RealInput::Exact(q) if q.is_rational() => (q.parts().0.clone(), BigRational::zero()),
        RealInput::Exact(q) => {
            // irrational partner of a decimal: 40 significant digits
            let scale = BigInt::from(10).pow(40);
            let approx = q.mul_int(1).floor();
            let mut lo = BigRational::from_integer(approx);
            let mut step = BigRational::one();
            let ten = BigRational::from_integer(10.into());
            for _ in 0..40 {
                step /= &ten;
                while QuadIrr::rational(&lo + &step).try_cmp(q).is_some_and(|o| o.is_le()) {
                    lo += &step;
                }
            }
            (lo, BigRational::new(1.into(), scale))
        }
        RealInput::Decimal { value, half_ulp } => (value.clone(), half_ulp.clone()),
    }
}

fn decimal_symbols(
    a: &BigRational,
    ea: &BigRational,
    b: &BigRational,
    eb: &BigRational,
    m: i64,
    n: i64,
) -> Result<Vec<u16>, SymbolicError> {
    let cut = BigRational::one() - b;
    let guard_floor = BigRational::from_float(BOUNDARY_GUARD).expect("finite");
    let mut out = Vec::with_capacity((n - m + 1) as usize);
    for k in m..=n {
        if k == 0 {
            out.push(0);
            continue;
        }
        let x = a * BigRational::from_integer(k.into());
        let frac = &x - x.floor();
        // uncertainty of k*alpha plus that of the cut
        let err = ea * BigRational::from_integer(k.abs().into()) + eb;
        let guard = if err > guard_floor { err } else { guard_floor.clone() };
        let d_cut = (&frac - &cut).abs();
        let d_wrap = if frac < BigRational::new(1.into(), 2.into()) { frac.clone() } else { BigRational::one() - &frac };
        let near = if d_cut < d_wrap { d_cut } else { d_wrap };
        if near < guard {
            return Err(SymbolicError::BoundaryHit { n: k, distance: near.to_f64().unwrap_or(0.0) });
        }
        out.push(u16::from(frac > cut));
    }
    Ok(out)
}

/// I.i.d. letters, `0` with probability `p`, from a ChaCha8 stream seeded
/// with `seed`.
pub fn bernoulli_word(p: f64, seed: u64, n: usize) -> Result<Word, SymbolicError> {
    if !(p > 0.0 && p < 1.0) {
        return Err(SymbolicError::InvalidParameter(format!("p = {p} must lie in (0, 1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let symbols = (0..n).map(|_| u16::from(rng.random::<f64>() >= p)).collect();
    Word::new(symbols, binary(), 0)
}
