//! Real inputs for the circle-map and continued-fraction generators: exact
//! quadratic irrationals `a + b sqrt(d)` or decimal literals carrying their
//! last-digit uncertainty.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::SymbolicError;

/// `a + b sqrt(d)` with rational `a`, `b` and squarefree `d > 1`; `d = 1`
/// (with `b = 0`) for plain rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadIrr {
    a: BigRational,
    b: BigRational,
    d: u32,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl QuadIrr {
    pub fn rational(a: BigRational) -> Self {
        QuadIrr { a, b: BigRational::zero(), d: 1 }
    }

    pub fn new(a: BigRational, b: BigRational, d: u32) -> Result<Self, SymbolicError> {
        if b.is_zero() || d == 1 {
            return Ok(Self::rational(a + if d == 1 { b } else { BigRational::zero() }));
        }
        if d == 0 || !squarefree(d) {
            return Err(SymbolicError::Parse(format!("sqrt({d}) must have a squarefree radicand > 1")));
        }
        Ok(QuadIrr { a, b, d })
    }

    pub fn golden_conjugate() -> Self {
        // phi - 1 = (sqrt5 - 1) / 2
        QuadIrr { a: BigRational::new((-1).into(), 2.into()), b: BigRational::new(1.into(), 2.into()), d: 5 }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn radicand(&self) -> u32 {
        self.d
    }

    pub fn parts(&self) -> (&BigRational, &BigRational) {
        (&self.a, &self.b)
    }

    /// Parses sums of terms like `2`, `-1/2`, `3*phi`, `sqrt5`, `sqrt(5)`,
    /// `1/2*sqrt(5)`; e.g. `sqrt5-2`, `phi-1`.
    pub fn parse(s: &str) -> Result<Self, SymbolicError> {
        let bad = || SymbolicError::Parse(format!("cannot read `{s}` as a quadratic irrational"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut acc = QuadIrr::rational(BigRational::zero());
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (neg, body) = match rest.as_bytes()[0] {
                b'+' => (false, &rest[1..]),
                b'-' => (true, &rest[1..]),
                _ => (false, rest),
            };
            let cut = body[1.min(body.len())..].find(['+', '-']).map(|i| i + 1).unwrap_or(body.len());
            let (term, tail) = body.split_at(cut);
            let mut t = parse_term(term).ok_or_else(bad)?;
            if neg {
                t = t.neg();
            }
            acc = acc.add(&t).ok_or_else(bad)?;
            rest = tail;
        }
        Ok(acc)
    }

    pub fn neg(&self) -> Self {
        QuadIrr { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    /// `None` when both sides carry different square roots.
    pub fn add(&self, o: &QuadIrr) -> Option<Self> {
        let d = match (self.is_rational(), o.is_rational()) {
            (true, _) => o.d,
            (_, true) => self.d,
            _ if self.d == o.d => self.d,
            _ => return None,
        };
        QuadIrr::new(&self.a + &o.a, &self.b + &o.b, d).ok()
    }

    pub fn sub(&self, o: &QuadIrr) -> Option<Self> {
        self.add(&o.neg())
    }

    pub fn add_int(&self, n: &BigInt) -> Self {
        QuadIrr { a: &self.a + BigRational::from_integer(n.clone()), b: self.b.clone(), d: self.d }
    }

    pub fn mul_int(&self, n: i64) -> Self {
        let n = rat(n);
        if n.is_zero() {
            return QuadIrr::rational(BigRational::zero());
        }
        QuadIrr { a: &self.a * &n, b: &self.b * &n, d: self.d }
    }

    pub fn recip(&self) -> Option<Self> {
        let norm = &self.a * &self.a - &self.b * &self.b * rat(self.d as i64);
        if norm.is_zero() {
            return None;
        }
        Some(QuadIrr { a: &self.a / &norm, b: -(&self.b / &norm), d: self.d })
    }

    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&BigRational::zero());
        let sb = self.b.cmp(&BigRational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == sb || sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 d
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * rat(self.d as i64);
        match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == Ordering::Equal
    }

    /// Exact comparison; `None` for incompatible square roots.
    pub fn try_cmp(&self, o: &QuadIrr) -> Option<Ordering> {
        Some(self.sub(o)?.signum())
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }

    pub fn floor(&self) -> BigInt {
        let guess = self.to_f64().floor();
        let mut f = BigInt::from(guess as i128);
        // settle float error exactly
        while self.add_int(&-f.clone()).signum() == Ordering::Less {
            f -= 1;
        }
        while self.add_int(&-(&f + BigInt::one())).signum() != Ordering::Less {
            f += 1;
        }
        f
    }

    /// Fractional part in `[0, 1)`.
    pub fn fract(&self) -> Self {
        self.add_int(&-self.floor())
    }
}

impl fmt::Display for QuadIrr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            write!(f, "{}*sqrt{}", self.b, self.d)
        } else if self.b.is_negative() {
            write!(f, "{}-{}*sqrt{}", self.a, -self.b.clone(), self.d)
        } else {
            write!(f, "{}+{}*sqrt{}", self.a, self.b, self.d)
        }
    }
}

fn squarefree(d: u32) -> bool {
    let mut k = 2u32;
    while k.saturating_mul(k) <= d {
        if d.is_multiple_of(k * k) {
            return false;
        }
        k += 1;
    }
    d > 1
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

fn parse_term(t: &str) -> Option<QuadIrr> {
    let (coef, atom) = match t.find(|c: char| c.is_ascii_alphabetic()) {
        Some(i) => {
            let c = t[..i].trim_end_matches('*');
            let coef = if c.is_empty() { BigRational::one() } else { parse_rational(c)? };
            (coef, Some(&t[i..]))
        }
        None => (parse_rational(t)?, None),
    };
    let base = match atom {
        None => return Some(QuadIrr::rational(coef)),
        Some("phi") => QuadIrr {
            a: BigRational::new(1.into(), 2.into()),
            b: BigRational::new(1.into(), 2.into()),
            d: 5,
        },
        Some(a) => {
            let r = a.strip_prefix("sqrt")?;
            let r = r.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(r);
            let d: u32 = r.parse().ok()?;
            let root = (d as f64).sqrt().round() as u32;
            if root * root == d {
                QuadIrr::rational(rat(root as i64))
            } else {
                QuadIrr::new(BigRational::zero(), BigRational::one(), d).ok()?
            }
        }
    };
    Some(QuadIrr { a: &base.a * &coef, b: &base.b * &coef, d: base.d })
}

/// A real number as handed to a generator.
#[derive(Debug, Clone, PartialEq)]
pub enum RealInput {
    Exact(QuadIrr),
    /// Decimal literal; the true value lies within `half_ulp` of `value`.
    Decimal { value: BigRational, half_ulp: BigRational },
}

impl RealInput {
    /// Literals containing a `.` are decimals, everything else must parse
    /// exactly.
    pub fn parse(s: &str) -> Result<Self, SymbolicError> {
        let t = s.trim();
        if !t.contains('.') {
            return Ok(RealInput::Exact(QuadIrr::parse(t)?));
        }
        let bad = || SymbolicError::Parse(format!("cannot read `{s}` as a decimal"));
        let (neg, body) = match t.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, t),
        };
        let (int, frac) = body.split_once('.').ok_or_else(bad)?;
        if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let digits = frac.len() as u32;
        let scale = BigInt::from(10).pow(digits);
        let n: BigInt = format!("{int}{frac}").trim_start_matches('0').parse().unwrap_or_else(|_| BigInt::zero());
        let mut value = BigRational::new(n, scale.clone());
        if neg {
            value = -value;
        }
        Ok(RealInput::Decimal { value, half_ulp: BigRational::new(1.into(), scale * 2) })
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            RealInput::Exact(q) => q.to_f64(),
            RealInput::Decimal { value, .. } => value.to_f64().unwrap_or(f64::NAN),
        }
    }
}

impl fmt::Display for RealInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealInput::Exact(q) => write!(f, "{q}"),
            RealInput::Decimal { value, .. } => write!(f, "{}", value.to_f64().unwrap_or(f64::NAN)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        let a = QuadIrr::parse("sqrt5-2").unwrap();
        assert!((a.to_f64() - (5f64.sqrt() - 2.0)).abs() < 1e-15);
        assert_eq!(QuadIrr::parse("phi-1").unwrap(), QuadIrr::golden_conjugate());
        assert_eq!(QuadIrr::parse("-1/2 + 1/2*sqrt(5)").unwrap(), QuadIrr::golden_conjugate());
        assert!(QuadIrr::parse("1/3").unwrap().is_rational());
        assert!(QuadIrr::parse("sqrt4").unwrap().is_rational());
        assert!(QuadIrr::parse("sqrt2+sqrt3").is_err());
        assert!(QuadIrr::parse("").is_err());
    }

    #[test]
    fn floor_is_exact() {
        let a = QuadIrr::parse("sqrt5-2").unwrap();
        for n in [1i64, 4, 17, 72, 305, 1292, 5473, 23184] {
            let x = a.mul_int(n);
            let f = x.floor();
            let approx = (n as f64) * (5f64.sqrt() - 2.0);
            assert!((f.to_f64().unwrap() - approx.floor()).abs() <= 1.0);
            assert_eq!(x.add_int(&-f).try_cmp(&QuadIrr::rational(BigRational::zero())), Some(Ordering::Greater));
        }
    }

    #[test]
    fn decimal_input() {
        let RealInput::Decimal { value, half_ulp } = RealInput::parse("0.25").unwrap() else { panic!() };
        assert_eq!(value, BigRational::new(1.into(), 4.into()));
        assert_eq!(half_ulp, BigRational::new(1.into(), 200.into()));
    }
}
