//! Exact lengths: rational linear combinations over a declared basis of
//! positive reals.
//!
//! Equality is always coefficient-wise. Ordering falls back to the float
//! evaluation of the basis and refuses to decide when two distinct lengths
//! evaluate within [`TIE_GUARD`] (relative) of each other.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, OnceLock};

use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

/// Coefficient field used throughout the crate.
pub type Rational = Ratio<i128>;

/// Relative tolerance below which two distinct lengths are considered
/// indistinguishable by their float evaluations.
pub const TIE_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LengthError {
    #[error("lengths over different bases cannot be combined")]
    BasisMismatch,
    #[error("ordering of {lhs} and {rhs} is within the tie guard; refine the basis")]
    AmbiguousOrdering { lhs: f64, rhs: f64 },
    #[error("invalid basis: {0}")]
    InvalidBasis(String),
    #[error("cannot parse length `{0}`")]
    Parse(String),
}

/// One named basis real with its float evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisElement {
    pub name: String,
    pub value: f64,
}

/// Ordered list of positive reals that lengths are expressed over.
#[derive(Clone)]
pub struct Basis(Arc<[BasisElement]>);

impl Basis {
    pub fn new(elements: Vec<BasisElement>) -> Result<Self, LengthError> {
        if elements.is_empty() {
            return Err(LengthError::InvalidBasis("empty basis".into()));
        }
        for (i, e) in elements.iter().enumerate() {
            if !(e.value.is_finite() && e.value > 0.0) {
                return Err(LengthError::InvalidBasis(format!(
                    "element `{}` must be a positive finite real",
                    e.name
                )));
            }
            if elements[..i].iter().any(|o| o.name == e.name) {
                return Err(LengthError::InvalidBasis(format!("duplicate name `{}`", e.name)));
            }
        }
        Ok(Basis(elements.into()))
    }

    fn cached(cell: &'static OnceLock<Basis>, elems: &[(&str, f64)]) -> Basis {
        cell.get_or_init(|| {
            Basis::new(
                elems
                    .iter()
                    .map(|(n, v)| BasisElement { name: n.to_string(), value: *v })
                    .collect(),
            )
            .expect("builtin basis is valid")
        })
        .clone()
    }

    /// `{1}`.
    pub fn integer() -> Basis {
        static B: OnceLock<Basis> = OnceLock::new();
        Self::cached(&B, &[("1", 1.0)])
    }

    /// `{1, phi}` with phi the golden mean.
    pub fn golden() -> Basis {
        static B: OnceLock<Basis> = OnceLock::new();
        Self::cached(&B, &[("1", 1.0), ("phi", (1.0 + 5f64.sqrt()) / 2.0)])
    }

    /// `{1, pi}`.
    pub fn with_pi() -> Basis {
        static B: OnceLock<Basis> = OnceLock::new();
        Self::cached(&B, &[("1", 1.0), ("pi", std::f64::consts::PI)])
    }

    /// Looks up one of the builtin bases by name (`integer`, `golden`, `pi`).
    pub fn builtin(name: &str) -> Option<Basis> {
        match name {
            "integer" | "1" => Some(Self::integer()),
            "golden" | "phi" => Some(Self::golden()),
            "pi" => Some(Self::with_pi()),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|e| e.name == name)
    }

    /// Basis vector `i` as a length.
    pub fn unit(&self, i: usize) -> ExactLength {
        let mut l = ExactLength::zero(self);
        l.coeffs[i] = Rational::one();
        l
    }
}

impl PartialEq for Basis {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.len() == other.0.len()
                && self
                    .0
                    .iter()
                    .zip(other.0.iter())
                    .all(|(a, b)| a.name == b.name && a.value.to_bits() == b.value.to_bits()))
    }
}

impl Eq for Basis {}

impl fmt::Debug for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter().map(|e| &e.name)).finish()
    }
}

/// Rational linear combination of basis reals.
#[derive(Clone)]
pub struct ExactLength {
    basis: Basis,
    coeffs: SmallVec<[Rational; 2]>,
}

impl ExactLength {
    pub fn zero(basis: &Basis) -> Self {
        ExactLength {
            basis: basis.clone(),
            coeffs: SmallVec::from_elem(Rational::zero(), basis.len()),
        }
    }

    /// `q` times the first basis element (conventionally `1`).
    pub fn rational(basis: &Basis, q: Rational) -> Self {
        let mut l = Self::zero(basis);
        l.coeffs[0] = q;
        l
    }

    pub fn integer(basis: &Basis, n: i64) -> Self {
        Self::rational(basis, Rational::from_integer(n as i128))
    }

    pub fn from_coeffs(basis: &Basis, coeffs: Vec<Rational>) -> Result<Self, LengthError> {
        if coeffs.len() != basis.len() {
            return Err(LengthError::BasisMismatch);
        }
        Ok(ExactLength { basis: basis.clone(), coeffs: coeffs.into() })
    }

    /// Parses sums like `2+phi`, `1/2`, `3*pi - 1`, `-phi/2` over `basis`.
    pub fn parse(basis: &Basis, s: &str) -> Result<Self, LengthError> {
        let err = || LengthError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        let mut out = Self::zero(basis);
        let mut terms = Vec::new();
        let mut cur = String::new();
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > 0 && !compact[..i].ends_with(['e', 'E', '*', '/']) {
                terms.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
        }
        terms.push(cur);
        for term in terms {
            let (neg, body) = match term.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, term.strip_prefix('+').unwrap_or(&term)),
            };
            if body.is_empty() {
                return Err(err());
            }
            // coefficient * name, name / den, bare rational, or bare name
            let (mut coeff, mut idx) = (Rational::one(), 0usize);
            let mut parts = body.split('*');
            let first = parts.next().ok_or_else(err)?;
            let second = parts.next();
            if parts.next().is_some() {
                return Err(err());
            }
            let handle = |tok: &str, coeff: &mut Rational, idx: &mut usize| -> Result<(), LengthError> {
                let (num_part, den_part) = match tok.split_once('/') {
                    Some((n, d)) => (n, Some(d)),
                    None => (tok, None),
                };
                if let Some(q) = parse_rational_literal(num_part) {
                    *coeff *= q;
                } else if let Some(i) = basis.index_of(num_part) {
                    *idx = i;
                } else {
                    return Err(err());
                }
                if let Some(d) = den_part {
                    let q = parse_rational_literal(d).ok_or_else(err)?;
                    if q.is_zero() {
                        return Err(err());
                    }
                    *coeff /= q;
                }
                Ok(())
            };
            handle(first, &mut coeff, &mut idx)?;
            if let Some(sec) = second {
                handle(sec, &mut coeff, &mut idx)?;
            }
            if neg {
                coeff = -coeff;
            }
            out.coeffs[idx] += coeff;
        }
        Ok(out)
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Float evaluation; only used for ordering and numerics.
    pub fn value(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(self.basis.elements())
            .map(|(c, e)| rational_to_f64(c) * e.value)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn same_basis(&self, other: &ExactLength) -> bool {
        self.basis == other.basis
    }

    pub fn checked_add(&self, other: &ExactLength) -> Result<ExactLength, LengthError> {
        if !self.same_basis(other) {
            return Err(LengthError::BasisMismatch);
        }
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &ExactLength) -> Result<ExactLength, LengthError> {
        if !self.same_basis(other) {
            return Err(LengthError::BasisMismatch);
        }
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &ExactLength, f: impl Fn(&Rational, &Rational) -> Rational) -> ExactLength {
        ExactLength {
            basis: self.basis.clone(),
            coeffs: self.coeffs.iter().zip(other.coeffs.iter()).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> ExactLength {
        ExactLength { basis: self.basis.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Exact-where-possible comparison; coefficient-equal lengths are equal,
    /// otherwise float evaluations decide unless they are within the guard.
    pub fn try_cmp(&self, other: &ExactLength) -> Result<Ordering, LengthError> {
        if !self.same_basis(other) {
            return Err(LengthError::BasisMismatch);
        }
        if self.coeffs == other.coeffs {
            return Ok(Ordering::Equal);
        }
        let (a, b) = (self.value(), other.value());
        let scale = 1f64.max(a.abs()).max(b.abs());
        if (a - b).abs() <= TIE_GUARD * scale {
            return Err(LengthError::AmbiguousOrdering { lhs: a, rhs: b });
        }
        Ok(a.total_cmp(&b))
    }

    pub fn try_lt(&self, other: &ExactLength) -> Result<bool, LengthError> {
        Ok(self.try_cmp(other)? == Ordering::Less)
    }

    pub fn try_le(&self, other: &ExactLength) -> Result<bool, LengthError> {
        Ok(self.try_cmp(other)? != Ordering::Greater)
    }

    pub fn is_positive(&self) -> Result<bool, LengthError> {
        Ok(self.try_cmp(&ExactLength::zero(&self.basis))? == Ordering::Greater)
    }

    pub fn is_negative(&self) -> Result<bool, LengthError> {
        Ok(self.try_cmp(&ExactLength::zero(&self.basis))? == Ordering::Less)
    }

    pub fn try_max(&self, other: &ExactLength) -> Result<ExactLength, LengthError> {
        Ok(if self.try_lt(other)? { other.clone() } else { self.clone() })
    }

    pub fn try_min(&self, other: &ExactLength) -> Result<ExactLength, LengthError> {
        Ok(if other.try_lt(self)? { other.clone() } else { self.clone() })
    }
}

impl PartialEq for ExactLength {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.basis == other.basis
    }
}

impl Eq for ExactLength {}

impl Hash for ExactLength {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for ExactLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ExactLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, e) in self.coeffs.iter().zip(self.basis.elements()) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let body = if e.name == "1" {
                format!("{mag}")
            } else if mag.is_one() {
                e.name.clone()
            } else {
                format!("{mag}*{}", e.name)
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add for &ExactLength {
    type Output = ExactLength;

    /// Panics on basis mismatch; use [`ExactLength::checked_add`] at API boundaries.
    fn add(self, rhs: &ExactLength) -> ExactLength {
        self.checked_add(rhs).expect("basis mismatch in length addition")
    }
}

impl Sub for &ExactLength {
    type Output = ExactLength;

    fn sub(self, rhs: &ExactLength) -> ExactLength {
        self.checked_sub(rhs).expect("basis mismatch in length subtraction")
    }
}

impl Neg for &ExactLength {
    type Output = ExactLength;

    fn neg(self) -> ExactLength {
        self.scale(&-Rational::one())
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    let (n, d) = (q.numer(), q.denom());
    match (n.to_f64(), d.to_f64()) {
        (Some(a), Some(b)) => a / b,
        _ => f64::NAN,
    }
}

/// Parses `3`, `-2/5`, `0.25`, `1e-3` into an exact rational.
pub fn parse_rational_literal(s: &str) -> Option<Rational> {
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: i128 = n.parse().ok()?;
        let d: i128 = d.parse().ok()?;
        if d == 0 {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Ok(n) = s.parse::<i128>() {
        return Some(Rational::from_integer(n));
    }
    decimal_to_rational(s)
}

fn decimal_to_rational(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let mut num: i128 = if digits.is_empty() { 0 } else { digits.parse().ok()? };
    if neg {
        num = -num;
    }
    let scale = exp - frac.len() as i32;
    let pow = 10i128.checked_pow(scale.unsigned_abs())?;
    Some(if scale >= 0 {
        Rational::from_integer(num.checked_mul(pow)?)
    } else {
        Rational::new(num, pow)
    })
}

/// Sorts `items` by the length returned from `key`, rejecting near-ties
/// between distinct lengths.
pub fn sort_by_length<T>(items: &mut [T], key: impl Fn(&T) -> &ExactLength) -> Result<(), LengthError> {
    items.sort_by(|a, b| key(a).value().total_cmp(&key(b).value()));
    for w in items.windows(2) {
        key(&w[0]).try_cmp(key(&w[1]))?;
    }
    Ok(())
}

/// Index of the first item whose key is not less than `target` (keys sorted).
pub fn lower_bound<T>(
    items: &[T],
    key: impl Fn(&T) -> &ExactLength,
    target: &ExactLength,
) -> Result<usize, LengthError> {
    let t = target.value();
    let slack = 4.0 * TIE_GUARD * 1f64.max(t.abs());
    let mut i = items.partition_point(|it| key(it).value() < t - slack);
    while i < items.len() && key(&items[i]).try_lt(target)? {
        i += 1;
    }
    Ok(i)
}

/// Index of the first item whose key is greater than `target` (keys sorted).
pub fn upper_bound<T>(
    items: &[T],
    key: impl Fn(&T) -> &ExactLength,
    target: &ExactLength,
) -> Result<usize, LengthError> {
    let t = target.value();
    let slack = 4.0 * TIE_GUARD * 1f64.max(t.abs());
    let mut i = items.partition_point(|it| key(it).value() < t - slack);
    while i < items.len() && key(&items[i]).try_le(target)? {
        i += 1;
    }
    Ok(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_identity_is_exact() {
        let b = Basis::golden();
        let phi = b.unit(1);
        let one = ExactLength::integer(&b, 1);
        let a = &(&phi + &one) - &phi;
        assert_eq!(a, one);
        assert!(phi.try_cmp(&one).unwrap().is_gt());
    }

    #[test]
    fn parse_forms() {
        let b = Basis::golden();
        let l = ExactLength::parse(&b, "2 + 3*phi - 1/2").unwrap();
        assert_eq!(l.coeffs(), &[Rational::new(3, 2), Rational::from_integer(3)]);
        let l = ExactLength::parse(&b, "-phi/2").unwrap();
        assert_eq!(l.coeffs(), &[Rational::zero(), Rational::new(-1, 2)]);
        let l = ExactLength::parse(&b, "2.5").unwrap();
        assert_eq!(l.coeffs()[0], Rational::new(5, 2));
        assert!(ExactLength::parse(&b, "tau").is_err());
        assert_eq!(ExactLength::parse(&b, "1+phi").unwrap().to_string(), "1+phi");
    }

    #[test]
    fn near_tie_is_rejected() {
        let b = Basis::new(vec![
            BasisElement { name: "1".into(), value: 1.0 },
            BasisElement { name: "x".into(), value: 1.0 + 1e-14 },
        ])
        .unwrap();
        let err = b.unit(0).try_cmp(&b.unit(1)).unwrap_err();
        assert!(matches!(err, LengthError::AmbiguousOrdering { .. }));
    }

    #[test]
    fn basis_mismatch_detected() {
        let a = ExactLength::integer(&Basis::golden(), 1);
        let b = ExactLength::integer(&Basis::with_pi(), 1);
        assert_eq!(a.checked_add(&b).unwrap_err(), LengthError::BasisMismatch);
    }

    #[test]
    fn bounds_helpers() {
        let b = Basis::golden();
        let xs: Vec<ExactLength> = (0..6).map(|i| ExactLength::integer(&b, i)).collect();
        let t = ExactLength::integer(&b, 3);
        assert_eq!(lower_bound(&xs, |x| x, &t).unwrap(), 3);
        assert_eq!(upper_bound(&xs, |x| x, &t).unwrap(), 4);
    }
}
