//! Literal weights and count values.
//!
//! Clifford+T+Toffoli circuits only ever produce weights in the dyadic ring
//! `Z[sqrt2] / 2^k`, which [`ExactWeight`] represents without rounding.
//! Arbitrary rotation angles fall back to [`FloatWeight`]; inside the counter
//! those are carried as double-double values ([`Compensated`]) so that long
//! alternating sums do not lose low-order cancellation.

use std::fmt;
use std::ops::{Add, Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("cannot combine exact and floating-point weights")]
    ModeMismatch,
    #[error("weight {0} is not finite")]
    NonFinite(f64),
    #[error("malformed exact weight {0:?}")]
    Malformed(String),
}

/// Commutative semiring operations used by the model counter.
pub trait Semiring: Clone + Send + Sync + fmt::Debug + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
}

/// `(a + b*sqrt2) / 2^k`, kept in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactWeight {
    a: BigInt,
    b: BigInt,
    k: u32,
}

impl ExactWeight {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, k: u32) -> Self {
        let mut w = ExactWeight {
            a: a.into(),
            b: b.into(),
            k,
        };
        w.reduce();
        w
    }

    pub fn from_int(v: i64) -> Self {
        ExactWeight::new(v, 0, 0)
    }

    /// `1/sqrt2 = sqrt2 / 2`.
    pub fn inv_sqrt2() -> Self {
        ExactWeight::new(0, 1, 1)
    }

    pub fn half() -> Self {
        ExactWeight::new(1, 0, 1)
    }

    pub fn parts(&self) -> (&BigInt, &BigInt, u32) {
        (&self.a, &self.b, self.k)
    }

    fn reduce(&mut self) {
        if self.a.is_zero() && self.b.is_zero() {
            self.k = 0;
            return;
        }
        // Strip common powers of two, bounded by k.
        let ta = self.a.trailing_zeros().unwrap_or(u64::MAX);
        let tb = self.b.trailing_zeros().unwrap_or(u64::MAX);
        let s = ta.min(tb).min(self.k as u64);
        if s > 0 {
            self.a >>= s;
            self.b >>= s;
            self.k -= s as u32;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.k == 0 && self.b.is_zero() && self.a.is_one()
    }

    pub fn to_f64(&self) -> f64 {
        // Keep mantissas in f64 range before scaling.
        let bits = self.a.bits().max(self.b.bits());
        let shift = bits.saturating_sub(900);
        let (a, b) = if shift > 0 {
            (&self.a >> shift, &self.b >> shift)
        } else {
            (self.a.clone(), self.b.clone())
        };
        let num = a.to_f64().unwrap_or(0.0) + b.to_f64().unwrap_or(0.0) * std::f64::consts::SQRT_2;
        num * 2f64.powi(shift as i32 - self.k as i32)
    }

    fn aligned(&self, other: &Self) -> (BigInt, BigInt, BigInt, BigInt, u32) {
        let k = self.k.max(other.k);
        let sa = k - self.k;
        let sb = k - other.k;
        (
            &self.a << sa,
            &self.b << sa,
            &other.a << sb,
            &other.b << sb,
            k,
        )
    }
}

impl fmt::Debug for ExactWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExactWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_negative() {
            write!(f, "({}-{}*sqrt2)/2^{}", self.a, -&self.b, self.k)
        } else {
            write!(f, "({}+{}*sqrt2)/2^{}", self.a, self.b, self.k)
        }
    }
}

impl FromStr for ExactWeight {
    type Err = WeightError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WeightError::Malformed(s.to_string());
        let body = s.trim();
        let (num, den) = body.split_once(")/2^").ok_or_else(bad)?;
        let num = num.strip_prefix('(').ok_or_else(bad)?;
        let k: u32 = den.trim().parse().map_err(|_| bad())?;
        let num = num.strip_suffix("*sqrt2").ok_or_else(bad)?;
        // Split at the sign between a and b, skipping a leading sign on a.
        let split = num
            .char_indices()
            .skip(1)
            .find(|&(_, c)| c == '+' || c == '-')
            .map(|(i, _)| i)
            .ok_or_else(bad)?;
        let a: BigInt = num[..split].parse().map_err(|_| bad())?;
        let rest = &num[split..];
        let b: BigInt = match rest.strip_prefix('+') {
            Some(r) => r.parse().map_err(|_| bad())?,
            None => rest.parse().map_err(|_| bad())?,
        };
        Ok(ExactWeight::new(a, b, k))
    }
}

impl Add for &ExactWeight {
    type Output = ExactWeight;
    fn add(self, rhs: &ExactWeight) -> ExactWeight {
        let (a1, b1, a2, b2, k) = self.aligned(rhs);
        ExactWeight::new(a1 + a2, b1 + b2, k)
    }
}

impl Mul for &ExactWeight {
    type Output = ExactWeight;
    fn mul(self, rhs: &ExactWeight) -> ExactWeight {
        let a = &self.a * &rhs.a + ((&self.b * &rhs.b) << 1u32);
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        ExactWeight::new(a, b, self.k + rhs.k)
    }
}

impl Neg for &ExactWeight {
    type Output = ExactWeight;
    fn neg(self) -> ExactWeight {
        ExactWeight {
            a: -&self.a,
            b: -&self.b,
            k: self.k,
        }
    }
}

impl Semiring for ExactWeight {
    fn zero() -> Self {
        ExactWeight::from_int(0)
    }
    fn one() -> Self {
        ExactWeight::from_int(1)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        // Skip the bignum path for the overwhelmingly common unit factor.
        if other.is_one() {
            return self.clone();
        }
        if self.is_one() {
            return other.clone();
        }
        self * other
    }
    fn is_zero(&self) -> bool {
        ExactWeight::is_zero(self)
    }
    fn is_one(&self) -> bool {
        ExactWeight::is_one(self)
    }
}

/// A finite double-precision weight.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FloatWeight(f64);

impl FloatWeight {
    pub fn new(value: f64) -> Result<Self, WeightError> {
        if value.is_finite() {
            Ok(FloatWeight(value))
        } else {
            Err(WeightError::NonFinite(value))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Double-double value `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Compensated {
    hi: f64,
    lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Compensated {
    pub fn new(v: f64) -> Self {
        Compensated { hi: v, lo: 0.0 }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }

    pub fn parts(self) -> (f64, f64) {
        (self.hi, self.lo)
    }
}

impl Semiring for Compensated {
    fn zero() -> Self {
        Compensated::new(0.0)
    }
    fn one() -> Self {
        Compensated::new(1.0)
    }
    fn plus(&self, other: &Self) -> Self {
        let (s, e) = two_sum(self.hi, other.hi);
        let (t, f) = two_sum(self.lo, other.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Compensated { hi, lo }
    }
    fn times(&self, other: &Self) -> Self {
        let p = self.hi * other.hi;
        let e = self.hi.mul_add(other.hi, -p);
        let e = e + (self.hi * other.lo + self.lo * other.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Compensated { hi, lo }
    }
    fn is_zero(&self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }
    fn is_one(&self) -> bool {
        self.hi == 1.0 && self.lo == 0.0
    }
}

/// Running sum of doubles with error-free accumulation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum(Compensated);

impl CompensatedSum {
    pub fn new() -> Self {
        CompensatedSum::default()
    }

    pub fn push(&mut self, v: f64) {
        self.0 = self.0.plus(&Compensated::new(v));
    }

    pub fn total(&self) -> f64 {
        self.0.value()
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.push(v);
        }
    }
}

/// A weight in one of the two arithmetic modes. A formula uses one mode
/// throughout; combining modes is an error.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightValue {
    Exact(ExactWeight),
    Float(FloatWeight),
}

impl WeightValue {
    pub fn exact(w: ExactWeight) -> Self {
        WeightValue::Exact(w)
    }

    pub fn float(v: f64) -> Result<Self, WeightError> {
        FloatWeight::new(v).map(WeightValue::Float)
    }

    pub fn mul(&self, other: &WeightValue) -> Result<WeightValue, WeightError> {
        match (self, other) {
            (WeightValue::Exact(x), WeightValue::Exact(y)) => Ok(WeightValue::Exact(x * y)),
            (WeightValue::Float(x), WeightValue::Float(y)) => WeightValue::float(x.0 * y.0),
            _ => Err(WeightError::ModeMismatch),
        }
    }

    pub fn add(&self, other: &WeightValue) -> Result<WeightValue, WeightError> {
        match (self, other) {
            (WeightValue::Exact(x), WeightValue::Exact(y)) => Ok(WeightValue::Exact(x + y)),
            (WeightValue::Float(x), WeightValue::Float(y)) => WeightValue::float(x.0 + y.0),
            _ => Err(WeightError::ModeMismatch),
        }
    }

    /// Exact mode ignores `epsilon`.
    pub fn is_one(&self, epsilon: f64) -> bool {
        match self {
            WeightValue::Exact(x) => x.is_one(),
            WeightValue::Float(x) => (x.0 - 1.0).abs() <= epsilon,
        }
    }

    pub fn is_zero(&self, epsilon: f64) -> bool {
        match self {
            WeightValue::Exact(x) => x.is_zero(),
            WeightValue::Float(x) => x.0.abs() <= epsilon,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            WeightValue::Exact(x) => x.to_f64(),
            WeightValue::Float(x) => x.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, WeightValue::Exact(_))
    }

    /// Unit weight in the same mode.
    pub fn is_unit(&self) -> bool {
        match self {
            WeightValue::Exact(x) => x.is_one(),
            WeightValue::Float(x) => x.0 == 1.0,
        }
    }
}

impl fmt::Display for WeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightValue::Exact(x) => write!(f, "{x}"),
            WeightValue::Float(x) => f.write_str(&format_f64(x.0)),
        }
    }
}

/// Decimal rendering with 17 significant digits, trailing zeros trimmed.
/// Parsing the result with `str::parse::<f64>` returns the same double.
pub fn format_f64(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.16e}", v);
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent");
    let negative = mant.starts_with('-');
    let digits: String = mant.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    let point = exp + 1;
    if point <= 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat('0').take((-point) as usize));
        out.push_str(digits);
    } else if point as usize >= digits.len() {
        out.push_str(digits);
        out.extend(std::iter::repeat('0').take(point as usize - digits.len()));
    } else {
        out.push_str(&digits[..point as usize]);
        out.push('.');
        out.push_str(&digits[point as usize..]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ew(a: i64, b: i64, k: u32) -> ExactWeight {
        ExactWeight::new(a, b, k)
    }

    #[test]
    fn products() {
        let r = ExactWeight::inv_sqrt2().times(&ExactWeight::inv_sqrt2());
        assert_eq!(r, ExactWeight::half());
        let r = ExactWeight::from_int(-1).times(&ExactWeight::half());
        assert_eq!(r, ew(-1, 0, 1));
        assert!(ew(3, 2, 0).times(&ew(3, -2, 0)).is_one());
    }

    #[test]
    fn sums_and_predicates() {
        let s = ExactWeight::half().plus(&ExactWeight::half());
        assert!(s.is_one());
        assert!(WeightValue::Exact(s).is_one(0.0));
        assert!(WeightValue::float(1.0 - 1e-12).unwrap().is_one(1e-10));
        assert!(!WeightValue::float(1.0 - 1e-9).unwrap().is_one(1e-10));
        assert!(ew(2, -2, 0).plus(&ew(-2, 2, 0)).is_zero());
    }

    #[test]
    fn mixed_modes_are_rejected() {
        let e = WeightValue::Exact(ExactWeight::half());
        let f = WeightValue::float(0.5).unwrap();
        assert_eq!(e.mul(&f), Err(WeightError::ModeMismatch));
        assert_eq!(f.add(&e), Err(WeightError::ModeMismatch));
    }

    #[test]
    fn reduction_is_canonical() {
        assert_eq!(ew(4, 2, 3).parts(), (&BigInt::from(2), &BigInt::from(1), 2));
        assert_eq!(ew(0, 0, 7).parts().2, 0);
        // Odd b blocks reduction even when a is even.
        assert_eq!(ew(2, 1, 1).parts().2, 1);
        assert_eq!(ew(6, 4, 0).parts().2, 0);
    }

    #[test]
    fn display_round_trip() {
        for w in [ew(1, -3, 2), ew(0, 1, 1), ew(-5, 0, 0), ew(7, 9, 4)] {
            let s = w.to_string();
            assert_eq!(s.parse::<ExactWeight>().unwrap(), w, "{s}");
        }
        assert_eq!(ExactWeight::inv_sqrt2().to_string(), "(0+1*sqrt2)/2^1");
        assert!("garbage".parse::<ExactWeight>().is_err());
    }

    #[test]
    fn float_formatting() {
        assert_eq!(format_f64(-1.0), "-1");
        assert_eq!(format_f64(0.5), "0.5");
        assert_eq!(format_f64(2.0), "2");
        assert_eq!(format_f64(0.00125), "0.00125");
        assert_eq!(format_f64(1e-12), "0.00000000000099999999999999998");
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(format_f64(r).parse::<f64>().unwrap(), r);
        assert!(FloatWeight::new(f64::NAN).is_err());
    }

    #[test]
    fn compensated_alternating_sum() {
        let mut acc = CompensatedSum::new();
        for i in 0..1_000_000 {
            acc.push(if i % 2 == 0 { 1.0 } else { -1.0 });
            if i == 500_000 {
                acc.push(1e-12);
            }
        }
        let got = acc.total();
        assert!((got - 1e-12).abs() <= f64::EPSILON * 1e-12, "{got:e}");
    }

    #[test]
    fn compensated_product_keeps_low_bits() {
        let third = Compensated::new(1.0 / 3.0);
        let three = Compensated::new(3.0);
        let p = third.times(&three);
        let (hi, lo) = p.parts();
        assert_eq!(hi, 1.0);
        assert!(lo != 0.0 && lo.abs() < 1e-16);
    }
}
