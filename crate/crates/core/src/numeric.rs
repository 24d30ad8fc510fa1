//! Numeric abstraction over the two evaluation modes.
//!
//! Everything probabilistic in this crate runs either in exact
//! arbitrary-precision rational arithmetic ([`BigRational`]) or in 64-bit
//! floating point. [`Scalar`] is the small interface both satisfy.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// A number type usable for probabilities and moments.
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + std::fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True for exact rational arithmetic, false for floating point.
    const EXACT: bool;

    fn from_int(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
    /// The fraction `num/den` (den must be nonzero).
    fn ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn abs_val(&self) -> Self;
    /// CSV cell representation: `num/den` in exact mode, 17 significant
    /// digits in floating mode.
    fn format_csv(&self) -> String;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        v.to_f64().unwrap_or(f64::NAN)
    }

    fn ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }

    fn format_csv(&self) -> String {
        format!("{:.16e}", self)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_val(&self) -> Self {
        Signed::abs(self)
    }

    fn format_csv(&self) -> String {
        format!("{}/{}", self.numer(), self.denom())
    }
}

/// Errors unless `p` lies strictly inside (0, 1); unordered values (NaN)
/// are rejected.
pub fn check_open_unit<T: Scalar>(p: &T, what: &str) -> crate::Result<()> {
    use std::cmp::Ordering::{Greater, Less};
    let inside =
        p.partial_cmp(&T::zero()) == Some(Greater) && p.partial_cmp(&T::one()) == Some(Less);
    if !inside {
        return Err(crate::Error::InvalidParameter(format!(
            "{what} must lie in (0, 1), got {:?}",
            p
        )));
    }
    Ok(())
}

/// Errors unless `p` lies in the closed interval [0, 1].
pub fn check_closed_unit<T: Scalar>(p: &T, what: &str) -> crate::Result<()> {
    use std::cmp::Ordering::Less;
    let inside = p.partial_cmp(&T::zero()) != Some(Less)
        && T::one().partial_cmp(p) != Some(Less)
        && p.partial_cmp(&T::zero()).is_some();
    if !inside {
        return Err(crate::Error::InvalidParameter(format!(
            "{what} must lie in [0, 1], got {:?}",
            p
        )));
    }
    Ok(())
}

/// `base^exp` by repeated squaring.
pub fn powi<T: Scalar>(base: &T, exp: u32) -> T {
    let mut result = T::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b.clone();
        }
        b = b.clone() * b.clone();
        e >>= 1;
    }
    result
}

/// Parses `"3/4"`, `"0.25"`, or `"2"` into an exact rational.
pub fn parse_ratio(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).ok()?;
        let den = BigInt::from_str(den.trim()).ok()?;
        if den.is_zero() {
            return None;
        }
        return Some(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        if !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let int_val = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(int_digits).ok()?
        };
        let frac_val = if frac_part.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(frac_part).ok()?
        };
        let den = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mut num = int_val * &den + frac_val;
        if negative {
            num = -num;
        }
        return Some(BigRational::new(num, den));
    }
    BigInt::from_str(s).ok().map(BigRational::from_integer)
}

/// Table of `ln n!` built by cumulative summation; exact enough for the
/// floating closed-form path at the supported scales.
pub struct LnFactorial {
    table: Vec<f64>,
}

impl LnFactorial {
    pub fn new(max_n: usize) -> Self {
        let mut table = Vec::with_capacity(max_n + 1);
        table.push(0.0);
        let mut acc = 0.0f64;
        for i in 1..=max_n {
            acc += (i as f64).ln();
            table.push(acc);
        }
        LnFactorial { table }
    }

    #[inline]
    pub fn ln_fact(&self, n: usize) -> f64 {
        self.table[n]
    }

    #[inline]
    pub fn ln_binomial(&self, n: usize, k: usize) -> f64 {
        debug_assert!(k <= n);
        self.table[n] - self.table[k] - self.table[n - k]
    }
}
