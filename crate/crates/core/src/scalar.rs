//! Number types the closed-form expectations are evaluated in.
//!
//! Every formula in [`crate::analytic`] is generic over [`Scalar`], so the same
//! code runs in double precision and in exact rational arithmetic.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, ToPrimitive, Zero};

/// Exact rational numbers used by the oracle and the exact evaluation path.
pub type Exact = BigRational;

pub trait Scalar: Num + Clone + PartialOrd + Neg<Output = Self> + Debug {
    fn int(v: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn powu(&self, e: u32) -> Self {
        num_traits::pow(self.clone(), e as usize)
    }

    /// Sum of terms. The floating-point implementation is compensated.
    fn sum<I: IntoIterator<Item = Self>>(terms: I) -> Self {
        terms.into_iter().fold(Self::zero(), |acc, t| acc + t)
    }

    fn ratio(num: i64, den: i64) -> Self {
        Self::int(num) / Self::int(den)
    }
}

impl Scalar for f64 {
    fn int(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn powu(&self, e: u32) -> Self {
        match i32::try_from(e) {
            Ok(e) => self.powi(e),
            Err(_) => self.powf(e as f64),
        }
    }

    fn sum<I: IntoIterator<Item = Self>>(terms: I) -> Self {
        neumaier_sum(terms)
    }
}

impl Scalar for BigRational {
    fn int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Neumaier's variant of Kahan summation.
pub fn neumaier_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Parses `"a/b"`, an integer or a finite decimal literal into an exact rational.
pub fn parse_exact(text: &str) -> Option<Exact> {
    let text = text.trim();
    if let Some((a, b)) = text.split_once('/') {
        let a: BigInt = a.trim().parse().ok()?;
        let b: BigInt = b.trim().parse().ok()?;
        if b.is_zero() {
            return None;
        }
        return Some(BigRational::new(a, b));
    }
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let num: BigInt = digits.parse().ok()?;
    let den = num_traits::pow(BigInt::from(10), frac_part.len());
    let v = BigRational::new(num, den);
    Some(if neg { -v } else { v })
}

/// Nearest exact rational to a double (its binary expansion, not a continued fraction).
pub fn exact_from_f64(x: f64) -> Option<Exact> {
    BigRational::from_float(x)
}
