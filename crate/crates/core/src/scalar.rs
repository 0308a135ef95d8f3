//! Scalar abstraction shared by the exact and floating-point code paths.
//!
//! Intersection pairings, classes and polynomials are written once against
//! [`Scalar`]; the exact verdicts instantiate them with [`crate::Rational`]
//! and the transcendental (dHYM) diagnostics with `f64`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

pub trait Scalar: Clone + Debug + PartialOrd + Num + Signed + Send + Sync + 'static {
    /// `true` when arithmetic in this type is exact.
    const EXACT: bool;

    fn from_rational(q: &BigRational) -> Self;

    fn to_f64(&self) -> f64;

    fn from_i64(k: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(k)))
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn from_i64(k: i64) -> Self {
        k as f64
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q) as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }

    fn from_i64(k: i64) -> Self {
        k as f32
    }
}

/// Nearest-ish `f64` of a big rational, robust to numerators and
/// denominators that overflow `f64` individually.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let Some(v) = ToPrimitive::to_f64(q) {
        if v.is_finite() && (v != 0.0) {
            return v;
        }
    }
    // Shift both sides to ~64 significant bits.
    let num = q.numer();
    let den = q.denom();
    let shift = num.bits() as i64 - den.bits() as i64;
    let scaled = if shift > 0 {
        BigRational::new(num.clone(), den.clone() << (shift as usize))
    } else {
        BigRational::new(num.clone() << ((-shift) as usize), den.clone())
    };
    let mantissa = ToPrimitive::to_f64(&scaled).unwrap_or(if q.is_negative() { -1.0 } else { 1.0 });
    mantissa * 2f64.powi(shift.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}

pub(crate) fn factorial<T: Scalar>(k: usize) -> T {
    let mut acc = T::one();
    for i in 2..=k {
        acc = acc * T::from_i64(i as i64);
    }
    acc
}

pub(crate) fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    if k > n {
        return T::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    T::from_rational(&BigRational::from_integer(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_rationals_convert() {
        let big = BigInt::from(10).pow(400);
        let q = BigRational::new(big.clone() * BigInt::from(3), big);
        assert!((rational_to_f64(&q) - 3.0).abs() < 1e-12);
        let tiny = BigRational::new(BigInt::one(), BigInt::from(2).pow(1100));
        assert_eq!(rational_to_f64(&tiny), 0.0);
    }

    #[test]
    fn combinatorics() {
        assert_eq!(factorial::<f64>(5), 120.0);
        assert_eq!(binomial::<f64>(6, 2), 15.0);
        assert_eq!(binomial::<BigRational>(4, 5), BigRational::zero());
    }
}
