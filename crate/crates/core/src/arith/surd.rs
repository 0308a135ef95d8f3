use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::format_rational;
use crate::scalar::rational_to_f64;
use crate::Rational;

/// Exact element `a + b·√d` of a real quadratic field; `d` is a positive
/// integer that is not a perfect square.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadSurd {
    a: Rational,
    b: Rational,
    d: BigInt,
}

/// Square root of a nonnegative rational when it is itself rational.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

impl QuadSurd {
    /// `a + b·√radicand`, or `Err(value)` when the radicand is a rational square.
    pub fn new(a: Rational, b: Rational, radicand: &Rational) -> Result<Self, Rational> {
        assert!(radicand.is_positive(), "radicand must be positive");
        if let Some(s) = rational_sqrt(radicand) {
            return Err(a + b * s);
        }
        // √(p/q) = √(pq)/q, then pull small square factors out of pq.
        let mut d = radicand.numer() * radicand.denom();
        let mut b = b / BigRational::from_integer(radicand.denom().clone());
        let mut f = BigInt::from(2);
        let limit = BigInt::from(1000);
        while f <= limit && &f * &f <= d {
            let f2 = &f * &f;
            while (&d % &f2).is_zero() {
                d /= &f2;
                b *= BigRational::from_integer(f.clone());
            }
            f += 1;
        }
        if b.is_zero() {
            return Err(a);
        }
        Ok(QuadSurd { a, b, d })
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_coeff(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn from_rational_in(&self, q: Rational) -> Self {
        QuadSurd { a: q, b: Rational::zero(), d: self.d.clone() }
    }

    pub fn conj(&self) -> Self {
        QuadSurd { a: self.a.clone(), b: -self.b.clone(), d: self.d.clone() }
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // opposite signs: compare a^2 with b^2 d, never equal since d is not a square
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * BigRational::from_integer(self.d.clone());
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        QuadSurd { a: &self.a - q, b: self.b.clone(), d: self.d.clone() }.signum()
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * rational_to_f64(&BigRational::from_integer(self.d.clone())).sqrt()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn same_field(&self, other: &Self) {
        assert!(
            self.b.is_zero() || other.b.is_zero() || self.d == other.d,
            "surds from different quadratic fields"
        );
    }

    fn field_d(&self, other: &Self) -> BigInt {
        if self.b.is_zero() { other.d.clone() } else { self.d.clone() }
    }
}

impl Add for &QuadSurd {
    type Output = QuadSurd;
    fn add(self, rhs: &QuadSurd) -> QuadSurd {
        self.same_field(rhs);
        QuadSurd { a: &self.a + &rhs.a, b: &self.b + &rhs.b, d: self.field_d(rhs) }
    }
}

impl Sub for &QuadSurd {
    type Output = QuadSurd;
    fn sub(self, rhs: &QuadSurd) -> QuadSurd {
        self + &(-rhs)
    }
}

impl Neg for &QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd { a: -self.a.clone(), b: -self.b.clone(), d: self.d.clone() }
    }
}

impl Mul for &QuadSurd {
    type Output = QuadSurd;
    fn mul(self, rhs: &QuadSurd) -> QuadSurd {
        self.same_field(rhs);
        let d = self.field_d(rhs);
        let dq = BigRational::from_integer(d.clone());
        QuadSurd {
            a: &self.a * &rhs.a + &self.b * &rhs.b * dq,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            d,
        }
    }
}

impl Mul<&Rational> for &QuadSurd {
    type Output = QuadSurd;
    fn mul(self, rhs: &Rational) -> QuadSurd {
        QuadSurd { a: &self.a * rhs, b: &self.b * rhs, d: self.d.clone() }
    }
}

impl Add<&Rational> for &QuadSurd {
    type Output = QuadSurd;
    fn add(self, rhs: &Rational) -> QuadSurd {
        QuadSurd { a: &self.a + rhs, b: self.b.clone(), d: self.d.clone() }
    }
}

impl fmt::Debug for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_one() {
            write!(f, "{} + sqrt({})", format_rational(&self.a), self.d)
        } else {
            write!(f, "{} + ({})*sqrt({})", format_rational(&self.a), format_rational(&self.b), self.d)
        }
    }
}

impl Serialize for QuadSurd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("QuadSurd", 3)?;
        st.serialize_field("rational", &format_rational(&self.a))?;
        st.serialize_field("sqrt_coeff", &format_rational(&self.b))?;
        st.serialize_field("radicand", &self.d.to_string())?;
        st.end()
    }
}
