//! Exact arithmetic kernel: rationals, polynomials, certified real roots.

mod factor;
mod poly;
mod roots;
mod surd;

pub use factor::{divide_out_linear, AlgebraicValue, LinearFactorization, QuotientCoeff, Reconstruction};
pub use poly::{BiHomogPoly, UniPoly};
pub use roots::{
    isolate_largest_nonneg_root, isolate_roots_in, sign_relative_to_root, RootHandle, RootSide,
    RootValue,
};
pub use surd::QuadSurd;

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("malformed rational {0:?}")]
    MalformedRational(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
    #[error("polynomial sign pattern precondition violated: {0}")]
    SignPattern(String),
    #[error("comparison point {0} is negative")]
    NegativeQuery(String),
    #[error("value is not a root of the polynomial")]
    NotARoot,
    #[error("quotient coefficient of x^{index} is negative ({value})")]
    NegativeQuotient { index: usize, value: String },
    #[error("the zero polynomial has no isolated roots")]
    ZeroPolynomial,
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.125"` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ArithError::MalformedRational(s.to_string()));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| ArithError::MalformedRational(s.to_string()))?;
        let d = BigInt::from_str(d.trim()).map_err(|_| ArithError::MalformedRational(s.to_string()))?;
        if d.is_zero() {
            return Err(ArithError::ZeroDenominator(s.to_string()));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let neg = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        if frac.is_empty() && int_digits.is_empty()
            || !frac.chars().all(|c| c.is_ascii_digit())
            || !int_digits.chars().all(|c| c.is_ascii_digit())
        {
            return Err(ArithError::MalformedRational(s.to_string()));
        }
        let digits = format!("{int_digits}{frac}");
        let n = if digits.is_empty() { BigInt::zero() } else {
            BigInt::from_str(&digits).map_err(|_| ArithError::MalformedRational(s.to_string()))?
        };
        let d = BigInt::from(10).pow(frac.len() as u32);
        let q = BigRational::new(n, d);
        return Ok(if neg { -q } else { q });
    }
    BigInt::from_str(t)
        .map(BigRational::from_integer)
        .map_err(|_| ArithError::MalformedRational(s.to_string()))
}

/// Canonical string form: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses a comma separated list of rationals, e.g. `"1,1/5"`.
pub fn parse_rational_list(s: &str) -> Result<Vec<Rational>, ArithError> {
    s.split(',').map(parse_rational).collect()
}

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Serde adapter writing rationals as `"p/q"` strings.
pub mod serde_rational {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational};
    use crate::Rational;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Vec<Rational>` as a list of `"p/q"` strings.
pub mod serde_rational_vec {
    use serde::{de::Error, ser::SerializeSeq, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational};
    use crate::Rational;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&format_rational(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_rational(s).map_err(D::Error::custom)).collect()
    }
}

/// Serde adapter for `Option<Rational>`.
pub mod serde_rational_opt {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational};
    use crate::Rational;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_some(&format_rational(q)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
        let v = Option::<String>::deserialize(d)?;
        v.map(|s| parse_rational(&s).map_err(D::Error::custom)).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("1/3").unwrap(), rat(1, 3));
        assert_eq!(parse_rational("-10/4").unwrap(), rat(-5, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(" 2/-6 ").unwrap(), rat(-1, 3));
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse_rational("1/0"), Err(ArithError::ZeroDenominator(_))));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1.2.3").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn canonical_format() {
        assert_eq!(format_rational(&rat(10, 4)), "5/2");
        assert_eq!(format_rational(&rat(-6, 3)), "-2");
        assert_eq!(format_rational(&rat(0, 3)), "0");
    }
}
