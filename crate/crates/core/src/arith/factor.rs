//! Exact division of a homogeneous polynomial by `x - r y` at an algebraic root.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::roots::enclose;
use super::{format_rational, ArithError, BiHomogPoly, QuadSurd, RootHandle, RootValue, UniPoly};
use crate::scalar::rational_to_f64;
use crate::Rational;

/// An element of `Q(r)` for the root `r` it was computed from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraicValue {
    Rational(Rational),
    Surd(QuadSurd),
    /// `P(r)` for a rational polynomial `P`.
    PolyInRoot(UniPoly<Rational>),
}

impl AlgebraicValue {
    pub fn sign(&self, root: &RootHandle) -> Ordering {
        match self {
            AlgebraicValue::Rational(q) => q.cmp(&Rational::zero()),
            AlgebraicValue::Surd(s) => s.signum(),
            AlgebraicValue::PolyInRoot(p) => root.sign_at(p),
        }
    }

    pub fn to_f64(&self, root: &RootHandle) -> f64 {
        match self {
            AlgebraicValue::Rational(q) => rational_to_f64(q),
            AlgebraicValue::Surd(s) => s.to_f64(),
            AlgebraicValue::PolyInRoot(p) => p.to_f64().eval(&root.to_f64()),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            AlgebraicValue::Rational(q) => Some(q),
            _ => None,
        }
    }

    fn exact_string(&self) -> Option<String> {
        match self {
            AlgebraicValue::Rational(q) => Some(format_rational(q)),
            AlgebraicValue::Surd(s) => Some(s.to_string()),
            AlgebraicValue::PolyInRoot(_) => None,
        }
    }
}

/// Coefficient of `x^index y^(p-1-index)` in the quotient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientCoeff {
    pub index: usize,
    pub value: AlgebraicValue,
    pub sign: Ordering,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reconstruction {
    /// `(x - r y)·Q̃ = Q` verified in exact arithmetic.
    Exact,
    /// Every product coefficient has a rational enclosure containing the
    /// target coefficient, of width at most `width`.
    Certified { width: f64 },
}

/// `Q = (x - r y)·Q̃` with a nonnegativity certificate for `Q̃`.
#[derive(Debug, Clone)]
pub struct LinearFactorization {
    pub root: RootHandle,
    pub quotient: Vec<QuotientCoeff>,
    pub reconstruction: Reconstruction,
}

impl LinearFactorization {
    pub fn degree(&self) -> usize {
        self.quotient.len() - 1
    }

    /// The quotient when all coefficients are rational.
    pub fn quotient_exact(&self) -> Option<BiHomogPoly<Rational>> {
        let coeffs: Option<Vec<_>> = self.quotient.iter().map(|c| c.value.as_rational().cloned()).collect();
        coeffs.map(|c| BiHomogPoly::new(self.degree(), c))
    }

    pub fn quotient_f64(&self) -> BiHomogPoly<f64> {
        BiHomogPoly::new(self.degree(), self.quotient.iter().map(|c| c.value.to_f64(&self.root)).collect())
    }
}

impl Serialize for LinearFactorization {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;

        #[derive(Serialize)]
        struct Coeff {
            x_power: usize,
            exact: Option<String>,
            approx: f64,
            nonnegative: bool,
        }
        let coeffs: Vec<Coeff> = self
            .quotient
            .iter()
            .map(|c| Coeff {
                x_power: c.index,
                exact: c.value.exact_string(),
                approx: c.value.to_f64(&self.root),
                nonnegative: c.sign != Ordering::Less,
            })
            .collect();
        let mut st = s.serialize_struct("LinearFactorization", 3)?;
        st.serialize_field("root", &self.root)?;
        st.serialize_field("quotient", &coeffs)?;
        st.serialize_field("reconstruction", &self.reconstruction)?;
        st.end()
    }
}

fn surd_eval(p: &UniPoly<Rational>, s: &QuadSurd) -> AlgebraicValue {
    let mut acc = s.from_rational_in(Rational::zero());
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * s) + c;
    }
    if acc.is_rational() {
        AlgebraicValue::Rational(acc.rational_part().clone())
    } else {
        AlgebraicValue::Surd(acc)
    }
}

/// Divides `q` by `x - r y` where `r` is a root of `q(x, 1)`.
///
/// Fails with [`ArithError::NotARoot`] if `r` is not a root, and with
/// [`ArithError::NegativeQuotient`] if a quotient coefficient is negative.
pub fn divide_out_linear(q: &BiHomogPoly<Rational>, r: &RootHandle) -> Result<LinearFactorization, ArithError> {
    let p = q.degree();
    if p == 0 || r.sign_at(&q.dehomogenize()) != Ordering::Equal {
        return Err(ArithError::NotARoot);
    }
    // Synthetic division with coefficients kept as polynomials in r.
    let x = UniPoly::monomial(Rational::from_integer(1.into()), 1);
    let mut polys = vec![UniPoly::zero(); p];
    polys[p - 1] = UniPoly::constant(q.coeff(p));
    for j in (1..p).rev() {
        polys[j - 1] = &UniPoly::constant(q.coeff(j)) + &(&x * &polys[j]);
    }

    let mut quotient = Vec::with_capacity(p);
    for (index, poly) in polys.iter().enumerate() {
        let value = match r.value() {
            RootValue::Rational(v) => AlgebraicValue::Rational(poly.eval(v)),
            RootValue::Surd(s) => surd_eval(poly, s),
            RootValue::Isolated => match poly.degree() {
                None | Some(0) => AlgebraicValue::Rational(poly.coeff(0)),
                _ => AlgebraicValue::PolyInRoot(poly.clone()),
            },
        };
        let sign = value.sign(r);
        if sign == Ordering::Less {
            return Err(ArithError::NegativeQuotient { index, value: format!("{:.6e}", value.to_f64(r)) });
        }
        quotient.push(QuotientCoeff { index, value, sign });
    }

    let reconstruction = match r.value() {
        RootValue::Isolated => certify_reconstruction(q, r, &polys),
        _ => {
            debug_assert!(exact_reconstruction_holds(q, r, &quotient));
            Reconstruction::Exact
        }
    };
    Ok(LinearFactorization { root: r.clone(), quotient, reconstruction })
}

fn exact_reconstruction_holds(q: &BiHomogPoly<Rational>, r: &RootHandle, quotient: &[QuotientCoeff]) -> bool {
    let coeff = |i: Option<usize>| -> AlgebraicValue {
        match i.and_then(|i| quotient.get(i)) {
            Some(c) => c.value.clone(),
            None => AlgebraicValue::Rational(Rational::zero()),
        }
    };
    (0..=q.degree()).all(|i| {
        let a = coeff(i.checked_sub(1));
        let b = coeff(Some(i));
        match r.value() {
            RootValue::Rational(v) => match (a, b) {
                (AlgebraicValue::Rational(a), AlgebraicValue::Rational(b)) => a - b * v == q.coeff(i),
                _ => false,
            },
            RootValue::Surd(s) => {
                let lift = |v: AlgebraicValue| match v {
                    AlgebraicValue::Rational(x) => Some(s.from_rational_in(x)),
                    AlgebraicValue::Surd(x) => Some(x),
                    AlgebraicValue::PolyInRoot(_) => None,
                };
                let (Some(a), Some(b)) = (lift(a), lift(b)) else { return false };
                let prod = &a - &(&b * s);
                prod.is_rational() && prod.rational_part() == &q.coeff(i)
            }
            RootValue::Isolated => false,
        }
    })
}

fn certify_reconstruction(q: &BiHomogPoly<Rational>, r: &RootHandle, polys: &[UniPoly<Rational>]) -> Reconstruction {
    let p = q.degree();
    let x = UniPoly::monomial(Rational::from_integer(1.into()), 1);
    let target_width = BigRational::new(1.into(), 1_000_000_000_000u64.into());
    let products: Vec<UniPoly<Rational>> = (0..=p)
        .map(|i| {
            let from_x = if i >= 1 { polys[i - 1].clone() } else { UniPoly::zero() };
            let from_y = polys.get(i).map(|g| &x * g).unwrap_or_else(UniPoly::zero);
            &from_x - &from_y
        })
        .collect();
    let mut root_width = target_width.clone();
    loop {
        let fine = r.refined(&root_width);
        let (lo, hi) = fine.interval();
        let mut worst = Rational::zero();
        let mut contains = true;
        for (i, prod) in products.iter().enumerate() {
            let (a, b) = enclose(prod, lo, hi);
            let target = q.coeff(i);
            contains &= a <= target && target <= b;
            worst = worst.max(&b - &a);
        }
        if contains && worst < target_width {
            return Reconstruction::Certified { width: rational_to_f64(&worst) };
        }
        if !contains {
            // Enclosures always contain the true value; this cannot happen
            // for a genuine root.
            debug_assert!(contains, "interval enclosure excludes the target");
        }
        root_width = root_width / Rational::from_integer(1024.into());
        if root_width.abs() < BigRational::new(1.into(), num_bigint::BigInt::from(10).pow(60)) {
            return Reconstruction::Certified { width: rational_to_f64(&worst) };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{isolate_largest_nonneg_root, rat};

    #[test]
    fn quadratic_with_surd_root() {
        let q = BiHomogPoly::new(2, vec![rat(-1, 1), rat(-1, 1), rat(1, 2)]);
        let r = isolate_largest_nonneg_root(&q.dehomogenize()).unwrap();
        let f = divide_out_linear(&q, &r).unwrap();
        assert_eq!(f.reconstruction, Reconstruction::Exact);
        // Q̃ = x/2 + ((√3 − 1)/2) y
        assert_eq!(f.quotient[1].value, AlgebraicValue::Rational(rat(1, 2)));
        let AlgebraicValue::Surd(s) = &f.quotient[0].value else { panic!("expected surd") };
        assert_eq!(s.rational_part(), &rat(-1, 2));
        assert_eq!(s.surd_coeff(), &rat(1, 2));
        assert_eq!(s.radicand(), &3.into());
        assert!(f.quotient.iter().all(|c| c.sign != Ordering::Less));
    }

    #[test]
    fn cubic_with_rational_root() {
        let q = BiHomogPoly::new(3, vec![rat(0, 1), rat(0, 1), rat(-1, 2), rat(1, 6)]);
        let f = divide_out_linear(&q, &RootHandle::exact(rat(3, 1))).unwrap();
        assert_eq!(f.quotient_exact().unwrap(), BiHomogPoly::new(2, vec![rat(0, 1), rat(0, 1), rat(1, 6)]));
    }

    #[test]
    fn zero_root() {
        let q = BiHomogPoly::new(2, vec![rat(0, 1), rat(0, 1), rat(1, 2)]);
        let f = divide_out_linear(&q, &RootHandle::exact(rat(0, 1))).unwrap();
        assert_eq!(f.quotient_exact().unwrap(), BiHomogPoly::new(1, vec![rat(0, 1), rat(1, 2)]));
    }

    #[test]
    fn isolated_root_is_certified() {
        // x^3/6 - x^2 y/2 - x y^2 - y^3
        let q = BiHomogPoly::new(3, vec![rat(-1, 1), rat(-1, 1), rat(-1, 2), rat(1, 6)]);
        let r = isolate_largest_nonneg_root(&q.dehomogenize()).unwrap();
        let f = divide_out_linear(&q, &r).unwrap();
        match f.reconstruction {
            Reconstruction::Certified { width } => assert!(width < 1e-12),
            Reconstruction::Exact => {}
        }
        assert!(f.quotient.iter().all(|c| c.sign != Ordering::Less));
    }

    #[test]
    fn non_root_is_rejected() {
        let q = BiHomogPoly::new(1, vec![rat(-1, 1), rat(1, 1)]);
        assert_eq!(divide_out_linear(&q, &RootHandle::exact(rat(2, 1))).unwrap_err(), ArithError::NotARoot);
    }

    #[test]
    fn negative_quotient_is_reported() {
        // (x - y)(x - 2y) at r = 2 leaves x - y
        let q = BiHomogPoly::new(2, vec![rat(2, 1), rat(-3, 1), rat(1, 1)]);
        let err = divide_out_linear(&q, &RootHandle::exact(rat(2, 1))).unwrap_err();
        assert!(matches!(err, ArithError::NegativeQuotient { index: 0, .. }));
    }
}
