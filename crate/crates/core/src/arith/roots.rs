//! Certified real root isolation by Descartes' rule of signs with bisection.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::surd::QuadSurd;
use super::{format_rational, ArithError, UniPoly};
use crate::scalar::rational_to_f64;
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootValue {
    Rational(Rational),
    Surd(QuadSurd),
    /// Known only through its isolating interval.
    Isolated,
}

/// A real root of a squarefree rational polynomial.
///
/// Exact rational roots carry a degenerate interval `[q, q]`. Otherwise the
/// open interval `(lo, hi)` contains exactly one root and the polynomial has
/// opposite nonzero signs at `lo` and `hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootHandle {
    poly: UniPoly<Rational>,
    lo: Rational,
    hi: Rational,
    value: RootValue,
}

/// Position of a query point relative to the distinguished root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RootSide {
    Below,
    At,
    Above,
}

fn half() -> Rational {
    BigRational::new(1.into(), 2.into())
}

fn sign(q: &Rational) -> Ordering {
    q.cmp(&Rational::zero())
}

/// Integer multiple of a rational polynomial, so that signs of values can
/// be taken without normalizing intermediate rationals.
struct IntPoly(Vec<BigInt>);

impl IntPoly {
    fn new(p: &UniPoly<Rational>) -> Self {
        let lcm = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPoly(p.coeffs().iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect())
    }

    /// Sign of `p(a/b)`, from `b^n p(a/b)` evaluated by Horner's rule.
    fn sign_at(&self, q: &Rational) -> Ordering {
        let (a, b) = (q.numer(), q.denom());
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        for c in self.0.iter().rev() {
            acc = acc * a + c * &bpow;
            bpow *= b;
        }
        acc.cmp(&BigInt::zero())
    }
}

/// Interval enclosure of `p` over `[lo, hi]` by Horner evaluation, carried
/// out in integers over the common denominator of the endpoints.
pub(crate) fn enclose(p: &UniPoly<Rational>, lo: &Rational, hi: &Rational) -> (Rational, Rational) {
    if p.is_zero() {
        return (Rational::zero(), Rational::zero());
    }
    let IntPoly(c) = IntPoly::new(p);
    let scale = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let d = lo.denom().lcm(hi.denom());
    let x_lo = lo.numer() * (&d / lo.denom());
    let x_hi = hi.numer() * (&d / hi.denom());
    let mut a = BigInt::zero();
    let mut b = BigInt::zero();
    let mut dpow = BigInt::one();
    for ci in c.iter().rev() {
        let products = [&a * &x_lo, &a * &x_hi, &b * &x_lo, &b * &x_hi];
        let shift = ci * &dpow;
        a = products.iter().min().unwrap() + &shift;
        b = products.iter().max().unwrap() + &shift;
        dpow *= &d;
    }
    // dpow = d^(n+1); the accumulated values carry d^n
    let denom = scale * (dpow / &d);
    (BigRational::new(a, denom.clone()), BigRational::new(b, denom))
}

/// Upper bound on the number of roots in the open interval `(lo, hi)`;
/// exact when it is 0 or 1, and always of the right parity.
fn descartes_count(p: &UniPoly<Rational>, lo: &Rational, hi: &Rational) -> usize {
    let q = p.taylor_shift(lo).scale_var(&(hi - lo));
    q.reversed().taylor_shift(&Rational::one()).sign_variations()
}

/// Cauchy bound: every real root has absolute value strictly below it.
fn cauchy_bound(p: &UniPoly<Rational>) -> Rational {
    let lead = p.leading().abs();
    let n = p.degree().unwrap_or(0);
    let m = p.coeffs()[..n]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    m + Rational::one()
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64().filter(|&n| n <= 1_000_000_000_000)?;
    let mut out = Vec::new();
    let mut k = 1u64;
    while k * k <= n {
        if n % k == 0 {
            out.push(BigInt::from(k));
            out.push(BigInt::from(n / k));
        }
        k += 1;
    }
    Some(out)
}

/// A rational root of `p` inside `(lo, hi)` found by the rational root test,
/// when the integer coefficients are small enough to enumerate divisors.
fn rational_root_in(p: &UniPoly<Rational>, lo: &Rational, hi: &Rational) -> Option<Rational> {
    let ints = IntPoly::new(p).0;
    let low = ints.iter().find(|c| !c.is_zero())?;
    let tops = divisors(low)?;
    let bottoms = divisors(ints.last()?)?;
    for a in &tops {
        for b in &bottoms {
            let q = BigRational::new(a.clone(), b.clone());
            for cand in [q.clone(), -q] {
                if &cand > lo && &cand < hi && p.eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

impl RootHandle {
    pub fn exact(q: Rational) -> Self {
        RootHandle {
            poly: UniPoly::linear_root(q.clone()),
            lo: q.clone(),
            hi: q.clone(),
            value: RootValue::Rational(q),
        }
    }

    /// Builds a handle from an isolating interval of a squarefree polynomial,
    /// shrinking it until neither endpoint is a root.
    fn isolated(poly: &UniPoly<Rational>, mut lo: Rational, mut hi: Rational) -> Self {
        while poly.eval(&lo).is_zero() || poly.eval(&hi).is_zero() {
            let mid = (&lo + &hi) * half();
            if poly.eval(&mid).is_zero() {
                return Self::exact(mid);
            }
            if descartes_count(poly, &lo, &mid) % 2 == 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let mut h = RootHandle { poly: poly.monic(), lo, hi, value: RootValue::Isolated };
        h.upgrade_low_degree();
        h
    }

    /// Degree one and two defining polynomials get exact values, as do
    /// rational roots of higher degree polynomials with small coefficients.
    fn upgrade_low_degree(&mut self) {
        if !matches!(self.value, RootValue::Isolated) {
            return;
        }
        match self.poly.degree() {
            Some(1) => {
                let q = -self.poly.coeff(0) / self.poly.coeff(1);
                *self = Self::exact(q);
            }
            Some(2) => {
                let (a, b, c) = (self.poly.coeff(2), self.poly.coeff(1), self.poly.coeff(0));
                let disc = &b * &b - Rational::from_integer(4.into()) * &a * &c;
                if !disc.is_positive() {
                    return;
                }
                let two_a = Rational::from_integer(2.into()) * &a;
                for s in [1i64, -1] {
                    let base = -&b / &two_a;
                    let coef = Rational::from_integer(s.into()) / &two_a;
                    match QuadSurd::new(base, coef, &disc) {
                        Err(q) => {
                            if q > self.lo && q < self.hi {
                                *self = Self::exact(q);
                                return;
                            }
                        }
                        Ok(sd) => {
                            if sd.cmp_rational(&self.lo) == Ordering::Greater
                                && sd.cmp_rational(&self.hi) == Ordering::Less
                            {
                                self.value = RootValue::Surd(sd);
                                return;
                            }
                        }
                    }
                }
            }
            _ => {
                if let Some(q) = rational_root_in(&self.poly, &self.lo, &self.hi) {
                    *self = Self::exact(q);
                }
            }
        }
    }

    /// Squarefree polynomial the root is attached to.
    pub fn poly(&self) -> &UniPoly<Rational> {
        &self.poly
    }

    pub fn value(&self) -> &RootValue {
        &self.value
    }

    pub fn interval(&self) -> (&Rational, &Rational) {
        (&self.lo, &self.hi)
    }

    pub fn exact_value(&self) -> Option<&Rational> {
        match &self.value {
            RootValue::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn surd(&self) -> Option<&QuadSurd> {
        match &self.value {
            RootValue::Surd(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exact_value().is_some_and(|q| q.is_zero())
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    /// Bisects until the isolating interval is narrower than `width`.
    pub fn refined(&self, width: &Rational) -> RootHandle {
        let mut h = self.clone();
        if h.exact_value().is_some() {
            return h;
        }
        let ip = IntPoly::new(&h.poly);
        let hi_sign = ip.sign_at(&h.hi);
        while &(&h.hi - &h.lo) >= width {
            let mid = (&h.lo + &h.hi) * half();
            let s = ip.sign_at(&mid);
            if s == Ordering::Equal {
                return Self::exact(mid);
            }
            if s == hi_sign {
                h.hi = mid;
            } else {
                h.lo = mid;
            }
        }
        h
    }

    fn bisect_once(&mut self) {
        if self.exact_value().is_some() {
            return;
        }
        let w = self.width() * half();
        *self = self.refined(&w);
    }

    pub fn to_f64(&self) -> f64 {
        match &self.value {
            RootValue::Rational(q) => rational_to_f64(q),
            RootValue::Surd(s) => s.to_f64(),
            RootValue::Isolated => {
                let scale = rational_to_f64(&self.hi.abs()).max(1.0);
                let w = Rational::from_float(scale * 1e-18).unwrap_or_else(|| BigRational::new(1.into(), 1_000_000_000_000_000_000u64.into()));
                let r = self.refined(&w);
                rational_to_f64(&((&r.lo + &r.hi) * half()))
            }
        }
    }

    /// Exact sign of `g` evaluated at this root.
    pub fn sign_at(&self, g: &UniPoly<Rational>) -> Ordering {
        if g.degree().unwrap_or(0) == 0 {
            return sign(&g.coeff(0));
        }
        match &self.value {
            RootValue::Rational(q) => sign(&g.eval(q)),
            RootValue::Surd(s) => {
                let mut acc = s.from_rational_in(Rational::zero());
                for c in g.coeffs().iter().rev() {
                    acc = &(&acc * s) + c;
                }
                acc.signum()
            }
            RootValue::Isolated => {
                if g.div_rem(&self.poly).1.is_zero() {
                    return Ordering::Equal;
                }
                // Cheap enclosures settle the sign unless g vanishes at or
                // very near the root.
                let mut h = self.clone();
                for _ in 0..8 {
                    let (a, b) = enclose(g, &h.lo, &h.hi);
                    if a.is_positive() {
                        return Ordering::Greater;
                    }
                    if b.is_negative() {
                        return Ordering::Less;
                    }
                    h = h.refined(&(h.width() / Rational::from_integer(16.into())));
                    if let Some(q) = h.exact_value() {
                        return sign(&g.eval(q));
                    }
                }
                let common = self.poly.gcd(g);
                if common.degree().unwrap_or(0) >= 1
                    && sign(&common.eval(&self.lo)) != sign(&common.eval(&self.hi))
                {
                    return Ordering::Equal;
                }
                loop {
                    if descartes_count(g, &h.lo, &h.hi) == 0 {
                        let mid = (&h.lo + &h.hi) * half();
                        return sign(&g.eval(&mid));
                    }
                    h.bisect_once();
                    if let Some(q) = h.exact_value() {
                        return sign(&g.eval(q));
                    }
                }
            }
        }
    }

    /// Exact comparison `root ? q`.
    pub fn cmp_rational(&self, q: &Rational) -> Ordering {
        match &self.value {
            RootValue::Rational(r) => r.cmp(q),
            RootValue::Surd(s) => s.cmp_rational(q),
            RootValue::Isolated => {
                if q <= &self.lo {
                    Ordering::Greater
                } else if q >= &self.hi {
                    Ordering::Less
                } else {
                    self.sign_at(&UniPoly::linear_root(q.clone()))
                }
            }
        }
    }

    /// Exact comparison of two algebraic roots.
    pub fn cmp_root(&self, other: &RootHandle) -> Ordering {
        if let Some(q) = self.exact_value() {
            return other.cmp_rational(q).reverse();
        }
        if let Some(q) = other.exact_value() {
            return self.cmp_rational(q);
        }
        let common = self.poly.gcd(&other.poly);
        if common.degree().unwrap_or(0) >= 1 {
            let changes = |lo: &Rational, hi: &Rational| sign(&common.eval(lo)) != sign(&common.eval(hi));
            let jlo = (&self.lo).max(&other.lo);
            let jhi = (&self.hi).min(&other.hi);
            if changes(&self.lo, &self.hi)
                && changes(&other.lo, &other.hi)
                && jlo < jhi
                && changes(jlo, jhi)
            {
                return Ordering::Equal;
            }
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        loop {
            if let (Some(x), Some(y)) = (a.exact_value(), b.exact_value()) {
                return x.cmp(y);
            }
            if let Some(x) = a.exact_value() {
                return b.cmp_rational(x).reverse();
            }
            if let Some(y) = b.exact_value() {
                return a.cmp_rational(y);
            }
            if a.hi <= b.lo {
                return Ordering::Less;
            }
            if b.hi <= a.lo {
                return Ordering::Greater;
            }
            if a.width() >= b.width() {
                a.bisect_once();
            } else {
                b.bisect_once();
            }
        }
    }
}

impl Serialize for RootHandle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RootHandle", 5)?;
        st.serialize_field("poly", &self.poly)?;
        st.serialize_field("interval", &[format_rational(&self.lo), format_rational(&self.hi)])?;
        st.serialize_field("exact", &self.exact_value().map(format_rational))?;
        st.serialize_field("surd", &self.surd())?;
        st.serialize_field("approx", &self.to_f64())?;
        st.end()
    }
}

fn largest_in(p: &UniPoly<Rational>, lo: Rational, hi: Rational) -> Option<RootHandle> {
    let v = descartes_count(p, &lo, &hi);
    if v == 0 {
        return None;
    }
    if v == 1 {
        return Some(RootHandle::isolated(p, lo, hi));
    }
    let mid = (&lo + &hi) * half();
    if let Some(r) = largest_in(p, mid.clone(), hi) {
        return Some(r);
    }
    if p.eval(&mid).is_zero() {
        return Some(RootHandle::exact(mid));
    }
    largest_in(p, lo, mid)
}

fn all_in(p: &UniPoly<Rational>, lo: Rational, hi: Rational, out: &mut Vec<RootHandle>) {
    let v = descartes_count(p, &lo, &hi);
    if v == 0 {
        return;
    }
    if v == 1 {
        out.push(RootHandle::isolated(p, lo, hi));
        return;
    }
    let mid = (&lo + &hi) * half();
    all_in(p, lo, mid.clone(), out);
    if p.eval(&mid).is_zero() {
        out.push(RootHandle::exact(mid.clone()));
    }
    all_in(p, mid, hi, out);
}

/// Largest real root `>= 0` of `h`, or `None` when `h` has no nonnegative
/// root (or is the zero polynomial).
pub fn isolate_largest_nonneg_root(h: &UniPoly<Rational>) -> Option<RootHandle> {
    if h.is_zero() {
        return None;
    }
    let v = h.zero_root_multiplicity();
    let reduced = h.shift_down(v).squarefree_part();
    if reduced.degree().unwrap_or(0) >= 1 {
        let bound = cauchy_bound(&reduced);
        if let Some(r) = largest_in(&reduced, Rational::zero(), bound) {
            return Some(r);
        }
    }
    (v > 0).then(|| RootHandle::exact(Rational::zero()))
}

/// All real roots of `h` in the closed interval `[lo, hi]`, ascending.
pub fn isolate_roots_in(h: &UniPoly<Rational>, lo: &Rational, hi: &Rational) -> Result<Vec<RootHandle>, ArithError> {
    if h.is_zero() {
        return Err(ArithError::ZeroPolynomial);
    }
    let p = h.squarefree_part();
    let mut out = Vec::new();
    if lo > hi || p.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    if p.eval(lo).is_zero() {
        out.push(RootHandle::exact(lo.clone()));
    }
    if lo < hi {
        all_in(&p, lo.clone(), hi.clone(), &mut out);
        if p.eval(hi).is_zero() {
            out.push(RootHandle::exact(hi.clone()));
        }
    }
    Ok(out)
}

/// Locates `q >= 0` relative to the unique nonnegative root of `h`.
///
/// `h` must have a positive leading coefficient and all other coefficients
/// `<= 0`; by Descartes' rule it then has exactly one positive root (or only
/// the root 0 when `h` is a monomial), so the sign of `h(q)` decides the
/// comparison exactly.
pub fn sign_relative_to_root(h: &UniPoly<Rational>, q: &Rational) -> Result<RootSide, ArithError> {
    let Some(n) = h.degree().filter(|&n| n >= 1) else {
        return Err(ArithError::SignPattern("polynomial must have degree at least one".into()));
    };
    if !h.leading().is_positive() {
        return Err(ArithError::SignPattern("leading coefficient must be positive".into()));
    }
    if let Some(k) = h.coeffs()[..n].iter().position(|c| c.is_positive()) {
        return Err(ArithError::SignPattern(format!("coefficient of x^{k} is positive")));
    }
    if q.is_negative() {
        return Err(ArithError::NegativeQuery(format_rational(q)));
    }
    Ok(match sign(&h.eval(q)) {
        Ordering::Less => RootSide::Below,
        Ordering::Equal => RootSide::At,
        Ordering::Greater => RootSide::Above,
    })
}
