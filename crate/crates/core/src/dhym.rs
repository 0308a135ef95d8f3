//! Supercritical dHYM: central charge, complementary lifted angle, cotangent
//! factor classes and the Nakai-type test.
//!
//! Intersection numbers stay exact; only `arg` and `cot` are floating point.

use std::f64::consts::{FRAC_PI_2, PI};

use num_traits::Zero;
use serde::Serialize;

use crate::arith::serde_rational;
use crate::cones::{self, ConeError, ConeKind, Membership};
use crate::geometry::{ManifoldPresentation, SubvarietyCandidate};
use crate::jstab::{self, Completeness};
use crate::scalar::{binomial, rational_to_f64};
use crate::{Class, Error, FloatClass, Rational};

pub const DEFAULT_EPSILON: f64 = 1e-9;

/// `Z = ∫(β + iα)^n`, exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CentralCharge {
    #[serde(with = "serde_rational")]
    pub re: Rational,
    #[serde(with = "serde_rational")]
    pub im: Rational,
}

impl CentralCharge {
    pub fn to_f64(&self) -> (f64, f64) {
        (rational_to_f64(&self.re), rational_to_f64(&self.im))
    }
}

/// Real and imaginary parts of `∫_V (x + iy)^p` for `x`, `y` given as the
/// pair of powers `(i, j)` fed to `integrate`.
fn complex_power(
    p: usize,
    mut integrate: impl FnMut(usize, usize) -> Result<Rational, Error>,
) -> Result<(Rational, Rational), Error> {
    let mut re = Rational::zero();
    let mut im = Rational::zero();
    for k in 0..=p {
        let t = binomial::<Rational>(p, k) * integrate(p - k, k)?;
        match k % 4 {
            0 => re += t,
            1 => im += t,
            2 => re -= t,
            _ => im -= t,
        }
    }
    Ok((re, im))
}

pub fn central_charge(m: &ManifoldPresentation, alpha: &Class, beta: &Class) -> Result<CentralCharge, Error> {
    let n = m.dim();
    let (re, im) = complex_power(n, |i, k| Ok(m.tensor.powers(beta, i, alpha, k)?))?;
    if re.is_zero() && im.is_zero() {
        return Err(Error::ZeroCentralCharge);
    }
    Ok(CentralCharge { re, im })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DhymAngle {
    pub z: Option<CentralCharge>,
    pub z_re: f64,
    pub z_im: f64,
    pub phi_hat: f64,
    /// Within `ε` of `0`, `π/2` or `π`.
    pub marginal: bool,
}

fn near_special(phi: f64, eps: f64) -> bool {
    [0.0, FRAC_PI_2, PI].iter().any(|s| (phi - s).abs() < eps)
}

impl DhymAngle {
    /// An externally supplied angle, which must lie in `(0, π)`.
    pub fn given(phi_hat: f64, eps: f64) -> Result<Self, Error> {
        if !(phi_hat > 0.0 && phi_hat < PI) {
            return Err(Error::OutOfRange { name: "phi_hat", value: phi_hat.to_string(), range: "(0, pi)" });
        }
        Ok(DhymAngle { z: None, z_re: f64::NAN, z_im: f64::NAN, phi_hat, marginal: near_special(phi_hat, eps) })
    }

    pub fn cot(&self) -> f64 {
        cot(self.phi_hat)
    }
}

fn cot(x: f64) -> f64 {
    x.cos() / x.sin()
}

/// The representative of `nπ/2 − arg Z` modulo `2π` lying in `(0, π)`.
pub fn complementary_lifted_angle(n: usize, z: &CentralCharge, eps: f64) -> Result<DhymAngle, Error> {
    let (re, im) = z.to_f64();
    if re == 0.0 && im == 0.0 {
        return Err(Error::ZeroCentralCharge);
    }
    let phi = (n as f64 * FRAC_PI_2 - im.atan2(re)).rem_euclid(2.0 * PI);
    if !(phi > 0.0 && phi < PI) {
        return Err(Error::NotSupercritical(phi));
    }
    Ok(DhymAngle { z: Some(z.clone()), z_re: re, z_im: im, phi_hat: phi, marginal: near_special(phi, eps) })
}

/// Coefficients of `Re(x+iy)^p − cot(φ̂) Im(x+iy)^p`; entry `i` multiplies
/// `x^i y^{p−i}`.
pub fn dhym_polynomial(p: usize, phi_hat: f64) -> Vec<f64> {
    let c = cot(phi_hat);
    let mut out = vec![0.0; p + 1];
    for k in 0..=p {
        let b = rational_to_f64(&binomial::<Rational>(p, k));
        out[p - k] = match k % 4 {
            0 => b,
            1 => -c * b,
            2 => -b,
            _ => c * b,
        };
    }
    out
}

/// Coefficients of `∏_{l=0}^{p−1} (x − cot((φ̂+lπ)/p) y)`, same layout.
pub fn product_polynomial(p: usize, phi_hat: f64) -> Vec<f64> {
    // out[i] multiplies x^i y^{deg − i}
    let mut out = vec![1.0];
    for l in 0..p {
        let r = cot((phi_hat + l as f64 * PI) / p as f64);
        let mut next = vec![0.0; out.len() + 1];
        for (i, c) in out.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= r * c;
        }
        out = next;
    }
    out
}

/// `τ_p = α − cot(φ̂/p) β`.
pub fn tau(alpha: &Class, beta: &Class, phi_hat: f64, p: usize) -> FloatClass {
    alpha.to_f64().combine(&1.0, &beta.to_f64(), &-cot(phi_hat / p as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorClass {
    pub p: usize,
    pub cot: f64,
    pub class: FloatClass,
    pub cone: String,
    pub verdict: Option<Membership>,
    pub marginal: bool,
}

fn float_verdict(
    m: &ManifoldPresentation,
    kind: ConeKind,
    c: &FloatClass,
    eps: f64,
) -> Result<(Option<Membership>, bool), Error> {
    match cones::in_cone_f64(m, kind, c, eps) {
        Ok((v, marginal)) => Ok((Some(v), marginal)),
        Err(ConeError::MissingConeData(_)) => Ok((None, false)),
        Err(e) => Err(e.into()),
    }
}

/// `τ_p` for `p = 1..n−1` with verdicts for the `(p+1)`-modified cone.
pub fn dhym_factor_classes(
    m: &ManifoldPresentation,
    alpha: &Class,
    beta: &Class,
    phi_hat: f64,
    eps: f64,
) -> Result<Vec<FactorClass>, Error> {
    (1..m.dim())
        .map(|p| {
            let class = tau(alpha, beta, phi_hat, p);
            let kind = ConeKind::Modified(p + 1);
            let (verdict, marginal) = float_verdict(m, kind, &class, eps)?;
            Ok(FactorClass { p, cot: cot(phi_hat / p as f64), class, cone: kind.to_string(), verdict, marginal })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DhymValue {
    pub name: String,
    pub dim: usize,
    /// `∫_V Re(α+iβ)^p`
    #[serde(with = "serde_rational")]
    pub re: Rational,
    /// `∫_V Im(α+iβ)^p`
    #[serde(with = "serde_rational")]
    pub im: Rational,
    pub value: f64,
    pub product_value: f64,
    pub relative_error: f64,
    pub marginal: bool,
    pub destabilizing: bool,
}

/// Direct evaluation checked against the cotangent product form.
pub fn dhym_test(
    alpha: &Class,
    beta: &Class,
    phi_hat: f64,
    v: &SubvarietyCandidate,
    eps: f64,
) -> Result<DhymValue, Error> {
    let p = v.dim();
    let (re, im) = complex_power(p, |i, k| Ok(v.tensor.powers(alpha, i, beta, k)?))?;
    let c = cot(phi_hat);
    let (re_f, im_f) = (rational_to_f64(&re), rational_to_f64(&im));
    let value = re_f - c * im_f;
    let mut product_value = 0.0;
    let mut scale = 0.0;
    for (i, coeff) in product_polynomial(p, phi_hat).iter().enumerate() {
        let t = coeff * rational_to_f64(&v.tensor.powers(alpha, i, beta, p - i)?);
        product_value += t;
        scale += t.abs();
    }
    let scale = scale.max(re_f.abs() + (c * im_f).abs());
    let relative_error = if scale == 0.0 { 0.0 } else { (value - product_value).abs() / scale };
    if relative_error > eps {
        return Err(Error::FactorizationMismatch { name: v.name.clone(), relative_error });
    }
    let marginal = value.abs() < eps * scale.max(1.0);
    Ok(DhymValue {
        name: v.name.clone(),
        dim: p,
        destabilizing: !marginal && value < 0.0,
        re,
        im,
        value,
        product_value,
        relative_error,
        marginal,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DhymHypotheses {
    pub n: usize,
    /// `n <= 4`
    pub covered_by_theorem: bool,
    pub window_ok: bool,
    pub beta_kahler: bool,
    pub alpha_kahler: bool,
    pub factor_classes: Vec<FactorClass>,
    /// `cot((φ̂+lπ)/p) < 0` for every `l >= 1`, `p <= n−1`.
    pub auxiliary_factors_negative: bool,
    /// `τ_2` verdict for the big cone when `n = 3`.
    pub tau2_big: Option<Membership>,
    pub failures: Vec<String>,
}

impl DhymHypotheses {
    pub fn hold(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn dhym_hypothesis_check(
    m: &ManifoldPresentation,
    alpha: &Class,
    beta: &Class,
    angle: &DhymAngle,
    eps: f64,
) -> Result<DhymHypotheses, Error> {
    let n = m.dim();
    let phi = angle.phi_hat;
    let mut failures = Vec::new();
    let covered_by_theorem = n <= 4;
    if !covered_by_theorem {
        failures.push(format!("dimension {n} is not covered by the theorem"));
    }
    let window_ok = if n == 4 { phi > FRAC_PI_2 + eps && phi < PI } else { phi > 0.0 && phi < PI };
    if !window_ok {
        failures.push(format!("phi_hat = {phi} is outside the admissible window"));
    }
    let kahler = |c: &Class| cones::in_cone(m, ConeKind::Kahler, c).map(|v| v == Membership::Inside);
    let beta_kahler = kahler(beta)?;
    if !beta_kahler {
        failures.push("beta is not Kahler".into());
    }
    let alpha_kahler = kahler(alpha)?;
    let factor_classes = dhym_factor_classes(m, alpha, beta, phi, eps)?;
    for f in &factor_classes {
        match f.verdict {
            Some(Membership::Inside) if !f.marginal => {}
            Some(v) => failures.push(format!(
                "tau_{} is {}{} for {}",
                f.p,
                serde_json::to_value(v).ok().and_then(|s| s.as_str().map(str::to_owned)).unwrap_or_default(),
                if f.marginal { " (marginal)" } else { "" },
                f.cone
            )),
            None => failures.push(format!("no cone data for {}", f.cone)),
        }
    }
    let auxiliary_factors_negative =
        (1..n).all(|p| (1..p).all(|l| cot((phi + l as f64 * PI) / p as f64) < -eps));
    if !auxiliary_factors_negative {
        failures.push("some auxiliary factor has a nonnegative cotangent".into());
    }
    let tau2_big = if n == 3 {
        let (v, marginal) = float_verdict(m, ConeKind::Big, &tau(alpha, beta, phi, 2), eps)?;
        v.map(|v| if marginal && v == Membership::Inside { Membership::Boundary } else { v })
    } else {
        None
    };
    Ok(DhymHypotheses {
        n,
        covered_by_theorem,
        window_ok,
        beta_kahler,
        alpha_kahler,
        factor_classes,
        auxiliary_factors_negative,
        tau2_big,
        failures,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DhymStatus {
    Stable,
    Unstable,
    /// Some value is within tolerance of zero and none is clearly negative.
    Marginal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DhymVerdict {
    pub angle: DhymAngle,
    pub epsilon: f64,
    pub candidates: Vec<DhymValue>,
    pub dest: Vec<String>,
    pub marginal: Vec<String>,
    pub status: DhymStatus,
    pub hypotheses: DhymHypotheses,
    /// The finiteness statement for threefolds requires a Kähler `α`.
    pub threefold_theorem_applicable: Option<bool>,
    pub completeness: Completeness,
}

/// Full dHYM analysis; `phi_hat = None` derives the angle from `Z`.
pub fn classify_dhym(
    m: &ManifoldPresentation,
    alpha: &Class,
    beta: &Class,
    phi_hat: Option<f64>,
    eps: f64,
) -> Result<DhymVerdict, Error> {
    if m.candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let angle = match phi_hat {
        Some(phi) => DhymAngle::given(phi, eps)?,
        None => complementary_lifted_angle(m.dim(), &central_charge(m, alpha, beta)?, eps)?,
    };
    let candidates: Vec<DhymValue> = m
        .candidates
        .iter()
        .map(|v| dhym_test(alpha, beta, angle.phi_hat, v, eps))
        .collect::<Result<_, _>>()?;
    let dest: Vec<String> = candidates.iter().filter(|v| v.destabilizing).map(|v| v.name.clone()).collect();
    let marginal: Vec<String> = candidates.iter().filter(|v| v.marginal).map(|v| v.name.clone()).collect();
    let status = if !dest.is_empty() {
        DhymStatus::Unstable
    } else if !marginal.is_empty() {
        DhymStatus::Marginal
    } else {
        DhymStatus::Stable
    };
    let hypotheses = dhym_hypothesis_check(m, alpha, beta, &angle, eps)?;
    let threefold_theorem_applicable = (m.dim() == 3).then(|| {
        hypotheses.alpha_kahler && hypotheses.beta_kahler && hypotheses.tau2_big == Some(Membership::Inside)
    });
    Ok(DhymVerdict {
        completeness: jstab::completeness(m, "dhym", alpha, beta),
        angle,
        epsilon: eps,
        candidates,
        dest,
        marginal,
        status,
        hypotheses,
        threefold_theorem_applicable,
    })
}

/// `∫_V Re(α+iβ)^p`, the exact test value at `φ̂ = π/2`.
pub fn exact_right_angle_value(alpha: &Class, beta: &Class, v: &SubvarietyCandidate) -> Result<Rational, Error> {
    let (re, _) = complex_power(v.dim(), |i, k| Ok(v.tensor.powers(alpha, i, beta, k)?))?;
    Ok(re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::geometry::{blowup_pn, wu_bundle};
    use std::f64::consts::FRAC_PI_4;

    fn c2(a: Rational, b: Rational) -> Class {
        Class::new(vec![a, b])
    }

    #[test]
    fn central_charge_examples() {
        let m = wu_bundle(1, &[1, 3]).unwrap();
        let a = c2(rat(1, 1), rat(1, 1));
        let z = central_charge(&m, &a, &a).unwrap();
        assert_eq!((z.re, z.im), (rat(-14, 1), rat(14, 1)));
        let z0 = central_charge(&m, &Class::zero(2), &a).unwrap();
        assert_eq!((z0.re, z0.im), (rat(7, 1), rat(0, 1)));
        // blow-up of P²: H² = 1, E² = −1, H·E = 0
        let bl = blowup_pn(2).unwrap();
        let z = central_charge(&bl, &c2(rat(1, 1), rat(-1, 2)), &c2(rat(1, 1), rat(-1, 4))).unwrap();
        // β² − α² + 2i αβ with β² = 15/16, α² = 3/4, αβ = 7/8
        assert_eq!((z.re, z.im), (rat(3, 16), rat(7, 4)));
    }

    #[test]
    fn angles() {
        let z = CentralCharge { re: rat(-14, 1), im: rat(14, 1) };
        let a = complementary_lifted_angle(3, &z, DEFAULT_EPSILON).unwrap();
        assert!((a.phi_hat - 3.0 * FRAC_PI_4).abs() < 1e-15);
        let z = CentralCharge { re: rat(5, 1), im: rat(0, 1) };
        let a = complementary_lifted_angle(1, &z, DEFAULT_EPSILON).unwrap();
        assert!((a.phi_hat - FRAC_PI_2).abs() < 1e-15 && a.marginal);
        // 3π/2 − 0 has no representative in (0, π)
        assert!(matches!(complementary_lifted_angle(3, &z, 1e-9), Err(Error::NotSupercritical(_))));
        assert!(DhymAngle::given(PI, 1e-9).is_err());
    }

    #[test]
    fn factor_classes() {
        let a = c2(rat(2, 1), rat(3, 1));
        let b = c2(rat(1, 1), rat(1, 1));
        let t1 = tau(&a, &b, FRAC_PI_2, 1);
        assert!((t1.coords()[0] - 2.0).abs() < 1e-15 && (t1.coords()[1] - 3.0).abs() < 1e-15);
        for (phi, p) in [(FRAC_PI_2, 2), (3.0 * FRAC_PI_4, 3)] {
            let t = tau(&a, &b, phi, p);
            assert!((t.coords()[0] - 1.0).abs() < 1e-12 && (t.coords()[1] - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn polynomial_forms_agree() {
        for p in 1..=4 {
            for phi in [0.3, 1.0, FRAC_PI_2, 2.5, 3.1] {
                let d = dhym_polynomial(p, phi);
                let q = product_polynomial(p, phi);
                let s: f64 = d.iter().map(|x| x.abs()).sum();
                for (x, y) in d.iter().zip(&q) {
                    assert!((x - y).abs() <= 1e-12 * s, "p={p} phi={phi}");
                }
            }
        }
        let d = dhym_polynomial(2, FRAC_PI_2);
        assert_eq!(d[2], 1.0);
        assert_eq!(d[0], -1.0);
    }

    #[test]
    fn right_angle_quadratic_is_exact() {
        let m = wu_bundle(1, &[1, 3]).unwrap();
        let a = c2(rat(1, 1), rat(1, 1));
        let b = c2(rat(1, 1), rat(1, 10));
        let s = m.candidate("S").unwrap();
        let exact = exact_right_angle_value(&a, &b, s).unwrap();
        let expect = s.tensor.powers(&a, 2, &b, 0).unwrap() - s.tensor.powers(&a, 0, &b, 2).unwrap();
        assert_eq!(exact, expect);
        let v = dhym_test(&a, &b, FRAC_PI_2, s, DEFAULT_EPSILON).unwrap();
        assert!((v.value - rational_to_f64(&expect)).abs() < 1e-12);
    }

    #[test]
    fn wu_cross_evaluation() {
        let m = wu_bundle(1, &[1, 3]).unwrap();
        let a = c2(rat(1, 1), rat(1, 1));
        let b = c2(rat(1, 1), rat(1, 10));
        let angle = complementary_lifted_angle(3, &central_charge(&m, &a, &b).unwrap(), 1e-9).unwrap();
        let v = dhym_test(&a, &b, angle.phi_hat, m.candidate("S").unwrap(), 1e-9).unwrap();
        assert!(v.relative_error < 1e-9);
        let scaled = complementary_lifted_angle(
            3,
            &central_charge(&m, &a.scaled(&rat(5, 2)), &b.scaled(&rat(5, 2))).unwrap(),
            1e-9,
        )
        .unwrap();
        assert!((scaled.phi_hat - angle.phi_hat).abs() < 1e-12);
    }

    #[test]
    fn hypothesis_windows() {
        let m4 = wu_bundle(1, &[1, 2, 3]).unwrap();
        let one = Class::new(vec![rat(1, 1), rat(1, 1)]);
        let h = dhym_hypothesis_check(&m4, &one, &one, &DhymAngle::given(PI / 3.0, 1e-9).unwrap(), 1e-9).unwrap();
        assert!(!h.window_ok && !h.auxiliary_factors_negative);
        let m3 = wu_bundle(1, &[1, 3]).unwrap();
        let h = dhym_hypothesis_check(&m3, &one, &one, &DhymAngle::given(3.0 * FRAC_PI_4, 1e-9).unwrap(), 1e-9).unwrap();
        assert!(h.window_ok);
        let bl = blowup_pn(2).unwrap();
        let a = c2(rat(1, 1), rat(-1, 2));
        let h = dhym_hypothesis_check(&bl, &a, &a, &DhymAngle::given(0.2, 1e-9).unwrap(), 1e-9).unwrap();
        assert!(h.window_ok);
    }

    #[test]
    fn classify_runs() {
        let m = wu_bundle(1, &[1, 3]).unwrap();
        let a = c2(rat(1, 1), rat(1, 1));
        let v = classify_dhym(&m, &a, &a, None, 1e-9).unwrap();
        assert_eq!(v.threefold_theorem_applicable.is_some(), true);
        assert_eq!(v.candidates.len(), m.candidates.len());
    }
}
