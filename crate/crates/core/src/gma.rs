//! Generalized Monge–Ampère data: `Q_p`, the cohomological normalization,
//! factor classes and the Nakai-type test.

use std::cmp::Ordering;

use num_complex::Complex;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{
    divide_out_linear, format_rational, isolate_largest_nonneg_root, serde_rational, serde_rational_vec,
    LinearFactorization, RootHandle, UniPoly,
};
use crate::cones::{self, ConeError, ConeKind, Membership};
use crate::geometry::{ManifoldPresentation, SubvarietyCandidate};
use crate::jstab::{self, Completeness, Status};
use crate::scalar::{factorial, Scalar};
use crate::{Class, Error, HomogPoly, Rational};

/// `c_1..c_{n−1} >= 0` and the constant top coefficient `c_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GmaCoefficients {
    #[serde(with = "serde_rational_vec")]
    pub c: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub c_top: Rational,
}

impl GmaCoefficients {
    /// Dimension `n` of the manifold the coefficients belong to.
    pub fn dim(&self) -> usize {
        self.c.len() + 1
    }

    /// Validates `c` and solves the cohomological condition for `c_n`.
    pub fn solved(m: &ManifoldPresentation, alpha: &Class, beta: &Class, c: &[Rational]) -> Result<Self, Error> {
        let c_top = solve_top_constant(m, alpha, beta, c)?;
        let out = GmaCoefficients { c: c.to_vec(), c_top };
        if out.c.iter().all(|x| x.is_zero()) && out.c_top.is_zero() {
            return Err(Error::Coefficients("all coefficients vanish".into()));
        }
        Ok(out)
    }

    /// `c_1 = 1/μ_{α,β}`, all other `c_k = 0`: the J-equation.
    pub fn j_equation(m: &ManifoldPresentation, alpha: &Class, beta: &Class) -> Result<Self, Error> {
        let mu = jstab::total_slope(m, alpha, beta)?;
        if mu.is_zero() {
            return Err(Error::DivisionByZero("mu"));
        }
        let mut c = vec![Rational::zero(); m.dim() - 1];
        c[0] = Rational::one() / mu;
        Self::solved(m, alpha, beta, &c)
    }
}

fn check_coeffs(c: &[Rational]) -> Result<(), Error> {
    if c.is_empty() {
        return Err(Error::Coefficients("need c_1..c_(n-1) with n >= 2".into()));
    }
    if let Some((k, x)) = c.iter().enumerate().find(|(_, x)| x.is_negative()) {
        return Err(Error::Coefficients(format!("c_{} = {} is negative", k + 1, format_rational(x))));
    }
    Ok(())
}

fn check_dim(m: &ManifoldPresentation, c: &[Rational]) -> Result<(), Error> {
    if c.len() + 1 != m.dim() {
        return Err(Error::Coefficients(format!(
            "expected {} coefficients c_1..c_{} for a manifold of dimension {}, got {}",
            m.dim() - 1,
            m.dim() - 1,
            m.dim(),
            c.len()
        )));
    }
    Ok(())
}

/// `Q_p(x, y) = x^p/p! − Σ_{k=1}^{p} c_k x^{p−k} y^k/(p−k)!`, the degree `p`
/// part of `exp(x)(1 − P(y))`. Requires `1 <= p <= c.len()`.
pub fn q_polynomial<T: Scalar>(p: usize, c: &[T]) -> Result<crate::arith::BiHomogPoly<T>, Error> {
    if p == 0 || p > c.len() {
        return Err(Error::OutOfRange { name: "p", value: p.to_string(), range: "1..=n-1" });
    }
    let mut coeffs = vec![T::zero(); p + 1];
    coeffs[p] = T::one() / factorial::<T>(p);
    for k in 1..=p {
        coeffs[p - k] = T::zero() - c[k - 1].clone() / factorial::<T>(p - k);
    }
    Ok(crate::arith::BiHomogPoly::new(p, coeffs))
}

/// `∫α^n/n! − Σ c_k/(n−k)! ∫β^kα^{n−k} − c_n ∫β^n`
pub fn cohomological_residual(
    m: &ManifoldPresentation,
    alpha: &Class,
    beta: &Class,
    coeffs: &GmaCoefficients,
) -> Result<Rational, Error> {
    let n = m.dim();
    let mut r = m.tensor.powers(alpha, n, beta, 0)? / factorial::<Rational>(n);
    for (i, ck) in coeffs.c.iter().enumerate() {
        let k = i + 1;
        r -= ck * m.tensor.powers(alpha, n - k, beta, k)? / factorial::<Rational>(n - k);
    }
    r -= &coeffs.c_top * m.tensor.powers(alpha, 0, beta, n)?;
    Ok(r)
}

/// The unique `c_n` satisfying the cohomological condition.
pub fn solve_top_constant(m: &ManifoldPresentation, alpha: &Class, beta: &Class, c: &[Rational]) -> Result<Rational, Error> {
    check_coeffs(c)?;
    check_dim(m, c)?;
    let n = m.dim();
    let top = m.tensor.powers(alpha, 0, beta, n)?;
    if top.is_zero() {
        return Err(Error::ZeroBetaVolume);
    }
    let partial = GmaCoefficients { c: c.to_vec(), c_top: Rational::zero() };
    let c_top = cohomological_residual(m, alpha, beta, &partial)? / top;
    let full = GmaCoefficients { c: c.to_vec(), c_top };
    debug_assert!(cohomological_residual(m, alpha, beta, &full)?.is_zero());
    Ok(full.c_top)
}

/// Factor data at dimension `p`: `Q_p = (x − r_p y)·Q̃_p`.
#[derive(Debug, Clone, Serialize)]
pub struct FactorEntry {
    pub p: usize,
    /// `h_p(x) = Q_p(x, 1)`
    pub h: UniPoly<Rational>,
    pub root: RootHandle,
    pub factorization: LinearFactorization,
}

impl FactorEntry {
    /// `τ_p = α − r_p β` in floating point.
    pub fn tau_f64(&self, alpha: &Class, beta: &Class) -> crate::FloatClass {
        let r = self.root.to_f64();
        alpha.to_f64().combine(&1.0, &beta.to_f64(), &-r)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorData {
    pub entries: Vec<FactorEntry>,
}

impl FactorData {
    pub fn entry(&self, p: usize) -> Option<&FactorEntry> {
        self.entries.get(p.checked_sub(1)?)
    }
}

/// Factor roots `r_p` and quotients `Q̃_p` for `p = 1..n−1`, with
/// certified nonnegativity and `r_p <= r_{p+1}` checked exactly.
pub fn factorize(c: &[Rational]) -> Result<FactorData, Error> {
    check_coeffs(c)?;
    let mut entries: Vec<FactorEntry> = Vec::with_capacity(c.len());
    for p in 1..=c.len() {
        let q = q_polynomial(p, c)?;
        let h = q.dehomogenize();
        let root = isolate_largest_nonneg_root(&h)
            .ok_or_else(|| Error::Coefficients(format!("h_{p} has no nonnegative root")))?;
        let factorization = divide_out_linear(&q, &root)?;
        if let Some(prev) = entries.last() {
            // h_{p} is negative strictly between 0 and r_p, so the sign of
            // h_p(r_{p−1}) locates r_{p−1}.
            match prev.root.sign_at(&h) {
                Ordering::Greater => return Err(Error::NotMonotone { p: p - 1 }),
                Ordering::Equal if !root.is_zero() => return Err(Error::NotMonotone { p: p - 1 }),
                _ => {}
            }
        }
        entries.push(FactorEntry { p, h, root, factorization });
    }
    Ok(FactorData { entries })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GmaValue {
    pub name: String,
    pub dim: usize,
    #[serde(with = "serde_rational")]
    pub value: Rational,
    pub destabilizing: bool,
}

/// `∫_V Q_p(α, β)` for `p = dim V`, by direct contraction.
pub fn gma_test(
    alpha: &Class,
    beta: &Class,
    c: &[Rational],
    v: &SubvarietyCandidate,
) -> Result<GmaValue, Error> {
    check_coeffs(c)?;
    let p = v.dim();
    let q: HomogPoly = q_polynomial(p, c)?;
    let mut value = Rational::zero();
    for (i, qi) in q.coeffs().iter().enumerate() {
        if !qi.is_zero() {
            value += qi * v.tensor.powers(alpha, i, beta, p - i)?;
        }
    }
    Ok(GmaValue { name: v.name.clone(), dim: p, destabilizing: !value.is_positive(), value })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorConeVerdict {
    pub p: usize,
    pub r_p: f64,
    pub cone: String,
    /// `None` when the presentation has no data for the cone.
    pub verdict: Option<Membership>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GmaVerdict {
    pub coefficients: GmaCoefficients,
    pub candidates: Vec<GmaValue>,
    pub dest: Vec<String>,
    pub status: Status,
    pub completeness: Completeness,
    pub factor_cones: Vec<FactorConeVerdict>,
    pub factors: FactorData,
}

/// Whether `τ_p = α − r_p β` lies in the `(p+1)`-modified Kähler cone, for
/// each `p`, decided exactly.
pub fn factor_cone_verdicts(
    m: &ManifoldPresentation,
    alpha: &Class,
    beta: &Class,
    factors: &FactorData,
) -> Result<Vec<FactorConeVerdict>, Error> {
    factors
        .entries
        .iter()
        .map(|e| {
            let kind = ConeKind::Modified(e.p + 1);
            let h = (!e.root.is_zero()).then_some(&e.h);
            let verdict = match cones::in_cone_root(m, kind, alpha, beta, &e.root, h) {
                Ok(v) => Some(v),
                Err(ConeError::MissingConeData(_)) => None,
                Err(err) => return Err(err.into()),
            };
            Ok(FactorConeVerdict { p: e.p, r_p: e.root.to_f64(), cone: kind.to_string(), verdict })
        })
        .collect()
}

pub fn classify_gma(m: &ManifoldPresentation, alpha: &Class, beta: &Class, c: &[Rational]) -> Result<GmaVerdict, Error> {
    if m.candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let coefficients = GmaCoefficients::solved(m, alpha, beta, c)?;
    let candidates: Vec<GmaValue> =
        m.candidates.iter().map(|v| gma_test(alpha, beta, c, v)).collect::<Result<_, _>>()?;
    let dest = candidates.iter().filter(|v| v.destabilizing).map(|v| v.name.clone()).collect();
    let min = candidates.iter().map(|v| v.value.clone()).min().expect("nonempty");
    let factors = factorize(c)?;
    Ok(GmaVerdict {
        factor_cones: factor_cone_verdicts(m, alpha, beta, &factors)?,
        coefficients,
        status: Status::from_sign(&min),
        completeness: jstab::completeness(m, "gma", alpha, beta),
        candidates,
        dest,
        factors,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct InverseHessian {
    pub k: usize,
    #[serde(with = "serde_rational")]
    pub kappa: Rational,
    pub coefficients: GmaCoefficients,
    /// `(p, κ_p = p!κ/(p−k)!)` for `p = k..n−1`.
    pub kappa_p: Vec<(usize, String)>,
    /// `r_p = κ_p^{1/k}` for `p = k..n−1`.
    pub roots: Vec<RootHandle>,
}

/// `Θ = κθ^k` with `κ` fixed by the cohomological condition:
/// `κ = (n−k)! ∫αⁿ / (n! ∫β^k α^{n−k})`.
pub fn inverse_hessian(m: &ManifoldPresentation, alpha: &Class, beta: &Class, k: usize) -> Result<InverseHessian, Error> {
    let n = m.dim();
    if k == 0 || k >= n {
        return Err(Error::OutOfRange { name: "k", value: k.to_string(), range: "1..=n-1" });
    }
    let den = factorial::<Rational>(n) * m.tensor.powers(alpha, n - k, beta, k)?;
    if den.is_zero() {
        return Err(Error::DivisionByZero("integral of beta^k alpha^(n-k)"));
    }
    let kappa = factorial::<Rational>(n - k) * m.tensor.powers(alpha, n, beta, 0)? / den;
    let mut c = vec![Rational::zero(); n - 1];
    c[k - 1] = kappa.clone();
    let coefficients = GmaCoefficients::solved(m, alpha, beta, &c)?;
    debug_assert!(coefficients.c_top.is_zero());
    let factors = factorize(&c)?;
    let mut kappa_p = Vec::new();
    let mut roots = Vec::new();
    for p in k..n {
        let kp = factorial::<Rational>(p) * &kappa / factorial::<Rational>(p - k);
        let root = factors.entry(p).expect("entry").root.clone();
        let check = &UniPoly::monomial(Rational::one(), k) - &UniPoly::constant(kp.clone());
        debug_assert_eq!(root.sign_at(&check), Ordering::Equal);
        kappa_p.push((p, format_rational(&kp)));
        roots.push(root);
    }
    Ok(InverseHessian { k, kappa, coefficients, kappa_p, roots })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZDatumCoefficients<T> {
    /// `b_k = Im(conj(Z)ρ_k) / Im(conj(Z)ρ_0)` for `k = 1..`
    pub b: Vec<T>,
    /// Whether every `b_k < 0`.
    pub all_negative: bool,
}

/// Raw coefficients of the gMA equation attached to a rank one stability
/// datum; no sign normalization is applied.
pub fn from_z_datum<T: Scalar>(z: &Complex<T>, rho: &[Complex<T>]) -> Result<ZDatumCoefficients<T>, Error> {
    let im_conj = |w: &Complex<T>| z.re.clone() * w.im.clone() - z.im.clone() * w.re.clone();
    let rho0 = rho.first().ok_or(Error::DivisionByZero("empty stability vector"))?;
    let den = im_conj(rho0);
    if den.is_zero() {
        return Err(Error::DivisionByZero("Im(conj(Z) rho_0)"));
    }
    let b: Vec<T> = rho[1..].iter().map(|w| im_conj(w) / den.clone()).collect();
    let all_negative = b.iter().all(|x| x.is_negative());
    Ok(ZDatumCoefficients { b, all_negative })
}
