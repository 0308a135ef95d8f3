//! Polyhedral cone data, exact membership, projection onto the nef boundary
//! and the modified-Kähler hypotheses.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{serde_rational, sign_relative_to_root, RootHandle, RootSide, UniPoly};
use crate::geometry::{CohClass, ManifoldPresentation};
use crate::{jstab, Class, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConeError {
    #[error("missing cone data for {0}")]
    MissingConeData(ConeKind),
    #[error("unknown cone kind {0:?}")]
    UnknownKind(String),
    #[error("class has {got} coordinates but the basis has {expected}")]
    ClassLength { expected: usize, got: usize },
    #[error("{0} is not in the Kähler cone")]
    NotKahler(&'static str),
    #[error("alpha and beta are proportional; the projection ray is not unique")]
    Proportional,
    #[error("the path alpha - k beta never leaves the nef cone")]
    NoNefBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConeKind {
    Kahler,
    Nef,
    Pseff,
    Big,
    /// The `p`-modified Kähler cone; `Modified(1)` is the Kähler cone and
    /// `Modified(n)` the big cone.
    Modified(usize),
}

impl fmt::Display for ConeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConeKind::Kahler => f.write_str("kahler"),
            ConeKind::Nef => f.write_str("nef"),
            ConeKind::Pseff => f.write_str("pseff"),
            ConeKind::Big => f.write_str("big"),
            ConeKind::Modified(p) => write!(f, "modified({p})"),
        }
    }
}

impl FromStr for ConeKind {
    type Err = ConeError;

    fn from_str(s: &str) -> Result<Self, ConeError> {
        let t = s.trim().to_ascii_lowercase();
        let kind = match t.as_str() {
            "kahler" | "kähler" => ConeKind::Kahler,
            "nef" => ConeKind::Nef,
            "pseff" | "psef" => ConeKind::Pseff,
            "big" => ConeKind::Big,
            _ => {
                let p = t
                    .strip_prefix("modified")
                    .map(|r| r.trim_matches(|c: char| c == '(' || c == ')' || c == ':' || c == '='))
                    .and_then(|r| r.parse::<usize>().ok())
                    .filter(|&p| p >= 1)
                    .ok_or_else(|| ConeError::UnknownKind(s.to_string()))?;
                ConeKind::Modified(p)
            }
        };
        Ok(kind)
    }
}

/// `Σ coeffs[i]·x_i > 0` (strict) or `>= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearIneq {
    #[serde(with = "crate::arith::serde_rational_vec")]
    pub coeffs: Vec<Rational>,
    pub strict: bool,
}

impl LinearIneq {
    pub fn eval(&self, c: &Class) -> Rational {
        self.coeffs.iter().zip(c.coords()).fold(Rational::zero(), |acc, (a, x)| acc + a * x)
    }

    pub fn eval_f64(&self, c: &CohClass<f64>) -> f64 {
        self.coeffs.iter().zip(c.coords()).map(|(a, x)| crate::scalar::rational_to_f64(a) * x).sum()
    }

    pub fn holds(&self, c: &Class) -> bool {
        let v = self.eval(c);
        if self.strict {
            v.is_positive()
        } else {
            !v.is_negative()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeDescription {
    pub kind: ConeKind,
    pub ineqs: Vec<LinearIneq>,
}

impl ConeDescription {
    pub fn new(kind: ConeKind, ineqs: Vec<LinearIneq>) -> Self {
        ConeDescription { kind, ineqs }
    }

    /// Whether `c` satisfies every inequality, honouring strictness.
    pub fn contains(&self, c: &Class) -> bool {
        self.ineqs.iter().all(|l| l.holds(c))
    }
}

#[derive(Serialize, Deserialize)]
struct ConeDocument {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<usize>,
    ineqs: Vec<LinearIneq>,
}

impl Serialize for ConeDescription {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (kind, p) = match self.kind {
            ConeKind::Modified(p) => ("modified".to_string(), Some(p)),
            k => (k.to_string(), None),
        };
        ConeDocument { kind, p, ineqs: self.ineqs.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConeDescription {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let doc = ConeDocument::deserialize(d)?;
        let kind = match (doc.kind.as_str(), doc.p) {
            ("modified", Some(p)) if p >= 1 => ConeKind::Modified(p),
            ("modified", _) => return Err(D::Error::custom("modified cone needs \"p\" >= 1")),
            (k, _) => k.parse().map_err(D::Error::custom)?,
        };
        Ok(ConeDescription { kind, ineqs: doc.ineqs })
    }
}

/// Three-way position relative to a polyhedral cone: interior, boundary or
/// outside of the closed cone cut out by the inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

impl Membership {
    fn from_signs(signs: impl IntoIterator<Item = Ordering>) -> Self {
        let mut on_boundary = false;
        for s in signs {
            match s {
                Ordering::Less => return Membership::Outside,
                Ordering::Equal => on_boundary = true,
                Ordering::Greater => {}
            }
        }
        if on_boundary {
            Membership::Boundary
        } else {
            Membership::Inside
        }
    }
}

/// The cone of the given kind, using `Modified(1) = Kähler` and
/// `Modified(n) = big` when only one of each pair is listed.
pub fn find_cone(m: &ManifoldPresentation, kind: ConeKind) -> Result<&ConeDescription, ConeError> {
    let n = m.dim();
    let alias = match kind {
        ConeKind::Kahler => Some(ConeKind::Modified(1)),
        ConeKind::Modified(1) => Some(ConeKind::Kahler),
        ConeKind::Big => Some(ConeKind::Modified(n)),
        ConeKind::Modified(p) if p == n => Some(ConeKind::Big),
        _ => None,
    };
    m.cones
        .iter()
        .find(|c| c.kind == kind)
        .or_else(|| alias.and_then(|a| m.cones.iter().find(|c| c.kind == a)))
        .ok_or(ConeError::MissingConeData(kind))
}

fn check_len(m: &ManifoldPresentation, c: &[impl Sized]) -> Result<(), ConeError> {
    if c.len() != m.rank() {
        return Err(ConeError::ClassLength { expected: m.rank(), got: c.len() });
    }
    Ok(())
}

/// Exact membership verdict.
pub fn in_cone(m: &ManifoldPresentation, kind: ConeKind, c: &Class) -> Result<Membership, ConeError> {
    check_len(m, c.coords())?;
    let cone = find_cone(m, kind)?;
    Ok(Membership::from_signs(cone.ineqs.iter().map(|l| l.eval(c).cmp(&Rational::zero()))))
}

/// Floating-point membership; values within `eps` of zero count as zero
/// and set the returned marginal flag.
pub fn in_cone_f64(
    m: &ManifoldPresentation,
    kind: ConeKind,
    c: &CohClass<f64>,
    eps: f64,
) -> Result<(Membership, bool), ConeError> {
    check_len(m, c.coords())?;
    let cone = find_cone(m, kind)?;
    let mut marginal = false;
    let signs: Vec<Ordering> = cone
        .ineqs
        .iter()
        .map(|l| {
            let v = l.eval_f64(c);
            if v.abs() < eps {
                marginal = true;
                Ordering::Equal
            } else if v > 0.0 {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        })
        .collect();
    Ok((Membership::from_signs(signs), marginal))
}

/// Exact verdict for `α − r·β` where `r` is an algebraic root.
///
/// When `h` is given, it must have the single-sign-change pattern of
/// [`sign_relative_to_root`] with `r` as its unique nonnegative root; the
/// comparisons then reduce to evaluating `h` at rationals.
pub fn in_cone_root(
    m: &ManifoldPresentation,
    kind: ConeKind,
    alpha: &Class,
    beta: &Class,
    r: &RootHandle,
    h: Option<&UniPoly<Rational>>,
) -> Result<Membership, ConeError> {
    check_len(m, alpha.coords())?;
    check_len(m, beta.coords())?;
    let cone = find_cone(m, kind)?;
    let signs = cone.ineqs.iter().map(|l| {
        let la = l.eval(alpha);
        let lb = l.eval(beta);
        if lb.is_zero() {
            return la.cmp(&Rational::zero());
        }
        // ℓ(α) − r ℓ(β) = ℓ(β)·(q − r)
        let q = &la / &lb;
        let q_vs_r = match h.map(|h| sign_relative_to_root(h, &q)) {
            Some(Ok(RootSide::Below)) => Ordering::Less,
            Some(Ok(RootSide::At)) => Ordering::Equal,
            Some(Ok(RootSide::Above)) => Ordering::Greater,
            _ => r.cmp_rational(&q).reverse(),
        };
        if lb.is_positive() {
            q_vs_r
        } else {
            q_vs_r.reverse()
        }
    });
    Ok(Membership::from_signs(signs))
}

/// The nef, non-Kähler class on the ray `α − k·β`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Projection {
    /// `η`, scaled so that its largest absolute coordinate is 1.
    pub eta: Class,
    /// `k` with `η ∝ α − k·β`.
    #[serde(with = "serde_rational")]
    pub k: Rational,
}

/// The unique class `η = c₂α + c₁β`, `c₂ > 0`, on the boundary of the nef
/// cone, for Kähler `α` and `β` that are not proportional.
pub fn projection(m: &ManifoldPresentation, alpha: &Class, beta: &Class) -> Result<Projection, ConeError> {
    check_len(m, alpha.coords())?;
    check_len(m, beta.coords())?;
    if in_cone(m, ConeKind::Kahler, alpha)? != Membership::Inside {
        return Err(ConeError::NotKahler("alpha"));
    }
    if in_cone(m, ConeKind::Kahler, beta)? != Membership::Inside {
        return Err(ConeError::NotKahler("beta"));
    }
    if alpha.is_proportional(beta) {
        return Err(ConeError::Proportional);
    }
    let nef = find_cone(m, ConeKind::Nef)?;
    let k = nef
        .ineqs
        .iter()
        .filter_map(|l| {
            let lb = l.eval(beta);
            lb.is_positive().then(|| l.eval(alpha) / lb)
        })
        .min()
        .ok_or(ConeError::NoNefBoundary)?;
    let raw = alpha.minus(&beta.scaled(&k));
    let scale = raw.coords().iter().map(|c| c.abs()).max().unwrap_or_else(Rational::zero);
    Ok(Projection { eta: raw.scaled(&(Rational::from_integer(1.into()) / scale)), k })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisVerdict {
    pub p: usize,
    /// `(μ − (n − p)λ)·α − p·β`
    pub class: Class,
    pub cone: String,
    /// `None` when the presentation has no data for the cone.
    pub verdict: Option<Membership>,
}

/// For `p = 1..n−1`, the position of `(μ − (n−p)λ)α − pβ` relative to the
/// `(p+1)`-modified Kähler cone.
pub fn check_modified_hypotheses(
    m: &ManifoldPresentation,
    alpha: &Class,
    beta: &Class,
    lambda: &Rational,
) -> Result<Vec<HypothesisVerdict>, crate::Error> {
    let n = m.dim();
    let mu = jstab::total_slope(m, alpha, beta)?;
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for p in 1..n {
        let coef = &mu - Rational::from_integer(((n - p) as i64).into()) * lambda;
        let class = alpha.combine(&coef, beta, &Rational::from_integer((-(p as i64)).into()));
        let kind = ConeKind::Modified(p + 1);
        let verdict = match in_cone(m, kind, &class) {
            Ok(v) => Some(v),
            Err(ConeError::MissingConeData(_)) => None,
            Err(e) => return Err(e.into()),
        };
        out.push(HypothesisVerdict { p, class, cone: kind.to_string(), verdict });
    }
    Ok(out)
}

pub fn hypotheses_hold(v: &[HypothesisVerdict]) -> bool {
    v.iter().all(|h| h.verdict == Some(Membership::Inside))
}
