//! Slopes, deficits, the stability threshold and J-stability verdicts
//! relative to a candidate list.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::serde_rational;
use crate::cones::{self, HypothesisVerdict};
use crate::geometry::{ManifoldPresentation, RegionKind, SubvarietyCandidate};
use crate::{Class, Error, Rational};

fn int(k: usize) -> Rational {
    Rational::from_integer((k as i64).into())
}

/// `μ_{α,β} = n ∫α^{n−1}β / ∫αⁿ`
pub fn total_slope(m: &ManifoldPresentation, alpha: &Class, beta: &Class) -> Result<Rational, Error> {
    let n = m.dim();
    let den = m.tensor.powers(alpha, n, beta, 0)?;
    if den.is_zero() {
        return Err(Error::DegeneratePairing("X".into()));
    }
    Ok(int(n) * m.tensor.powers(alpha, n - 1, beta, 1)? / den)
}

/// `μ_{α,β}(V) = p ∫_V α^{p−1}β / ∫_V α^p`
pub fn candidate_slope(v: &SubvarietyCandidate, alpha: &Class, beta: &Class) -> Result<Rational, Error> {
    let p = v.dim();
    let den = v.tensor.powers(alpha, p, beta, 0)?;
    if den.is_zero() {
        return Err(Error::DegeneratePairing(v.name.clone()));
    }
    Ok(int(p) * v.tensor.powers(alpha, p - 1, beta, 1)? / den)
}

/// Slope of a named candidate, or of `X` itself when `target` is `None`.
pub fn slope(m: &ManifoldPresentation, alpha: &Class, beta: &Class, target: Option<&str>) -> Result<Rational, Error> {
    match target {
        None => total_slope(m, alpha, beta),
        Some(name) => {
            let v = m.candidate(name).ok_or_else(|| Error::UnknownCandidate(name.to_string()))?;
            candidate_slope(v, alpha, beta)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    #[serde(rename = "stable")]
    Stable,
    #[serde(rename = "semistable-strictly")]
    StrictlySemistable,
    #[serde(rename = "unstable")]
    Unstable,
}

impl Status {
    pub fn from_sign(delta: &Rational) -> Self {
        if delta.is_positive() {
            Status::Stable
        } else if delta.is_zero() {
            Status::StrictlySemistable
        } else {
            Status::Unstable
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Stable => "stable",
            Status::StrictlySemistable => "semistable-strictly",
            Status::Unstable => "unstable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Completeness {
    /// The candidate list provably contains every destabilizer here.
    Certified,
    /// Verdicts hold relative to the listed candidates only.
    Relative,
}

/// Whether the presentation certifies its candidate list for `statement`
/// (`"j"`, `"gma"`, `"dhym"`) at `(α, β)`.
pub fn completeness(m: &ManifoldPresentation, statement: &str, alpha: &Class, beta: &Class) -> Completeness {
    let certified = m.complete_regions.iter().filter(|r| r.statement == statement).any(|r| match &r.kind {
        RegionKind::Always => true,
        RegionKind::ModifiedHypotheses => {
            cones::check_modified_hypotheses(m, alpha, beta, &Rational::zero()).is_ok_and(|h| cones::hypotheses_hold(&h))
        }
        RegionKind::Linear { alpha: la, beta: lb } => {
            la.iter().all(|l| l.holds(alpha)) && lb.iter().all(|l| l.holds(beta))
        }
    });
    if certified {
        Completeness::Certified
    } else {
        Completeness::Relative
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CandidateSlope {
    pub name: String,
    pub dim: usize,
    #[serde(with = "serde_rational")]
    pub mu: Rational,
    #[serde(with = "serde_rational")]
    pub deficit: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeReport {
    #[serde(with = "serde_rational")]
    pub mu: Rational,
    pub candidates: Vec<CandidateSlope>,
}

pub fn slope_report(m: &ManifoldPresentation, alpha: &Class, beta: &Class) -> Result<SlopeReport, Error> {
    m.check_class(alpha)?;
    m.check_class(beta)?;
    let n = m.dim();
    let mu = total_slope(m, alpha, beta)?;
    let candidates = m
        .candidates
        .iter()
        .map(|v| {
            let mv = candidate_slope(v, alpha, beta)?;
            let deficit = (&mu - &mv) / int(n - v.dim());
            Ok(CandidateSlope { name: v.name.clone(), dim: v.dim(), mu: mv, deficit })
        })
        .collect::<Result<_, Error>>()?;
    Ok(SlopeReport { mu, candidates })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StabilityVerdict {
    #[serde(with = "serde_rational")]
    pub mu: Rational,
    pub candidates: Vec<CandidateSlope>,
    #[serde(with = "serde_rational")]
    pub delta_pp: Rational,
    pub dest: Vec<String>,
    pub dest_opt: Vec<String>,
    pub status: Status,
    pub completeness: Completeness,
}

/// Minimum deficit over the candidates, with its completeness flag.
pub fn stability_threshold(m: &ManifoldPresentation, alpha: &Class, beta: &Class) -> Result<(Rational, Completeness), Error> {
    let v = classify(m, alpha, beta)?;
    Ok((v.delta_pp, v.completeness))
}

pub fn classify(m: &ManifoldPresentation, alpha: &Class, beta: &Class) -> Result<StabilityVerdict, Error> {
    if m.candidates.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let report = slope_report(m, alpha, beta)?;
    let delta_pp = report.candidates.iter().map(|c| c.deficit.clone()).min().expect("nonempty");
    let dest = report.candidates.iter().filter(|c| report.mu <= c.mu).map(|c| c.name.clone()).collect();
    let dest_opt = if delta_pp.is_positive() {
        Vec::new()
    } else {
        report.candidates.iter().filter(|c| c.deficit == delta_pp).map(|c| c.name.clone()).collect()
    };
    Ok(StabilityVerdict {
        status: Status::from_sign(&delta_pp),
        completeness: completeness(m, "j", alpha, beta),
        mu: report.mu,
        candidates: report.candidates,
        delta_pp,
        dest,
        dest_opt,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solvability {
    Solvable,
    NotSolvable,
    /// Hypotheses or completeness fail; the verdict is relative.
    Relative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EffectiveVerdict {
    pub outcome: Solvability,
    /// Status relative to the candidates, meaningful in every outcome.
    pub relative_status: Status,
    pub witnesses: Vec<String>,
    pub hypotheses: Vec<HypothesisVerdict>,
    #[serde(with = "serde_rational")]
    pub lambda: Rational,
}

/// Finite solvability test: decisive when the shifted modified-Kähler
/// hypotheses hold and the candidate list is certified.
pub fn effective_test(
    m: &ManifoldPresentation,
    alpha: &Class,
    beta: &Class,
    lambda: &Rational,
) -> Result<EffectiveVerdict, Error> {
    let verdict = classify(m, alpha, beta)?;
    let hypotheses = cones::check_modified_hypotheses(m, alpha, beta, lambda)?;
    let decisive = cones::hypotheses_hold(&hypotheses) && verdict.completeness == Completeness::Certified;
    let outcome = match (decisive, verdict.dest.is_empty()) {
        (false, _) => Solvability::Relative,
        (true, true) => Solvability::Solvable,
        (true, false) => Solvability::NotSolvable,
    };
    Ok(EffectiveVerdict {
        outcome,
        relative_status: verdict.status,
        witnesses: verdict.dest,
        hypotheses,
        lambda: lambda.clone(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InequalityOutcome {
    Holds,
    Fails,
    Inapplicable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DoubleInequality {
    #[serde(with = "serde_rational")]
    pub t: Rational,
    /// `μ_{α_t,β} − (n−1)/t`
    #[serde(with = "serde_rational")]
    pub lower: Rational,
    #[serde(with = "serde_rational")]
    pub delta_pp: Rational,
    /// `(μ_{α_t,β} − 1/t)/(n−1)`
    #[serde(with = "serde_rational")]
    pub upper: Rational,
    pub outcome: InequalityOutcome,
    /// Raised on failure: a violated bound means a missing candidate.
    pub candidate_incompleteness: bool,
}

/// Checks `μ − (n−1)/t ≤ Δ^{pp}_β(α_t) ≤ (μ − 1/t)/(n−1)` at
/// `α_t = (1−t)η + tβ`, where `μ = μ_{α_t,β}`.
///
/// The check is inapplicable unless `Δ ≤ 0` somewhere on `scan` (or at `t`
/// itself when `scan` is empty).
pub fn double_inequality_check(
    m: &ManifoldPresentation,
    eta: &Class,
    beta: &Class,
    t: &Rational,
    scan: &[Rational],
) -> Result<DoubleInequality, Error> {
    if !t.is_positive() || t > &Rational::one() {
        return Err(Error::OutOfRange { name: "t", value: crate::arith::format_rational(t), range: "(0, 1]" });
    }
    let n = m.dim();
    let delta_at = |s: &Rational| -> Result<Rational, Error> {
        let a = eta.lerp(beta, s);
        Ok(classify(m, &a, beta)?.delta_pp)
    };
    let alpha_t = eta.lerp(beta, t);
    let mu = total_slope(m, &alpha_t, beta)?;
    let inv_t = Rational::one() / t;
    let lower = &mu - int(n - 1) * &inv_t;
    let upper = (&mu - &inv_t) / int(n - 1);
    let delta_pp = delta_at(t)?;
    let applicable = if scan.is_empty() {
        !delta_pp.is_positive()
    } else {
        let mut any = false;
        for s in scan {
            if !delta_at(s)?.is_positive() {
                any = true;
                break;
            }
        }
        any
    };
    let holds = lower <= delta_pp && delta_pp <= upper;
    let outcome = match (applicable, holds) {
        (false, _) => InequalityOutcome::Inapplicable,
        (true, true) => InequalityOutcome::Holds,
        (true, false) => InequalityOutcome::Fails,
    };
    Ok(DoubleInequality {
        t: t.clone(),
        lower,
        delta_pp,
        upper,
        candidate_incompleteness: outcome == InequalityOutcome::Fails,
        outcome,
    })
}
