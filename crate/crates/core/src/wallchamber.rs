//! Walls and chambers along one-parameter families of classes or gMA
//! coefficients.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{format_rational, isolate_roots_in, serde_rational_vec, RootHandle, UniPoly};
use crate::cones::{self, ConeError, ConeKind, Membership};
use crate::geometry::{ManifoldPresentation, SubvarietyCandidate};
use crate::gma::{self, GmaCoefficients};
use crate::jstab::{self, Status};
use crate::{Class, Error, Rational};

/// `β(t) = (1−t)β₀ + tβ₁` for `t ∈ [0, 1]`, with Kähler endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParameterSegment {
    pub beta0: Class,
    pub beta1: Class,
}

impl ParameterSegment {
    pub fn new(m: &ManifoldPresentation, beta0: Class, beta1: Class) -> Result<Self, Error> {
        m.check_class(&beta0)?;
        m.check_class(&beta1)?;
        for (c, name) in [(&beta0, "beta0"), (&beta1, "beta1")] {
            if cones::in_cone(m, ConeKind::Kahler, c)? != Membership::Inside {
                return Err(ConeError::NotKahler(name).into());
            }
        }
        Ok(ParameterSegment { beta0, beta1 })
    }

    pub fn at(&self, t: &Rational) -> Class {
        self.beta0.lerp(&self.beta1, t)
    }

    /// The single coordinate that varies, if exactly one does.
    pub fn varying_index(&self) -> Option<usize> {
        let mut diff = (0..self.beta0.rank()).filter(|&i| self.beta0.coords()[i] != self.beta1.coords()[i]);
        let first = diff.next()?;
        diff.next().is_none().then_some(first)
    }

    /// Value of the varying coordinate at `t`.
    pub fn parameter(&self, t: &Rational) -> Option<Rational> {
        let i = self.varying_index()?;
        let (a, b) = (&self.beta0.coords()[i], &self.beta1.coords()[i]);
        Some(a + t * (b - a))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WallKind {
    J,
    Gma,
    Hypothesis,
}

/// One vanishing equation `f(t) = 0` responsible for a wall.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WallSource {
    pub kind: WallKind,
    pub candidate: Option<String>,
    pub alpha: Option<usize>,
    pub detail: Option<String>,
    pub equation: UniPoly<Rational>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Wall {
    pub location: RootHandle,
    pub t: Option<String>,
    pub t_approx: f64,
    pub parameter: Option<String>,
    pub parameter_approx: Option<f64>,
    pub sources: Vec<WallSource>,
    /// Verdicts on both sides agree.
    pub spurious: bool,
}

impl Wall {
    fn new(location: RootHandle, sources: Vec<WallSource>, seg: Option<&ParameterSegment>) -> Self {
        let t = location.exact_value().map(format_rational);
        let t_approx = location.to_f64();
        let parameter = seg.zip(location.exact_value()).and_then(|(s, q)| s.parameter(q)).map(|p| format_rational(&p));
        let parameter_approx = seg.and_then(|s| {
            let i = s.varying_index()?;
            let a = crate::scalar::rational_to_f64(&s.beta0.coords()[i]);
            let b = crate::scalar::rational_to_f64(&s.beta1.coords()[i]);
            Some(a + t_approx * (b - a))
        });
        Wall { location, t, t_approx, parameter, parameter_approx, sources, spurious: false }
    }

    /// Whether every source equation vanishes exactly at the location.
    pub fn verify(&self) -> bool {
        self.sources.iter().all(|s| self.location.sign_at(&s.equation) == Ordering::Equal)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WallSet {
    pub walls: Vec<Wall>,
    /// Equations vanishing identically along the path.
    pub degenerate: Vec<WallSource>,
}

/// The polynomial of degree `<= degree` through `f(0), f(1), …, f(degree)`.
fn interpolate(degree: usize, f: impl Fn(&Rational) -> Result<Rational, Error>) -> Result<UniPoly<Rational>, Error> {
    let xs: Vec<Rational> = (0..=degree).map(|i| Rational::from_integer((i as i64).into())).collect();
    let mut out = UniPoly::zero();
    for (i, xi) in xs.iter().enumerate() {
        let yi = f(xi)?;
        if yi.is_zero() {
            continue;
        }
        let mut basis = UniPoly::constant(yi);
        for (j, xj) in xs.iter().enumerate() {
            if i != j {
                let lin = UniPoly::new(vec![-xj.clone(), Rational::one()]);
                basis = &(&basis * &lin) * &UniPoly::constant(Rational::one() / (xi - xj));
            }
        }
        out = &out + &basis;
    }
    Ok(out)
}

/// Roots of each equation in `[0, 1]`, merged and sorted.
fn collect_walls(sources: Vec<WallSource>, seg: Option<&ParameterSegment>) -> Result<WallSet, Error> {
    let (zero, live): (Vec<_>, Vec<_>) = sources.into_iter().partition(|s| s.equation.is_zero());
    let found: Vec<Vec<(RootHandle, WallSource)>> = live
        .into_par_iter()
        .map(|s| {
            let roots = isolate_roots_in(&s.equation, &Rational::zero(), &Rational::one())?;
            Ok(roots.into_iter().map(|r| (r, s.clone())).collect())
        })
        .collect::<Result<_, Error>>()?;
    let mut flat: Vec<(RootHandle, WallSource)> = found.into_iter().flatten().collect();
    flat.sort_by(|a, b| a.0.cmp_root(&b.0));
    let mut walls: Vec<Wall> = Vec::new();
    for (r, s) in flat {
        match walls.last_mut() {
            Some(w) if w.location.cmp_root(&r) == Ordering::Equal => {
                if w.location.exact_value().is_none() && r.exact_value().is_some() {
                    *w = Wall::new(r, std::mem::take(&mut w.sources), seg);
                }
                w.sources.push(s);
            }
            _ => walls.push(Wall::new(r, vec![s], seg)),
        }
    }
    Ok(WallSet { walls, degenerate: zero })
}

fn select_candidates<'a>(
    m: &'a ManifoldPresentation,
    names: Option<&[String]>,
) -> Result<Vec<&'a SubvarietyCandidate>, Error> {
    match names {
        None => Ok(m.candidates.iter().collect()),
        Some(ns) => ns
            .iter()
            .map(|n| m.candidate(n).ok_or_else(|| Error::UnknownCandidate(n.clone())))
            .collect(),
    }
}

fn restricted(m: &ManifoldPresentation, cands: &[&SubvarietyCandidate]) -> ManifoldPresentation {
    let mut r = m.clone();
    r.candidates = cands.iter().map(|&c| c.clone()).collect();
    r
}

fn check_alphas(m: &ManifoldPresentation, alphas: &[Class]) -> Result<(), Error> {
    for a in alphas {
        m.check_class(a)?;
        if m.tensor.powers(a, m.dim(), a, 0)?.is_zero() {
            return Err(Error::DegeneratePairing("X".into()));
        }
    }
    Ok(())
}

/// Zeros of `t ↦ μ_{α,β(t)} − μ_{α,β(t)}(V)` for each `(V, α)`; the slope
/// difference is affine in `t`.
pub fn j_walls(
    m: &ManifoldPresentation,
    alphas: &[Class],
    seg: &ParameterSegment,
    candidates: Option<&[String]>,
) -> Result<WallSet, Error> {
    check_alphas(m, alphas)?;
    let cands = select_candidates(m, candidates)?;
    let mut sources = Vec::new();
    for (ai, alpha) in alphas.iter().enumerate() {
        for v in &cands {
            if v.tensor.powers(alpha, v.dim(), alpha, 0)?.is_zero() {
                return Err(Error::DegeneratePairing(v.name.clone()));
            }
            let equation = interpolate(1, |t| {
                let beta = seg.at(t);
                Ok(jstab::total_slope(m, alpha, &beta)? - jstab::candidate_slope(v, alpha, &beta)?)
            })?;
            sources.push(WallSource {
                kind: WallKind::J,
                candidate: Some(v.name.clone()),
                alpha: Some(ai),
                detail: None,
                equation,
            });
        }
    }
    collect_walls(sources, Some(seg))
}

/// Sign changes of the linear forms cutting out the `(p+1)`-modified cones
/// for `μ_{α,β(t)}α − pβ(t)`.
pub fn j_hypothesis_walls(m: &ManifoldPresentation, alphas: &[Class], seg: &ParameterSegment) -> Result<WallSet, Error> {
    check_alphas(m, alphas)?;
    let n = m.dim();
    let mut sources = Vec::new();
    for (ai, alpha) in alphas.iter().enumerate() {
        for p in 1..n {
            let kind = ConeKind::Modified(p + 1);
            let cone = match cones::find_cone(m, kind) {
                Ok(c) => c,
                Err(ConeError::MissingConeData(_)) => continue,
                Err(e) => return Err(e.into()),
            };
            for (li, ineq) in cone.ineqs.iter().enumerate() {
                let equation = interpolate(1, |t| {
                    let beta = seg.at(t);
                    let mu = jstab::total_slope(m, alpha, &beta)?;
                    let pr = Rational::from_integer((p as i64).into());
                    Ok(ineq.eval(&alpha.combine(&mu, &beta, &-pr)))
                })?;
                sources.push(WallSource {
                    kind: WallKind::Hypothesis,
                    candidate: None,
                    alpha: Some(ai),
                    detail: Some(format!("p={p} {kind} inequality {li}")),
                    equation,
                });
            }
        }
    }
    let mut set = collect_walls(sources, Some(seg))?;
    set.degenerate.clear();
    Ok(set)
}

/// Coefficient path for the gMA wall search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GmaPath {
    /// `c(t) = (1−t)c₀ + tc₁`, with `β` fixed or moving along a segment.
    Affine {
        #[serde(with = "serde_rational_vec")]
        c0: Vec<Rational>,
        #[serde(with = "serde_rational_vec")]
        c1: Vec<Rational>,
        beta: Class,
        segment: Option<ParameterSegment>,
    },
    /// `c₁(t) = 1/μ_{α,β(t)}` and all other `c_k = 0`.
    JSpecialization { segment: ParameterSegment },
}

impl GmaPath {
    fn validate(&self, m: &ManifoldPresentation) -> Result<(), Error> {
        if let GmaPath::Affine { c0, c1, beta, .. } = self {
            m.check_class(beta)?;
            for c in [c0, c1] {
                if c.len() + 1 != m.dim() {
                    return Err(Error::Coefficients(format!("expected {} coefficients, got {}", m.dim() - 1, c.len())));
                }
                if c.iter().any(|x| x.is_negative()) {
                    return Err(Error::Coefficients("path leaves the nonnegative orthant".into()));
                }
            }
        }
        Ok(())
    }

    pub fn segment(&self) -> Option<&ParameterSegment> {
        match self {
            GmaPath::Affine { segment, .. } => segment.as_ref(),
            GmaPath::JSpecialization { segment } => Some(segment),
        }
    }

    pub fn beta_at(&self, t: &Rational) -> Class {
        match self {
            GmaPath::Affine { beta, segment, .. } => segment.as_ref().map_or_else(|| beta.clone(), |s| s.at(t)),
            GmaPath::JSpecialization { segment } => segment.at(t),
        }
    }

    /// `c(t)` with `c_n(t)` re-solved from the cohomological condition.
    pub fn coefficients_at(&self, m: &ManifoldPresentation, alpha: &Class, t: &Rational) -> Result<GmaCoefficients, Error> {
        let beta = self.beta_at(t);
        match self {
            GmaPath::Affine { c0, c1, .. } => {
                let c: Vec<Rational> = c0.iter().zip(c1).map(|(a, b)| a + t * (b - a)).collect();
                let c_top = gma::solve_top_constant(m, alpha, &beta, &c)?;
                Ok(GmaCoefficients { c, c_top })
            }
            GmaPath::JSpecialization { .. } => GmaCoefficients::j_equation(m, alpha, &beta),
        }
    }

    /// Degree bound in `t` of the wall equation on a `p`-dimensional
    /// candidate.
    fn degree(&self, p: usize) -> usize {
        match self {
            GmaPath::Affine { segment: None, .. } => 1,
            GmaPath::Affine { segment: Some(_), .. } => p + 1,
            GmaPath::JSpecialization { .. } => 1,
        }
    }
}

/// `∫_V Q_p(α, β(t); c(t))`, multiplied by `μ(t) > 0` on the J path so that
/// the equation stays polynomial.
fn gma_equation(
    m: &ManifoldPresentation,
    alpha: &Class,
    path: &GmaPath,
    v: &SubvarietyCandidate,
    t: &Rational,
) -> Result<Rational, Error> {
    let beta = path.beta_at(t);
    match path {
        GmaPath::Affine { c0, c1, .. } => {
            let c: Vec<Rational> = c0.iter().zip(c1).map(|(a, b)| a + t * (b - a)).collect();
            Ok(gma::gma_test(alpha, &beta, &c, v)?.value)
        }
        GmaPath::JSpecialization { .. } => {
            let mu = jstab::total_slope(m, alpha, &beta)?;
            let mut c = vec![Rational::zero(); m.dim() - 1];
            c[0] = Rational::one() / &mu;
            Ok(mu * gma::gma_test(alpha, &beta, &c, v)?.value)
        }
    }
}

pub fn gma_walls(
    m: &ManifoldPresentation,
    alpha: &Class,
    path: &GmaPath,
    candidates: Option<&[String]>,
) -> Result<WallSet, Error> {
    path.validate(m)?;
    check_alphas(m, std::slice::from_ref(alpha))?;
    let cands = select_candidates(m, candidates)?;
    for t in [Rational::zero(), Rational::one()] {
        path.coefficients_at(m, alpha, &t)?;
    }
    let sources = cands
        .iter()
        .map(|v| {
            let equation = interpolate(path.degree(v.dim()), |t| gma_equation(m, alpha, path, v, t))?;
            Ok(WallSource { kind: WallKind::Gma, candidate: Some(v.name.clone()), alpha: None, detail: None, equation })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    collect_walls(sources, path.segment())
}

/// Verdict for one class `α` at one parameter value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointVerdict {
    pub alpha: usize,
    pub status: Status,
    pub dest: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Chamber {
    pub lo: RootHandle,
    pub hi: RootHandle,
    /// Exact sample point used for the reported verdicts.
    pub midpoint: String,
    pub verdicts: Vec<PointVerdict>,
    /// Indices of the classes that are stable on this chamber.
    pub stable_set: Vec<usize>,
    pub coefficients: Option<GmaCoefficients>,
}

impl Chamber {
    /// Whether `t` lies strictly inside the chamber.
    pub fn contains(&self, t: &Rational) -> bool {
        self.lo.cmp_rational(t) == Ordering::Less && self.hi.cmp_rational(t) == Ordering::Greater
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ChamberReport {
    pub segment: Option<ParameterSegment>,
    pub walls: Vec<Wall>,
    pub hypothesis_walls: Vec<Wall>,
    pub degenerate: Vec<WallSource>,
    pub chambers: Vec<Chamber>,
}

impl ChamberReport {
    /// Verdicts of the chamber containing `t`, or `None` on a wall.
    pub fn verdicts_at(&self, t: &Rational) -> Option<&[PointVerdict]> {
        self.chambers.iter().find(|c| c.contains(t)).map(|c| c.verdicts.as_slice())
    }
}

/// Rationals strictly between two distinct roots, at the quarter points of
/// a separating gap.
fn interior_samples(lo: &RootHandle, hi: &RootHandle) -> [Rational; 3] {
    let (mut a, mut b) = (lo.clone(), hi.clone());
    loop {
        let left = a.interval().1.clone();
        let right = b.interval().0.clone();
        if left < right {
            let gap = &right - &left;
            let q = |k: i64| &left + &gap * Rational::new(k.into(), 4.into());
            return [q(1), q(2), q(3)];
        }
        a = a.refined(&(a.width() / Rational::from_integer(2.into())));
        b = b.refined(&(b.width() / Rational::from_integer(2.into())));
    }
}

type VerdictFn<'a> = dyn Fn(&Rational) -> Result<(Vec<PointVerdict>, Option<GmaCoefficients>), Error> + Sync + 'a;

fn build_chambers(walls: &mut [Wall], verdict: &VerdictFn) -> Result<Vec<Chamber>, Error> {
    let mut bounds: Vec<RootHandle> = vec![RootHandle::exact(Rational::zero())];
    bounds.extend(walls.iter().map(|w| w.location.clone()));
    bounds.push(RootHandle::exact(Rational::one()));
    let spans: Vec<(RootHandle, RootHandle)> = bounds
        .windows(2)
        .filter(|w| w[0].cmp_root(&w[1]) == Ordering::Less)
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect();
    let chambers: Vec<Chamber> = spans
        .into_par_iter()
        .map(|(lo, hi)| {
            let samples = interior_samples(&lo, &hi);
            let (verdicts, coefficients) = verdict(&samples[1])?;
            for s in [&samples[0], &samples[2]] {
                if verdict(s)?.0 != verdicts {
                    return Err(Error::ChamberNotConstant { lo: format!("{:.12}", lo.to_f64()), hi: format!("{:.12}", hi.to_f64()) });
                }
            }
            let stable_set = verdicts.iter().filter(|v| v.status == Status::Stable).map(|v| v.alpha).collect();
            Ok(Chamber { lo, hi, midpoint: format_rational(&samples[1]), verdicts, stable_set, coefficients })
        })
        .collect::<Result<_, Error>>()?;
    for w in walls.iter_mut() {
        let left = chambers.iter().find(|c| c.hi.cmp_root(&w.location) == Ordering::Equal);
        let right = chambers.iter().find(|c| c.lo.cmp_root(&w.location) == Ordering::Equal);
        if let (Some(l), Some(r)) = (left, right) {
            w.spurious = l.verdicts == r.verdicts;
        }
    }
    Ok(chambers)
}

fn j_point(m: &ManifoldPresentation, alphas: &[Class], beta: &Class) -> Result<Vec<PointVerdict>, Error> {
    alphas
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let v = jstab::classify(m, a, beta)?;
            Ok(PointVerdict { alpha: i, status: v.status, dest: v.dest })
        })
        .collect()
}

/// Chambers between consecutive J walls with the stable set at each.
pub fn chambers(
    m: &ManifoldPresentation,
    alphas: &[Class],
    seg: &ParameterSegment,
    candidates: Option<&[String]>,
) -> Result<ChamberReport, Error> {
    let WallSet { mut walls, degenerate } = j_walls(m, alphas, seg, candidates)?;
    let hypothesis_walls = j_hypothesis_walls(m, alphas, seg)?.walls;
    let sub = restricted(m, &select_candidates(m, candidates)?);
    let verdict = |t: &Rational| Ok((j_point(&sub, alphas, &seg.at(t))?, None));
    let chambers = build_chambers(&mut walls, &verdict)?;
    Ok(ChamberReport { segment: Some(seg.clone()), walls, hypothesis_walls, degenerate, chambers })
}

fn gma_point(
    m: &ManifoldPresentation,
    alpha: &Class,
    path: &GmaPath,
    t: &Rational,
) -> Result<(Vec<PointVerdict>, Option<GmaCoefficients>), Error> {
    let coeffs = path.coefficients_at(m, alpha, t)?;
    let beta = path.beta_at(t);
    let values: Vec<gma::GmaValue> =
        m.candidates.iter().map(|v| gma::gma_test(alpha, &beta, &coeffs.c, v)).collect::<Result<_, _>>()?;
    let min = values.iter().map(|v| v.value.clone()).min().ok_or(Error::EmptyCandidates)?;
    let dest = values.iter().filter(|v| v.destabilizing).map(|v| v.name.clone()).collect();
    Ok((vec![PointVerdict { alpha: 0, status: Status::from_sign(&min), dest }], Some(coeffs)))
}

pub fn gma_chambers(
    m: &ManifoldPresentation,
    alpha: &Class,
    path: &GmaPath,
    candidates: Option<&[String]>,
) -> Result<ChamberReport, Error> {
    let WallSet { mut walls, degenerate } = gma_walls(m, alpha, path, candidates)?;
    let sub = restricted(m, &select_candidates(m, candidates)?);
    let verdict = |t: &Rational| gma_point(&sub, alpha, path, t);
    let chambers = build_chambers(&mut walls, &verdict)?;
    Ok(ChamberReport { segment: path.segment().cloned(), walls, hypothesis_walls: Vec::new(), degenerate, chambers })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleRow {
    pub t: String,
    pub parameter: Option<String>,
    pub verdicts: Vec<PointVerdict>,
}

fn grid(n: usize) -> Result<Vec<Rational>, Error> {
    if n < 2 {
        return Err(Error::OutOfRange { name: "grid", value: n.to_string(), range: ">= 2" });
    }
    Ok((0..=n).map(|i| Rational::new((i as i64).into(), (n as i64).into())).collect())
}

/// Direct classification at `N+1` evenly spaced exact points.
pub fn sweep_oracle(
    m: &ManifoldPresentation,
    alphas: &[Class],
    seg: &ParameterSegment,
    candidates: Option<&[String]>,
    n: usize,
) -> Result<Vec<(Rational, OracleRow)>, Error> {
    check_alphas(m, alphas)?;
    let sub = restricted(m, &select_candidates(m, candidates)?);
    grid(n)?
        .into_par_iter()
        .map(|t| {
            let verdicts = j_point(&sub, alphas, &seg.at(&t))?;
            let row = OracleRow { t: format_rational(&t), parameter: seg.parameter(&t).map(|p| format_rational(&p)), verdicts };
            Ok((t, row))
        })
        .collect()
}

/// The gMA analogue of [`sweep_oracle`].
pub fn gma_sweep_oracle(
    m: &ManifoldPresentation,
    alpha: &Class,
    path: &GmaPath,
    candidates: Option<&[String]>,
    n: usize,
) -> Result<Vec<(Rational, OracleRow)>, Error> {
    path.validate(m)?;
    let sub = restricted(m, &select_candidates(m, candidates)?);
    grid(n)?
        .into_par_iter()
        .map(|t| {
            let (verdicts, _) = gma_point(&sub, alpha, path, &t)?;
            let parameter = path.segment().and_then(|s| s.parameter(&t)).map(|p| format_rational(&p));
            Ok((t.clone(), OracleRow { t: format_rational(&t), parameter, verdicts }))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::geometry::wu_bundle;

    fn c2(a: Rational, b: Rational) -> Class {
        Class::new(vec![a, b])
    }

    fn wu_segment(m: &ManifoldPresentation, b0: Rational, b1: Rational) -> ParameterSegment {
        ParameterSegment::new(m, c2(rat(1, 1), b0), c2(rat(1, 1), b1)).unwrap()
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn table_walls() {
        let m = wu_bundle(1, &[1, 3]).unwrap();
        let seg = wu_segment(&m, rat(1, 20), rat(1, 2));
        let alpha = c2(rat(1, 1), rat(1, 1));
        let ws = j_walls(&m, std::slice::from_ref(&alpha), &seg, Some(&names(&["S", "C"]))).unwrap();
        let params: Vec<_> = ws.walls.iter().map(|w| w.parameter.clone().unwrap()).collect();
        assert_eq!(params, vec!["5/26", "2/9"]);
        assert!(ws.walls.iter().all(Wall::verify));
        let hyp = j_hypothesis_walls(&m, std::slice::from_ref(&alpha), &seg).unwrap();
        assert!(hyp.walls.iter().any(|w| w.parameter.as_deref() == Some("1/15")));
    }

    #[test]
    fn table_chambers() {
        let m = wu_bundle(1, &[1, 3]).unwrap();
        let seg = wu_segment(&m, rat(1, 20), rat(1, 2));
        let alpha = c2(rat(1, 1), rat(1, 1));
        let rep = chambers(&m, &[alpha], &seg, Some(&names(&["S", "C"]))).unwrap();
        let dests: Vec<Vec<String>> = rep.chambers.iter().map(|c| c.verdicts[0].dest.clone()).collect();
        assert_eq!(dests, vec![names(&["S", "C"]), names(&["C"]), vec![]]);
        assert_eq!(rep.chambers[2].stable_set, vec![0]);
        assert!(rep.walls.iter().all(|w| !w.spurious));
    }

    #[test]
    fn scaling_alpha_keeps_walls() {
        let m = wu_bundle(1, &[1, 3]).unwrap();
        let seg = wu_segment(&m, rat(1, 20), rat(1, 2));
        let a = c2(rat(1, 1), rat(1, 1));
        let ws = j_walls(&m, &[a.clone(), a.scaled(&rat(2, 1))], &seg, None).unwrap();
        for w in &ws.walls {
            let mut c: Vec<_> = w.sources.iter().filter(|s| s.alpha == Some(0)).map(|s| s.candidate.clone()).collect();
            let mut d: Vec<_> = w.sources.iter().filter(|s| s.alpha == Some(1)).map(|s| s.candidate.clone()).collect();
            c.sort();
            d.sort();
            assert_eq!(c, d);
        }
        assert!(j_walls(&m, &[a], &seg, Some(&[])).unwrap().walls.is_empty());
    }

    #[test]
    fn degenerate_segment() {
        let m = wu_bundle(1, &[1, 3]).unwrap();
        let seg = wu_segment(&m, rat(1, 2), rat(1, 2));
        let rep = chambers(&m, &[c2(rat(1, 1), rat(1, 1))], &seg, None).unwrap();
        assert_eq!(rep.chambers.len(), 1);
        assert!(rep.walls.is_empty());
    }

    #[test]
    fn oracle_matches_chambers() {
        let m = wu_bundle(1, &[1, 3]).unwrap();
        let seg = wu_segment(&m, rat(1, 20), rat(1, 2));
        let alphas = [c2(rat(1, 1), rat(1, 1))];
        let rep = chambers(&m, &alphas, &seg, None).unwrap();
        for (t, row) in sweep_oracle(&m, &alphas, &seg, None, 200).unwrap() {
            if let Some(v) = rep.verdicts_at(&t) {
                assert_eq!(v, row.verdicts.as_slice(), "t = {}", row.t);
            }
        }
        assert_eq!(sweep_oracle(&m, &alphas, &seg, None, 2).unwrap().len(), 3);
    }

    #[test]
    fn gma_affine_wall() {
        let m = wu_bundle(1, &[1, 3]).unwrap();
        let alpha = c2(rat(1, 1), rat(1, 1));
        let path = GmaPath::Affine {
            c0: vec![rat(0, 1), rat(0, 1)],
            c1: vec![rat(1, 1), rat(0, 1)],
            beta: alpha.clone(),
            segment: None,
        };
        let ws = gma_walls(&m, &alpha, &path, Some(&names(&["C"]))).unwrap();
        assert_eq!(ws.walls.len(), 1);
        assert_eq!(ws.walls[0].t.as_deref(), Some("1"));
        let constant = GmaPath::Affine {
            c0: vec![rat(1, 2), rat(0, 1)],
            c1: vec![rat(1, 2), rat(0, 1)],
            beta: alpha.clone(),
            segment: None,
        };
        assert!(gma_walls(&m, &alpha, &constant, None).unwrap().walls.is_empty());
        let bad = GmaPath::Affine { c0: vec![rat(-1, 1), rat(0, 1)], c1: vec![rat(1, 1), rat(0, 1)], beta: alpha.clone(), segment: None };
        assert!(gma_walls(&m, &alpha, &bad, None).is_err());
    }

    #[test]
    fn j_specialization_reproduces_j_walls() {
        let m = wu_bundle(1, &[1, 3]).unwrap();
        let seg = wu_segment(&m, rat(1, 20), rat(1, 2));
        let alpha = c2(rat(1, 1), rat(1, 1));
        let j = j_walls(&m, std::slice::from_ref(&alpha), &seg, None).unwrap();
        let g = gma_walls(&m, &alpha, &GmaPath::JSpecialization { segment: seg.clone() }, None).unwrap();
        let jt: Vec<_> = j.walls.iter().map(|w| w.t.clone()).collect();
        let gt: Vec<_> = g.walls.iter().map(|w| w.t.clone()).collect();
        assert_eq!(jt, gt);
        let rep = gma_chambers(&m, &alpha, &GmaPath::JSpecialization { segment: seg.clone() }, None).unwrap();
        let jrep = chambers(&m, &[alpha], &seg, None).unwrap();
        for (a, b) in rep.chambers.iter().zip(&jrep.chambers) {
            assert_eq!(a.verdicts[0].dest, b.verdicts[0].dest);
        }
    }

    #[test]
    fn gma_moving_beta_has_algebraic_walls() {
        let m = wu_bundle(1, &[1, 3]).unwrap();
        let alpha = c2(rat(1, 1), rat(1, 1));
        let seg = wu_segment(&m, rat(1, 20), rat(2, 1));
        let path = GmaPath::Affine { c0: vec![rat(1, 3), rat(1, 5)], c1: vec![rat(1, 3), rat(1, 5)], beta: alpha.clone(), segment: Some(seg) };
        let rep = gma_chambers(&m, &alpha, &path, None).unwrap();
        assert!(rep.walls.iter().all(Wall::verify));
        for (t, row) in gma_sweep_oracle(&m, &alpha, &path, None, 100).unwrap() {
            if let Some(v) = rep.verdicts_at(&t) {
                assert_eq!(v, row.verdicts.as_slice());
            }
        }
    }
}
