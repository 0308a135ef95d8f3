use std::fs;

use serde::Serialize;
use serde_json::{json, Value};
use stability_core::arith::{format_rational, parse_rational, parse_rational_list};
use stability_core::cones::{self, ConeKind, Membership};
use stability_core::geometry::{blowup_pn, load_manifold, presentation_hash, save_manifold, wu_bundle, ManifoldPresentation};
use stability_core::jstab::{self, Completeness};
use stability_core::wallchamber::{self, ChamberReport, GmaPath, ParameterSegment};
use stability_core::{dhym, gma, Class, Error, Rational, VERSION};

use crate::args::*;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotMonotone { .. } | Error::ChamberNotConstant { .. } | Error::FactorizationMismatch { .. } => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<stability_core::arith::ArithError> for CliError {
    fn from(e: stability_core::arith::ArithError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<stability_core::geometry::ModelError> for CliError {
    fn from(e: stability_core::geometry::ModelError) -> Self {
        CliError::Input(e.to_string())
    }
}

/// A finished report: JSON document, CSV table, and whether some
/// hypothesis check failed.
pub struct Outcome {
    pub json: Value,
    pub table: Vec<Vec<String>>,
    pub hypothesis_failed: bool,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    manifold: Option<&'a str>,
    presentation_hash: Option<String>,
    completeness: &'a str,
    result: T,
}

fn envelope<T: Serialize>(command: &'static str, m: Option<&ManifoldPresentation>, completeness: &str, result: T) -> Value {
    serde_json::to_value(Envelope {
        tool: "stability-lab",
        version: VERSION,
        command,
        manifold: m.map(|m| m.name.as_str()),
        presentation_hash: m.map(presentation_hash),
        completeness,
        result,
    })
    .expect("report serializes")
}

fn completeness_str(c: Completeness) -> &'static str {
    match c {
        Completeness::Certified => "certified",
        Completeness::Relative => "relative",
    }
}

fn build_manifold(a: &ManifoldArgs) -> Result<ManifoldPresentation, CliError> {
    match (&a.manifold, a.family) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(load_manifold(&text)?)
        }
        (None, Some(Family::Wu)) => {
            if a.weights.is_empty() {
                return Err(CliError::Input("--weights is required for --family wu".into()));
            }
            Ok(wu_bundle(a.d, &a.weights)?)
        }
        (None, Some(Family::Blowup)) => {
            let n = a.n.ok_or_else(|| CliError::Input("--n is required for --family blowup".into()))?;
            Ok(blowup_pn(n)?)
        }
        (None, None) => Err(CliError::Input("one of --family or --manifold is required".into())),
    }
}

fn class(m: &ManifoldPresentation, s: &str) -> Result<Class, CliError> {
    Ok(m.class(&parse_rational_list(s)?)?)
}

fn membership_str(v: Option<Membership>) -> String {
    match v {
        Some(Membership::Inside) => "inside".into(),
        Some(Membership::Boundary) => "boundary".into(),
        Some(Membership::Outside) => "outside".into(),
        None => "unknown".into(),
    }
}

pub fn run(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::AnalyzeJ(a) => analyze_j(a),
        Command::AnalyzeGma(a) => analyze_gma(a),
        Command::AnalyzeDhym(a) => analyze_dhym(a),
        Command::Factorize(a) => factorize(a),
        Command::Cones(a) => cones_cmd(a),
        Command::Sweep(a) => sweep(&a.segment),
        Command::OracleSweep(a) => oracle_sweep(&a.segment, a.grid),
        Command::ExportManifold(a) => export(a),
    }
}

fn analyze_j(a: &AnalyzeJ) -> Result<Outcome, CliError> {
    let m = build_manifold(&a.manifold)?;
    let alpha = class(&m, &a.alpha)?;
    let beta = class(&m, &a.beta)?;
    let verdict = jstab::classify(&m, &alpha, &beta)?;
    let lambda = a.lambda.as_deref().map(parse_rational).transpose()?;
    let hypotheses = cones::check_modified_hypotheses(&m, &alpha, &beta, &lambda.clone().unwrap_or_default())?;
    let effective = lambda.as_ref().map(|l| jstab::effective_test(&m, &alpha, &beta, l)).transpose()?;
    let failed = !cones::hypotheses_hold(&hypotheses);
    let mut table = vec![vec!["name".into(), "dim".into(), "mu".into(), "deficit".into(), "destabilizing".into()]];
    for c in &verdict.candidates {
        table.push(vec![
            c.name.clone(),
            c.dim.to_string(),
            format_rational(&c.mu),
            format_rational(&c.deficit),
            verdict.dest.contains(&c.name).to_string(),
        ]);
    }
    let result = json!({ "verdict": verdict, "hypotheses": hypotheses, "effective": effective });
    Ok(Outcome {
        json: envelope("analyze-j", Some(&m), completeness_str(verdict.completeness), result),
        table,
        hypothesis_failed: failed,
    })
}

fn analyze_gma(a: &AnalyzeGma) -> Result<Outcome, CliError> {
    let m = build_manifold(&a.manifold)?;
    let alpha = class(&m, &a.alpha)?;
    let beta = class(&m, &a.beta)?;
    let (c, inverse_hessian) = match (a.inverse_hessian, &a.coeffs) {
        (Some(k), _) => {
            let ih = gma::inverse_hessian(&m, &alpha, &beta, k)?;
            (ih.coefficients.c.clone(), Some(ih))
        }
        (None, Some(s)) => (parse_rational_list(s)?, None),
        (None, None) => return Err(CliError::Input("--coeffs or --inverse-hessian is required".into())),
    };
    let verdict = gma::classify_gma(&m, &alpha, &beta, &c)?;
    let failed = verdict.factor_cones.iter().any(|f| f.verdict != Some(Membership::Inside));
    let mut table = vec![vec!["name".into(), "dim".into(), "value".into(), "destabilizing".into()]];
    for v in &verdict.candidates {
        table.push(vec![v.name.clone(), v.dim.to_string(), format_rational(&v.value), v.destabilizing.to_string()]);
    }
    let completeness = completeness_str(verdict.completeness);
    let result = json!({ "verdict": verdict, "inverse_hessian": inverse_hessian });
    Ok(Outcome { json: envelope("analyze-gma", Some(&m), completeness, result), table, hypothesis_failed: failed })
}

fn analyze_dhym(a: &AnalyzeDhym) -> Result<Outcome, CliError> {
    let m = build_manifold(&a.manifold)?;
    let alpha = class(&m, &a.alpha)?;
    let beta = class(&m, &a.beta)?;
    if !(a.epsilon > 0.0) {
        return Err(CliError::Input("--epsilon must be positive".into()));
    }
    let verdict = dhym::classify_dhym(&m, &alpha, &beta, a.phi_hat, a.epsilon)?;
    let central_charge = dhym::central_charge(&m, &alpha, &beta).ok();
    let mut table = vec![vec![
        "name".into(),
        "dim".into(),
        "value".into(),
        "product_value".into(),
        "marginal".into(),
        "destabilizing".into(),
    ]];
    for v in &verdict.candidates {
        table.push(vec![
            v.name.clone(),
            v.dim.to_string(),
            format!("{:e}", v.value),
            format!("{:e}", v.product_value),
            v.marginal.to_string(),
            v.destabilizing.to_string(),
        ]);
    }
    let failed = !verdict.hypotheses.hold();
    let completeness = completeness_str(verdict.completeness);
    let result = json!({ "central_charge": central_charge, "verdict": verdict });
    Ok(Outcome { json: envelope("analyze-dhym", Some(&m), completeness, result), table, hypothesis_failed: failed })
}

fn factorize(a: &Factorize) -> Result<Outcome, CliError> {
    let c = parse_rational_list(&a.coeffs)?;
    if a.n < 2 || c.len() + 1 != a.n {
        return Err(CliError::Input(format!("--coeffs must list n - 1 = {} values", a.n.saturating_sub(1))));
    }
    let data = gma::factorize(&c)?;
    let mut table = vec![vec!["p".into(), "r_p".into(), "r_p_approx".into(), "quotient".into()]];
    for e in &data.entries {
        let quotient: Vec<String> = e
            .factorization
            .quotient_f64()
            .coeffs()
            .iter()
            .map(|x| format!("{x:e}"))
            .collect();
        table.push(vec![
            e.p.to_string(),
            e.root.exact_value().map(format_rational).unwrap_or_default(),
            format!("{:e}", e.root.to_f64()),
            quotient.join(" "),
        ]);
    }
    Ok(Outcome { json: envelope("factorize", None, "not-applicable", data), table, hypothesis_failed: false })
}

fn cones_cmd(a: &Cones) -> Result<Outcome, CliError> {
    let m = build_manifold(&a.manifold)?;
    let alpha = class(&m, &a.alpha)?;
    let mut table = vec![vec!["cone".into(), "alpha".into()]];
    let mut memberships = Vec::new();
    for cone in &m.cones {
        let v = cones::in_cone(&m, cone.kind, &alpha).map_err(Error::from)?;
        table.push(vec![cone.kind.to_string(), membership_str(Some(v))]);
        memberships.push(json!({ "cone": cone.kind.to_string(), "verdict": v }));
    }
    let mut result = json!({ "alpha": alpha, "memberships": memberships });
    let mut failed = false;
    let mut completeness = "not-applicable";
    if let Some(b) = &a.beta {
        let beta = class(&m, b)?;
        let lambda = a.lambda.as_deref().map(parse_rational).transpose()?.unwrap_or_default();
        let hyp = cones::check_modified_hypotheses(&m, &alpha, &beta, &lambda)?;
        failed = !cones::hypotheses_hold(&hyp);
        for h in &hyp {
            table.push(vec![format!("tau_{} in {}", h.p, h.cone), membership_str(h.verdict)]);
        }
        let projection = cones::projection(&m, &alpha, &beta).map_err(|e| e.to_string());
        let big = match &projection {
            Ok(p) => cones::in_cone(&m, ConeKind::Modified(m.dim()), &p.eta).ok(),
            Err(_) => None,
        };
        completeness = completeness_str(jstab::completeness(&m, "j", &alpha, &beta));
        result["beta"] = serde_json::to_value(&beta).expect("class serializes");
        result["hypotheses"] = serde_json::to_value(&hyp).expect("serializes");
        result["projection"] = match projection {
            Ok(p) => json!({ "eta": p.eta, "k": format_rational(&p.k), "eta_big": big }),
            Err(e) => json!({ "error": e }),
        };
    }
    Ok(Outcome { json: envelope("cones", Some(&m), completeness, result), table, hypothesis_failed: failed })
}

struct SweepSetup {
    m: ManifoldPresentation,
    alphas: Vec<Class>,
    segment: ParameterSegment,
    path: Option<GmaPath>,
}

fn sweep_setup(a: &SegmentArgs) -> Result<SweepSetup, CliError> {
    let SweepVar::Beta = a.var;
    let m = build_manifold(&a.manifold)?;
    let alphas = a.alpha.iter().map(|s| class(&m, s)).collect::<Result<Vec<_>, _>>()?;
    let segment = ParameterSegment::new(&m, class(&m, &a.beta0)?, class(&m, &a.beta1)?)?;
    let path = match (&a.c0, &a.c1, a.j_gma) {
        (Some(c0), Some(c1), _) => Some(GmaPath::Affine {
            c0: parse_rational_list(c0)?,
            c1: parse_rational_list(c1)?,
            beta: segment.beta0.clone(),
            segment: Some(segment.clone()),
        }),
        (_, _, true) => Some(GmaPath::JSpecialization { segment: segment.clone() }),
        _ => None,
    };
    if path.is_some() && alphas.len() != 1 {
        return Err(CliError::Input("gMA sweeps take exactly one --alpha".into()));
    }
    Ok(SweepSetup { m, alphas, segment, path })
}

fn rational_or_approx(r: &stability_core::arith::RootHandle) -> String {
    r.exact_value().map(format_rational).unwrap_or_else(|| format!("{:.17e}", r.to_f64()))
}

fn chamber_table(rep: &ChamberReport, n_alpha: usize) -> Vec<Vec<String>> {
    let mut header = vec!["t_lo".to_string(), "t_hi".into(), "wall_source".into()];
    for i in 0..n_alpha {
        header.push(format!("status_{i}"));
        header.push(format!("dest_{i}"));
    }
    let mut table = vec![header];
    for c in &rep.chambers {
        let source = rep
            .walls
            .iter()
            .find(|w| w.location.cmp_root(&c.hi) == std::cmp::Ordering::Equal)
            .map(|w| {
                w.sources
                    .iter()
                    .map(|s| s.candidate.clone().unwrap_or_default())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .unwrap_or_default();
        let mut row = vec![rational_or_approx(&c.lo), rational_or_approx(&c.hi), source];
        for v in &c.verdicts {
            row.push(v.status.as_str().to_string());
            row.push(v.dest.join(" "));
        }
        table.push(row);
    }
    table
}

fn sweep_completeness(s: &SweepSetup, rep: &ChamberReport) -> &'static str {
    let statement = if s.path.is_some() { "gma" } else { "j" };
    let all = rep.chambers.iter().all(|c| {
        let t: Rational = parse_rational(&c.midpoint).expect("midpoint is a rational");
        let beta = s.segment.at(&t);
        s.alphas.iter().all(|a| jstab::completeness(&s.m, statement, a, &beta) == Completeness::Certified)
    });
    if all {
        "certified"
    } else {
        "relative"
    }
}

fn sweep(a: &SegmentArgs) -> Result<Outcome, CliError> {
    let s = sweep_setup(a)?;
    let cands = a.candidates.as_deref();
    let rep = match &s.path {
        Some(path) => wallchamber::gma_chambers(&s.m, &s.alphas[0], path, cands)?,
        None => wallchamber::chambers(&s.m, &s.alphas, &s.segment, cands)?,
    };
    if let Some(w) = rep.walls.iter().chain(&rep.hypothesis_walls).find(|w| !w.verify()) {
        return Err(CliError::Internal(format!("wall at t = {} fails its equation", w.t_approx)));
    }
    let walls: Vec<Value> = rep
        .walls
        .iter()
        .map(|w| json!(w.parameter.clone().or_else(|| w.t.clone()).unwrap_or_else(|| format!("{:.17e}", w.t_approx))))
        .collect();
    let plot = json!({
        "walls": rep.walls.iter().map(|w| w.parameter_approx.unwrap_or(w.t_approx)).collect::<Vec<_>>(),
        "chambers": rep.chambers.iter().map(|c| json!({
            "lo": c.lo.to_f64(),
            "hi": c.hi.to_f64(),
            "label": c.verdicts.iter().map(|v| format!("{}:{}", v.status.as_str(), v.dest.join("+"))).collect::<Vec<_>>().join(" "),
        })).collect::<Vec<_>>(),
    });
    let table = chamber_table(&rep, s.alphas.len());
    let completeness = sweep_completeness(&s, &rep);
    let result = json!({ "walls": walls, "report": rep, "plot": plot });
    Ok(Outcome { json: envelope("sweep", Some(&s.m), completeness, result), table, hypothesis_failed: false })
}

fn oracle_sweep(a: &SegmentArgs, grid: usize) -> Result<Outcome, CliError> {
    let s = sweep_setup(a)?;
    let cands = a.candidates.as_deref();
    let rows = match &s.path {
        Some(path) => wallchamber::gma_sweep_oracle(&s.m, &s.alphas[0], path, cands, grid)?,
        None => wallchamber::sweep_oracle(&s.m, &s.alphas, &s.segment, cands, grid)?,
    };
    let n_alpha = if s.path.is_some() { 1 } else { s.alphas.len() };
    let mut header = vec!["t".to_string(), "parameter".into()];
    for i in 0..n_alpha {
        header.push(format!("status_{i}"));
        header.push(format!("dest_{i}"));
    }
    let mut table = vec![header];
    for (_, r) in &rows {
        let mut row = vec![r.t.clone(), r.parameter.clone().unwrap_or_default()];
        for v in &r.verdicts {
            row.push(v.status.as_str().to_string());
            row.push(v.dest.join(" "));
        }
        table.push(row);
    }
    let result: Vec<_> = rows.into_iter().map(|(_, r)| r).collect();
    Ok(Outcome { json: envelope("oracle-sweep", Some(&s.m), "relative", result), table, hypothesis_failed: false })
}

fn export(a: &ExportManifold) -> Result<Outcome, CliError> {
    let m = build_manifold(&a.manifold)?;
    let doc: Value = serde_json::from_str(&save_manifold(&m)).expect("presentation JSON");
    let table = vec![vec!["name".into(), "hash".into()], vec![m.name.clone(), presentation_hash(&m)]];
    Ok(Outcome { json: doc, table, hypothesis_failed: false })
}
