use crate::arith::rat;
use crate::cones::{ConeDescription, ConeKind, LinearIneq};
use crate::geometry::{
    CompletenessRegion, IntersectionForm, ManifoldPresentation, ModelError, RegionKind, SubvarietyCandidate,
};
use crate::{Class, Rational};

fn int(k: i64) -> Rational {
    rat(k, 1)
}

/// Ring of `P(O ⊕ L^{-a_1} ⊕ … ⊕ L^{-a_r})` over a curve with `deg L = d`,
/// in the basis `(L, H)`.
fn wu_tensor(d: i64, weights: &[i64]) -> IntersectionForm {
    let n = weights.len() + 1;
    let sum: i64 = weights.iter().sum();
    IntersectionForm::new(2, n)
        .with(&[0, n], int(d * sum))
        .with(&[1, n - 1], int(d))
}

fn ineq(a: i64, b: i64, strict: bool) -> LinearIneq {
    LinearIneq { coeffs: vec![int(a), int(b)], strict }
}

/// The projective bundle `P(O ⊕ (L^∨)^{a_1} ⊕ … ⊕ (L^∨)^{a_{n−1}})` over a
/// curve, with `deg L = d` and strictly increasing positive weights.
///
/// Candidates: the section `C`, the truncations `S = V_1, V_2, …, V_{n−2}`,
/// the divisors `D_i` of class `H − a_i L` for `i ≤ n − 2` (the last one is
/// `V_{n−2}` again) and a fiber line `F`.
pub fn wu_bundle(d: i64, weights: &[i64]) -> Result<ManifoldPresentation, ModelError> {
    if d <= 0 {
        return Err(ModelError::Family(format!("degree d = {d} must be positive")));
    }
    if weights.is_empty() {
        return Err(ModelError::Family("need at least one weight (n >= 2)".into()));
    }
    if weights[0] <= 0 || weights.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ModelError::Family(format!("weights {weights:?} must be positive and strictly increasing")));
    }
    let n = weights.len() + 1;
    let tensor = wu_tensor(d, weights);

    let mut candidates = vec![SubvarietyCandidate::new("C", wu_tensor(d, &[])).tagged("section")];
    for p in 1..=n.saturating_sub(2) {
        let name = if p == 1 { "S".to_string() } else { format!("V_{p}") };
        candidates.push(SubvarietyCandidate::new(name, wu_tensor(d, &weights[..p])).tagged("truncated-bundle"));
    }
    for (i, a) in weights.iter().enumerate().take(n.saturating_sub(2)) {
        let divisor = Class::new(vec![int(-a), int(1)]);
        candidates.push(SubvarietyCandidate::new(format!("D_{}", i + 1), tensor.contract(&divisor)).tagged("divisor"));
    }
    candidates.push(
        SubvarietyCandidate::new("F", IntersectionForm::new(2, 1).with(&[0, 1], int(1))).tagged("fiber-line"),
    );

    let top = weights[n - 2];
    let mut cones = vec![
        ConeDescription::new(ConeKind::Kahler, vec![ineq(1, 0, true), ineq(0, 1, true)]),
        ConeDescription::new(ConeKind::Nef, vec![ineq(1, 0, false), ineq(0, 1, false)]),
        ConeDescription::new(ConeKind::Pseff, vec![ineq(0, 1, false), ineq(1, top, false)]),
        ConeDescription::new(ConeKind::Big, vec![ineq(0, 1, true), ineq(1, top, true)]),
    ];
    for p in 1..=n {
        let a = if p == 1 { 0 } else { weights[p - 2] };
        cones.push(ConeDescription::new(ConeKind::Modified(p), vec![ineq(1, a, true), ineq(0, 1, true)]));
    }

    let complete_regions = if n == 3 {
        vec![CompletenessRegion { statement: "j".into(), kind: RegionKind::ModifiedHypotheses }]
    } else {
        Vec::new()
    };

    let ws: Vec<String> = weights.iter().map(|w| w.to_string()).collect();
    let m = ManifoldPresentation {
        name: format!("wu(d={d},a=({}))", ws.join(",")),
        basis: vec!["L".into(), "H".into()],
        tensor,
        cones,
        candidates,
        complete_regions,
    };
    m.validate()?;
    Ok(m)
}

/// Blow-up of `Pⁿ` in a point, in the basis `(H, E)`.
///
/// Candidates: a hyperplane `Hbar` missing the point, the strict transform
/// `P` of a hyperplane through it, the exceptional divisor `E` and a line
/// inside `E` (omitted for `n = 2`, where it is `E`).
pub fn blowup_pn(n: usize) -> Result<ManifoldPresentation, ModelError> {
    if n < 2 {
        return Err(ModelError::Family(format!("blow-up of P^{n} needs n >= 2")));
    }
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let tensor = IntersectionForm::new(2, n).with(&[n, 0], int(1)).with(&[0, n], int(sign));
    let h = Class::new(vec![int(1), int(0)]);
    let p = Class::new(vec![int(1), int(-1)]);
    let e = Class::new(vec![int(0), int(1)]);

    let mut candidates = vec![
        SubvarietyCandidate::new("Hbar", tensor.contract(&h)).tagged("divisor"),
        SubvarietyCandidate::new("P", tensor.contract(&p)).tagged("divisor"),
        SubvarietyCandidate::new("E", tensor.contract(&e)).tagged("divisor"),
    ];
    if n > 2 {
        candidates.push(
            SubvarietyCandidate::new("line_in_E", IntersectionForm::new(2, 1).with(&[0, 1], int(-1))).tagged("curve"),
        );
    }

    let nef = vec![ineq(0, -1, false), ineq(1, 1, false)];
    let pseff = vec![ineq(1, 0, false), ineq(1, 1, false)];
    let strict = |v: &[LinearIneq]| v.iter().map(|l| LinearIneq { strict: true, ..l.clone() }).collect::<Vec<_>>();
    let cones = vec![
        ConeDescription::new(ConeKind::Kahler, strict(&nef)),
        ConeDescription::new(ConeKind::Nef, nef.clone()),
        ConeDescription::new(ConeKind::Pseff, pseff.clone()),
        ConeDescription::new(ConeKind::Big, strict(&pseff)),
        ConeDescription::new(ConeKind::Modified(1), strict(&nef)),
        ConeDescription::new(ConeKind::Modified(n), strict(&pseff)),
    ];

    let m = ManifoldPresentation {
        name: format!("blowup(P^{n})"),
        basis: vec!["H".into(), "E".into()],
        tensor,
        cones,
        candidates,
        complete_regions: Vec::new(),
    };
    m.validate()?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::intersect_on;

    fn c(a: Rational, b: Rational) -> Class {
        Class::new(vec![a, b])
    }

    #[test]
    fn wu_threefold_numbers() {
        let m = wu_bundle(1, &[1, 3]).unwrap();
        let (l, h) = (c(int(1), int(0)), c(int(0), int(1)));
        assert_eq!(m.dim(), 3);
        assert_eq!(m.intersect(&[&h, &h, &h]).unwrap(), int(4));
        assert_eq!(m.intersect(&[&h, &h, &l]).unwrap(), int(1));
        assert_eq!(m.intersect(&[&h, &l, &l]).unwrap(), int(0));
        let a = l.plus(&h);
        assert_eq!(m.intersect(&[&a, &a, &a]).unwrap(), int(7));

        let s = m.candidate("S").unwrap();
        assert_eq!(intersect_on(s, &[&h, &h]).unwrap(), int(1));
        assert_eq!(intersect_on(s, &[&h, &l]).unwrap(), int(1));
        assert_eq!(intersect_on(s, &[&l, &l]).unwrap(), int(0));
        let cc = m.candidate("C").unwrap();
        assert_eq!(intersect_on(cc, &[&l]).unwrap(), int(1));
        assert_eq!(intersect_on(cc, &[&h]).unwrap(), int(0));
        let names: Vec<_> = m.candidates.iter().map(|v| v.name.as_str()).collect();
        assert_eq!(names, ["C", "S", "D_1", "F"]);
    }

    #[test]
    fn last_divisor_is_the_top_truncation() {
        let m = wu_bundle(2, &[1, 2, 5]).unwrap();
        let t = m.tensor.contract(&c(int(-5), int(1)));
        assert_eq!(t, m.candidate("V_2").unwrap().tensor);
        let h = c(int(0), int(1));
        assert_eq!(m.intersect(&[&h, &h, &h, &h]).unwrap(), int(16));
    }

    #[test]
    fn wu_surface_and_bad_weights() {
        let m = wu_bundle(1, &[1]).unwrap();
        let (l, h) = (c(int(1), int(0)), c(int(0), int(1)));
        assert_eq!(m.intersect(&[&h, &h]).unwrap(), int(1));
        assert_eq!(m.intersect(&[&h, &l]).unwrap(), int(1));
        assert!(wu_bundle(1, &[3, 1]).is_err());
        assert!(wu_bundle(1, &[1, 1]).is_err());
        assert!(wu_bundle(0, &[1]).is_err());
    }

    #[test]
    fn blowup_numbers() {
        let m3 = blowup_pn(3).unwrap();
        let (h, e) = (c(int(1), int(0)), c(int(0), int(1)));
        assert_eq!(m3.intersect(&[&e, &e, &e]).unwrap(), int(1));
        assert_eq!(m3.intersect(&[&h, &h, &e]).unwrap(), int(0));
        let m2 = blowup_pn(2).unwrap();
        assert_eq!(m2.intersect(&[&e, &e]).unwrap(), int(-1));
        assert_eq!(m2.candidates.len(), 3);
        let line = m3.candidate("line_in_E").unwrap();
        assert_eq!(intersect_on(line, &[&e]).unwrap(), int(-1));
        assert!(blowup_pn(1).is_err());
    }
}
