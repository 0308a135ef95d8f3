mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use common::*;
use num_traits::{One, Zero};
use stability_core::arith::{
    divide_out_linear, isolate_largest_nonneg_root, rat, sign_relative_to_root, AlgebraicValue, RootSide, UniPoly,
};
use stability_core::cones::{self, projection, ConeKind, Membership};
use stability_core::dhym;
use stability_core::geometry::{blowup_pn, load_manifold, save_manifold, wu_bundle};
use stability_core::gma::{self, GmaCoefficients};
use stability_core::jstab::{self, InequalityOutcome, Solvability, Status};
use stability_core::wallchamber::{self, ParameterSegment};
use stability_core::{Class, HomogPoly, Rational};

fn h_poly(c: &[(i64, i64)]) -> UniPoly<Rational> {
    UniPoly::new(c.iter().map(|&(n, d)| rat(n, d)).collect())
}

#[test]
fn root_isolation_examples() {
    let r = isolate_largest_nonneg_root(&h_poly(&[(-1, 1), (-1, 1), (1, 2)])).unwrap();
    assert!((r.to_f64() - (1.0 + 3f64.sqrt())).abs() < 1e-12);
    assert_eq!(r.cmp_rational(&rat(27, 10)), std::cmp::Ordering::Greater);
    assert_eq!(r.cmp_rational(&rat(28, 10)), std::cmp::Ordering::Less);
    let zero = isolate_largest_nonneg_root(&UniPoly::monomial(rat(1, 6), 3)).unwrap();
    assert!(zero.is_zero());
    let three = isolate_largest_nonneg_root(&h_poly(&[(0, 1), (0, 1), (-1, 2), (1, 6)])).unwrap();
    assert_eq!(three.exact_value(), Some(&rat(3, 1)));

    let h = h_poly(&[(-1, 1), (-1, 1), (1, 2)]);
    assert_eq!(sign_relative_to_root(&h, &rat(3, 1)).unwrap(), RootSide::Above);
    assert_eq!(sign_relative_to_root(&h, &rat(2, 1)).unwrap(), RootSide::Below);
    assert_eq!(sign_relative_to_root(&h_poly(&[(-5, 1), (1, 1)]), &rat(5, 1)).unwrap(), RootSide::At);
}

#[test]
fn division_examples() {
    let q = HomogPoly::new(2, vec![rat(-1, 1), rat(-1, 1), rat(1, 2)]);
    let r = isolate_largest_nonneg_root(&q.dehomogenize()).unwrap();
    let f = divide_out_linear(&q, &r).unwrap();
    assert_eq!(f.quotient[1].value, AlgebraicValue::Rational(rat(1, 2)));
    // (√3 − 1)/2
    assert!((f.quotient[0].value.to_f64(&r) - (3f64.sqrt() - 1.0) / 2.0).abs() < 1e-14);

    let q = HomogPoly::new(3, vec![rat(0, 1), rat(0, 1), rat(-1, 2), rat(1, 6)]);
    let r = isolate_largest_nonneg_root(&q.dehomogenize()).unwrap();
    let f = divide_out_linear(&q, &r).unwrap();
    assert_eq!(f.quotient_exact().unwrap().coeffs(), &[rat(0, 1), rat(0, 1), rat(1, 6)]);

    let q = HomogPoly::new(2, vec![rat(0, 1), rat(0, 1), rat(1, 2)]);
    let r = isolate_largest_nonneg_root(&q.dehomogenize()).unwrap();
    assert_eq!(divide_out_linear(&q, &r).unwrap().quotient_exact().unwrap().coeffs(), &[rat(0, 1), rat(1, 2)]);
}

#[test]
fn intersection_examples() {
    let m = wu_bundle(1, &[1, 3]).unwrap();
    let l = c2(rat(1, 1), rat(0, 1));
    let h = c2(rat(0, 1), rat(1, 1));
    assert_eq!(m.intersect(&[&h, &h, &h]).unwrap(), rat(4, 1));
    assert_eq!(m.intersect(&[&h, &h, &l]).unwrap(), rat(1, 1));
    assert_eq!(m.intersect(&[&h, &l, &l]).unwrap(), rat(0, 1));
    let a = c2(rat(1, 1), rat(1, 1));
    assert_eq!(m.intersect(&[&a, &a, &a]).unwrap(), rat(7, 1));
    assert_eq!(wu_powers(1, &[1, 3], &a, 3, &a, 0), rat(7, 1));

    let s = m.candidate("S").unwrap();
    let on = |v: &stability_core::geometry::SubvarietyCandidate, cs: &[&Class]| stability_core::geometry::intersect_on(v, cs).unwrap();
    assert_eq!(on(s, &[&h, &h]), rat(1, 1));
    assert_eq!(on(s, &[&h, &l]), rat(1, 1));
    assert_eq!(on(s, &[&l, &l]), rat(0, 1));
    let c = m.candidate("C").unwrap();
    assert_eq!(on(c, &[&l]), rat(1, 1));
    assert_eq!(on(c, &[&h]), rat(0, 1));
    let z = Class::zero(2);
    assert!(on(s, &[&z, &z]).is_zero());

    let surf = wu_bundle(1, &[1]).unwrap();
    assert_eq!(surf.intersect(&[&h, &h]).unwrap(), rat(1, 1));
    assert_eq!(surf.intersect(&[&h, &l]).unwrap(), rat(1, 1));
    let four = wu_bundle(2, &[1, 2, 5]).unwrap();
    assert_eq!(four.intersect(&[&h, &h, &h, &h]).unwrap(), rat(16, 1));

    let b3 = blowup_pn(3).unwrap();
    let e = c2(rat(0, 1), rat(1, 1));
    let hh = c2(rat(1, 1), rat(0, 1));
    assert_eq!(b3.intersect(&[&e, &e, &e]).unwrap(), rat(1, 1));
    assert_eq!(b3.intersect(&[&hh, &hh, &e]).unwrap(), rat(0, 1));
    let b2 = blowup_pn(2).unwrap();
    assert_eq!(b2.intersect(&[&e, &e]).unwrap(), rat(-1, 1));
}

#[test]
fn manifold_documents() {
    let m = wu_bundle(1, &[1, 3]).unwrap();
    assert_eq!(load_manifold(&save_manifold(&m)).unwrap(), m);
    let doc = r#"{"name":"p","dim":1,"basis":["h"],"tensor":[{"monomial":{"h":1},"value":"1/3"}],
        "cones":[],"candidates":[]}"#;
    let p = load_manifold(doc).unwrap();
    assert_eq!(p.intersect(&[&Class::new(vec![rat(1, 1)])]).unwrap(), rat(1, 3));
    let bad = r#"{"name":"p","dim":1,"basis":["h"],"tensor":[{"monomial":{"h":1},"value":"1"}],
        "cones":[],"candidates":[{"name":"pt","dim":0,"tensor":[{"monomial":{"e":0},"value":"1"}]}]}"#;
    assert!(load_manifold(bad).is_err());
}

#[test]
fn cone_examples() {
    let m = wu_bundle(1, &[1, 3]).unwrap();
    let b = rat(1, 10);
    let mu = table_mu(&b);
    let gamma = c2(&mu - rat(2, 1), &mu - rat(2, 1) * &b);
    assert_eq!(cones::in_cone(&m, ConeKind::Modified(3), &gamma).unwrap(), Membership::Inside);
    assert_eq!(cones::in_cone(&m, ConeKind::Kahler, &c2(rat(0, 1), rat(1, 1))).unwrap(), Membership::Boundary);
    for kind in [ConeKind::Kahler, ConeKind::Nef, ConeKind::Pseff, ConeKind::Big] {
        assert_eq!(cones::in_cone(&m, kind, &Class::zero(2)).unwrap(), Membership::Boundary);
    }

    let alpha = c2(rat(1, 1), rat(1, 1));
    assert_eq!(projection(&m, &alpha, &c2(rat(1, 1), rat(1, 10))).unwrap().eta, c2(rat(0, 1), rat(1, 1)));
    assert_eq!(projection(&m, &alpha, &c2(rat(1, 1), rat(2, 1))).unwrap().eta, c2(rat(1, 1), rat(0, 1)));
    let bl = blowup_pn(3).unwrap();
    let eta = projection(&bl, &c2(rat(1, 1), rat(-1, 4)), &c2(rat(1, 1), rat(-1, 2))).unwrap().eta;
    assert_eq!(cones::in_cone(&bl, ConeKind::Nef, &eta).unwrap(), Membership::Boundary);
    assert_ne!(cones::in_cone(&bl, ConeKind::Kahler, &eta).unwrap(), Membership::Inside);

    for (b, inside) in [(rat(1, 16), false), (rat(1, 15), false), (rat(1, 14), true)] {
        let h = cones::check_modified_hypotheses(&m, &alpha, &c2(rat(1, 1), b), &rat(0, 1)).unwrap();
        assert_eq!(h[1].verdict == Some(Membership::Inside), inside);
    }
    // p = 1 class μα − β in modified(2): (μ−1) + (μ−b) > 0 ⇔ b > 1/29
    for (b, inside) in [(rat(1, 30), false), (rat(1, 29), false), (rat(1, 28), true)] {
        let h = cones::check_modified_hypotheses(&m, &alpha, &c2(rat(1, 1), b), &rat(0, 1)).unwrap();
        assert_eq!(h[0].verdict == Some(Membership::Inside), inside);
    }
    let h = cones::check_modified_hypotheses(&m, &alpha, &alpha, &rat(0, 1)).unwrap();
    assert!(cones::hypotheses_hold(&h));
}

#[test]
fn slope_and_classification_examples() {
    let m = wu_bundle(1, &[1, 3]).unwrap();
    let alpha = c2(rat(1, 1), rat(1, 1));
    let beta = |b: Rational| c2(rat(1, 1), b);
    assert_eq!(jstab::slope(&m, &alpha, &beta(rat(1, 6)), None).unwrap(), rat(6, 7));
    for b in [rat(1, 20), rat(1, 3), rat(5, 1)] {
        assert_eq!(jstab::slope(&m, &alpha, &beta(b), Some("C")).unwrap(), rat(1, 1));
    }
    assert_eq!(jstab::slope(&m, &alpha, &alpha, None).unwrap(), rat(3, 1));

    let v = jstab::classify(&m, &alpha, &beta(rat(1, 5))).unwrap();
    assert_eq!(v.delta_pp, rat(-1, 35));
    let only_c = {
        let mut r = m.clone();
        r.candidates.retain(|c| c.name == "C");
        r
    };
    assert_eq!(jstab::stability_threshold(&only_c, &alpha, &alpha).unwrap().0, rat(1, 1));
    let at_wall = jstab::classify(&m, &alpha, &beta(rat(2, 9))).unwrap();
    assert!(at_wall.delta_pp <= Rational::zero());

    let dest = |b: Rational| jstab::classify(&m, &alpha, &beta(b)).unwrap().dest;
    assert_eq!(dest(rat(1, 10)), vec!["C", "S"]);
    assert_eq!(dest(rat(1, 5)), vec!["C"]);
    assert!(dest(rat(1, 4)).is_empty());
    assert_eq!(jstab::classify(&m, &alpha, &beta(rat(1, 4))).unwrap().status, Status::Stable);

    let eff = |b: Rational| jstab::effective_test(&m, &alpha, &beta(b), &rat(0, 1)).unwrap();
    assert_eq!(eff(rat(1, 4)).outcome, Solvability::Solvable);
    let e = eff(rat(1, 5));
    assert_eq!(e.outcome, Solvability::NotSolvable);
    assert_eq!(e.witnesses, vec!["C"]);
    assert_eq!(jstab::effective_test(&m, &alpha, &alpha, &rat(0, 1)).unwrap().outcome, Solvability::Solvable);
}

#[test]
fn double_inequality_examples() {
    let m = wu_bundle(1, &[1, 3]).unwrap();
    let alpha = c2(rat(1, 1), rat(1, 1));
    let beta = c2(rat(1, 1), rat(1, 10));
    let eta = projection(&m, &alpha, &beta).unwrap().eta;
    let top = jstab::double_inequality_check(&m, &eta, &beta, &rat(1, 1), &[]).unwrap();
    assert_eq!(top.lower, rat(1, 1));
    assert_eq!(top.upper, rat(1, 1));
    let scan: Vec<Rational> = (1..=20).map(|k| rat(k, 20)).collect();
    let mut holds = 0;
    for t in &scan {
        let r = jstab::double_inequality_check(&m, &eta, &beta, t, &scan).unwrap();
        if r.delta_pp <= Rational::zero() {
            assert_eq!(r.outcome, InequalityOutcome::Holds, "t = {t}");
            holds += 1;
        }
    }
    assert!(holds > 0);
    let stable_beta = c2(rat(1, 1), rat(1, 2));
    let eta = projection(&m, &alpha, &stable_beta).unwrap().eta;
    let r = jstab::double_inequality_check(&m, &eta, &stable_beta, &rat(9, 10), &[rat(9, 10), rat(1, 1)]).unwrap();
    if r.delta_pp > Rational::zero() {
        assert_eq!(r.outcome, InequalityOutcome::Inapplicable);
    }
}

#[test]
fn gma_examples() {
    let q = gma::q_polynomial(2, &[rat(2, 1), rat(3, 1)]).unwrap();
    assert_eq!(q.coeffs(), &[rat(-3, 1), rat(-2, 1), rat(1, 2)]);
    assert_eq!(gma::q_polynomial(1, &[rat(2, 1), rat(3, 1)]).unwrap().coeffs(), &[rat(-2, 1), rat(1, 1)]);

    let m = wu_bundle(1, &[1, 3]).unwrap();
    let alpha = c2(rat(1, 1), rat(1, 1));
    for b in [rat(1, 10), rat(1, 5), rat(1, 4)] {
        let beta = c2(rat(1, 1), b);
        let g = GmaCoefficients::j_equation(&m, &alpha, &beta).unwrap();
        let a3 = wu_powers(1, &[1, 3], &alpha, 3, &alpha, 0);
        let b3 = wu_powers(1, &[1, 3], &beta, 0, &beta, 3);
        let a2b = wu_powers(1, &[1, 3], &alpha, 2, &beta, 1);
        let expect = (a3 / rat(6, 1) - &g.c[0] * a2b / rat(2, 1)) / b3;
        assert_eq!(g.c_top, expect);
    }
    let beta = c2(rat(1, 1), rat(1, 5));
    let zero = gma::solve_top_constant(&m, &alpha, &beta, &[rat(0, 1), rat(0, 1)]).unwrap();
    assert_eq!(zero, wu_powers(1, &[1, 3], &alpha, 3, &alpha, 0) / (rat(6, 1) * wu_powers(1, &[1, 3], &beta, 0, &beta, 3)));
    let c = [rat(1, 4), rat(1, 9)];
    let same = gma::solve_top_constant(&m, &alpha, &alpha, &c).unwrap();
    assert_eq!(same, rat(1, 6) - &c[0] / rat(2, 1) - &c[1]);

    let f = gma::factorize(&[rat(1, 1), rat(1, 1)]).unwrap();
    assert!((f.entries[1].root.to_f64() - (1.0 + 3f64.sqrt())).abs() < 1e-12);
    let f = gma::factorize(&[rat(2, 3), rat(0, 1), rat(0, 1), rat(0, 1)]).unwrap();
    for e in &f.entries {
        assert_eq!(e.root.exact_value(), Some(&(rat(2, 3) * rat(e.p as i64, 1))));
    }
    assert!(gma::factorize(&vec![rat(0, 1); 3]).unwrap().entries.iter().all(|e| e.root.is_zero()));

    let cc = m.candidate("C").unwrap();
    assert_eq!(gma::gma_test(&alpha, &beta, &[rat(3, 1), rat(0, 1)], cc).unwrap().value, rat(-2, 1));
    for v in &m.candidates {
        assert!(gma::gma_test(&alpha, &beta, &[rat(0, 1), rat(0, 1)], v).unwrap().value > Rational::zero());
    }
    assert_eq!(gma::classify_gma(&m, &alpha, &beta, &[rat(0, 1), rat(0, 1)]).unwrap().status, Status::Stable);
}

#[test]
fn inverse_hessian_examples() {
    let m = wu_bundle(1, &[1, 3]).unwrap();
    let alpha = c2(rat(1, 1), rat(1, 1));
    let beta = c2(rat(1, 1), rat(1, 5));
    let ih = gma::inverse_hessian(&m, &alpha, &beta, 1).unwrap();
    assert_eq!(ih.kappa, Rational::one() / table_mu(&rat(1, 5)));
    let ih2 = gma::inverse_hessian(&m, &alpha, &beta, 2).unwrap();
    // κ = 1!∫α³ / (3!∫β²α)
    let expect = wu_powers(1, &[1, 3], &alpha, 3, &alpha, 0) / (rat(6, 1) * wu_powers(1, &[1, 3], &alpha, 1, &beta, 2));
    assert_eq!(ih2.kappa, expect);
    let r = &ih2.roots[0];
    let check = &UniPoly::monomial(rat(1, 1), 2) - &UniPoly::constant(rat(2, 1) * &expect);
    assert_eq!(r.sign_at(&check), std::cmp::Ordering::Equal);
    assert_eq!(gma::inverse_hessian(&m, &alpha, &alpha, 1).unwrap().kappa, rat(1, 3));
}

#[test]
fn z_datum_examples() {
    use num_complex::Complex;
    let b = gma::from_z_datum(&Complex::new(rat(1, 1), rat(1, 1)), &[Complex::new(rat(1, 1), rat(0, 1)), Complex::new(rat(0, 1), rat(1, 1))]).unwrap();
    assert_eq!(b.b, vec![rat(-1, 1)]);
    let rho = [Complex::new(0.0, 1.0), Complex::new(0.0, 0.0)];
    assert_eq!(gma::from_z_datum(&Complex::new(0.3, -2.0), &rho).unwrap().b, vec![0.0]);
    let rho = [Complex::new(1.0, 2.0), Complex::new(-3.0, 0.5), Complex::new(0.25, 1.0)];
    let z = Complex::new(0.7f64, 0.2);
    let a = gma::from_z_datum(&z, &rho).unwrap();
    let b = gma::from_z_datum(&(z * 3.5), &rho).unwrap();
    for (x, y) in a.b.iter().zip(&b.b) {
        assert!((x - y).abs() < 1e-14);
    }
}

#[test]
fn dhym_examples() {
    let m = wu_bundle(1, &[1, 3]).unwrap();
    let a = c2(rat(1, 1), rat(1, 1));
    let z = dhym::central_charge(&m, &a, &a).unwrap();
    assert_eq!((z.re.clone(), z.im.clone()), (rat(-14, 1), rat(14, 1)));
    let angle = dhym::complementary_lifted_angle(3, &z, 1e-9).unwrap();
    assert!((angle.phi_hat - 3.0 * FRAC_PI_4).abs() < 1e-14);
    let z0 = dhym::central_charge(&m, &Class::zero(2), &a).unwrap();
    assert!(z0.re > Rational::zero() && z0.im.is_zero());

    // blow-up of P²: Z = ∫β² − ∫α² + 2i∫αβ
    let b2 = blowup_pn(2).unwrap();
    let (alpha, beta) = (c2(rat(1, 1), rat(-1, 2)), c2(rat(1, 1), rat(-1, 4)));
    let z = dhym::central_charge(&b2, &alpha, &beta).unwrap();
    let num = |x: &Class, y: &Class| common::brute_force(&[x, y], |k| common::blowup_number(2, k));
    assert_eq!(z.re, num(&beta, &beta) - num(&alpha, &alpha));
    assert_eq!(z.im, rat(2, 1) * num(&alpha, &beta));

    let p1 = dhym::DhymAngle::given(FRAC_PI_2, 1e-9).unwrap();
    assert!(p1.marginal);
    let z = dhym::CentralCharge { re: rat(0, 1), im: rat(-1, 1) };
    assert!(dhym::complementary_lifted_angle(1, &z, 1e-9).is_err());

    let s = m.candidate("S").unwrap();
    let beta = c2(rat(1, 1), rat(1, 10));
    let v = dhym::dhym_test(&a, &beta, FRAC_PI_2, s, 1e-9).unwrap();
    let exact = wu_s(&a, &a) - wu_s(&beta, &beta);
    assert!((v.value - exact).abs() < 1e-12);
    let cc = m.candidate("C").unwrap();
    let phi = 2.2;
    let v = dhym::dhym_test(&a, &beta, phi, cc, 1e-9).unwrap();
    assert!((v.value - (1.0 - 1.0 / phi.tan())).abs() < 1e-12);
    let angle = dhym::complementary_lifted_angle(3, &dhym::central_charge(&m, &a, &beta).unwrap(), 1e-9).unwrap();
    assert!(dhym::dhym_test(&a, &beta, angle.phi_hat, s, 1e-9).unwrap().relative_error < 1e-9);

    let m4 = wu_bundle(1, &[1, 2, 3]).unwrap();
    let one = c2(rat(1, 1), rat(1, 1));
    let h = dhym::dhym_hypothesis_check(&m4, &one, &one, &dhym::DhymAngle::given(PI / 3.0, 1e-9).unwrap(), 1e-9).unwrap();
    assert!(!h.window_ok);
    let h = dhym::dhym_hypothesis_check(&m, &one, &one, &dhym::DhymAngle::given(3.0 * FRAC_PI_4, 1e-9).unwrap(), 1e-9).unwrap();
    assert!(h.window_ok);
    let h = dhym::dhym_hypothesis_check(&b2, &alpha, &beta, &dhym::DhymAngle::given(2.9, 1e-9).unwrap(), 1e-9).unwrap();
    assert!(h.window_ok);
}

/// `∫_S x·y` on the section surface S of Wu(1,(1,3)): H² = 1, HL = 1, L² = 0.
fn wu_s(x: &Class, y: &Class) -> f64 {
    let v = common::brute_force(&[x, y], |k| common::wu_number(1, &[1], k));
    stability_core::scalar::rational_to_f64(&v)
}

#[test]
fn wall_examples() {
    let m = wu_bundle(1, &[1, 3]).unwrap();
    let alpha = c2(rat(1, 1), rat(1, 1));
    let seg = ParameterSegment::new(&m, c2(rat(1, 1), rat(1, 20)), c2(rat(1, 1), rat(1, 2))).unwrap();
    let names: Vec<String> = vec!["S".into(), "C".into()];
    let ws = wallchamber::j_walls(&m, std::slice::from_ref(&alpha), &seg, Some(&names)).unwrap();
    let walls: Vec<_> = ws.walls.iter().map(|w| w.parameter.clone().unwrap()).collect();
    assert_eq!(walls, vec!["5/26", "2/9"]);
    assert!(table_gap_s(&rat(5, 26)).is_zero() && table_gap_c(&rat(2, 9)).is_zero());

    let stable = ParameterSegment::new(&m, c2(rat(1, 1), rat(1, 2)), c2(rat(1, 1), rat(3, 1))).unwrap();
    let rep = wallchamber::chambers(&m, &[alpha.clone(), alpha.scaled(&rat(3, 1))], &stable, Some(&names)).unwrap();
    assert_eq!(rep.chambers.len(), 1);
    assert_eq!(rep.chambers[0].stable_set, vec![0, 1]);
    for (_, row) in wallchamber::sweep_oracle(&m, &[alpha.clone()], &stable, Some(&names), 50).unwrap() {
        assert_eq!(row.verdicts[0].status, Status::Stable);
    }

    let rows = wallchamber::sweep_oracle(&m, &[alpha.clone()], &seg, Some(&names), 1000).unwrap();
    let mut changes = Vec::new();
    for w in rows.windows(2) {
        if w[0].1.verdicts != w[1].1.verdicts {
            changes.push((seg.parameter(&w[0].0).unwrap(), seg.parameter(&w[1].0).unwrap()));
        }
    }
    assert_eq!(changes.len(), 2);
    assert!(changes[0].0 <= rat(5, 26) && rat(5, 26) < changes[0].1);
    assert!(changes[1].0 <= rat(2, 9) && rat(2, 9) < changes[1].1);
}
