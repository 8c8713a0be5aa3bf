//! Cross-module invariants that tie the blow-up pipeline, the Newton
//! machinery, and the zeta engine together.

use blowade::certify::{analyze, same_type, AnalyzeOptions};
use blowade::newton::{newton_number, newton_principal_part, VarSet};
use blowade::parse::parse_polynomial;
use blowade::poly::{rat_int, Poly};
use blowade::zeta::{varchenko_zeta, ZetaFunction};

fn poly(t: &str) -> Poly {
    parse_polynomial(t).unwrap()
}

const CORPUS: [&str; 4] = [
    "z1*z2*z3 + z1^4 + z2^4 + z3^4",
    "z2^2*z3 - z1^3 + z1^5 + z2^5 + z3^5",
    "z2^2*z3 - z1^3 - z1^2*z3 + z1^4 + z2^4 + z3^4",
    "z1*z2*z3 + 2*z1^4 + z2^4 + 3*z3^4",
];

#[test]
fn principal_part_newton_number_finite_and_zeta_consistent() {
    for text in CORPUS {
        let r = analyze(&poly(text), &AnalyzeOptions::default()).unwrap();
        assert!(r.is_blow_ade, "{} should certify; failures {:?}", text, r.failures);
        for p in &r.points {
            let data = p.principal.as_ref().unwrap();
            let mut germ = data.h.clone();
            germ.insert_add([data.m as u16, 0, 0], data.c.clone());
            // the Newton number of h + c x1^m is finite
            let nn = newton_number(&germ, VarSet::all3()).unwrap();
            assert!(nn.value >= 0, "negative Newton number at {}", p.report.point);
            // the zeta from the bare principal part equals the zeta from the
            // full residual-bearing germ
            let full = &germ + &data.residual;
            let shifted_bare = germ.mul_var_power(0, r.d as u16);
            let shifted_full = full.mul_var_power(0, r.d as u16);
            let zb = varchenko_zeta(&shifted_bare, VarSet::all3()).unwrap();
            let zf = varchenko_zeta(&shifted_full, VarSet::all3()).unwrap();
            assert_eq!(zb, zf, "zeta differs with residual at {}", p.report.point);
            // the residual sits strictly above the boundary
            let pp = newton_principal_part(&full, VarSet::all3());
            assert_eq!(pp, germ, "residual terms leak onto the boundary");
        }
    }
}

#[test]
fn local_zeta_independent_of_constant() {
    // same boundary for every nonzero c
    let mut reference: Option<ZetaFunction> = None;
    for c in [1i64, -1, 2, 7, -5] {
        let sign = if c < 0 { "-" } else { "+" };
        let t = format!("x1^3*x2^2 + x1^3*x3^2 {} {}*x1^5", sign, c.abs());
        let z = varchenko_zeta(&poly(&t), VarSet::all3()).unwrap();
        match &reference {
            None => reference = Some(z),
            Some(r) => assert_eq!(&z, r, "c = {}", c),
        }
    }
}

#[test]
fn signature_invariant_under_linear_change() {
    let f = poly("z1*z2*z3 + z1^4 + z2^4 + z3^4");
    let a = analyze(&f, &AnalyzeOptions::default()).unwrap();
    // invertible rational change of coordinates
    let img1 = &Poly::var(0) + &Poly::var(1);
    let img2 = &Poly::var(1) + &Poly::var(2).scale(&rat_int(2));
    let img3 = poly("z3");
    let g = f.substitute(&[img1, img2, img3]);
    let b = analyze(&g, &AnalyzeOptions::default()).unwrap();
    assert!(b.is_blow_ade, "changed coordinates should still certify: {:?}", b.failures);
    assert_eq!(a.signature().unwrap(), b.signature().unwrap());
    assert!(same_type(&a, &b).unwrap().equal);
}

#[test]
fn same_type_symmetric_and_transitive_on_corpus() {
    let reports: Vec<_> = [
        "z1*z2*z3 + z1^4 + z2^4 + z3^4",
        "z1*z2*z3 + 2*z1^4 + z2^4 + 3*z3^4",
        "z1*z2*z3 + z1^4 + z2^4 + z3^4 + 2*z2^4",
    ]
    .iter()
    .map(|t| analyze(&poly(t), &AnalyzeOptions::default()).unwrap())
    .collect();
    for a in &reports {
        for b in &reports {
            let ab = same_type(a, b).unwrap().equal;
            let ba = same_type(b, a).unwrap().equal;
            assert_eq!(ab, ba);
            assert!(ab, "all three are three-node superisolated with m = 1");
        }
    }
}

#[test]
fn first_multiplicity_factor_matches_product_formula() {
    // mu = 1 nodal example: exponent -d^2 + 3d - 3 + mu = -2 at d = 3
    let r = analyze(
        &poly("z2^2*z3 - z1^3 - z1^2*z3 + z1^4 + z2^4 + z3^4"),
        &AnalyzeOptions::default(),
    )
    .unwrap();
    let z = r.global_zeta.as_ref().unwrap();
    let f1 = z.multiplicity_factor(1).unwrap();
    let d = r.d as i64;
    let expected_nu = -d * d + 3 * d - 3 + r.mu_tot.unwrap() as i64;
    assert!(expected_nu != 0);
    assert_eq!((f1.d as i64, f1.nu), (d, expected_nu));
}

#[test]
fn k0_bounded_by_mu_with_equality_iff_pure_a1() {
    for text in CORPUS {
        let r = analyze(&poly(text), &AnalyzeOptions::default()).unwrap();
        let mu = r.mu_tot.unwrap();
        assert!(r.k0 as u64 <= mu, "{}", text);
        assert_eq!(r.k0 as u64 == mu, r.subtype.pure_blow_a1, "{}", text);
    }
}

#[test]
fn nodes_away_from_coordinate_vertices() {
    // three general-position lines: nodes at (0:0:1), (0:1:1), (1:0:1)
    let fd = &(&poly("z1*z2") * &poly("z1 + z2 - z3"));
    let f = fd + &poly("z1^4 + z2^4 + z3^4");
    let r = analyze(&f, &AnalyzeOptions::default()).unwrap();
    assert!(r.is_blow_ade, "failures: {:?}", r.failures);
    assert_eq!(r.k0, 3);
    assert_eq!(r.blow_order, Some(1));
    assert!(r.subtype.pure_blow_a1);
    assert_eq!(r.le_yomdin, Some(true));
    assert_eq!(
        r.global_zeta.as_ref().unwrap(),
        &ZetaFunction::factor(4, -3)
    );
    let coords: Vec<String> = r.points.iter().map(|p| p.report.point.to_string()).collect();
    assert!(coords.contains(&"(0:1:1)".to_string()));
    assert!(coords.contains(&"(1:0:1)".to_string()));
}

#[test]
fn d4_point_certifies_end_to_end() {
    // three concurrent lines: a D4 point at (0:0:1)
    let fd = &(&poly("z1*z2") * &poly("z1 + z2"));
    let f = fd + &poly("z1^4 + z2^4 + z3^4");
    let r = analyze(&f, &AnalyzeOptions::default()).unwrap();
    assert!(r.is_blow_ade, "failures: {:?}", r.failures);
    assert_eq!(r.k0, 1);
    assert_eq!(r.mu_tot, Some(4));
    assert_eq!(r.blow_order, Some(1));
    assert!(r.subtype.general_ade);
    assert!(!r.subtype.blow_a);
    use blowade::curve::AdeType;
    assert_eq!(r.points[0].report.ade, Some(AdeType::D(4)));
    // exponent of (1-t^3): -9 + 9 - 3 + 4 = 1
    let z = r.global_zeta.as_ref().unwrap();
    let f1 = z.multiplicity_factor(1).unwrap();
    assert_eq!((f1.d, f1.nu), (3, 1));
}

#[test]
fn e7_point_certifies_end_to_end() {
    // line plus cuspidal cubic meeting tangentially: an E7 point
    let f = poly("z2^3*z3 + z2*z1^3 + z1^5 + z2^5 + z3^5");
    let r = analyze(&f, &AnalyzeOptions::default()).unwrap();
    assert!(r.is_blow_ade, "failures: {:?}", r.failures);
    assert_eq!(r.k0, 1);
    assert_eq!(r.mu_tot, Some(7));
    assert_eq!(r.blow_order, Some(1));
    use blowade::curve::AdeType;
    assert_eq!(r.points[0].report.ade, Some(AdeType::E(7)));
    // d = 4, mu = 7: exponent -16 + 12 - 3 + 7 = 0, zeta is the local factor
    let z = r.global_zeta.as_ref().unwrap();
    assert_eq!(z.degree(), r.points[0].local_zeta.as_ref().unwrap().degree());
}

#[test]
fn mixed_d5_a1_certifies_with_common_blow_order() {
    // f_4 = z1 (z2^2 z3 + z1^3): a D5 point at (0:0:1) where the line meets
    // the cusp, and an A1 point at (0:1:0)
    let f = poly("z1*z2^2*z3 + z1^4 + z1^5 + z2^5 + z3^5");
    let r = analyze(&f, &AnalyzeOptions::default()).unwrap();
    assert!(r.is_blow_ade, "failures: {:?}", r.failures);
    assert_eq!(r.k0, 2);
    assert_eq!(r.mu_tot, Some(6));
    assert_eq!(r.blow_order, Some(1));
    assert!(r.subtype.general_ade);
    use blowade::curve::AdeType;
    let mut types: Vec<AdeType> = r
        .points
        .iter()
        .map(|p| p.report.ade.clone().unwrap())
        .collect();
    types.sort();
    assert_eq!(types, vec![AdeType::A(1), AdeType::D(5)]);
    // d = 4, mu = 6: the (1-t^4) exponent is -16 + 12 - 3 + 6 = -1
    let z = r.global_zeta.as_ref().unwrap();
    let f1 = z.multiplicity_factor(1).unwrap();
    assert_eq!((f1.d, f1.nu), (4, -1));
}

#[test]
fn zeta_degree_matches_milnor_formula_for_le_yomdin() {
    // for a certified m-step perturbation with tangent-cone Milnor sum mu,
    // deg zeta = -1 - ((d-1)^3 + m * mu); the right side is the classical
    // Milnor number of such a germ, an independent oracle for the pipeline
    let examples = [
        "z1*z2*z3 + z1^4 + z2^4 + z3^4",
        "z2^2*z3 - z1^3 + z1^5 + z2^5 + z3^5",
        "z2^2*z3 - z1^3 - z1^2*z3 + z1^4 + z2^4 + z3^4",
        "z1^2*z2 + z1*z2^2 + z1^4 + z2^4 + z3^4",
        "z2^3*z3 + z2*z1^3 + z1^5 + z2^5 + z3^5",
        "z1*z2^2*z3 + z1^4 + z1^5 + z2^5 + z3^5",
    ];
    for text in examples {
        let r = analyze(&poly(text), &AnalyzeOptions::default()).unwrap();
        assert!(r.is_blow_ade, "{}: {:?}", text, r.failures);
        let d = r.d as i64;
        let m = r.blow_order.unwrap() as i64;
        let mu_tot = r.mu_tot.unwrap() as i64;
        let milnor = (d - 1).pow(3) + m * mu_tot;
        assert_eq!(
            r.global_zeta.as_ref().unwrap().degree(),
            -1 - milnor,
            "{}",
            text
        );
    }
}

#[test]
fn curve_zeta_degree_matches_classifier_milnor() {
    // two-variable sanity: deg zeta = mu - 1 for every ADE normal form
    use blowade::curve::classify_ade;
    use blowade::TruncatedSeries;
    for t in [
        "x2^2 + x3^2",
        "x2^2 + x3^3",
        "x2^2 + x3^5",
        "x2^2*x3 + x3^3",
        "x2^2*x3 + x3^4",
        "x2^3 + x3^4",
        "x2^3 + x2*x3^3",
        "x2^3 + x3^5",
    ] {
        let cl = classify_ade(&TruncatedSeries::new(poly(t), 24)).unwrap();
        let mu = cl.ade.milnor().unwrap() as i64;
        let z = varchenko_zeta(&poly(t), VarSet::pair(1, 2)).unwrap();
        assert_eq!(z.degree(), mu - 1, "{}", t);
    }
}

#[test]
fn tacnode_pair_with_blow_order_three() {
    // two A3 points on the quartic (z2 z3 - z1^2)(z2 z3 + z1^2), perturbed
    // in degree 7 only
    let f = poly("z2^2*z3^2 - z1^4 + z1^7 + z2^7 + z3^7");
    let r = analyze(&f, &AnalyzeOptions::default()).unwrap();
    assert!(r.is_blow_ade, "failures: {:?}", r.failures);
    assert_eq!(r.k0, 2);
    assert_eq!(r.mu_tot, Some(6));
    assert_eq!(r.blow_order, Some(3));
    assert_eq!(r.le_yomdin, Some(true));
    assert!(r.subtype.blow_a);
    assert!(!r.subtype.even_blow_a); // n = 3 is odd
    // Milnor formula: mu = (d-1)^3 + m mu_tot = 27 + 18 = 45
    assert_eq!(r.global_zeta.as_ref().unwrap().degree(), -46);
}

#[test]
fn non_isolated_germ_reported() {
    // f = f_d alone: the strict transform is singular along a line through
    // each node, which the normalization detects conclusively
    let r = analyze(&poly("z1*z2*z3"), &AnalyzeOptions::default()).unwrap();
    assert!(!r.is_blow_ade);
    assert!(r
        .failures
        .iter()
        .any(|f| f.contains("non-isolated") || f.contains("critical line")));
}

#[test]
fn analyze_never_panics_on_random_inputs() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(314159);
    let mut certified = 0u32;
    for _ in 0..60 {
        let mut f = Poly::zero();
        // random cubic part
        for e in [[3u16, 0, 0], [0, 3, 0], [0, 0, 3], [1, 1, 1], [2, 1, 0], [0, 2, 1], [1, 0, 2]]
        {
            if rng.gen_bool(0.6) {
                let c: i64 = rng.gen_range(-2..=2);
                f.insert_add(e, blowade::poly::rat_int(c));
            }
        }
        // random higher terms
        for _ in 0..rng.gen_range(1..=4) {
            let a = rng.gen_range(0..=4u16);
            let b = rng.gen_range(0..=4u16);
            let c = rng.gen_range(0..=4u16);
            let deg = a as u32 + b as u32 + c as u32;
            if (4..=5).contains(&deg) {
                f.insert_add([a, b, c], blowade::poly::rat_int(rng.gen_range(1..=3)));
            }
        }
        if f.is_zero() || f.order().unwrap_or(0) < 2 {
            continue;
        }
        // any Result is fine; panics are not
        if let Ok(r) = analyze(&f, &AnalyzeOptions::default()) {
            if r.is_blow_ade {
                certified += 1;
            }
        }
    }
    assert!(certified >= 1, "the draw should certify at least once");
}

#[test]
fn normalization_round_audit() {
    use blowade::blowup::normalize_node;
    // engineered shifts with known m: rounds stay within log2(m) + 1 of the
    // first pure power
    for (k, m) in [(1u16, 6u16), (2, 6), (1, 4), (3, 6)] {
        let base = poly(&format!("x2^2 + x3^2 + 5*x1^{}", m));
        let img2 = &Poly::var(1) + &Poly::monomial([k, 0, 0], rat_int(2));
        let img3 = &Poly::var(2) + &Poly::monomial([k, 0, 0], rat_int(-3));
        let shifted = base.substitute(&[Poly::var(0), img2, img3]);
        let node = normalize_node(&shifted, 40, 36).unwrap();
        assert_eq!(node.m, m as u32);
        let bound = (m as f64).log2().ceil() as u32 + 1;
        assert!(
            node.rounds <= bound + 1,
            "rounds {} exceed audit bound {}",
            node.rounds,
            bound
        );
    }
}
