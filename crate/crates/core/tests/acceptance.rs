//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Expected values marked as derived are computed by independent oracles
//! (iterated symbolic integration for volumes, hand algebra for coordinate
//! changes) and frozen here; closed-form quantities are asserted exactly.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use blowade::certify::{analyze, is_le_yomdin, same_type, AnalyzeOptions};
use blowade::curve::{classify_ade, AdeType};
use blowade::deform::{check_family, mu_star, CheckOptions, DeformationFamily};
use blowade::newton::{newton_number, VarSet};
use blowade::nondeg::{is_nondegenerate, Nondegeneracy};
use blowade::parse::parse_polynomial;
use blowade::poly::{rat, rat_int, Poly, Rat};
use blowade::series::TruncatedSeries;
use blowade::upoly::UPoly;
use blowade::zeta::{global_zeta, varchenko_zeta, ZetaFunction};

fn poly(t: &str) -> Poly {
    parse_polynomial(t).unwrap()
}

// ---------------------------------------------------------------------------
// independent volume oracle: iterated symbolic integration
// ---------------------------------------------------------------------------

/// Antiderivative with zero constant term.
fn antiderivative(p: &UPoly) -> UPoly {
    let mut coeffs = vec![Rat::zero()];
    for (i, c) in p.0.iter().enumerate() {
        coeffs.push(c / rat_int(i as i64 + 1));
    }
    UPoly::from_coeffs(coeffs)
}

/// Volume of the corner simplex { x >= 0 : sum x_i / a_i <= 1 } via nested
/// one-dimensional integration, an algorithmically independent route from
/// the determinant cone sums of the implementation.
fn simplex_volume(intercepts: &[Rat]) -> Rat {
    match intercepts {
        [] => Rat::one(),
        [a] => a.clone(),
        [a, rest @ ..] => {
            // integrate the scaled lower-dimensional volume over x in [0, a]:
            // slice intercepts are b_i (1 - x/a), so the slice volume is
            // vol(rest) * (1 - x/a)^(k-1)
            let k1 = rest.len();
            let base = simplex_volume(rest);
            // p(x) = (1 - x/a)^(k-1)
            let lin = UPoly::from_coeffs(vec![Rat::one(), -(Rat::one() / a.clone())]);
            let mut p = UPoly::one();
            for _ in 0..k1 {
                p = p.mul(&lin);
            }
            let integral = antiderivative(&p).eval(a);
            base * integral
        }
    }
}

/// Oracle Newton number for x1^a + x2^b + x3^c by inclusion-exclusion with
/// integrated volumes.
fn oracle_brieskorn_nu(a: i64, b: i64, c: i64) -> Rat {
    let axes = [rat_int(a), rat_int(b), rat_int(c)];
    let mut total = -Rat::one(); // empty subset, sign (-1)^3 * 1
    for mask in 1u8..8 {
        let subset: Vec<Rat> = (0..3)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| axes[i].clone())
            .collect();
        let k = subset.len();
        let mut factorial = Rat::one();
        for j in 1..=k {
            factorial *= rat_int(j as i64);
        }
        let term = factorial * simplex_volume(&subset);
        let sign = if (3 - k) % 2 == 0 { Rat::one() } else { -Rat::one() };
        total += sign * term;
    }
    total
}

#[test]
fn criterion_01_newton_number_pins() {
    for j in 1u16..=10 {
        let f = poly(&format!("x1^{}+x2^2+x3^2", 2 * j));
        let nu = newton_number(&f, VarSet::all3()).unwrap().value;
        assert_eq!(nu, 2 * j as i64 - 1, "nu(x1^{}+x2^2+x3^2)", 2 * j);
    }
    for a in 2i64..=6 {
        for b in 2i64..=6 {
            for c in 2i64..=6 {
                let f = poly(&format!("x1^{}+x2^{}+x3^{}", a, b, c));
                let nu = newton_number(&f, VarSet::all3()).unwrap().value;
                let expect = (a - 1) * (b - 1) * (c - 1);
                assert_eq!(nu, expect, "closed form at ({},{},{})", a, b, c);
                assert_eq!(
                    rat_int(nu),
                    oracle_brieskorn_nu(a, b, c),
                    "integration oracle at ({},{},{})",
                    a,
                    b,
                    c
                );
            }
        }
    }
    println!("criterion 01 (newton-number pins): PASS");
}

#[test]
fn criterion_02_local_node_zeta() {
    for d in [3u16, 4, 5] {
        for l in [1u16, 2, 3] {
            for c in [1i64, -1, 7] {
                let sign = if c < 0 { "-" } else { "+" };
                let t = format!(
                    "x1^{d}*x2^2 + x1^{d}*x3^2 {sign} {}*x1^{}",
                    c.abs(),
                    d + l
                );
                let z = varchenko_zeta(&poly(&t), VarSet::all3()).unwrap();
                assert_eq!(
                    z,
                    ZetaFunction::factor((d + l) as u64, -1),
                    "d={} l={} c={}",
                    d,
                    l,
                    c
                );
            }
        }
    }
    println!("criterion 02 (local node zeta): PASS");
}

#[test]
fn criterion_03_face_degree_formulas() {
    for d in [3i64, 4] {
        for n in [2i64, 4, 6] {
            // single top-dimensional face
            let t = format!(
                "x1^{} + x1^{}*x2^2 + x1^{}*x3^{}",
                d + 2,
                d,
                d + 1,
                n + 1
            );
            let z = varchenko_zeta(&poly(&t), VarSet::all3()).unwrap();
            assert_eq!(z.degree(), -n * (d + 2), "single face d={} n={}", d, n);
            for q in 1..=(n + 1) / 2 {
                let t = format!(
                    "x1^{} + x1^{}*x2^2 + x1^{}*x3^{} + x1^{}*x3^{}",
                    d + 2,
                    d,
                    d + 1,
                    q,
                    d,
                    n + 1
                );
                let z2 = varchenko_zeta(&poly(&t), VarSet::all3()).unwrap();
                let expect = -(d + 2) * (q - 1) - ((d + 1) * (n + 1) - q * d);
                assert_eq!(z2.degree(), expect, "two faces d={} n={} q={}", d, n, q);
                let diff = z2.degree() - (-n * (d + 2));
                assert_eq!(diff, n + 1 - 2 * q);
                assert!(diff > 0, "difference must be positive");
            }
        }
    }
    println!("criterion 03 (face degree formulas): PASS");
}

#[test]
fn criterion_04_degree_newton_number_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260809);
    let mut checked = 0u32;
    let mut degenerate = 0u32;
    let mut indeterminate = 0u32;
    for _ in 0..200 {
        // convenient by construction: random axis powers plus interior terms
        let mut f = Poly::zero();
        for i in 0..3 {
            let mut e = [0u16; 3];
            e[i] = rng.gen_range(2..=6);
            f.insert_add(e, nonzero_rat(&mut rng));
        }
        let extra = rng.gen_range(0..=5);
        for _ in 0..extra {
            let e = [
                rng.gen_range(0..=5u16),
                rng.gen_range(0..=5u16),
                rng.gen_range(0..=5u16),
            ];
            if e == [0, 0, 0] || (e[0] as u32 + e[1] as u32 + e[2] as u32) > 6 {
                continue;
            }
            f.insert_add(e, nonzero_rat(&mut rng));
        }
        match is_nondegenerate(&f, VarSet::all3()) {
            Ok(Nondegeneracy::NonDegenerate) => {
                let z = varchenko_zeta(&f, VarSet::all3()).unwrap();
                let nu = newton_number(&f, VarSet::all3()).unwrap().value;
                assert_eq!(z.degree(), -1 - nu, "law fails on {}", f);
                checked += 1;
            }
            Ok(Nondegeneracy::Degenerate { .. }) => degenerate += 1,
            Err(_) => indeterminate += 1,
        }
    }
    assert!(checked >= 150, "too few non-degenerate draws: {}", checked);
    println!(
        "criterion 04 (deg zeta = -1 - nu on {} random draws; {} degenerate and {} indeterminate discarded): PASS",
        checked, degenerate, indeterminate
    );
}

fn nonzero_rat(rng: &mut ChaCha8Rng) -> Rat {
    loop {
        let n: i64 = rng.gen_range(-3..=3);
        if n != 0 {
            let d: i64 = rng.gen_range(1..=2);
            return rat(n, d);
        }
    }
}

#[test]
fn criterion_05_two_path_global_zeta() {
    let f = poly("z1*z2*z3 + z1^4 + z2^4 + z3^4");
    // path one: the blow-up pipeline
    let r = analyze(&f, &AnalyzeOptions::default()).unwrap();
    assert!(r.is_blow_ade);
    assert_eq!(r.d, 3);
    assert_eq!(r.mu_tot, Some(3));
    // exponent bookkeeping: -d^2 + 3d - 3 + mu = 0 at d = 3, mu = 3
    assert_eq!(-9i64 + 9 - 3 + 3, 0);
    let pipeline = r.global_zeta.clone().unwrap();
    // path two: direct Varchenko on f
    let direct = varchenko_zeta(&f, VarSet::all3()).unwrap();
    assert_eq!(pipeline, direct);
    assert_eq!(pipeline, ZetaFunction::factor(4, -3));
    // and the assembled product agrees with the closed form
    let locals: Vec<ZetaFunction> = r.points.iter().map(|p| p.local_zeta.clone().unwrap()).collect();
    assert_eq!(global_zeta(3, 3, &locals), ZetaFunction::factor(4, -3));
    println!("criterion 05 (two-path global zeta): PASS");
}

#[test]
fn criterion_06_multiplicity_factor_pins() {
    // even blow-A, m = 2: cuspidal cubic plus quintics (d = 3, k0 = 1)
    let r = analyze(
        &poly("z2^2*z3 - z1^3 + z1^5 + z2^5 + z3^5"),
        &AnalyzeOptions::default(),
    )
    .unwrap();
    assert!(r.is_blow_ade, "failures: {:?}", r.failures);
    assert!(r.subtype.even_blow_a);
    assert_eq!(r.blow_order, Some(2));
    let z = r.global_zeta.as_ref().unwrap();
    let f2 = z.multiplicity_factor(2).unwrap();
    // zeta^(2) = (1 - t^{d+2})^{k0}
    assert_eq!((f2.d, f2.nu), (5, r.k0 as i64));
    // blow-order 1: nodal cubic plus quartics (d = 3, mu = 1, k0 = 1)
    let r = analyze(
        &poly("z2^2*z3 - z1^3 - z1^2*z3 + z1^4 + z2^4 + z3^4"),
        &AnalyzeOptions::default(),
    )
    .unwrap();
    assert!(r.is_blow_ade, "failures: {:?}", r.failures);
    assert_eq!(r.blow_order, Some(1));
    let z = r.global_zeta.as_ref().unwrap();
    let f2 = z.multiplicity_factor(2).unwrap();
    // zeta^(2) = (1 - t^{d+1})^{-k0}
    assert_eq!((f2.d, f2.nu), (4, -(r.k0 as i64)));
    println!("criterion 06 (multiplicity-factor pins): PASS");
}

#[test]
fn criterion_07_classifier_invariance() {
    let forms: Vec<(&str, AdeType, u32)> = vec![
        ("x2^2 + x3^2", AdeType::A(1), 1),
        ("x2^2 + x3^3", AdeType::A(2), 2),
        ("x2^2 + x3^4", AdeType::A(3), 3),
        ("x2^2 + x3^5", AdeType::A(4), 4),
        ("x2^2*x3 + x3^3", AdeType::D(4), 4),
        ("x2^2*x3 + x3^4", AdeType::D(5), 5),
        ("x2^3 + x3^4", AdeType::E(6), 6),
        ("x2^3 + x2*x3^3", AdeType::E(7), 7),
        ("x2^3 + x3^5", AdeType::E(8), 8),
    ];
    // as written
    for (text, expect, _) in &forms {
        let got = classify_ade(&TruncatedSeries::new(poly(text), 40)).unwrap().ade;
        assert_eq!(&got, expect, "{} as written", text);
    }
    // 20 random invertible rational changes plus above-determinacy noise
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases = 0u32;
    for (text, expect, mu) in &forms {
        let base = poly(text);
        for _ in 0..20 {
            let (a, b, c, d) = loop {
                let v: [i64; 4] = [
                    rng.gen_range(-3..=3),
                    rng.gen_range(-3..=3),
                    rng.gen_range(-3..=3),
                    rng.gen_range(-3..=3),
                ];
                if v[0] * v[3] - v[1] * v[2] != 0 {
                    break (v[0], v[1], v[2], v[3]);
                }
            };
            // perturbation of order >= mu + 2: washed out by determinacy
            let mut perturbed = base.clone();
            for _ in 0..rng.gen_range(1..=3) {
                let deg = mu + 2 + rng.gen_range(0..=2);
                let e2 = rng.gen_range(0..=deg) as u16;
                let e3 = (deg - e2 as u32) as u16;
                perturbed.insert_add([0, e2, e3], nonzero_rat(&mut rng));
            }
            let img2 = &Poly::var(1).scale(&rat_int(a)) + &Poly::var(2).scale(&rat_int(b));
            let img3 = &Poly::var(1).scale(&rat_int(c)) + &Poly::var(2).scale(&rat_int(d));
            let changed = perturbed.substitute(&[Poly::var(0), img2, img3]);
            let got = classify_ade(&TruncatedSeries::new(changed, 40)).unwrap().ade;
            assert_eq!(&got, expect, "{} under [{} {}; {} {}]", text, a, b, c, d);
            cases += 1;
        }
    }
    assert_eq!(cases, 180);
    println!("criterion 07 (ADE classifier invariance, 180 cases): PASS");
}

#[test]
fn criterion_08_node_normalization_roundtrip() {
    use blowade::blowup::normalize_node;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for trial in 0..50 {
        let m: u16 = rng.gen_range(1..=6);
        let c = nonzero_rat(&mut rng);
        let sign = if c < Rat::zero() { "-" } else { "+" };
        let base = poly(&format!(
            "x2^2 + x3^2 {} {}*x1^{}",
            sign,
            c.clone().abs(),
            m
        ));
        // random admissible shifts x2 <- x2 + alpha x1^k, x3 <- x3 + beta x1^k
        let k: u16 = rng.gen_range(1..=5);
        let alpha = rat(rng.gen_range(-5..=5), rng.gen_range(1..=3));
        let beta = rat(rng.gen_range(-5..=5), rng.gen_range(1..=3));
        let img2 = &Poly::var(1) + &Poly::monomial([k, 0, 0], alpha);
        let img3 = &Poly::var(2) + &Poly::monomial([k, 0, 0], beta);
        let shifted = base.substitute(&[Poly::var(0), img2, img3]);
        let node = normalize_node(&shifted, 40, 36).unwrap();
        assert_eq!(node.h, poly("x2^2 + x3^2"), "trial {}", trial);
        assert_eq!(node.c, c, "trial {}", trial);
        assert_eq!(node.m, m as u32, "trial {}", trial);
    }
    println!("criterion 08 (node normalization roundtrip, 50 cases): PASS");
}

#[test]
fn criterion_09_le_yomdin_discrimination() {
    let superisolated = poly("z1*z2*z3 + z1^4 + z2^4 + z3^4");
    let r = analyze(&superisolated, &AnalyzeOptions::default()).unwrap();
    assert!(r.is_blow_ade);
    assert_eq!(r.le_yomdin, Some(true));
    assert!(is_le_yomdin(&superisolated, 1).unwrap());
    // g = f_d + l f_d + f_5 with l = z1 + z2 + z3
    let fd = poly("z1*z2*z3");
    let l = poly("z1 + z2 + z3");
    let g = &(&fd + &(&l * &fd)) + &poly("z1^5 + z2^5 + z3^5");
    let r = analyze(&g, &AnalyzeOptions::default()).unwrap();
    assert!(r.is_blow_ade, "failures: {:?}", r.failures);
    assert_eq!(r.blow_order, Some(2));
    assert_eq!(r.le_yomdin, Some(false));
    println!("criterion 09 (Le-Yomdin discrimination): PASS");
}

#[test]
fn criterion_10_deformation_stability() {
    let fam = DeformationFamily::parse(
        "z1*z2*z3 + z1^4 + z2^4 + z3^4 + s*z2^4",
        Some(vec![
            Rat::zero(),
            rat(1, 7),
            rat(1, 3),
            rat(1, 2),
            rat(2, 3),
            Rat::one(),
        ]),
    )
    .unwrap();
    let v = check_family(&fam, &CheckOptions::default()).unwrap();
    assert!(v.flags.reduced && v.flags.mu_tot && v.flags.k0 && v.flags.signature && v.flags.zeta);
    assert!(v.first_violation.is_none());
    // pairwise same_type across all certified samples
    let reports: Vec<_> = v
        .samples
        .iter()
        .map(|o| o.report.as_ref().unwrap())
        .collect();
    for i in 0..reports.len() {
        for j in i + 1..reports.len() {
            assert!(same_type(reports[i], reports[j]).unwrap().equal);
        }
    }
    // engineered reducedness violation at s = 1/2
    let broken = DeformationFamily::parse(
        "z1*z2^2 + 2*s*z1*z2*z3 - z1*z2*z3 + z1^4 + z2^4 + z3^4",
        Some(vec![Rat::zero(), rat(1, 4), rat(1, 2), Rat::one()]),
    )
    .unwrap();
    let v = check_family(&broken, &CheckOptions::default()).unwrap();
    assert!(!v.flags.reduced);
    assert_eq!(v.first_violation, Some((rat(1, 2), "reduced")));
    println!("criterion 10 (deformation stability): PASS");
}

#[test]
fn criterion_11_mu_star_sanity() {
    let morse = mu_star(&poly("z1^2+z2^2+z3^2"), 8, 1).unwrap();
    assert_eq!((morse.mu3, morse.mu2, morse.mu1), (1, 1, 1));
    for a in 2u32..=4 {
        for b in 2u32..=4 {
            for c in 2u32..=4 {
                let f = poly(&format!("z1^{}+z2^{}+z3^{}", a, b, c));
                let m1 = mu_star(&f, 8, 1).unwrap();
                let m2 = mu_star(&f, 8, 4242).unwrap();
                // mu3 against the integration oracle, mu1 exactly
                assert_eq!(
                    rat_int(m1.mu3),
                    oracle_brieskorn_nu(a as i64, b as i64, c as i64)
                );
                assert_eq!(m1.mu1, a.min(b).min(c) - 1);
                // mu2 stable across seeds
                assert_eq!(m1.mu2, m2.mu2, "({},{},{})", a, b, c);
            }
        }
    }
    println!("criterion 11 (mu* sanity): PASS");
}
