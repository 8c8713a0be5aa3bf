//! Desk-scale deformation checks: evaluate a parametric family f_s at
//! finitely many rational samples, analyze each member, and verify that
//! reducedness, total Milnor number, type signature, and global zeta stay
//! constant. The verdict speaks only about the sampled values.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::certify::{analyze, same_type, AnalyzeOptions, BlowAdeReport};
use crate::error::{Error, Result};
use crate::newton::{newton_number, VarSet};
use crate::nondeg::{is_nondegenerate, Nondegeneracy};
use crate::parse::parse_terms;
use crate::poly::{is_convenient_germ, Exp, Poly, Rat};
use crate::upoly::UPoly;

/// Polynomial family in z1,z2,z3 with coefficients polynomial in s.
#[derive(Debug, Clone)]
pub struct DeformationFamily {
    /// exponent vector -> coefficient as a polynomial in s
    pub coeffs: BTreeMap<Exp, UPoly>,
    pub samples: Vec<Rat>,
}

pub fn default_samples() -> Vec<Rat> {
    vec![
        Rat::zero(),
        Rat::new(1.into(), 7.into()),
        Rat::new(1.into(), 3.into()),
        Rat::new(1.into(), 2.into()),
        Rat::new(2.into(), 3.into()),
        Rat::one(),
    ]
}

impl DeformationFamily {
    /// Parse family text in z1,z2,z3,s. s = 0 is always sampled.
    pub fn parse(text: &str, samples: Option<Vec<Rat>>) -> Result<Self> {
        let raw = parse_terms(text, true)?;
        let mut coeffs: BTreeMap<Exp, UPoly> = BTreeMap::new();
        for (e4, c) in raw {
            let key: Exp = [e4[0], e4[1], e4[2]];
            let entry = coeffs.entry(key).or_insert_with(UPoly::zero);
            let mut v = entry.0.clone();
            if v.len() <= e4[3] as usize {
                v.resize(e4[3] as usize + 1, Rat::zero());
            }
            v[e4[3] as usize] += c;
            *entry = UPoly::from_coeffs(v);
        }
        coeffs.retain(|_, v| !v.is_zero());
        let mut samples = samples.unwrap_or_else(default_samples);
        if !samples.contains(&Rat::zero()) {
            samples.insert(0, Rat::zero());
        }
        samples.sort();
        samples.dedup();
        Ok(DeformationFamily { coeffs, samples })
    }

    pub fn evaluate(&self, s: &Rat) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.coeffs {
            out.insert_add(*e, c.eval(s));
        }
        out
    }
}

/// Teissier's triple (mu of f, mu of a generic plane section, multiplicity
/// minus one). mu2 is a seeded random-section minimum: a genericity
/// heuristic, flagged as such in every report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuStarTriple {
    pub mu3: i64,
    pub mu2: i64,
    pub mu1: u32,
    /// Always "heuristic-generic": mu2 carries no genericity certificate.
    pub mu2_note: &'static str,
    pub seed: u64,
    pub trials: u32,
}

/// mu* through the Newton-number route; requires a convenient
/// non-degenerate germ.
pub fn mu_star(f: &Poly, trials: u32, seed: u64) -> Result<MuStarTriple> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !is_convenient_germ(f) {
        return Err(Error::DegenerateForMuStar {
            msg: "germ is not convenient; the Newton-number route needs every axis occupied"
                .into(),
        });
    }
    match is_nondegenerate(f, VarSet::all3())? {
        Nondegeneracy::NonDegenerate => {}
        Nondegeneracy::Degenerate { face } => {
            return Err(Error::DegenerateForMuStar {
                msg: format!("germ is degenerate on face {}", face.describe()),
            })
        }
    }
    let mu3 = newton_number(f, VarSet::all3())?.value;
    let d = f.order().unwrap();
    let mu1 = d - 1;
    // generic plane sections z3 <- a z1 + b z2
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mu2: Option<i64> = None;
    let mut valid = 0u32;
    let mut attempts = 0u32;
    while valid < trials && attempts < trials * 20 {
        attempts += 1;
        let a = rat_small(&mut rng);
        let b = rat_small(&mut rng);
        if a.is_zero() && b.is_zero() {
            continue;
        }
        let image3 = &Poly::var(0).scale(&a) + &Poly::var(1).scale(&b);
        let section = f.substitute(&[Poly::var(0), Poly::var(1), image3]);
        if section.is_zero() {
            continue;
        }
        // need a convenient non-degenerate curve germ for nu = mu
        let has_z1 = section.terms().any(|(e, _)| e[1] == 0 && e[0] > 0);
        let has_z2 = section.terms().any(|(e, _)| e[0] == 0 && e[1] > 0);
        if !has_z1 || !has_z2 {
            continue;
        }
        match is_nondegenerate(&section, VarSet::pair(0, 1)) {
            Ok(Nondegeneracy::NonDegenerate) => {}
            _ => continue,
        }
        let nu = match newton_number(&section, VarSet::pair(0, 1)) {
            Ok(n) => n.value,
            Err(_) => continue,
        };
        valid += 1;
        mu2 = Some(match mu2 {
            None => nu,
            Some(best) => best.min(nu),
        });
    }
    let mu2 = mu2.ok_or_else(|| Error::DegenerateForMuStar {
        msg: "no non-degenerate convenient plane section found".into(),
    })?;
    Ok(MuStarTriple {
        mu3,
        mu2,
        mu1,
        mu2_note: "heuristic-generic",
        seed,
        trials,
    })
}

fn rat_small(rng: &mut ChaCha8Rng) -> Rat {
    let num: i64 = rng.gen_range(-9..=9);
    let den: i64 = rng.gen_range(1..=4);
    Rat::new(num.into(), den.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConstantFlags {
    pub reduced: bool,
    pub mu_tot: bool,
    pub k0: bool,
    pub signature: bool,
    pub zeta: bool,
    /// None when mu* was skipped at some sample (degenerate route).
    pub mu_star: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct SampleOutcome {
    pub s: Rat,
    pub report: std::result::Result<BlowAdeReport, Error>,
    pub mu_star: Option<MuStarTriple>,
}

#[derive(Debug, Clone)]
pub struct StabilityVerdict {
    pub samples: Vec<SampleOutcome>,
    pub flags: ConstantFlags,
    /// Smallest violating sample and the first flag it breaks.
    pub first_violation: Option<(Rat, &'static str)>,
    pub seed: u64,
    pub trials: u32,
}

pub struct CheckOptions {
    pub analyze: AnalyzeOptions,
    pub trials: u32,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { analyze: AnalyzeOptions::default(), trials: 8, seed: 1 }
    }
}

/// Analyze every sample and compare everything against s = 0.
pub fn check_family(fam: &DeformationFamily, opts: &CheckOptions) -> Result<StabilityVerdict> {
    let mut outcomes: Vec<SampleOutcome> = Vec::new();
    for s in &fam.samples {
        let f = fam.evaluate(s);
        let report = analyze(&f, &opts.analyze);
        let mu = mu_star(&f, opts.trials, opts.seed).ok();
        outcomes.push(SampleOutcome { s: s.clone(), report, mu_star: mu });
    }
    let base = outcomes
        .iter()
        .find(|o| o.s.is_zero())
        .expect("s = 0 is always sampled");
    let mut flags = ConstantFlags {
        reduced: true,
        mu_tot: true,
        k0: true,
        signature: true,
        zeta: true,
        mu_star: Some(true),
    };
    let mut first_violation: Option<(Rat, &'static str)> = None;
    let violate = |s: &Rat, flag: &'static str, first: &mut Option<(Rat, &'static str)>| {
        if first.is_none() || first.as_ref().unwrap().0 > *s {
            *first = Some((s.clone(), flag));
        }
    };
    for o in &outcomes {
        if o.s.is_zero() {
            continue;
        }
        // reducedness: a NonReducedTangentCone error is the violation signal
        let reduced_here = !matches!(
            &o.report,
            Err(Error::NonReducedTangentCone)
        );
        let base_reduced = !matches!(&base.report, Err(Error::NonReducedTangentCone));
        if reduced_here != base_reduced {
            flags.reduced = false;
            violate(&o.s, "reduced", &mut first_violation);
            continue;
        }
        match (&base.report, &o.report) {
            (Ok(b), Ok(r)) => {
                if b.mu_tot != r.mu_tot {
                    flags.mu_tot = false;
                    violate(&o.s, "mu_tot", &mut first_violation);
                }
                if b.k0 != r.k0 {
                    flags.k0 = false;
                    violate(&o.s, "k0", &mut first_violation);
                }
                let sig_equal = match (b.is_blow_ade, r.is_blow_ade) {
                    (true, true) => same_type(b, r)?.equal,
                    (false, false) => true,
                    _ => false,
                };
                if !sig_equal {
                    flags.signature = false;
                    violate(&o.s, "signature", &mut first_violation);
                }
                if b.global_zeta != r.global_zeta {
                    flags.zeta = false;
                    violate(&o.s, "zeta", &mut first_violation);
                }
            }
            (Err(_), Err(_)) => {}
            _ => {
                flags.signature = false;
                violate(&o.s, "signature", &mut first_violation);
            }
        }
        match (&base.mu_star, &o.mu_star) {
            (Some(b), Some(r)) => {
                if (b.mu3, b.mu2, b.mu1) != (r.mu3, r.mu2, r.mu1) {
                    flags.mu_star = Some(false);
                    violate(&o.s, "mu_star", &mut first_violation);
                }
            }
            _ => {
                // skipped somewhere: reported as skipped, not failed
                if flags.mu_star == Some(true) {
                    flags.mu_star = None;
                }
            }
        }
    }
    Ok(StabilityVerdict {
        samples: outcomes,
        flags,
        first_violation,
        seed: opts.seed,
        trials: opts.trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::rat;

    #[test]
    fn family_parse_and_evaluate() {
        let fam = DeformationFamily::parse(
            "z1*z2*z3 + z1^4 + z2^4 + z3^4 + s*z2^4",
            None,
        )
        .unwrap();
        let f0 = fam.evaluate(&Rat::zero());
        assert_eq!(f0, parse_polynomial("z1*z2*z3 + z1^4 + z2^4 + z3^4").unwrap());
        let f1 = fam.evaluate(&Rat::one());
        assert_eq!(
            f1,
            parse_polynomial("z1*z2*z3 + z1^4 + 2*z2^4 + z3^4").unwrap()
        );
    }

    #[test]
    fn mu_star_morse() {
        let f = parse_polynomial("z1^2 + z2^2 + z3^2").unwrap();
        let m = mu_star(&f, 6, 42).unwrap();
        assert_eq!((m.mu3, m.mu2, m.mu1), (1, 1, 1));
    }

    #[test]
    fn mu_star_brieskorn() {
        for (a, b, c) in [(2u32, 3, 4), (3, 3, 3), (2, 2, 5)] {
            let f = parse_polynomial(&format!("z1^{} + z2^{} + z3^{}", a, b, c)).unwrap();
            let m = mu_star(&f, 6, 7).unwrap();
            assert_eq!(m.mu3 as i64, ((a - 1) * (b - 1) * (c - 1)) as i64);
            assert_eq!(m.mu1, a.min(b).min(c) - 1);
        }
    }

    #[test]
    fn mu_star_superisolated_two_routes() {
        // mu3 by the Newton number agrees with the zeta degree route
        let f = parse_polynomial("z1*z2*z3 + z1^4 + z2^4 + z3^4").unwrap();
        let m = mu_star(&f, 6, 5).unwrap();
        assert_eq!(m.mu3, 11);
        let z = crate::zeta::varchenko_zeta(&f, VarSet::all3()).unwrap();
        assert_eq!(z.degree(), -1 - m.mu3);
        assert_eq!(m.mu1, 2);
    }

    #[test]
    fn mu_star_seed_stability() {
        let f = parse_polynomial("z1^2 + z2^3 + z3^4").unwrap();
        let a = mu_star(&f, 8, 1).unwrap();
        let b = mu_star(&f, 8, 999).unwrap();
        assert_eq!(a.mu2, b.mu2);
    }

    #[test]
    fn mu_star_degenerate_route_errors() {
        // not convenient: no pure z3 power
        let f = parse_polynomial("z1^2 + z2^2 + z1*z3^3").unwrap();
        let err = mu_star(&f, 4, 3).unwrap_err();
        assert_eq!(err.kind(), "degenerate-for-mu-star");
    }

    #[test]
    fn stable_family_all_flags_constant() {
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
        assert!(v.flags.reduced);
        assert!(v.flags.mu_tot);
        assert!(v.flags.k0);
        assert!(v.flags.signature);
        assert!(v.flags.zeta);
        assert!(v.first_violation.is_none());
    }

    #[test]
    fn engineered_reducedness_violation_located() {
        // f_{s,3} = z1 z2 (z2 + (2s-1) z3): a square factor exactly at s = 1/2
        let fam = DeformationFamily::parse(
            "z1*z2^2 + 2*s*z1*z2*z3 - z1*z2*z3 + z1^4 + z2^4 + z3^4",
            Some(vec![Rat::zero(), rat(1, 4), rat(1, 2), Rat::one()]),
        )
        .unwrap();
        let v = check_family(&fam, &CheckOptions::default()).unwrap();
        assert!(!v.flags.reduced);
        let (s, flag) = v.first_violation.unwrap();
        assert_eq!(s, rat(1, 2));
        assert_eq!(flag, "reduced");
    }

    #[test]
    fn constant_family_identical_reports() {
        let fam = DeformationFamily::parse(
            "z1*z2*z3 + z1^4 + z2^4 + z3^4 + 0*s",
            Some(vec![Rat::zero(), Rat::one()]),
        )
        .unwrap();
        let v = check_family(&fam, &CheckOptions::default()).unwrap();
        assert!(v.first_violation.is_none());
        // the s = 0 entry matches a standalone analysis
        let standalone = analyze(
            &parse_polynomial("z1*z2*z3 + z1^4 + z2^4 + z3^4").unwrap(),
            &AnalyzeOptions::default(),
        )
        .unwrap();
        let s0 = v.samples.iter().find(|o| o.s.is_zero()).unwrap();
        let r0 = s0.report.as_ref().unwrap();
        assert_eq!(r0.is_blow_ade, standalone.is_blow_ade);
        assert_eq!(r0.blow_order, standalone.blow_order);
        assert_eq!(r0.global_zeta, standalone.global_zeta);
        assert_eq!(r0.mu_tot, standalone.mu_tot);
    }

    #[test]
    fn verdict_independent_of_sample_order() {
        let fam1 = DeformationFamily::parse(
            "z1*z2*z3 + z1^4 + z2^4 + z3^4 + s*z2^4",
            Some(vec![Rat::one(), rat(1, 3), Rat::zero()]),
        )
        .unwrap();
        let fam2 = DeformationFamily::parse(
            "z1*z2*z3 + z1^4 + z2^4 + z3^4 + s*z2^4",
            Some(vec![Rat::zero(), Rat::one(), rat(1, 3)]),
        )
        .unwrap();
        let v1 = check_family(&fam1, &CheckOptions::default()).unwrap();
        let v2 = check_family(&fam2, &CheckOptions::default()).unwrap();
        assert_eq!(v1.flags, v2.flags);
        assert_eq!(v1.first_violation, v2.first_violation);
    }
}
