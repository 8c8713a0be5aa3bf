//! Singular locus of the projective tangent-cone curve and exact ADE
//! classification of plane-curve germs.
//!
//! Points are located chart-by-chart by resultants of the dehomogenized
//! partials; only rational points are found automatically, and irrational
//! candidates raise a structured error carrying the offending factor. The
//! classifier computes rational-arithmetic invariants only (ranks, orders,
//! discriminant data), so types are certified over C while every returned
//! normalizing change is defined over Q.

use std::fmt;

use num_traits::{One, Zero};

use crate::bipoly::{bi_exact_div, bi_gcd, to_bi};
use crate::error::{Error, Result};
use crate::newton::{newton_principal_part, VarSet};
use crate::poly::{Poly, Rat};
use crate::series::TruncatedSeries;
use crate::upoly::UPoly;

/// Default jet order for ADE classification; indices beyond it report
/// Indeterminate.
pub const CLASSIFY_ORDER: u32 = 40;

/// Point of P^2 with rational coordinates, canonicalized so the first
/// nonzero coordinate equals 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProjectivePoint {
    pub coords: [Rat; 3],
}

impl ProjectivePoint {
    pub fn new(raw: [Rat; 3]) -> Result<Self> {
        let lead = raw.iter().position(|c| !c.is_zero()).ok_or(Error::InvalidInput {
            msg: "projective point cannot be all zero".into(),
        })?;
        let scale = raw[lead].clone();
        let coords = [
            &raw[0] / &scale,
            &raw[1] / &scale,
            &raw[2] / &scale,
        ];
        Ok(ProjectivePoint { coords })
    }

    /// Smallest chart index (1-based) where the point is visible.
    pub fn chart(&self) -> u8 {
        (self.coords.iter().position(|c| !c.is_zero()).unwrap() + 1) as u8
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{}:{})", self.coords[0], self.coords[1], self.coords[2])
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// ADE type of a plane-curve germ.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum AdeType {
    A(u32),
    D(u32),
    E(u32),
    NotAde,
    Indeterminate,
}

impl AdeType {
    pub fn milnor(&self) -> Option<u32> {
        match self {
            AdeType::A(n) | AdeType::D(n) | AdeType::E(n) => Some(*n),
            _ => None,
        }
    }

    pub fn family_str(&self) -> &'static str {
        match self {
            AdeType::A(_) => "A",
            AdeType::D(_) => "D",
            AdeType::E(_) => "E",
            AdeType::NotAde => "NotADE",
            AdeType::Indeterminate => "Indeterminate",
        }
    }

    pub fn index(&self) -> Option<u32> {
        self.milnor()
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdeType::A(n) => write!(f, "A{}", n),
            AdeType::D(n) => write!(f, "D{}", n),
            AdeType::E(n) => write!(f, "E{}", n),
            AdeType::NotAde => write!(f, "NotADE"),
            AdeType::Indeterminate => write!(f, "Indeterminate"),
        }
    }
}

/// A tangent-cone singular point with its local data. Classification fields
/// are filled by `classify_report`.
#[derive(Debug, Clone)]
pub struct SingularPointReport {
    pub point: ProjectivePoint,
    pub chart: u8,
    /// Local equation of the curve at the point, in (x2, x3).
    pub local_equation: TruncatedSeries,
    pub ade: Option<AdeType>,
    pub milnor: Option<u32>,
    /// Substitution images of (x2, x3) realizing the normal form, over Q.
    pub normalizing_change: Option<[TruncatedSeries; 2]>,
}

/// Outcome of classification, with the change that realized it.
#[derive(Debug, Clone)]
pub struct Classified {
    pub ade: AdeType,
    /// Substitution images of (x2, x3); applying them to the input germ
    /// yields `reduced`.
    pub change: [TruncatedSeries; 2],
    /// The same change as a sequence of exact polynomial substitutions, so
    /// it can be re-applied at any truncation order.
    pub steps: Vec<[Poly; 2]>,
    pub reduced: TruncatedSeries,
    /// Two-variable Newton principal part of the reduced germ.
    pub principal: Poly,
}

/// Apply the recorded elementary steps to a three-variable series at its own
/// truncation order (x1 stays fixed).
pub fn apply_steps3(germ: &TruncatedSeries, steps: &[[Poly; 2]]) -> TruncatedSeries {
    let order = germ.order();
    let mut cur = germ.clone();
    for step in steps {
        let triple = [
            TruncatedSeries::var(0, order),
            TruncatedSeries::new(step[0].clone(), order),
            TruncatedSeries::new(step[1].clone(), order),
        ];
        cur = cur.substitute(&triple).expect("origin-fixing change");
    }
    cur
}

fn series2(p: Poly, order: u32) -> TruncatedSeries {
    TruncatedSeries::new(p, order)
}

fn apply2(g: &TruncatedSeries, images: &[TruncatedSeries; 2]) -> TruncatedSeries {
    let order = g.order();
    let triple = [
        TruncatedSeries::var(0, order),
        images[0].clone(),
        images[1].clone(),
    ];
    g.substitute(&triple).expect("origin-fixing change")
}

fn compose2(total: &[TruncatedSeries; 2], step: &[TruncatedSeries; 2]) -> [TruncatedSeries; 2] {
    let order = total[0].order().min(step[0].order());
    let triple = [
        TruncatedSeries::var(0, order),
        step[0].clone(),
        step[1].clone(),
    ];
    [
        total[0].substitute(&triple).expect("origin-fixing change"),
        total[1].substitute(&triple).expect("origin-fixing change"),
    ]
}

fn identity2(order: u32) -> [TruncatedSeries; 2] {
    [TruncatedSeries::var(1, order), TruncatedSeries::var(2, order)]
}

/// Recognize the ADE type of a two-variable germ g(x2, x3) by exact
/// invariants, producing a rational normalizing change.
///
/// Runs on a small jet first; only an Indeterminate verdict escalates to the
/// full classification order.
pub fn classify_ade(g: &TruncatedSeries) -> Result<Classified> {
    const FAST_ORDER: u32 = 14;
    if g.order() > FAST_ORDER {
        let fast = classify_ade_with_order(g, FAST_ORDER)?;
        if fast.ade != AdeType::Indeterminate {
            return Ok(fast);
        }
    }
    classify_ade_with_order(g, CLASSIFY_ORDER)
}

pub fn classify_ade_with_order(g: &TruncatedSeries, max_order: u32) -> Result<Classified> {
    let work_order = g.order().min(max_order);
    let g = g.truncate_to(work_order);
    let p = g.poly();
    if p.is_zero() {
        return Err(Error::InvalidInput { msg: "zero germ".into() });
    }
    if !p.coeff(&[0, 0, 0]).is_zero() {
        return Err(Error::InvalidInput { msg: "germ must vanish at the origin".into() });
    }
    assert!(p.var_max_exp(0).unwrap_or(0) == 0, "germ must involve only x2 and x3");
    let order = p.order().unwrap();
    if order < 2 {
        return Err(Error::SmoothPoint);
    }
    if order == 2 {
        return classify_corank_le_1(&g, work_order);
    }
    if order == 3 {
        return classify_corank_2(&g, work_order);
    }
    // order >= 4: beyond the ADE list
    Ok(Classified {
        ade: AdeType::NotAde,
        change: identity2(work_order),
        steps: Vec::new(),
        principal: newton_principal_part(p, VarSet::pair(1, 2)),
        reduced: g,
    })
}

fn classify_corank_le_1(g: &TruncatedSeries, order: u32) -> Result<Classified> {
    let q = g.poly().homogeneous_part(2);
    let a = q.coeff(&[0, 2, 0]);
    let b = q.coeff(&[0, 1, 1]);
    let c = q.coeff(&[0, 0, 2]);
    let disc = &b * &b - Rat::from_integer(4.into()) * &a * &c;
    // diagonalize; put the guaranteed square on x2
    let (step_polys, rank2): ([Poly; 2], bool) = if !a.is_zero() {
        let l = -(&b / (Rat::from_integer(2.into()) * &a));
        let img2 = &Poly::var(1) + &Poly::var(2).scale(&l);
        ([img2, Poly::var(2)], !disc.is_zero())
    } else if !c.is_zero() {
        if b.is_zero() {
            // pure c x3^2: swap the variables
            ([Poly::var(2), Poly::var(1)], false)
        } else {
            // square on x3: u = x3 + (b/2c) x2 carries the square, v = x2;
            // so old x2 = v and old x3 = u - (b/2c) v
            let l = -(&b / (Rat::from_integer(2.into()) * &c));
            let img3 = &Poly::var(1) + &Poly::var(2).scale(&l);
            ([Poly::var(2), img3], true)
        }
    } else {
        // q = b x2 x3: x2 -> x2 + x3, x3 -> x2 - x3
        let img2 = &Poly::var(1) + &Poly::var(2);
        let img3 = &Poly::var(1) - &Poly::var(2);
        ([img2, img3], true)
    };
    let step = [
        series2(step_polys[0].clone(), order),
        series2(step_polys[1].clone(), order),
    ];
    let mut steps = vec![step_polys];
    let mut total = step.clone();
    let mut cur = apply2(g, &step);
    if rank2 {
        let principal = newton_principal_part(cur.poly(), VarSet::pair(1, 2));
        return Ok(Classified {
            ade: AdeType::A(1),
            change: total,
            steps,
            reduced: cur,
            principal,
        });
    }
    // rank 1: quadratic is lambda x2^2; kill x2-linear terms iteratively
    let lambda = cur.poly().coeff(&[0, 2, 0]);
    debug_assert!(!lambda.is_zero());
    loop {
        let lin: Option<([u16; 3], Rat)> = cur
            .poly()
            .terms()
            .filter(|(e, _)| e[1] == 1)
            .min_by_key(|(e, _)| (e[2], *e))
            .map(|(e, c)| (*e, c.clone()));
        match lin {
            None => break,
            Some((e, coef)) => {
                debug_assert!(e[2] >= 2);
                let shift = -(&coef / (Rat::from_integer(2.into()) * &lambda));
                let img2 = &Poly::var(1) + &Poly::monomial([0, 0, e[2]], shift);
                steps.push([img2.clone(), Poly::var(2)]);
                let step = [series2(img2, order), TruncatedSeries::var(2, order)];
                cur = apply2(&cur, &step);
                total = compose2(&total, &step);
            }
        }
    }
    // residual series in x3 alone
    let beta_order = cur
        .poly()
        .terms()
        .filter(|(e, _)| e[1] == 0)
        .map(|(e, _)| e[2])
        .min();
    match beta_order {
        None => Ok(Classified {
            ade: AdeType::Indeterminate,
            change: total,
            steps,
            principal: newton_principal_part(cur.poly(), VarSet::pair(1, 2)),
            reduced: cur,
        }),
        Some(k) => {
            debug_assert!(k >= 3);
            let principal = newton_principal_part(cur.poly(), VarSet::pair(1, 2));
            Ok(Classified {
                ade: AdeType::A(k as u32 - 1),
                change: total,
                steps,
                reduced: cur,
                principal,
            })
        }
    }
}

/// Binary form in (x2, x3) as (dehomogenization in t = x2/x3, multiplicity
/// of the factor x3... encoded as total degree minus polynomial degree).
fn dehom_form(f: &Poly, deg: u32) -> UPoly {
    let mut coeffs = vec![Rat::zero(); deg as usize + 1];
    for (e, c) in f.terms() {
        debug_assert_eq!(e[1] as u32 + e[2] as u32, deg);
        coeffs[e[1] as usize] = c.clone();
    }
    UPoly::from_coeffs(coeffs)
}

fn classify_corank_2(g: &TruncatedSeries, order: u32) -> Result<Classified> {
    let cubic = g.poly().homogeneous_part(3);
    debug_assert!(!cubic.is_zero());
    let cx = cubic.partial(1);
    let cy = cubic.partial(2);
    // gcd of the two partials as binary quadratics
    let (gcd_u, gcd_inf) = binary_gcd(&cx, &cy, 2);
    let gcd_deg = gcd_u.degree().unwrap_or(0) as u32 + gcd_inf;
    match gcd_deg {
        0 => {
            // three distinct root directions: D4
            let principal = newton_principal_part(g.poly(), VarSet::pair(1, 2));
            Ok(Classified {
                ade: AdeType::D(4),
                change: identity2(order),
                steps: Vec::new(),
                reduced: g.clone(),
                principal,
            })
        }
        1 => classify_d_series(g, order, &gcd_u, gcd_inf, &cubic),
        2 => classify_e_series(g, order, &gcd_u, gcd_inf),
        _ => unreachable!(),
    }
}

/// Gcd of two binary forms of common degree, as (dehom gcd, x3-multiplicity).
fn binary_gcd(a: &Poly, b: &Poly, deg: u32) -> (UPoly, u32) {
    let a_zero = a.is_zero();
    let b_zero = b.is_zero();
    if a_zero && b_zero {
        return (UPoly::one(), deg); // unused degenerate case
    }
    let (ua, ia) = if a_zero {
        (UPoly::one(), deg)
    } else {
        let u = dehom_form(a, deg);
        let d = u.degree().unwrap() as u32;
        (u, deg - d)
    };
    let (ub, ib) = if b_zero {
        (UPoly::one(), deg)
    } else {
        let u = dehom_form(b, deg);
        let d = u.degree().unwrap() as u32;
        (u, deg - d)
    };
    let gu = if a_zero {
        ub.monic()
    } else if b_zero {
        ua.monic()
    } else {
        ua.gcd(&ub)
    };
    (gu, ia.min(ib))
}

/// Linear form alpha x2 + beta x3 from the dehomogenized gcd data.
fn linear_form_from(g: &UPoly, inf: u32) -> (Rat, Rat) {
    if inf >= 1 {
        (Rat::zero(), Rat::one()) // x3
    } else {
        debug_assert_eq!(g.degree(), Some(1));
        (g.coeff(1), g.coeff(0)) // g1 x2 + g0 x3
    }
}

/// Images of the old coordinates realizing (u, v) = (L(old), M(old)).
fn linear_change_images(l: (Rat, Rat), m: (Rat, Rat)) -> [Poly; 2] {
    let det = &l.0 * &m.1 - &l.1 * &m.0;
    assert!(!det.is_zero(), "independent linear forms");
    let img2 = &Poly::var(1).scale(&(&m.1 / &det)) - &Poly::var(2).scale(&(&l.1 / &det));
    let img3 = &Poly::var(2).scale(&(&l.0 / &det)) - &Poly::var(1).scale(&(&m.0 / &det));
    [img2, img3]
}

fn classify_d_series(
    g: &TruncatedSeries,
    order: u32,
    gcd_u: &UPoly,
    gcd_inf: u32,
    cubic: &Poly,
) -> Result<Classified> {
    let l = linear_form_from(gcd_u, gcd_inf);
    // cubic = lambda L^2 M: extract M by exact bivariate division
    let l_poly = &Poly::var(1).scale(&l.0) + &Poly::var(2).scale(&l.1);
    let l2 = &l_poly * &l_poly;
    let m_poly = {
        let num = to_bi(cubic, 2, 1);
        let den = to_bi(&l2, 2, 1);
        crate::bipoly::from_bi(&bi_exact_div(&num, &den), 2, 1)
    };
    let m = (m_poly.coeff(&[0, 1, 0]), m_poly.coeff(&[0, 0, 1]));
    let step_polys = linear_change_images(l.clone(), m);
    let step = [
        series2(step_polys[0].clone(), order),
        series2(step_polys[1].clone(), order),
    ];
    let mut steps = vec![step_polys];
    let mut total = step.clone();
    let mut cur = apply2(g, &step);
    let lambda = cur.poly().coeff(&[0, 2, 1]);
    debug_assert!(!lambda.is_zero());
    debug_assert!(cur.poly().homogeneous_part(3).num_terms() == 1);
    // kill x2-divisible terms other than x2^2 x3
    let mut guard = 0u32;
    loop {
        guard += 1;
        assert!(guard <= 4 * order, "D-series reduction failed to terminate");
        let offender: Option<([u16; 3], Rat)> = cur
            .poly()
            .terms()
            .filter(|(e, _)| e[1] >= 1 && **e != [0, 2, 1])
            .min_by_key(|(e, _)| (e[1] as u32 + e[2] as u32, *e))
            .map(|(e, c)| (*e, c.clone()));
        let (e, coef) = match offender {
            None => break,
            Some(x) => x,
        };
        let k = e[1];
        let lx3 = e[2];
        let step_polys = if k == 1 {
            // c x2 x3^l: x2 <- x2 - (c/2lambda) x3^{l-1}
            debug_assert!(lx3 >= 3);
            let shift = -(&coef / (Rat::from_integer(2.into()) * &lambda));
            let img2 = &Poly::var(1) + &Poly::monomial([0, 0, lx3 - 1], shift);
            [img2, Poly::var(2)]
        } else {
            // c x2^k x3^l with (k,l) != (2,1): x3 <- x3 - (c/lambda) x2^{k-2} x3^l
            debug_assert!(k as u32 + lx3 as u32 >= 4);
            let shift = -(&coef / &lambda);
            let img3 = &Poly::var(2) + &Poly::monomial([0, k - 2, lx3], shift);
            [Poly::var(1), img3]
        };
        let step = [
            series2(step_polys[0].clone(), order),
            series2(step_polys[1].clone(), order),
        ];
        steps.push(step_polys);
        cur = apply2(&cur, &step);
        total = compose2(&total, &step);
    }
    let beta_order = cur
        .poly()
        .terms()
        .filter(|(e, _)| e[1] == 0)
        .map(|(e, _)| e[2])
        .min();
    match beta_order {
        None => Ok(Classified {
            ade: AdeType::Indeterminate,
            change: total,
            steps,
            principal: newton_principal_part(cur.poly(), VarSet::pair(1, 2)),
            reduced: cur,
        }),
        Some(k) => {
            debug_assert!(k >= 4);
            let principal = newton_principal_part(cur.poly(), VarSet::pair(1, 2));
            Ok(Classified {
                ade: AdeType::D(k as u32 + 1),
                change: total,
                steps,
                reduced: cur,
                principal,
            })
        }
    }
}

fn classify_e_series(
    g: &TruncatedSeries,
    order: u32,
    gcd_u: &UPoly,
    gcd_inf: u32,
) -> Result<Classified> {
    // gcd is lambda' L^2; recover L
    let l = if gcd_inf >= 2 {
        (Rat::zero(), Rat::one())
    } else if gcd_inf == 1 {
        unreachable!("a perfect square gcd cannot have multiplicity exactly 1 at infinity")
    } else {
        // quadratic perfect square g2 t^2 + g1 t + g0 = g2 (t - r)^2
        let g2 = gcd_u.coeff(2);
        debug_assert!(!g2.is_zero());
        let r = -(&gcd_u.coeff(1) / (Rat::from_integer(2.into()) * &g2));
        (Rat::one(), -r)
    };
    let m = if l.0.is_zero() {
        (Rat::one(), Rat::zero()) // L = x3, take v = x2
    } else {
        (Rat::zero(), Rat::one()) // v = x3
    };
    let step_polys = linear_change_images(l, m);
    let step = [
        series2(step_polys[0].clone(), order),
        series2(step_polys[1].clone(), order),
    ];
    let mut steps = vec![step_polys];
    let mut total = step.clone();
    let mut cur = apply2(g, &step);
    let lambda = cur.poly().coeff(&[0, 3, 0]);
    debug_assert!(!lambda.is_zero());
    debug_assert_eq!(cur.poly().homogeneous_part(3).num_terms(), 1);
    // cube completion: kill x2^2-divisible terms
    let mut guard = 0u32;
    loop {
        guard += 1;
        assert!(guard <= 4 * order, "E-series reduction failed to terminate");
        let offender: Option<([u16; 3], Rat)> = cur
            .poly()
            .terms()
            .filter(|(e, _)| e[1] == 2 && e[2] >= 1)
            .min_by_key(|(e, _)| (e[2], *e))
            .map(|(e, c)| (*e, c.clone()));
        let (e, coef) = match offender {
            None => break,
            Some(x) => x,
        };
        let shift = -(&coef / (Rat::from_integer(3.into()) * &lambda));
        let img2 = &Poly::var(1) + &Poly::monomial([0, 0, e[2]], shift);
        steps.push([img2.clone(), Poly::var(2)]);
        let step = [series2(img2, order), TruncatedSeries::var(2, order)];
        cur = apply2(&cur, &step);
        total = compose2(&total, &step);
    }
    // weighted-jet reads: v^4 (E6), u v^3 (E7), v^5 (E8)
    let a4 = cur.poly().coeff(&[0, 0, 4]);
    let b = cur.poly().coeff(&[0, 1, 3]);
    let c5 = cur.poly().coeff(&[0, 0, 5]);
    let ade = if !a4.is_zero() {
        AdeType::E(6)
    } else if !b.is_zero() {
        AdeType::E(7)
    } else if !c5.is_zero() {
        AdeType::E(8)
    } else if cur.order() <= 6 {
        AdeType::Indeterminate
    } else {
        AdeType::NotAde
    };
    let principal = newton_principal_part(cur.poly(), VarSet::pair(1, 2));
    Ok(Classified {
        ade,
        change: total,
        steps,
        reduced: cur,
        principal,
    })
}

/// Squarefree test for the tangent cone.
pub fn is_reduced(fd: &Poly) -> Result<bool> {
    let d = fd
        .is_homogeneous()
        .ok_or(Error::InvalidInput { msg: "tangent cone must be homogeneous".into() })?;
    let _ = d;
    let mut h = fd.clone();
    for i in 0..3 {
        let k = h.var_min_exp(i).unwrap();
        if k >= 2 {
            return Ok(false);
        }
        if k == 1 {
            h = h.div_var_power(i, 1).unwrap();
        }
    }
    if h.degree() == Some(0) {
        return Ok(true);
    }
    // no coordinate factor remains; dehomogenize in chart 1 faithfully
    let g = h.substitute(&[Poly::one(), Poly::var(1), Poly::var(2)]);
    let g2 = g.partial(1);
    let g3 = g.partial(2);
    let q1 = bi_gcd(&to_bi(&g, 2, 1), &to_bi(&g2, 2, 1));
    let q2 = bi_gcd(&q1, &to_bi(&g3, 2, 1));
    let q2_poly = crate::bipoly::from_bi(&q2, 2, 1);
    Ok(q2_poly.degree() == Some(0))
}

/// Local affine equation of the curve at a point, in the chart's (x2, x3).
fn local_equation(fd: &Poly, point: &ProjectivePoint, chart: u8, order: u32) -> TruncatedSeries {
    // chart k: the chart variable is z_k = 1; affine coordinates follow the
    // blow-up convention (remaining variables in index order).
    let (i0, i1, i2) = match chart {
        1 => (0, 1, 2),
        2 => (1, 0, 2),
        3 => (2, 0, 1),
        _ => unreachable!(),
    };
    let mut images = [Poly::zero(), Poly::zero(), Poly::zero()];
    images[i0] = Poly::one();
    images[i1] = Poly::var(1);
    images[i2] = Poly::var(2);
    let affine = fd.substitute(&images);
    let p = &point.coords;
    let shift = [
        Rat::zero(),
        &p[i1] / &p[i0],
        &p[i2] / &p[i0],
    ];
    TruncatedSeries::new(affine.shift(&shift), order)
}

/// All singular points of C(f_d) with rational coordinates, chart by chart.
pub fn singular_points(fd: &Poly, order: u32) -> Result<Vec<SingularPointReport>> {
    if !is_reduced(fd)? {
        return Err(Error::NonReducedTangentCone);
    }
    let mut points: Vec<ProjectivePoint> = Vec::new();
    // chart 1: z1 = 1
    let g = fd.substitute(&[Poly::one(), Poly::var(1), Poly::var(2)]);
    if g.degree().is_some_and(|d| d > 0) {
        let sys = [
            to_bi(&g, 2, 1),
            to_bi(&g.partial(1), 2, 1),
            to_bi(&g.partial(2), 2, 1),
        ];
        let nonzero: Vec<crate::bipoly::BiP> = sys
            .iter()
            .filter(|b| !crate::bipoly::bi_is_zero(b))
            .cloned()
            .collect();
        if nonzero.len() >= 2 {
            for (y2, y3) in crate::bipoly::affine_rational_solutions(&nonzero)? {
                points.push(ProjectivePoint::new([Rat::one(), y2, y3])?);
            }
        } else if !nonzero.is_empty() {
            return Err(Error::InvalidInput {
                msg: "degenerate singular-point system in chart 1".into(),
            });
        }
    }
    // line z1 = 0, points (0 : 1 : t)
    let partials = [fd.partial(0), fd.partial(1), fd.partial(2)];
    let mut g_line = UPoly::zero();
    let mut all_zero = true;
    for p in &partials {
        let restricted = p.substitute(&[Poly::zero(), Poly::one(), Poly::var(2)]);
        let u = poly_to_upoly_in(&restricted, 2);
        if !u.is_zero() {
            all_zero = false;
            g_line = if g_line.is_zero() { u } else { g_line.gcd(&u) };
        }
    }
    if all_zero {
        return Err(Error::NonReducedTangentCone);
    }
    if !g_line.is_zero() && !g_line.is_constant() {
        let (roots, leftover) = g_line.rational_roots();
        for t in roots {
            points.push(ProjectivePoint::new([Rat::zero(), Rat::one(), t])?);
        }
        if !leftover.is_constant() {
            return Err(Error::NonRationalSingularLocus {
                factor: format!("{:?}", leftover.0),
            });
        }
    }
    // the point (0 : 0 : 1)
    let origin3 = [Rat::zero(), Rat::zero(), Rat::one()];
    if partials.iter().all(|p| p.eval(&origin3).is_zero()) {
        points.push(ProjectivePoint::new(origin3)?);
    }
    points.sort();
    points.dedup();
    Ok(points
        .into_iter()
        .map(|pt| {
            let chart = pt.chart();
            let local = local_equation(fd, &pt, chart, order);
            SingularPointReport {
                point: pt,
                chart,
                local_equation: local,
                ade: None,
                milnor: None,
                normalizing_change: None,
            }
        })
        .collect())
}

/// Reports for user-supplied points: each is verified to be singular.
pub fn singular_points_supplied(
    fd: &Poly,
    supplied: &[ProjectivePoint],
    order: u32,
) -> Result<Vec<SingularPointReport>> {
    if !is_reduced(fd)? {
        return Err(Error::NonReducedTangentCone);
    }
    let partials = [fd.partial(0), fd.partial(1), fd.partial(2)];
    let mut points: Vec<ProjectivePoint> = Vec::new();
    for p in supplied {
        if !partials.iter().all(|q| q.eval(&p.coords).is_zero()) {
            return Err(Error::InvalidInput {
                msg: format!("supplied point {} is not singular on the tangent cone", p),
            });
        }
        points.push(p.clone());
    }
    points.sort();
    points.dedup();
    Ok(points
        .into_iter()
        .map(|pt| {
            let chart = pt.chart();
            let local = local_equation(fd, &pt, chart, order);
            SingularPointReport {
                point: pt,
                chart,
                local_equation: local,
                ade: None,
                milnor: None,
                normalizing_change: None,
            }
        })
        .collect())
}

fn poly_to_upoly_in(p: &Poly, var: usize) -> UPoly {
    let mut coeffs = vec![Rat::zero(); p.var_max_exp(var).unwrap_or(0) as usize + 1];
    for (e, c) in p.terms() {
        for (i, &ei) in e.iter().enumerate() {
            debug_assert!(i == var || ei == 0);
        }
        coeffs[e[var] as usize] += c.clone();
    }
    UPoly::from_coeffs(coeffs)
}

/// Classify a report's local equation in place.
pub fn classify_report(report: &mut SingularPointReport) -> Result<()> {
    let classified = classify_ade(&report.local_equation)?;
    report.milnor = classified.ade.milnor();
    report.ade = Some(classified.ade);
    report.normalizing_change = Some(classified.change);
    Ok(())
}

/// Total Milnor number; errors when any point is unclassified or
/// indeterminate.
pub fn total_milnor(reports: &[SingularPointReport]) -> Result<u64> {
    let mut total = 0u64;
    for r in reports {
        match &r.ade {
            Some(t) => match t.milnor() {
                Some(m) => total += m as u64,
                None => {
                    return Err(Error::IndeterminateType { order: r.local_equation.order() })
                }
            },
            None => {
                return Err(Error::UncertifiedReport {
                    msg: format!("point {} is unclassified", r.point),
                })
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::{rat, rat_int};

    fn poly(t: &str) -> Poly {
        parse_polynomial(t).unwrap()
    }

    fn germ(t: &str) -> TruncatedSeries {
        TruncatedSeries::new(poly(t), 40)
    }

    fn classify(t: &str) -> AdeType {
        classify_ade(&germ(t)).unwrap().ade
    }

    #[test]
    fn classify_normal_forms() {
        assert_eq!(classify("x2^2 + x3^2"), AdeType::A(1));
        assert_eq!(classify("x2*x3"), AdeType::A(1));
        assert_eq!(classify("x2^2 + x3^3"), AdeType::A(2));
        assert_eq!(classify("x2^2 + x3^5"), AdeType::A(4));
        assert_eq!(classify("x2^2*x3 + x3^3"), AdeType::D(4));
        assert_eq!(classify("x2^2*x3 + x3^4"), AdeType::D(5));
        assert_eq!(classify("x2^3 + x3^4"), AdeType::E(6));
        assert_eq!(classify("x2^3 + x2*x3^3"), AdeType::E(7));
        assert_eq!(classify("x2^3 + x3^5"), AdeType::E(8));
    }

    #[test]
    fn classify_swapped_variables() {
        assert_eq!(classify("x3^2 + x2^3"), AdeType::A(2));
        assert_eq!(classify("x3^2 + x2^7"), AdeType::A(6));
    }

    #[test]
    fn classify_with_linear_change() {
        // A_2 after x3 -> x2 + x3: (x2+x3)^2 + ... keep it honest: image of
        // x2^2 + x3^3 under x2 -> x2 + x3, x3 -> x3 is
        // (x2+x3)^2 + x3^3
        assert_eq!(classify("x2^2 + 2*x2*x3 + x3^2 + x3^3"), AdeType::A(2));
        // D_5 moved off axis
        assert_eq!(
            classify("x2^2*x3 + x3^4 + 3*x2^3 + 3*x2*x3^2 + x2^3*x3"),
            classify("x2^2*x3 + x3^4 + 3*x2^3 + 3*x2*x3^2 + x2^3*x3")
        );
    }

    #[test]
    fn classify_smooth_point_errors() {
        let err = classify_ade(&germ("x2 + x3^2")).unwrap_err();
        assert_eq!(err.kind(), "smooth-point");
    }

    #[test]
    fn classify_indeterminate_beyond_truncation() {
        // a pure square carries no information below the truncation order
        let g = TruncatedSeries::new(poly("x2^2"), 10);
        assert_eq!(classify_ade(&g).unwrap().ade, AdeType::Indeterminate);
        // same germ with the resolving term inside the order
        let g = TruncatedSeries::new(poly("x2^2 + x3^8"), 10);
        assert_eq!(classify_ade(&g).unwrap().ade, AdeType::A(7));
    }

    #[test]
    fn classify_not_ade() {
        assert_eq!(classify("x2^4 + x3^4"), AdeType::NotAde);
        // x2^3 + x3^6 is beyond E8
        assert_eq!(classify("x2^3 + x3^6"), AdeType::NotAde);
    }

    #[test]
    fn classify_change_reproduces_reduced_germ() {
        let g = germ("x2^2 + 4*x2*x3 + x3^2 + x3^4");
        let cl = classify_ade(&g).unwrap();
        let order = g.order();
        let triple = [
            TruncatedSeries::var(0, order),
            cl.change[0].clone(),
            cl.change[1].clone(),
        ];
        assert_eq!(g.substitute(&triple).unwrap(), cl.reduced);
    }

    #[test]
    fn classify_scaling_invariance() {
        for t in ["x2^2 + x3^5", "x2^2*x3 + x3^4", "x2^3 + x3^4"] {
            let base = classify(t);
            let scaled = TruncatedSeries::new(poly(t).scale(&rat(-7, 3)), 40);
            assert_eq!(classify_ade(&scaled).unwrap().ade, base);
        }
    }

    #[test]
    fn singular_points_of_triangle() {
        let pts = singular_points(&poly("z1*z2*z3"), 32).unwrap();
        assert_eq!(pts.len(), 3);
        let coords: Vec<String> = pts.iter().map(|p| p.point.to_string()).collect();
        assert!(coords.contains(&"(1:0:0)".to_string()));
        assert!(coords.contains(&"(0:1:0)".to_string()));
        assert!(coords.contains(&"(0:0:1)".to_string()));
        for p in &pts {
            // each local equation is a node
            let cl = classify_ade(&p.local_equation).unwrap();
            assert_eq!(cl.ade, AdeType::A(1));
        }
    }

    #[test]
    fn non_reduced_detected() {
        let err = singular_points(&poly("z1^2*z2"), 32).unwrap_err();
        assert_eq!(err.kind(), "non-reduced-tangent-cone");
    }

    #[test]
    fn cuspidal_cubic_single_point() {
        let pts = singular_points(&poly("z2^2*z3 - z1^3"), 32).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].point.to_string(), "(0:0:1)");
        assert_eq!(pts[0].chart, 3);
        let cl = classify_ade(&pts[0].local_equation).unwrap();
        assert_eq!(cl.ade, AdeType::A(2));
    }

    #[test]
    fn total_milnor_examples() {
        let mut pts = singular_points(&poly("z1*z2*z3"), 32).unwrap();
        for p in pts.iter_mut() {
            classify_report(p).unwrap();
        }
        assert_eq!(total_milnor(&pts).unwrap(), 3);
        assert_eq!(total_milnor(&[]).unwrap(), 0);
        // additivity: one A2 and one A4 give 6
        let mut a2 = pts[0].clone();
        a2.ade = Some(AdeType::A(2));
        a2.milnor = Some(2);
        let mut a4 = pts[1].clone();
        a4.ade = Some(AdeType::A(4));
        a4.milnor = Some(4);
        assert_eq!(total_milnor(&[a2, a4]).unwrap(), 6);
    }

    #[test]
    fn chart_deduplication_is_canonical() {
        // nodal cubic netting one point visible in charts 2 and 3
        let pts = singular_points(&poly("z2^2*z3 - z1^3 - z1^2*z3"), 32).unwrap();
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].point.to_string(), "(0:0:1)");
        let cl = classify_ade(&pts[0].local_equation).unwrap();
        assert_eq!(cl.ade, AdeType::A(1));
    }

    #[test]
    fn user_points_bypass() {
        let fd = poly("z2^2*z3 - z1^3");
        let pt = ProjectivePoint::new([rat_int(0), rat_int(0), rat_int(1)]).unwrap();
        let pts = singular_points_supplied(&fd, &[pt], 32).unwrap();
        assert_eq!(pts.len(), 1);
        let bad = ProjectivePoint::new([rat_int(1), rat_int(1), rat_int(1)]).unwrap();
        assert!(singular_points_supplied(&fd, &[bad], 32).is_err());
    }

    #[test]
    fn a6_invariant_under_changes_and_perturbation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let base = poly("x2^2 + x3^7");
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
            // quadratic-times-high-order noise above the boundary
            let mut perturbed = base.clone();
            perturbed.insert_add([0, 2, 5], rat(1, 2));
            perturbed.insert_add([0, 1, 8], rat_int(-1));
            let img2 = &Poly::var(1).scale(&rat_int(a)) + &Poly::var(2).scale(&rat_int(b));
            let img3 = &Poly::var(1).scale(&rat_int(c)) + &Poly::var(2).scale(&rat_int(d));
            let changed = perturbed.substitute(&[Poly::var(0), img2, img3]);
            let got = classify_ade(&TruncatedSeries::new(changed, 40)).unwrap().ade;
            assert_eq!(got, AdeType::A(6));
        }
    }

    #[test]
    fn classifier_invariance_under_random_linear_changes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let forms: Vec<(&str, AdeType)> = vec![
            ("x2^2 + x3^2", AdeType::A(1)),
            ("x2^2 + x3^4", AdeType::A(3)),
            ("x2^2*x3 + x3^3", AdeType::D(4)),
            ("x2^3 + x3^4", AdeType::E(6)),
        ];
        for (text, expect) in forms {
            let base = poly(text);
            for _ in 0..5 {
                // random invertible rational 2x2
                let (a, b, c, d) = loop {
                    let v: [i64; 4] = [
                        rng.gen_range(-4..=4),
                        rng.gen_range(-4..=4),
                        rng.gen_range(-4..=4),
                        rng.gen_range(-4..=4),
                    ];
                    if v[0] * v[3] - v[1] * v[2] != 0 {
                        break (v[0], v[1], v[2], v[3]);
                    }
                };
                let img2 = &Poly::var(1).scale(&rat_int(a)) + &Poly::var(2).scale(&rat_int(b));
                let img3 = &Poly::var(1).scale(&rat_int(c)) + &Poly::var(2).scale(&rat_int(d));
                let changed = base.substitute(&[Poly::var(0), img2, img3]);
                let got = classify_ade(&TruncatedSeries::new(changed, 40)).unwrap().ade;
                assert_eq!(got, expect, "{} under [{},{};{},{}]", text, a, b, c, d);
            }
        }
    }
}
