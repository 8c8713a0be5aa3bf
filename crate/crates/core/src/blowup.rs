//! Ordinary point blow-up in affine charts: pull-back, strict transform,
//! admissible coordinate normalization at tangent-cone singular points, and
//! extraction of the principal-part data (h, c, m).
//!
//! Chart k sends z_k to y1 and the remaining variables, in index order, to
//! y1*y2 and y1*y3. All admissible changes fix x1 = y1 and act on (x2, x3)
//! with invertible Jacobian at the origin; shifts may depend on x1.

use num_traits::Zero;

use crate::curve::{apply_steps3, Classified};
use crate::error::{Error, Result};
use crate::newton::{newton_principal_part, VarSet};
use crate::poly::{Exp, Poly, Rat};
use crate::series::TruncatedSeries;

/// Blow-up chart index 1, 2, or 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Chart {
    pub index: u8,
}

impl Chart {
    pub fn new(index: u8) -> Result<Self> {
        if (1..=3).contains(&index) {
            Ok(Chart { index })
        } else {
            Err(Error::InvalidInput { msg: format!("chart index {} out of range", index) })
        }
    }

    /// Indices (chart variable, first remaining, second remaining).
    fn roles(&self) -> (usize, usize, usize) {
        match self.index {
            1 => (0, 1, 2),
            2 => (1, 0, 2),
            3 => (2, 0, 1),
            _ => unreachable!(),
        }
    }

    /// Substitution images of (z1, z2, z3) in the chart coordinates.
    pub fn images(&self) -> [Poly; 3] {
        let (i0, i1, i2) = self.roles();
        let y1 = Poly::var(0);
        let mut out = [Poly::zero(), Poly::zero(), Poly::zero()];
        out[i0] = y1.clone();
        out[i1] = &y1 * &Poly::var(1);
        out[i2] = &y1 * &Poly::var(2);
        out
    }
}

/// Pull-back and strict transform in one chart.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub chart: Chart,
    /// pi* f in the chart coordinates (y1, y2, y3).
    pub total: Poly,
    /// Strict transform: pi* f divided by y1^d.
    pub strict: Poly,
    /// The order d of f.
    pub order: u32,
}

/// Exact pull-back via the monomial exponent transform.
pub fn pullback(f: &Poly, chart: &Chart) -> Result<Pullback> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.coeff(&[0, 0, 0]).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let d = f.order().unwrap();
    let (i0, i1, i2) = chart.roles();
    let _ = i0;
    let mut total = Poly::zero();
    let mut strict = Poly::zero();
    for (e, c) in f.terms() {
        let sum = e[0] as u32 + e[1] as u32 + e[2] as u32;
        assert!(sum <= u16::MAX as u32, "exponent overflow in pull-back");
        let te: Exp = [sum as u16, e[i1], e[i2]];
        total.insert_add(te, c.clone());
        let se: Exp = [(sum - d) as u16, e[i1], e[i2]];
        strict.insert_add(se, c.clone());
    }
    Ok(Pullback { chart: *chart, total, strict, order: d })
}

/// Exact local germ of the strict transform at a tangent-cone point: the
/// chart is the point's canonical chart and (y2, y3) are translated so the
/// point sits at the origin.
pub fn local_strict_transform(
    f: &Poly,
    point: &crate::curve::ProjectivePoint,
) -> Result<(Poly, Chart, u32)> {
    let chart = Chart::new(point.chart())?;
    let pb = pullback(f, &chart)?;
    let (i0, i1, i2) = chart.roles();
    let p = &point.coords;
    let shift = [
        Rat::zero(),
        &p[i1] / &p[i0],
        &p[i2] / &p[i0],
    ];
    Ok((pb.strict.shift(&shift), chart, pb.order))
}

/// An admissible change: x1 = y1 fixed, (x2, x3) a series change with
/// invertible Jacobian at the origin, recorded on top of a chart and a
/// translation.
#[derive(Debug, Clone)]
pub struct AdmissibleChange {
    pub chart: Chart,
    /// Translation of (y2, y3) moving the point to the origin.
    pub shift: [Rat; 2],
    /// Composed images of (x2, x3) as series in (x1, x2, x3).
    pub series_change: [TruncatedSeries; 2],
}

impl AdmissibleChange {
    pub fn identity(chart: Chart, shift: [Rat; 2], order: u32) -> Self {
        AdmissibleChange {
            chart,
            shift,
            series_change: [TruncatedSeries::var(1, order), TruncatedSeries::var(2, order)],
        }
    }

    /// Compose with further steps (exact polynomial images of (x2, x3)).
    pub fn extend(&mut self, steps: &[[Poly; 2]]) {
        let order = self.series_change[0].order();
        for step in steps {
            let triple = [
                TruncatedSeries::var(0, order),
                TruncatedSeries::new(step[0].clone(), order),
                TruncatedSeries::new(step[1].clone(), order),
            ];
            self.series_change = [
                self.series_change[0]
                    .substitute(&triple)
                    .expect("origin-fixing change"),
                self.series_change[1]
                    .substitute(&triple)
                    .expect("origin-fixing change"),
            ];
        }
    }

    /// Determinant of the (x2, x3) Jacobian at the origin.
    pub fn jacobian_det(&self) -> Rat {
        let a = self.series_change[0].poly().coeff(&[0, 1, 0]);
        let b = self.series_change[0].poly().coeff(&[0, 0, 1]);
        let c = self.series_change[1].poly().coeff(&[0, 1, 0]);
        let d = self.series_change[1].poly().coeff(&[0, 0, 1]);
        &a * &d - &b * &c
    }
}

/// Result of the principal-part search at one point.
#[derive(Debug, Clone)]
pub struct PrincipalPartData {
    /// The ADE form h(x2, x3) on the boundary (coefficients included).
    pub h: Poly,
    pub c: Rat,
    pub m: u32,
    pub change: AdmissibleChange,
    /// Terms strictly above the boundary of h + c x1^m (audit, truncated).
    pub residual: Poly,
    /// Elimination rounds used by the node normalization (audit).
    pub rounds: u32,
}

/// Shapes x1^j, x1^j x2, x1^j x3 with j >= 1 present in a polynomial.
fn min_shape_level(p: &Poly) -> Option<u16> {
    p.terms()
        .filter(|(e, _)| e[0] >= 1 && (e[1] as u32 + e[2] as u32) <= 1)
        .map(|(e, _)| e[0])
        .min()
}

/// Outcome of the node normalization.
#[derive(Debug, Clone)]
pub struct NodeNormalization {
    /// The diagonal rank-2 quadratic h(x2, x3).
    pub h: Poly,
    pub c: Rat,
    pub m: u32,
    /// The elimination shifts, as exact polynomial substitutions.
    pub steps: Vec<[Poly; 2]>,
    /// Number of elimination rounds (termination audit).
    pub rounds: u32,
}

/// Iterative elimination at a node: shifts x2 <- x2 - a/(2 l2) x1^j,
/// x3 <- x3 - b/(2 l3) x1^j until a pure power c x1^m leads the boundary.
///
/// The germ must have a diagonal rank-2 quadratic part in (x2, x3). The
/// exact (untruncated) germ polynomial decides conclusively whether the
/// critical locus contains the line x2 = x3 = 0.
pub fn normalize_node(
    exact_germ: &Poly,
    truncation: u32,
    max_order: u32,
) -> Result<NodeNormalization> {
    let l2 = exact_germ.coeff(&[0, 2, 0]);
    let l3 = exact_germ.coeff(&[0, 0, 2]);
    if l2.is_zero() || l3.is_zero() || !exact_germ.coeff(&[0, 1, 1]).is_zero() {
        return Err(Error::InvalidInput {
            msg: "node normalization requires a diagonal rank-2 quadratic part".into(),
        });
    }
    // conclusive non-isolation scan on the exact polynomial
    if min_shape_level(exact_germ).is_none() {
        return Err(Error::NonIsolatedSingularity);
    }
    let mut cur = TruncatedSeries::new(exact_germ.clone(), truncation);
    let mut steps: Vec<[Poly; 2]> = Vec::new();
    let mut rounds = 0u32;
    let mut last_j0 = 0u16;
    loop {
        let j0 = match min_shape_level(cur.poly()) {
            Some(j) => j,
            None => {
                return Err(Error::BlowOrderExceeded {
                    max_order,
                    hint: "no x1-shape terms below the truncation order; raise --truncation"
                        .into(),
                })
            }
        };
        assert!(j0 > last_j0, "elimination level must strictly increase");
        last_j0 = j0;
        if j0 as u32 > max_order {
            return Err(Error::BlowOrderExceeded {
                max_order,
                hint: "raise --max-blow-order or --truncation".into(),
            });
        }
        let pure = cur.poly().coeff(&[j0, 0, 0]);
        if !pure.is_zero() {
            // accept: everything else is strictly above the boundary of
            // l2 x2^2 + l3 x3^2 + pure x1^j0
            let m = j0 as u32;
            let mut h = Poly::zero();
            h.insert_add([0, 2, 0], l2.clone());
            h.insert_add([0, 0, 2], l3.clone());
            let mut principal_expected = h.clone();
            principal_expected.insert_add([j0, 0, 0], pure.clone());
            let actual = newton_principal_part(cur.poly(), VarSet::all3());
            if actual != principal_expected {
                let off = &actual - &principal_expected;
                return Err(Error::NotBlowAdeShape { terms: off.to_string() });
            }
            return Ok(NodeNormalization { h, c: pure, m, steps, rounds });
        }
        let a = cur.poly().coeff(&[j0, 1, 0]);
        let b = cur.poly().coeff(&[j0, 0, 1]);
        debug_assert!(!a.is_zero() || !b.is_zero());
        let s2 = -(&a / (Rat::from_integer(2.into()) * &l2));
        let s3 = -(&b / (Rat::from_integer(2.into()) * &l3));
        let img2 = &Poly::var(1) + &Poly::monomial([j0, 0, 0], s2);
        let img3 = &Poly::var(2) + &Poly::monomial([j0, 0, 0], s3);
        let step = [img2, img3];
        let triple = [
            TruncatedSeries::var(0, truncation),
            TruncatedSeries::new(step[0].clone(), truncation),
            TruncatedSeries::new(step[1].clone(), truncation),
        ];
        cur = cur.substitute(&triple).expect("origin-fixing shift");
        steps.push(step);
        rounds += 1;
    }
}

/// Eliminate every x2-divisible term except the pure square by iterated
/// completion of the square with x1-dependent shifts.
pub fn split_quadratic(germ: &TruncatedSeries) -> Result<(TruncatedSeries, Vec<[Poly; 2]>)> {
    let lambda = germ.poly().coeff(&[0, 2, 0]);
    if lambda.is_zero() {
        return Err(Error::InvalidInput {
            msg: "split_quadratic requires a nonzero x2^2 coefficient".into(),
        });
    }
    let order = germ.order();
    let mut cur = germ.clone();
    let mut steps: Vec<[Poly; 2]> = Vec::new();
    let mut guard = 0u32;
    loop {
        guard += 1;
        if guard > 4 * order {
            return Err(Error::TruncationMismatch {
                msg: "square completion exhausted the truncation order".into(),
            });
        }
        let offender: Option<(Exp, Rat)> = cur
            .poly()
            .terms()
            .filter(|(e, _)| e[1] == 1)
            .min_by_key(|(e, _)| (e[0] as u32 + e[2] as u32, *e))
            .map(|(e, c)| (*e, c.clone()));
        let (e, coef) = match offender {
            None => break,
            Some(x) => x,
        };
        let shift = -(&coef / (Rat::from_integer(2.into()) * &lambda));
        let img2 = &Poly::var(1) + &Poly::monomial([e[0], 0, e[2]], shift);
        let step = [img2, Poly::var(2)];
        let triple = [
            TruncatedSeries::var(0, order),
            TruncatedSeries::new(step[0].clone(), order),
            TruncatedSeries::new(step[1].clone(), order),
        ];
        cur = cur.substitute(&triple).expect("origin-fixing shift");
        steps.push(step);
    }
    Ok((cur, steps))
}

/// Options for the principal-part search.
#[derive(Debug, Clone, Copy)]
pub struct ExtractOptions {
    pub truncation: u32,
    pub max_blow_order: u32,
}

/// Search for the blow-ADE principal part h(x2,x3) + c x1^m at one point,
/// starting from the exact local strict transform and the classifier's data.
///
/// A-type points of index >= 2 go through the square split; D/E points
/// receive no x1-dependent shifts, so the boundary must already have the
/// required shape after the classifier's (x2, x3)-change.
pub fn extract_principal_part(
    local_exact: &Poly,
    classified: &Classified,
    chart: Chart,
    shift: [Rat; 2],
    opts: ExtractOptions,
) -> Result<PrincipalPartData> {
    // apply the classifier's change exactly
    let mut transformed = local_exact.clone();
    for step in &classified.steps {
        transformed = transformed.substitute(&[Poly::var(0), step[0].clone(), step[1].clone()]);
    }
    let mut change = AdmissibleChange::identity(chart, shift, opts.truncation);
    change.extend(&classified.steps);
    match &classified.ade {
        crate::curve::AdeType::A(1) => {
            let node = normalize_node(&transformed, opts.truncation, opts.max_blow_order)?;
            change.extend(&node.steps);
            debug_assert!(!change.jacobian_det().is_zero());
            let mut expected = node.h.clone();
            expected.insert_add([node.m as u16, 0, 0], node.c.clone());
            let reduced = apply_steps3(
                &TruncatedSeries::new(transformed, opts.truncation),
                &node.steps,
            );
            let residual = reduced.poly() - &expected;
            Ok(PrincipalPartData {
                h: node.h,
                c: node.c,
                m: node.m,
                change,
                residual,
                rounds: node.rounds,
            })
        }
        crate::curve::AdeType::A(n) => {
            let series = TruncatedSeries::new(transformed, opts.truncation);
            let (split, steps) = split_quadratic(&series)?;
            change.extend(&steps);
            debug_assert!(!change.jacobian_det().is_zero());
            finish_from_boundary(split, classified, change, *n, 0)
        }
        crate::curve::AdeType::D(n) => {
            let series = TruncatedSeries::new(transformed, opts.truncation);
            finish_from_boundary(series, classified, change, *n, 0)
        }
        crate::curve::AdeType::E(n) => {
            let series = TruncatedSeries::new(transformed, opts.truncation);
            finish_from_boundary(series, classified, change, *n, 0)
        }
        other => Err(Error::InvalidInput {
            msg: format!("cannot extract a principal part for type {:?}", other),
        }),
    }
}

/// Success iff the boundary is exactly (2-variable ADE form) + c x1^m.
fn finish_from_boundary(
    germ: TruncatedSeries,
    classified: &Classified,
    change: AdmissibleChange,
    _index: u32,
    rounds: u32,
) -> Result<PrincipalPartData> {
    let actual = newton_principal_part(germ.poly(), VarSet::all3());
    // expected h: the classifier's two-variable principal part
    let h = classified.principal.clone();
    let mut pure: Option<(u16, Rat)> = None;
    let mut offending = Poly::zero();
    for (e, c) in actual.terms() {
        if e[0] == 0 {
            // must belong to h
            if h.coeff(e) != c.clone() {
                offending.insert_add(*e, c.clone());
            }
        } else if e[1] == 0 && e[2] == 0 {
            debug_assert!(pure.is_none(), "two pure powers cannot both lie on the boundary");
            pure = Some((e[0], c.clone()));
        } else {
            offending.insert_add(*e, c.clone());
        }
    }
    // h must be fully present on the boundary
    for (e, c) in h.terms() {
        if actual.coeff(e) != c.clone() {
            offending.insert_add(*e, c.clone());
        }
    }
    if !offending.is_zero() {
        return Err(Error::NotBlowAdeShape { terms: offending.to_string() });
    }
    let (m, c) = match pure {
        Some((m, c)) => (m as u32, c),
        None => {
            return Err(Error::NotBlowAdeShape {
                terms: "no pure x1 power on the boundary".into(),
            })
        }
    };
    let mut expected = h.clone();
    expected.insert_add([m as u16, 0, 0], c.clone());
    let residual = germ.poly() - &expected;
    Ok(PrincipalPartData { h, c, m, change, residual, rounds })
}
