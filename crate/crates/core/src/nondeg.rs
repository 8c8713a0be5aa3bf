//! Newton non-degeneracy: no face polynomial has a critical point in the
//! torus (all coordinates nonzero).
//!
//! Vertices pass automatically. Edges reduce to a square-free check of a
//! univariate polynomial. 2-faces reduce, through a monomial change of
//! variables along the face lattice, to a two-variable system solved by
//! resultants; algebraic candidate values are handled in quotient rings by
//! dynamic evaluation.

use num_traits::Zero;

use crate::bipoly::{bi_degree, bi_gcd, bi_is_zero, bi_resultant, from_bi, to_bi, BiP};
use crate::error::{Error, Result};
use crate::newton::{newton_boundary, Face, VarSet};
use crate::poly::{Exp, Poly, Rat};
use crate::upoly::quot::{system_common_root_mod, RootCheck};
use crate::upoly::UPoly;

#[derive(Debug, Clone, PartialEq)]
pub enum Nondegeneracy {
    NonDegenerate,
    Degenerate { face: Face },
}

impl Nondegeneracy {
    pub fn is_nondegenerate(&self) -> bool {
        matches!(self, Nondegeneracy::NonDegenerate)
    }
}

/// Check every compact face of the Newton boundary.
pub fn is_nondegenerate(f: &Poly, vars: VarSet) -> Result<Nondegeneracy> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.coeff(&[0, 0, 0]).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let nb = newton_boundary(f, vars);
    for face in &nb.faces {
        match face.dimension {
            0 => {} // a single monomial has no torus critical point
            1 => {
                if edge_is_degenerate(f, face) {
                    return Ok(Nondegeneracy::Degenerate { face: face.clone() });
                }
            }
            2 => match two_face_is_degenerate(f, face)? {
                Tri::Yes => return Ok(Nondegeneracy::Degenerate { face: face.clone() }),
                Tri::No => {}
                Tri::Unknown => {
                    return Err(Error::IndeterminateNondegeneracy { face: face.describe() })
                }
            },
            _ => unreachable!(),
        }
    }
    Ok(Nondegeneracy::NonDegenerate)
}

fn face_poly(f: &Poly, face: &Face) -> Poly {
    let mut out = Poly::zero();
    for e in &face.points {
        out.insert_add(*e, f.coeff(e));
    }
    out
}

type IV3 = [i128; 3];

fn to_iv(e: &Exp) -> IV3 {
    [e[0] as i128, e[1] as i128, e[2] as i128]
}

fn sub3(a: &IV3, b: &IV3) -> IV3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}


fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Edge face polynomial x^v0 P(u): degenerate iff P has a multiple root in C*.
fn edge_is_degenerate(f: &Poly, face: &Face) -> bool {
    let fp = face_poly(f, face);
    let v0 = to_iv(&face.vertices[0]);
    let v1 = to_iv(&face.vertices[1]);
    let d = sub3(&v1, &v0);
    let g = gcd_i128(gcd_i128(d[0], d[1]), d[2]);
    let dir = [d[0] / g, d[1] / g, d[2] / g];
    let idx = (0..3).find(|&i| dir[i] != 0).unwrap();
    let mut coeffs = vec![Rat::zero(); g as usize + 1];
    for (e, c) in fp.terms() {
        let diff = sub3(&to_iv(e), &v0);
        let k = diff[idx] / dir[idx];
        debug_assert!(k >= 0 && k <= g);
        coeffs[k as usize] = c.clone();
    }
    let p = UPoly::from_coeffs(coeffs);
    let deriv = p.derivative();
    let gcd = p.gcd(&deriv);
    let (stripped, _) = gcd.strip_x_power();
    !stripped.is_constant()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tri {
    Yes,
    No,
    Unknown,
}

/// Reduce the 2-face polynomial to two essential variables and decide
/// whether G = dG/du1 = dG/du2 = 0 has a torus solution.
fn two_face_is_degenerate(f: &Poly, face: &Face) -> Result<Tri> {
    let fp = face_poly(f, face);
    let w: IV3 = [
        face.normal[0] as i128,
        face.normal[1] as i128,
        face.normal[2] as i128,
    ];
    let [b1, b2] = kernel_basis(&w);
    // invertible 2x2 minor rows for solving (k1, k2)
    let (r0, r1, minor) = {
        let mut found = None;
        'rows: for r0 in 0..3 {
            for r1 in r0 + 1..3 {
                let m = b1[r0] * b2[r1] - b1[r1] * b2[r0];
                if m != 0 {
                    found = Some((r0, r1, m));
                    break 'rows;
                }
            }
        }
        found.expect("kernel basis has rank 2")
    };
    let v0 = to_iv(&face.vertices[0]);
    let mut terms: Vec<([i128; 2], Rat)> = Vec::new();
    let (mut min1, mut min2) = (i128::MAX, i128::MAX);
    for (e, c) in fp.terms() {
        let beta = sub3(&to_iv(e), &v0);
        // beta = k1 b1 + k2 b2
        let k1n = beta[r0] * b2[r1] - beta[r1] * b2[r0];
        let k2n = b1[r0] * beta[r1] - b1[r1] * beta[r0];
        debug_assert_eq!(k1n % minor, 0);
        debug_assert_eq!(k2n % minor, 0);
        let k1 = k1n / minor;
        let k2 = k2n / minor;
        min1 = min1.min(k1);
        min2 = min2.min(k2);
        terms.push(([k1, k2], c.clone()));
    }
    let mut g = Poly::zero();
    for ([k1, k2], c) in terms {
        g.insert_add([(k1 - min1) as u16, (k2 - min2) as u16, 0], c);
    }
    let g1 = g.partial(0);
    let g2 = g.partial(1);
    Ok(system_torus_zero(vec![g, g1, g2], 0))
}

fn kernel_basis(d: &IV3) -> [IV3; 2] {
    let g = gcd_i128(gcd_i128(d[0], d[1]), d[2]);
    let d = [d[0] / g, d[1] / g, d[2] / g];
    if d[0] == 0 && d[1] == 0 {
        return [[1, 0, 0], [0, 1, 0]];
    }
    let t = gcd_i128(d[0], d[1]);
    let b1 = [d[1] / t, -d[0] / t, 0];
    let (u, v) = ext_gcd(d[0], d[1]);
    let b2 = [u * d[2], v * d[2], -t];
    [b1, b2]
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128) {
    if b == 0 {
        return (a.signum(), 0);
    }
    let (u, v) = ext_gcd(b, a % b);
    (v, u - (a / b) * v)
}

/// Strip monomial factors u1^a u2^b (torus zeros unchanged).
fn strip_monomial(p: &Poly) -> Poly {
    if p.is_zero() {
        return p.clone();
    }
    let a = p.var_min_exp(0).unwrap();
    let b = p.var_min_exp(1).unwrap();
    p.div_var_power(0, a).unwrap().div_var_power(1, b).unwrap()
}

/// Decide whether a system of polynomials in slots (0,1) has a common zero
/// with both coordinates nonzero.
fn system_torus_zero(polys: Vec<Poly>, depth: u32) -> Tri {
    if depth > 32 {
        return Tri::Unknown;
    }
    let polys: Vec<Poly> = polys
        .into_iter()
        .filter(|p| !p.is_zero())
        .map(|p| strip_monomial(&p))
        .collect();
    if polys.is_empty() {
        return Tri::Yes;
    }
    if polys.iter().any(|p| p.degree() == Some(0)) {
        return Tri::No; // a nonzero constant equation
    }
    if polys.len() == 1 {
        // nonconstant with no monomial factor: always vanishes on the torus
        return Tri::Yes;
    }
    // common factor of the whole system?
    let mut common = to_bi(&polys[0], 1, 0);
    for p in polys.iter().skip(1) {
        common = bi_gcd(&common, &to_bi(p, 1, 0));
        if bi_is_constant_poly(&common) {
            break;
        }
    }
    if !bi_is_constant_poly(&common) {
        let cpoly = strip_monomial(&from_bi(&common, 1, 0));
        if !matches!(cpoly.degree(), Some(0)) {
            return Tri::Yes; // shared nonmonomial factor vanishes on the torus
        }
    }
    // pairwise coprime-ification
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            let bi_i = to_bi(&polys[i], 1, 0);
            let bi_j = to_bi(&polys[j], 1, 0);
            let g = bi_gcd(&bi_i, &bi_j);
            let gp = strip_monomial(&from_bi(&g, 1, 0));
            if matches!(gp.degree(), Some(d) if d > 0) {
                // V(pi, pj) = V(g) union V(pi/g, pj/g)
                let mut with_g = vec![gp.clone()];
                let mut reduced = Vec::new();
                for (k, p) in polys.iter().enumerate() {
                    if k == i || k == j {
                        let q = bi_exact_div_poly(p, &gp);
                        reduced.push(q);
                    } else {
                        with_g.push(p.clone());
                        reduced.push(p.clone());
                    }
                }
                let a = system_torus_zero(with_g, depth + 1);
                if a == Tri::Yes {
                    return Tri::Yes;
                }
                let b = system_torus_zero(reduced, depth + 1);
                return match (a, b) {
                    (_, Tri::Yes) => Tri::Yes,
                    (Tri::No, Tri::No) => Tri::No,
                    _ => Tri::Unknown,
                };
            }
        }
    }
    // all pairwise coprime (up to monomials); eliminate u2 when possible
    let deg2 = |p: &Poly| p.var_max_exp(1).unwrap_or(0);
    let deg1 = |p: &Poly| p.var_max_exp(0).unwrap_or(0);
    let n_with_u2 = polys.iter().filter(|p| deg2(p) > 0).count();
    if n_with_u2 == 0 {
        // all univariate in u1
        let mut g = UPoly::zero();
        for p in &polys {
            let u = univar_in(p, 0);
            g = if g.is_zero() { u } else { g.gcd(&u) };
        }
        let (s, _) = g.strip_x_power();
        return if s.is_constant() { Tri::No } else { Tri::Yes };
    }
    if polys.iter().all(|p| deg1(p) == 0) {
        let mut g = UPoly::zero();
        for p in &polys {
            let u = univar_in(p, 1);
            g = if g.is_zero() { u } else { g.gcd(&u) };
        }
        let (s, _) = g.strip_x_power();
        return if s.is_constant() { Tri::No } else { Tri::Yes };
    }
    let mut candidates: Vec<UPoly> = Vec::new();
    for p in &polys {
        if deg2(p) == 0 {
            candidates.push(univar_in(p, 0));
        }
    }
    let with_u2: Vec<&Poly> = polys.iter().filter(|p| deg2(p) > 0).collect();
    for i in 0..with_u2.len() {
        for j in i + 1..with_u2.len() {
            let r = bi_resultant(&to_bi(with_u2[i], 1, 0), &to_bi(with_u2[j], 1, 0));
            debug_assert!(!r.is_zero(), "coprime polynomials have nonzero resultant");
            candidates.push(r);
        }
    }
    if candidates.is_empty() {
        // a single poly with u2-degree > 0, the rest ruled out above
        return Tri::Yes;
    }
    let mut r = UPoly::zero();
    for c in &candidates {
        r = if r.is_zero() { c.clone() } else { r.gcd(c) };
        if r.is_constant() && !r.is_zero() {
            return Tri::No;
        }
    }
    let (r, _) = r.strip_x_power();
    if r.is_constant() {
        return Tri::No;
    }
    let (roots, leftover) = r.rational_roots();
    for a in roots.iter().filter(|a| !a.is_zero()) {
        let mut g = UPoly::zero();
        for p in &polys {
            let u = eval_u1(p, a);
            g = if g.is_zero() { u } else { g.gcd(&u) };
        }
        if g.is_zero() {
            return Tri::Yes; // entire fiber vanishes; u2 free
        }
        let (s, _) = g.strip_x_power();
        if !s.is_constant() {
            return Tri::Yes;
        }
    }
    if !leftover.is_constant() {
        let m = leftover.squarefree_part();
        let qpolys: Vec<Vec<UPoly>> = polys.iter().map(|p| to_bi(p, 1, 0)).collect();
        match system_common_root_mod(&qpolys, &m, true) {
            RootCheck::CommonRoot => return Tri::Yes,
            RootCheck::NoCommonRoot => {}
            RootCheck::Indeterminate => return Tri::Unknown,
        }
    }
    Tri::No
}

fn bi_is_constant_poly(p: &BiP) -> bool {
    match bi_degree(p) {
        None => true,
        Some(0) => p[0].is_constant(),
        _ => false,
    }
}

fn univar_in(p: &Poly, var: usize) -> UPoly {
    let mut coeffs = vec![Rat::zero(); p.var_max_exp(var).unwrap_or(0) as usize + 1];
    for (e, c) in p.terms() {
        coeffs[e[var] as usize] += c.clone();
    }
    UPoly::from_coeffs(coeffs)
}

fn eval_u1(p: &Poly, a: &Rat) -> UPoly {
    let b = to_bi(p, 1, 0);
    UPoly::from_coeffs(b.iter().map(|c| c.eval(a)).collect())
}

fn bi_exact_div_poly(p: &Poly, g: &Poly) -> Poly {
    // divide in the bivariate representation; monomial mismatches are
    // handled by shifting out the minimal exponents first
    let ps = strip_monomial(p);
    let gs = strip_monomial(g);
    let pb = to_bi(&ps, 1, 0);
    let gb = to_bi(&gs, 1, 0);
    let mut rem = pb;
    let dg = bi_degree(&gb).expect("nonzero divisor");
    let lcg = gb.last().unwrap().clone();
    let mut q: BiP = vec![UPoly::zero(); rem.len()];
    while let Some(dr) = bi_degree(&rem) {
        if dr < dg {
            break;
        }
        let lcr = rem.last().unwrap().clone();
        let f = lcr
            .exact_div(&lcg)
            .expect("exact division in coprime split");
        q[dr - dg] = q[dr - dg].add(&f);
        for (i, c) in gb.iter().enumerate() {
            rem[i + dr - dg] = rem[i + dr - dg].sub(&c.mul(&f));
        }
        crate::bipoly::bi_trim(&mut rem);
    }
    assert!(bi_is_zero(&rem));
    crate::bipoly::bi_trim(&mut q);
    from_bi(&q, 1, 0)
}
