//! Bivariate polynomial operations on a designated variable pair: gcd,
//! resultants (Sylvester matrix with fraction-free elimination), and exact
//! rational solving of zero-dimensional systems.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Rat};
use crate::upoly::UPoly;

/// Dense in the main variable; coefficients are univariate in the co
/// variable. Index = power of main.
pub type BiP = Vec<UPoly>;

pub fn bi_trim(p: &mut BiP) {
    while matches!(p.last(), Some(c) if c.is_zero()) {
        p.pop();
    }
}

pub fn bi_is_zero(p: &BiP) -> bool {
    p.is_empty()
}

pub fn bi_degree(p: &BiP) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn bi_is_constant(p: &BiP) -> bool {
    match p.len() {
        0 => true,
        1 => p[0].is_constant(),
        _ => false,
    }
}

/// Convert a Poly supported on {main, co} into dense-in-main form.
pub fn to_bi(f: &Poly, main: usize, co: usize) -> BiP {
    let mut out: BiP = Vec::new();
    for (e, c) in f.terms() {
        for (i, &ei) in e.iter().enumerate() {
            if i != main && i != co {
                assert_eq!(ei, 0, "polynomial has support outside the variable pair");
            }
        }
        let dm = e[main] as usize;
        let dc = e[co] as usize;
        if out.len() <= dm {
            out.resize(dm + 1, UPoly::zero());
        }
        let mut coeffs = out[dm].0.clone();
        if coeffs.len() <= dc {
            coeffs.resize(dc + 1, Rat::zero());
        }
        coeffs[dc] += c.clone();
        out[dm] = UPoly::from_coeffs(coeffs);
    }
    bi_trim(&mut out);
    out
}

pub fn from_bi(p: &BiP, main: usize, co: usize) -> Poly {
    let mut out = Poly::zero();
    for (dm, cp) in p.iter().enumerate() {
        for (dc, c) in cp.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut e = [0u16; 3];
            e[main] = dm as u16;
            e[co] = dc as u16;
            out.insert_add(e, c.clone());
        }
    }
    out
}

pub fn bi_mul(a: &BiP, b: &BiP) -> BiP {
    if bi_is_zero(a) || bi_is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![UPoly::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&ca.mul(cb));
        }
    }
    bi_trim(&mut out);
    out
}

pub fn bi_scale(a: &BiP, c: &UPoly) -> BiP {
    let mut out: BiP = a.iter().map(|v| v.mul(c)).collect();
    bi_trim(&mut out);
    out
}

/// Content in the co variable: gcd of the UPoly coefficients.
pub fn bi_content(p: &BiP) -> UPoly {
    let mut g = UPoly::zero();
    for c in p {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.monic() } else { g.gcd(c) };
        if g.is_constant() && !g.is_zero() {
            return UPoly::one();
        }
    }
    g
}

pub fn bi_primitive(p: &BiP) -> BiP {
    let c = bi_content(p);
    if c.is_zero() || c.is_constant() {
        return p.clone();
    }
    let mut out: BiP = p
        .iter()
        .map(|v| v.exact_div(&c).expect("content divides"))
        .collect();
    bi_trim(&mut out);
    out
}

/// Pseudo-remainder of a by b in the main variable: lc(b)^(da-db+1) a = q b + r.
fn bi_prem(a: &BiP, b: &BiP) -> BiP {
    let db = bi_degree(b).expect("nonzero divisor");
    let lcb = b.last().unwrap().clone();
    let mut r = a.clone();
    while let Some(dr) = bi_degree(&r) {
        if dr < db {
            break;
        }
        let lcr = r.last().unwrap().clone();
        // r = lcb * r - lcr * x^(dr-db) * b
        let mut next = vec![UPoly::zero(); dr + 1];
        for (i, c) in r.iter().enumerate() {
            next[i] = c.mul(&lcb);
        }
        for (i, c) in b.iter().enumerate() {
            next[i + dr - db] = next[i + dr - db].sub(&c.mul(&lcr));
        }
        bi_trim(&mut next);
        r = next;
        if bi_degree(&r) == Some(dr) {
            // leading term must have cancelled
            unreachable!("pseudo-division failed to reduce degree");
        }
    }
    r
}

/// Gcd of two bivariate polynomials (primitive PRS).
pub fn bi_gcd(a: &BiP, b: &BiP) -> BiP {
    if bi_is_zero(a) {
        return bi_primitive(b);
    }
    if bi_is_zero(b) {
        return bi_primitive(a);
    }
    let ca = bi_content(a);
    let cb = bi_content(b);
    let cg = ca.gcd(&cb);
    let mut p = bi_primitive(a);
    let mut q = bi_primitive(b);
    if bi_degree(&p) < bi_degree(&q) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = bi_prem(&p, &q);
        if bi_is_zero(&r) {
            break;
        }
        p = q;
        q = bi_primitive(&r);
    }
    // normalize: primitive part times the contents' gcd
    let mut g = bi_primitive(&q);
    if let Some(last) = g.last() {
        let lc = last.lc();
        if !lc.is_one() {
            let inv = Rat::one() / lc;
            g = g.iter().map(|c| c.scale(&inv)).collect();
        }
    }
    bi_scale(&g, &cg)
}

/// Resultant with respect to the main variable, via the Sylvester matrix and
/// Bareiss fraction-free elimination over Q\[co\].
pub fn bi_resultant(a: &BiP, b: &BiP) -> UPoly {
    let da = match bi_degree(a) {
        Some(d) => d,
        None => return UPoly::zero(),
    };
    let db = match bi_degree(b) {
        Some(d) => d,
        None => return UPoly::zero(),
    };
    if da == 0 {
        // res(const_a, b) = a^db
        let mut r = UPoly::one();
        for _ in 0..db {
            r = r.mul(&a[0]);
        }
        return r;
    }
    if db == 0 {
        let mut r = UPoly::one();
        for _ in 0..da {
            r = r.mul(&b[0]);
        }
        return r;
    }
    let n = da + db;
    let mut m: Vec<Vec<UPoly>> = vec![vec![UPoly::zero(); n]; n];
    for i in 0..db {
        for (j, c) in a.iter().enumerate() {
            m[i][i + da - j] = c.clone();
        }
    }
    for i in 0..da {
        for (j, c) in b.iter().enumerate() {
            m[db + i][i + db - j] = c.clone();
        }
    }
    // Bareiss
    let mut sign = 1i32;
    let mut prev = UPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return UPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = UPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        det.neg()
    } else {
        det
    }
}

/// Evaluate the co variable at a rational, producing a univariate in main.
pub fn bi_eval_co(p: &BiP, a: &Rat) -> UPoly {
    UPoly::from_coeffs(p.iter().map(|c| c.eval(a)).collect())
}

/// All rational solutions (co, main) of a zero-dimensional system. Errors
/// with NonRationalSingularLocus when solutions outside Q may exist.
pub fn affine_rational_solutions(system: &[BiP]) -> Result<Vec<(Rat, Rat)>> {
    let polys: Vec<BiP> = system.iter().filter(|p| !bi_is_zero(p)).cloned().collect();
    if polys.is_empty() {
        return Err(Error::InvalidInput {
            msg: "system is identically zero (positive-dimensional)".into(),
        });
    }
    for p in &polys {
        if bi_is_constant(p) && !bi_is_zero(p) && p.len() == 1 && p[0].is_constant() {
            return Ok(Vec::new()); // nonzero constant: no solutions
        }
    }
    // Split along pairwise common factors until pairwise coprime.
    for i in 0..polys.len() {
        for j in i + 1..polys.len() {
            let g = bi_gcd(&polys[i], &polys[j]);
            if !bi_is_constant(&g) {
                let mut with_g: Vec<BiP> = vec![g.clone()];
                let mut reduced: Vec<BiP> = Vec::new();
                for (k, p) in polys.iter().enumerate() {
                    if k == i || k == j {
                        reduced.push(bi_exact_div(p, &g));
                    } else {
                        with_g.push(p.clone());
                        reduced.push(p.clone());
                    }
                }
                let mut sols = affine_rational_solutions(&with_g)?;
                for s in affine_rational_solutions(&reduced)? {
                    if !sols.contains(&s) {
                        sols.push(s);
                    }
                }
                sols.sort();
                return Ok(sols);
            }
        }
    }
    if polys.len() == 1 {
        return Err(Error::InvalidInput {
            msg: "single equation has a positive-dimensional solution set".into(),
        });
    }
    // Pairwise coprime: finite solution set. Project onto the co variable.
    let mut candidates: Vec<UPoly> = Vec::new();
    let with_main: Vec<&BiP> = polys.iter().filter(|p| bi_degree(p).unwrap() > 0).collect();
    for p in &polys {
        if bi_degree(p).unwrap() == 0 {
            candidates.push(p[0].clone());
        }
    }
    for i in 0..with_main.len() {
        for j in i + 1..with_main.len() {
            candidates.push(bi_resultant(with_main[i], with_main[j]));
        }
    }
    if with_main.len() == 1 && !candidates.is_empty() {
        // co constrained by the univariate members alone
    } else if with_main.len() < 2 && candidates.is_empty() {
        return Ok(Vec::new());
    }
    let mut r = UPoly::zero();
    for c in &candidates {
        r = if r.is_zero() { c.clone() } else { r.gcd(c) };
        if r.is_constant() && !r.is_zero() {
            return Ok(Vec::new());
        }
    }
    if r.is_zero() {
        return Ok(Vec::new());
    }
    let (roots, leftover) = r.rational_roots();
    let mut sols = Vec::new();
    for a in &roots {
        let univs: Vec<UPoly> = polys.iter().map(|p| bi_eval_co(p, a)).collect();
        let mut g = UPoly::zero();
        for u in &univs {
            g = if g.is_zero() { u.clone() } else { g.gcd(u) };
        }
        if g.is_zero() {
            return Err(Error::InvalidInput {
                msg: "fiber is positive-dimensional".into(),
            });
        }
        if g.is_constant() {
            continue;
        }
        let (mroots, mleft) = g.rational_roots();
        for b in mroots {
            sols.push((a.clone(), b));
        }
        if !mleft.is_constant() {
            return Err(Error::NonRationalSingularLocus {
                factor: format!("main-variable factor {:?} over co = {}", mleft.0, a),
            });
        }
    }
    if !leftover.is_constant() {
        // Verify whether an algebraic co value actually extends to a solution.
        let m = leftover.squarefree_part();
        let qpolys: Vec<Vec<UPoly>> = polys.iter().map(|p| p.to_vec()).collect();
        match crate::upoly::quot::system_common_root_mod(&qpolys, &m, false) {
            crate::upoly::quot::RootCheck::NoCommonRoot => {}
            _ => {
                return Err(Error::NonRationalSingularLocus {
                    factor: format!("{:?}", m.0),
                });
            }
        }
    }
    sols.sort();
    sols.dedup();
    Ok(sols)
}

pub fn bi_exact_div(p: &BiP, g: &BiP) -> BiP {
    // exact division via pseudo-division bookkeeping; p = g * q exactly.
    if bi_is_zero(p) {
        return Vec::new();
    }
    let dg = bi_degree(g).expect("nonzero divisor");
    let mut rem = p.clone();
    let lcg = g.last().unwrap().clone();
    let mut q: BiP = vec![UPoly::zero(); p.len()];
    while let Some(dr) = bi_degree(&rem) {
        if dr < dg {
            break;
        }
        let lcr = rem.last().unwrap().clone();
        let f = lcr.exact_div(&lcg).expect("exact bivariate division");
        q[dr - dg] = q[dr - dg].add(&f);
        for (i, c) in g.iter().enumerate() {
            rem[i + dr - dg] = rem[i + dr - dg].sub(&c.mul(&f));
        }
        bi_trim(&mut rem);
    }
    assert!(bi_is_zero(&rem), "exact bivariate division left a remainder");
    bi_trim(&mut q);
    q
}
