//! Newton boundary machinery: compact faces of the Newton polyhedron in 1-3
//! variables, Newton principal parts, and Newton numbers via exact lattice
//! volumes.
//!
//! Face enumeration works over the support set with exact integer
//! arithmetic: candidate primitive normals come from cross products of
//! support-point differences (complete for 2-faces); edges and vertices not
//! carried by a 2-face are found by small exact LP feasibility checks.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Exp, Poly};

/// A subset of the three variable slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct VarSet {
    mask: u8,
}

impl VarSet {
    pub fn all3() -> Self {
        VarSet { mask: 0b111 }
    }

    pub fn pair(i: usize, j: usize) -> Self {
        assert!(i < 3 && j < 3 && i != j);
        VarSet { mask: (1 << i) | (1 << j) }
    }

    pub fn single(i: usize) -> Self {
        assert!(i < 3);
        VarSet { mask: 1 << i }
    }

    pub fn from_mask(mask: u8) -> Self {
        assert!(mask & 0b111 == mask);
        VarSet { mask }
    }

    pub fn mask(&self) -> u8 {
        self.mask
    }

    pub fn contains(&self, i: usize) -> bool {
        self.mask & (1 << i) != 0
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..3).filter(|i| self.contains(*i))
    }

    /// Nonempty subsets.
    pub fn subsets(&self) -> Vec<VarSet> {
        let mut out = Vec::new();
        for m in 1u8..8 {
            if m & self.mask == m {
                out.push(VarSet { mask: m });
            }
        }
        out
    }
}

type IV3 = [i128; 3];

fn to_iv(e: &Exp) -> IV3 {
    [e[0] as i128, e[1] as i128, e[2] as i128]
}

fn sub3(a: &IV3, b: &IV3) -> IV3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross3(a: &IV3, b: &IV3) -> IV3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot3(a: &IV3, b: &IV3) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
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

fn primitivize(v: &IV3) -> IV3 {
    let g = gcd_i128(gcd_i128(v[0], v[1]), v[2]);
    if g == 0 {
        *v
    } else {
        [v[0] / g, v[1] / g, v[2] / g]
    }
}

fn is_zero3(v: &IV3) -> bool {
    v[0] == 0 && v[1] == 0 && v[2] == 0
}

/// A compact face of the Newton polyhedron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// All support points lying on the face.
    pub points: Vec<Exp>,
    /// Geometric extreme points among them (cyclic hull order for 2-faces).
    pub vertices: Vec<Exp>,
    pub dimension: u8,
    /// A primitive supporting covector, strictly positive on the active
    /// variables (zero on inactive slots).
    pub normal: [i64; 3],
    /// Value of the covector on the face.
    pub level: i64,
}

impl Face {
    pub fn point_set_key(&self) -> Vec<Exp> {
        let mut v = self.points.clone();
        v.sort();
        v
    }

    pub fn describe(&self) -> String {
        let pts: Vec<String> = self
            .points
            .iter()
            .map(|e| format!("({},{},{})", e[0], e[1], e[2]))
            .collect();
        format!("[{}]", pts.join(", "))
    }
}

#[derive(Debug, Clone)]
pub struct NewtonBoundary {
    pub vars: VarSet,
    pub support: Vec<Exp>,
    pub faces: Vec<Face>,
}

impl NewtonBoundary {
    pub fn top_faces(&self) -> impl Iterator<Item = &Face> {
        let top = (self.vars.len() - 1) as u8;
        self.faces.iter().filter(move |f| f.dimension == top)
    }

    /// Support points lying on some compact face.
    pub fn boundary_points(&self) -> BTreeSet<Exp> {
        self.faces
            .iter()
            .flat_map(|f| f.points.iter().copied())
            .collect()
    }
}

/// Restrict to terms supported on the subspace of the given variables.
pub fn restrict(f: &Poly, vars: VarSet) -> Poly {
    let mut out = Poly::zero();
    for (e, c) in f.terms() {
        if (0..3).all(|i| vars.contains(i) || e[i] == 0) {
            out.insert_add(*e, c.clone());
        }
    }
    out
}

/// Complete set of compact faces of conv(support + positive orthant).
pub fn newton_boundary(f: &Poly, vars: VarSet) -> NewtonBoundary {
    let restricted = restrict(f, vars);
    let support: Vec<Exp> = restricted.support();
    assert!(
        !support.is_empty(),
        "newton_boundary requires a nonzero polynomial on the subspace"
    );
    let faces = match vars.len() {
        1 => faces_1d(&support, vars),
        2 => faces_2d(&support, vars),
        3 => faces_3d(&support),
        _ => unreachable!(),
    };
    NewtonBoundary { vars, support, faces }
}

fn faces_1d(support: &[Exp], vars: VarSet) -> Vec<Face> {
    let i = vars.iter().next().unwrap();
    let p = *support.iter().min_by_key(|e| e[i]).unwrap();
    let mut normal = [0i64; 3];
    normal[i] = 1;
    vec![Face {
        points: vec![p],
        vertices: vec![p],
        dimension: 0,
        normal,
        level: p[i] as i64,
    }]
}

fn argmin(support: &[Exp], w: &IV3) -> (Vec<Exp>, i128) {
    let mut best = i128::MAX;
    let mut pts = Vec::new();
    for e in support {
        let v = dot3(&to_iv(e), w);
        if v < best {
            best = v;
            pts.clear();
            pts.push(*e);
        } else if v == best {
            pts.push(*e);
        }
    }
    (pts, best)
}

fn affine_rank(pts: &[Exp]) -> u8 {
    if pts.len() <= 1 {
        return 0;
    }
    let base = to_iv(&pts[0]);
    let diffs: Vec<IV3> = pts[1..].iter().map(|p| sub3(&to_iv(p), &base)).collect();
    let d1 = match diffs.iter().find(|d| !is_zero3(d)) {
        None => return 0,
        Some(d) => *d,
    };
    for d in &diffs {
        if !is_zero3(&cross3(&d1, d)) {
            return 2;
        }
    }
    1
}

fn extreme_points_of_segment(pts: &[Exp]) -> Vec<Exp> {
    let base = to_iv(&pts[0]);
    let dir = pts
        .iter()
        .map(|p| sub3(&to_iv(p), &base))
        .find(|d| !is_zero3(d))
        .unwrap();
    let lo = pts
        .iter()
        .min_by_key(|p| dot3(&sub3(&to_iv(p), &base), &dir))
        .unwrap();
    let hi = pts
        .iter()
        .max_by_key(|p| dot3(&sub3(&to_iv(p), &base), &dir))
        .unwrap();
    let mut v = vec![*lo, *hi];
    v.sort();
    v.dedup();
    v
}

fn face_from_argmin(pts: Vec<Exp>, w: &IV3, level: i128) -> Face {
    let dim = affine_rank(&pts);
    let vertices = match dim {
        0 => pts.clone(),
        1 => extreme_points_of_segment(&pts),
        2 => polygon_hull_vertices(&pts, w),
        _ => unreachable!(),
    };
    let normal = [w[0] as i64, w[1] as i64, w[2] as i64];
    let mut points = pts;
    points.sort();
    Face {
        points,
        vertices,
        dimension: dim,
        normal,
        level: level as i64,
    }
}

/// Cyclically ordered hull vertices of a planar point set with normal w.
fn polygon_hull_vertices(pts: &[Exp], w: &IV3) -> Vec<Exp> {
    // project out the coordinate with the largest |normal| component
    let drop = (0..3).max_by_key(|&i| w[i].abs()).unwrap();
    let keep: Vec<usize> = (0..3).filter(|&i| i != drop).collect();
    let mut proj: Vec<([i128; 2], Exp)> = pts
        .iter()
        .map(|e| ([e[keep[0]] as i128, e[keep[1]] as i128], *e))
        .collect();
    proj.sort();
    proj.dedup_by(|a, b| a.0 == b.0);
    let cross = |o: &[i128; 2], a: &[i128; 2], b: &[i128; 2]| -> i128 {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let n = proj.len();
    if n <= 2 {
        return proj.into_iter().map(|(_, e)| e).collect();
    }
    let mut hull: Vec<([i128; 2], Exp)> = Vec::new();
    for p in proj.iter() {
        while hull.len() >= 2
            && cross(&hull[hull.len() - 2].0, &hull[hull.len() - 1].0, &p.0) <= 0
        {
            hull.pop();
        }
        hull.push(*p);
    }
    let lower_len = hull.len() + 1;
    for p in proj.iter().rev().skip(1) {
        while hull.len() >= lower_len
            && cross(&hull[hull.len() - 2].0, &hull[hull.len() - 1].0, &p.0) <= 0
        {
            hull.pop();
        }
        hull.push(*p);
    }
    hull.pop();
    hull.into_iter().map(|(_, e)| e).collect()
}

fn faces_2d(support: &[Exp], vars: VarSet) -> Vec<Face> {
    let idx: Vec<usize> = vars.iter().collect();
    let (i, j) = (idx[0], idx[1]);
    let mut faces: BTreeMap<Vec<Exp>, Face> = BTreeMap::new();
    // edges
    for a in 0..support.len() {
        for b in a + 1..support.len() {
            let p = support[a];
            let q = support[b];
            let dx = q[i] as i128 - p[i] as i128;
            let dy = q[j] as i128 - p[j] as i128;
            if dx == 0 || dy == 0 || (dx > 0) == (dy > 0) {
                continue;
            }
            let g = gcd_i128(dx, dy);
            let mut w = [0i128; 3];
            w[i] = dy.abs() / g;
            w[j] = dx.abs() / g;
            let (pts, level) = argmin(support, &w);
            if pts.contains(&p) && pts.contains(&q) {
                let face = face_from_argmin(pts, &w, level);
                faces.entry(face.point_set_key()).or_insert(face);
            }
        }
    }
    // corner vertices via lexicographic minimization both ways
    let max_coord = support
        .iter()
        .map(|e| e[i].max(e[j]) as i128)
        .max()
        .unwrap();
    let big = max_coord + 1;
    for (wa, wb) in [(1, big), (big, 1)] {
        let mut w = [0i128; 3];
        w[i] = wa;
        w[j] = wb;
        let (pts, _) = argmin(support, &w);
        assert_eq!(pts.len(), 1, "lexicographic argmin must be a single point");
        let p = pts[0];
        let vf = Face {
            points: vec![p],
            vertices: vec![p],
            dimension: 0,
            normal: [w[0] as i64, w[1] as i64, w[2] as i64],
            level: dot3(&to_iv(&p), &w) as i64,
        };
        faces.entry(vf.point_set_key()).or_insert(vf);
    }
    // endpoints of edges as vertex faces
    let edge_faces: Vec<Face> = faces.values().filter(|f| f.dimension == 1).cloned().collect();
    for f in edge_faces {
        for v in &f.vertices {
            let vf = Face {
                points: vec![*v],
                vertices: vec![*v],
                dimension: 0,
                normal: f.normal,
                level: f.level,
            };
            faces.entry(vf.point_set_key()).or_insert(vf);
        }
    }
    faces.into_values().collect()
}

fn faces_3d(support: &[Exp]) -> Vec<Face> {
    let pts: Vec<IV3> = support.iter().map(to_iv).collect();
    let n = pts.len();
    let mut faces: BTreeMap<Vec<Exp>, Face> = BTreeMap::new();

    // 2-faces from cross-product candidates
    let mut candidates: BTreeSet<IV3> = BTreeSet::new();
    for base in 0..n {
        for a in 0..n {
            if a == base {
                continue;
            }
            let da = sub3(&pts[a], &pts[base]);
            for b in a + 1..n {
                if b == base {
                    continue;
                }
                let db = sub3(&pts[b], &pts[base]);
                let c = cross3(&da, &db);
                if is_zero3(&c) {
                    continue;
                }
                let c = primitivize(&c);
                if c.iter().all(|&v| v > 0) {
                    candidates.insert(c);
                } else if c.iter().all(|&v| v < 0) {
                    candidates.insert([-c[0], -c[1], -c[2]]);
                }
            }
        }
    }
    for w in &candidates {
        let (fp, level) = argmin(support, w);
        if affine_rank(&fp) == 2 {
            let face = face_from_argmin(fp, w, level);
            faces.entry(face.point_set_key()).or_insert(face);
        }
    }

    // polygon edges and vertices of the found 2-faces
    let two_faces: Vec<Face> = faces.values().filter(|f| f.dimension == 2).cloned().collect();
    let mut covered_pairs: BTreeSet<(Exp, Exp)> = BTreeSet::new();
    for f in &two_faces {
        for a in &f.points {
            for b in &f.points {
                if a < b {
                    covered_pairs.insert((*a, *b));
                }
            }
        }
        let hull = &f.vertices;
        let k = hull.len();
        for t in 0..k {
            if k == 2 && t == 1 {
                break;
            }
            let a = hull[t];
            let b = hull[(t + 1) % k];
            let ai = to_iv(&a);
            let dir = sub3(&to_iv(&b), &ai);
            let mut seg: Vec<Exp> = f
                .points
                .iter()
                .filter(|p| {
                    let d = sub3(&to_iv(p), &ai);
                    is_zero3(&cross3(&dir, &d)) && {
                        let t = dot3(&d, &dir);
                        t >= 0 && t <= dot3(&dir, &dir)
                    }
                })
                .copied()
                .collect();
            seg.sort();
            let ef = Face {
                points: seg,
                vertices: {
                    let mut v = vec![a, b];
                    v.sort();
                    v
                },
                dimension: 1,
                normal: f.normal,
                level: f.level,
            };
            faces.entry(ef.point_set_key()).or_insert(ef);
            for v in [a, b] {
                let vf = Face {
                    points: vec![v],
                    vertices: vec![v],
                    dimension: 0,
                    normal: f.normal,
                    level: f.level,
                };
                faces.entry(vf.point_set_key()).or_insert(vf);
            }
        }
    }

    // standalone edges: pairs not lying in a common 2-face
    for a in 0..n {
        for b in a + 1..n {
            let key = (support[a].min(support[b]), support[a].max(support[b]));
            if covered_pairs.contains(&key) {
                continue;
            }
            if let Some(w) = positive_equalizer(&pts, a, b) {
                let (fp, level) = argmin(support, &w);
                debug_assert!(affine_rank(&fp) <= 1);
                let face = face_from_argmin(fp, &w, level);
                for v in face.vertices.clone() {
                    let vf = Face {
                        points: vec![v],
                        vertices: vec![v],
                        dimension: 0,
                        normal: face.normal,
                        level: face.level,
                    };
                    faces.entry(vf.point_set_key()).or_insert(vf);
                }
                faces.entry(face.point_set_key()).or_insert(face);
            }
        }
    }

    // standalone vertices: points on no recorded face
    let on_faces: BTreeSet<Exp> = faces
        .values()
        .flat_map(|f| f.points.iter().copied())
        .collect();
    for (k, e) in support.iter().enumerate() {
        if on_faces.contains(e) {
            continue;
        }
        if let Some(w) = positive_supporter(&pts, k) {
            let (fp, level) = argmin(support, &w);
            let face = face_from_argmin(fp, &w, level);
            faces.entry(face.point_set_key()).or_insert(face);
        }
    }

    faces.into_values().collect()
}

/// Saturated integer kernel basis of a nonzero vector.
fn kernel_basis(d: &IV3) -> [IV3; 2] {
    let d = primitivize(d);
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

type Q = BigRational;

fn q_from(v: i128) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Strictly positive integer covector equalizing support points a and b and
/// minimal on them, if one exists.
fn positive_equalizer(pts: &[IV3], a: usize, b: usize) -> Option<IV3> {
    let d = sub3(&pts[a], &pts[b]);
    if is_zero3(&d) {
        return None;
    }
    let [b1, b2] = kernel_basis(&d);
    let mut cons: Vec<(Q, Q, Q)> = Vec::new(); // cx * alpha + cy * beta >= c0
    for i in 0..3 {
        cons.push((q_from(b1[i]), q_from(b2[i]), q_from(1)));
    }
    for (k, p) in pts.iter().enumerate() {
        if k == a || k == b {
            continue;
        }
        let diff = sub3(p, &pts[a]);
        cons.push((q_from(dot3(&b1, &diff)), q_from(dot3(&b2, &diff)), q_from(0)));
    }
    let (alpha, beta) = feasible_2d(&cons)?;
    // clear denominators to an integer covector
    let den_a = alpha.denom().clone();
    let den_b = beta.denom().clone();
    let den = &den_a * &den_b;
    let ai = alpha.numer() * (&den / &den_a);
    let bi = beta.numer() * (&den / &den_b);
    let ai = i128::try_from(&ai).ok()?;
    let bi = i128::try_from(&bi).ok()?;
    let w = [
        ai * b1[0] + bi * b2[0],
        ai * b1[1] + bi * b2[1],
        ai * b1[2] + bi * b2[2],
    ];
    debug_assert!(w.iter().all(|&v| v > 0));
    Some(primitivize(&w))
}

/// Strictly positive covector with p in its argmin, if one exists.
fn positive_supporter(pts: &[IV3], k: usize) -> Option<IV3> {
    let mut cons: Vec<([i128; 3], i128)> = Vec::new();
    for i in 0..3 {
        let mut row = [0i128; 3];
        row[i] = 1;
        cons.push((row, 1));
    }
    for (j, p) in pts.iter().enumerate() {
        if j == k {
            continue;
        }
        let d = sub3(p, &pts[k]);
        cons.push(([d[0], d[1], d[2]], 0));
    }
    let m = cons.len();
    for a in 0..m {
        for b in a + 1..m {
            for c in b + 1..m {
                let rows = [cons[a].0, cons[b].0, cons[c].0];
                let rhs = [cons[a].1, cons[b].1, cons[c].1];
                let det = det3(&rows[0], &rows[1], &rows[2]);
                if det == 0 {
                    continue;
                }
                let mut num = [0i128; 3];
                for i in 0..3 {
                    let mut cols = rows;
                    for r in 0..3 {
                        cols[r][i] = rhs[r];
                    }
                    num[i] = det3(&cols[0], &cols[1], &cols[2]);
                }
                let ok = cons.iter().all(|(row, c0)| {
                    let lhs = row[0] * num[0] + row[1] * num[1] + row[2] * num[2];
                    if det > 0 {
                        lhs >= c0 * det
                    } else {
                        lhs <= c0 * det
                    }
                });
                if ok {
                    let s = det.signum();
                    let w = primitivize(&[num[0] * s, num[1] * s, num[2] * s]);
                    if w.iter().all(|&v| v > 0) {
                        return Some(w);
                    }
                }
            }
        }
    }
    None
}

fn det3(a: &[i128; 3], b: &[i128; 3], c: &[i128; 3]) -> i128 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

/// 2D feasibility for closed half-plane systems; returns a feasible point.
fn feasible_2d(cons: &[(Q, Q, Q)]) -> Option<(Q, Q)> {
    let zero = Q::zero();
    let mut base: Option<(Q, Q)> = None;
    let mut all_parallel = true;
    for (cx, cy, _) in cons {
        if cx.is_zero() && cy.is_zero() {
            continue;
        }
        match &base {
            None => base = Some((cx.clone(), cy.clone())),
            Some((bx, by)) => {
                if (cx * by.clone() - cy * bx.clone()) != zero {
                    all_parallel = false;
                    break;
                }
            }
        }
    }
    if all_parallel {
        let (bx, by) = base?;
        // param along the common normal: w = t (bx, by)
        let mut lo: Option<Q> = None;
        let mut hi: Option<Q> = None;
        for (cx, cy, c0) in cons {
            let coef = cx * bx.clone() + cy * by.clone();
            if coef.is_zero() {
                if c0 > &zero {
                    return None;
                }
                continue;
            }
            let bound = c0 / coef.clone();
            if coef > zero {
                lo = Some(match lo {
                    None => bound,
                    Some(l) => l.max(bound),
                });
            } else {
                hi = Some(match hi {
                    None => bound,
                    Some(h) => h.min(bound),
                });
            }
        }
        let t = match (lo, hi) {
            (Some(l), Some(h)) => {
                if l > h {
                    return None;
                }
                l
            }
            (Some(l), None) => l,
            (None, Some(h)) => h,
            (None, None) => Q::zero(),
        };
        return Some((t.clone() * bx, t * by));
    }
    for i in 0..cons.len() {
        for j in i + 1..cons.len() {
            let (ax, ay, a0) = &cons[i];
            let (bx, by, b0) = &cons[j];
            let det = ax * by.clone() - ay * bx.clone();
            if det.is_zero() {
                continue;
            }
            let x = (a0 * by.clone() - ay * b0.clone()) / det.clone();
            let y = (ax * b0.clone() - a0 * bx.clone()) / det.clone();
            if cons
                .iter()
                .all(|(cx, cy, c0)| cx * x.clone() + cy * y.clone() >= *c0)
            {
                return Some((x, y));
            }
        }
    }
    None
}

/// Sum of terms of f whose exponents lie on some compact face.
pub fn newton_principal_part(f: &Poly, vars: VarSet) -> Poly {
    assert!(!f.is_zero());
    let nb = newton_boundary(f, vars);
    let on = nb.boundary_points();
    let mut out = Poly::zero();
    for (e, c) in f.terms() {
        if on.contains(e) {
            out.insert_add(*e, c.clone());
        }
    }
    out
}

/// Triangulation strategy for 2-face volume sums. Both must agree; the
/// duplication is a deliberate cross-check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triangulation {
    FanLowestLex,
    FanCentroidNearest,
}

impl Triangulation {
    pub fn name(&self) -> &'static str {
        match self {
            Triangulation::FanLowestLex => "fan-lowest-lex",
            Triangulation::FanCentroidNearest => "fan-centroid-nearest",
        }
    }
}

/// Newton number data: the alternating sum and the per-subset volume terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonNumber {
    pub value: i64,
    /// mask -> |I|! * Vol_{|I|}(cone over the Newton boundary of f^I)
    pub volume_terms: BTreeMap<u8, i64>,
}

/// Newton number over the given variables (2 or 3), Kouchnirenko style.
/// The region under each subset boundary is the cone over that boundary,
/// which is compact for every nonzero germ.
pub fn newton_number(f: &Poly, vars: VarSet) -> Result<NewtonNumber> {
    newton_number_with(f, vars, Triangulation::FanLowestLex)
}

pub fn newton_number_with(
    f: &Poly,
    vars: VarSet,
    strategy: Triangulation,
) -> Result<NewtonNumber> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let nv = vars.len();
    assert!(nv == 2 || nv == 3);
    let mut volume_terms = BTreeMap::new();
    volume_terms.insert(0u8, 1); // term for the empty subset
    let mut value: i128 = if nv.is_multiple_of(2) { 1 } else { -1 }; // its signed value
    for sub in vars.subsets() {
        let fi = restrict(f, sub);
        let term: i128 = if fi.is_zero() {
            0
        } else {
            scaled_cone_volume(&newton_boundary(&fi, sub), strategy)
        };
        let sign = if (nv - sub.len()).is_multiple_of(2) { 1 } else { -1 };
        value += sign * term;
        volume_terms.insert(sub.mask(), i64::try_from(term).expect("volume fits i64"));
    }
    Ok(NewtonNumber {
        value: i64::try_from(value).expect("newton number fits i64"),
        volume_terms,
    })
}

/// |I|! times the |I|-dimensional volume of the cone over the boundary.
fn scaled_cone_volume(nb: &NewtonBoundary, strategy: Triangulation) -> i128 {
    match nb.vars.len() {
        1 => {
            let i = nb.vars.iter().next().unwrap();
            nb.support.iter().map(|e| e[i] as i128).min().unwrap()
        }
        2 => {
            let idx: Vec<usize> = nb.vars.iter().collect();
            let mut total = 0i128;
            for f in nb.top_faces() {
                let p = to_iv(&f.vertices[0]);
                let q = to_iv(&f.vertices[1]);
                total += (p[idx[0]] * q[idx[1]] - p[idx[1]] * q[idx[0]]).abs();
            }
            total
        }
        3 => {
            let mut total = 0i128;
            for f in nb.top_faces() {
                total += fan_volume(&f.vertices, strategy);
            }
            total
        }
        _ => unreachable!(),
    }
}

/// 6 * volume of the cone with apex 0 over a convex polygon (cyclic hull
/// vertices), via a triangle fan from the strategy's base vertex.
fn fan_volume(hull: &[Exp], strategy: Triangulation) -> i128 {
    let k = hull.len();
    debug_assert!(k >= 3);
    let base_idx = match strategy {
        Triangulation::FanLowestLex => hull
            .iter()
            .enumerate()
            .min_by_key(|(_, e)| **e)
            .map(|(i, _)| i)
            .unwrap(),
        Triangulation::FanCentroidNearest => {
            let n = k as i128;
            let sx: i128 = hull.iter().map(|e| e[0] as i128).sum();
            let sy: i128 = hull.iter().map(|e| e[1] as i128).sum();
            let sz: i128 = hull.iter().map(|e| e[2] as i128).sum();
            hull.iter()
                .enumerate()
                .min_by_key(|(_, e)| {
                    let dx = n * e[0] as i128 - sx;
                    let dy = n * e[1] as i128 - sy;
                    let dz = n * e[2] as i128 - sz;
                    (dx * dx + dy * dy + dz * dz, **e)
                })
                .map(|(i, _)| i)
                .unwrap()
        }
    };
    let base = to_iv(&hull[base_idx]);
    let mut total = 0i128;
    for t in 0..k {
        let a = (base_idx + t) % k;
        let b = (base_idx + t + 1) % k;
        if a == base_idx || b == base_idx {
            continue;
        }
        let pa = to_iv(&hull[a]);
        let pb = to_iv(&hull[b]);
        total += det3(&base, &pa, &pb).abs();
    }
    total
}

/// Lattice-normalized (dim)-volume of a top face, used by the zeta engine:
/// dim 0 -> 1, dim 1 -> lattice length, dim 2 -> normalized area against the
/// primitive normal.
pub fn face_lattice_volume(face: &Face, vars: VarSet) -> i128 {
    match face.dimension {
        0 => 1,
        1 => {
            let p = to_iv(&face.vertices[0]);
            let q = to_iv(&face.vertices[1]);
            let d = sub3(&q, &p);
            gcd_i128(gcd_i128(d[0], d[1]), d[2])
        }
        2 => {
            debug_assert_eq!(vars.len(), 3);
            let n = [
                face.normal[0] as i128,
                face.normal[1] as i128,
                face.normal[2] as i128,
            ];
            let nn = dot3(&n, &n);
            let base = to_iv(&face.vertices[0]);
            let mut total = 0i128;
            for t in 1..face.vertices.len() - 1 {
                let u = sub3(&to_iv(&face.vertices[t]), &base);
                let v = sub3(&to_iv(&face.vertices[t + 1]), &base);
                let c = cross3(&u, &v);
                let lambda_num = dot3(&c, &n);
                debug_assert_eq!(lambda_num % nn, 0, "cross product parallel to normal");
                total += (lambda_num / nn).abs();
            }
            total
        }
        _ => unreachable!(),
    }
}
