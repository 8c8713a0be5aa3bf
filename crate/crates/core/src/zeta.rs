//! Monodromy zeta-functions as finite formal products prod (1-t^d)^nu,
//! computed by the Varchenko face formula for Newton non-degenerate germs.
//!
//! The formula, in the convention where a one-variable power x^a has zeta
//! (1-t^a)^{-1} and the 3-variable Morse point has degree -2: for every
//! nonempty subset I of the variables with f^I not identically zero, every
//! top-dimensional compact face s of the Newton boundary of f^I contributes
//! the factor (1 - t^{m(s)})^{(-1)^{|I|} v(s)}, where m(s) is the level of
//! the primitive positive supporting covector on the subspace and v(s) is
//! the lattice-normalized volume of s (1 for vertices, lattice length for
//! edges, normalized area for 2-faces).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::newton::{face_lattice_volume, newton_boundary, restrict, VarSet};
use crate::nondeg::{is_nondegenerate, Nondegeneracy};
use crate::poly::Poly;

/// Finite product prod_i (1 - t^{d_i})^{nu_i} with d_i strictly increasing
/// and nu_i nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ZetaFunction {
    factors: BTreeMap<u64, i64>,
}

/// One factor of a zeta function, addressed by its level (1 = smallest d).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ZetaFactor {
    pub level: usize,
    pub d: u64,
    pub nu: i64,
}

impl ZetaFunction {
    pub fn one() -> Self {
        ZetaFunction::default()
    }

    pub fn factor(d: u64, nu: i64) -> Self {
        let mut z = ZetaFunction::default();
        z.push(d, nu);
        z
    }

    pub fn push(&mut self, d: u64, nu: i64) {
        if nu == 0 {
            return;
        }
        assert!(d > 0, "zeta exponents are positive");
        let e = self.factors.entry(d).or_insert(0);
        *e += nu;
        if *e == 0 {
            self.factors.remove(&d);
        }
    }

    pub fn mul(&self, rhs: &ZetaFunction) -> ZetaFunction {
        let mut out = self.clone();
        for (d, nu) in &rhs.factors {
            out.push(*d, *nu);
        }
        out
    }

    pub fn pow(&self, k: i64) -> ZetaFunction {
        let mut out = ZetaFunction::default();
        for (d, nu) in &self.factors {
            out.push(*d, nu * k);
        }
        out
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (u64, i64)> + '_ {
        self.factors.iter().map(|(d, n)| (*d, *n))
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    /// Degree: sum of d_i * nu_i.
    pub fn degree(&self) -> i64 {
        self.factors.iter().map(|(d, n)| *d as i64 * n).sum()
    }

    /// The l-th zeta-multiplicity factor (l = 1 is the smallest exponent).
    pub fn multiplicity_factor(&self, level: usize) -> Result<ZetaFactor> {
        if level == 0 || level > self.factors.len() {
            return Err(Error::NoSuchFactor { level });
        }
        let (d, nu) = self.factors.iter().nth(level - 1).unwrap();
        Ok(ZetaFactor { level, d: *d, nu: *nu })
    }

    /// Serialize as sorted [{d, nu}] pairs.
    pub fn to_pairs(&self) -> Vec<(u64, i64)> {
        self.factors.iter().map(|(d, n)| (*d, *n)).collect()
    }
}

impl fmt::Display for ZetaFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(d, nu)| format!("(1-t^{})^({})", d, nu))
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Varchenko formula over the given variables. Requires non-degeneracy.
pub fn varchenko_zeta(f: &Poly, vars: VarSet) -> Result<ZetaFunction> {
    match is_nondegenerate(f, vars)? {
        Nondegeneracy::NonDegenerate => {}
        Nondegeneracy::Degenerate { face } => {
            return Err(Error::DegenerateGerm { face: face.describe() })
        }
    }
    varchenko_zeta_unchecked(f, vars)
}

/// The face-product formula without the non-degeneracy precondition check.
pub fn varchenko_zeta_unchecked(f: &Poly, vars: VarSet) -> Result<ZetaFunction> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut zeta = ZetaFunction::one();
    for sub in vars.subsets() {
        let fi = restrict(f, sub);
        if fi.is_zero() {
            continue;
        }
        let sign = if sub.len() % 2 == 0 { 1 } else { -1 };
        let nb = newton_boundary(&fi, sub);
        for face in nb.top_faces() {
            let vol = face_lattice_volume(face, sub);
            let m = u64::try_from(face.level).expect("positive level");
            zeta.push(m, sign * i64::try_from(vol).expect("volume fits i64"));
        }
    }
    Ok(zeta)
}

/// Global zeta from the blow-up pipeline: (1-t^d)^{-d^2+3d-3+mu} times the
/// local contributions.
pub fn global_zeta(d: u32, mu_tot: i64, locals: &[ZetaFunction]) -> ZetaFunction {
    let d = d as i64;
    let exponent = -d * d + 3 * d - 3 + mu_tot;
    let mut out = ZetaFunction::one();
    if exponent != 0 {
        out.push(d as u64, exponent);
    }
    for l in locals {
        out = out.mul(l);
    }
    out
}
