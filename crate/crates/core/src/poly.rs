//! Sparse multivariate polynomials in up to three variables over Q.
//!
//! Exponent vectors are `[u16; 3]`; coefficients are arbitrary-precision
//! rationals. No zero coefficients are ever stored, and the term map is
//! keyed in ascending lexicographic order, which fixes the canonical
//! printed form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;
pub type Exp = [u16; 3];

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Rational n/d.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn total_degree(e: &Exp) -> u32 {
    e[0] as u32 + e[1] as u32 + e[2] as u32
}

fn add_exp(a: &Exp, b: &Exp) -> Exp {
    let mut r = [0u16; 3];
    for i in 0..3 {
        let s = a[i] as u32 + b[i] as u32;
        assert!(s <= u16::MAX as u32, "exponent overflow in polynomial arithmetic");
        r[i] = s as u16;
    }
    r
}

#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Exp, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = Poly::zero();
        p.insert_add([0, 0, 0], c);
        p
    }

    pub fn monomial(e: Exp, c: Rat) -> Self {
        let mut p = Poly::zero();
        p.insert_add(e, c);
        p
    }

    /// The variable with index `i` (0, 1, or 2).
    pub fn var(i: usize) -> Self {
        let mut e = [0u16; 3];
        e[i] = 1;
        Poly::monomial(e, Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn support(&self) -> Vec<Exp> {
        self.terms.keys().copied().collect()
    }

    pub fn coeff(&self, e: &Exp) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn insert_add(&mut self, e: Exp, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    /// Smallest total degree among terms (the order of the germ).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(total_degree).min()
    }

    /// Largest total degree among terms.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(total_degree).max()
    }

    pub fn is_homogeneous(&self) -> Option<u32> {
        let d = self.order()?;
        if self.degree() == Some(d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn homogeneous_part(&self, k: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) == k)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = *e;
            ne[i] -= 1;
            out.insert_add(ne, c * Rat::from_integer((e[i] as i64).into()));
        }
        out
    }

    pub fn eval(&self, x: &[Rat; 3]) -> Rat {
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for i in 0..3 {
                for _ in 0..e[i] {
                    t *= &x[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Smallest exponent of variable `i` over the support; None for zero poly.
    pub fn var_min_exp(&self, i: usize) -> Option<u16> {
        self.terms.keys().map(|e| e[i]).min()
    }

    pub fn var_max_exp(&self, i: usize) -> Option<u16> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Divide by x_i^k; None if not exactly divisible.
    pub fn div_var_power(&self, i: usize, k: u16) -> Option<Poly> {
        if self.var_min_exp(i).unwrap_or(0) < k && !self.is_zero() {
            return None;
        }
        Some(Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut ne = *e;
                    ne[i] -= k;
                    (ne, c.clone())
                })
                .collect(),
        })
    }

    pub fn mul_var_power(&self, i: usize, k: u16) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut ne = *e;
                    let s = ne[i] as u32 + k as u32;
                    assert!(s <= u16::MAX as u32, "exponent overflow");
                    ne[i] = s as u16;
                    (ne, c.clone())
                })
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact composition: each variable is replaced by a polynomial.
    pub fn substitute(&self, images: &[Poly; 3]) -> Poly {
        let mut pow_cache: [BTreeMap<u16, Poly>; 3] = Default::default();
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for i in 0..3 {
                if e[i] == 0 {
                    continue;
                }
                let p = pow_cache[i]
                    .entry(e[i])
                    .or_insert_with(|| images[i].pow(e[i] as u32))
                    .clone();
                t = &t * &p;
            }
            out = &out + &t;
        }
        out
    }

    /// Translation x_i <- x_i + c_i (exact).
    pub fn shift(&self, offset: &[Rat; 3]) -> Poly {
        let images = [
            &Poly::var(0) + &Poly::constant(offset[0].clone()),
            &Poly::var(1) + &Poly::constant(offset[1].clone()),
            &Poly::var(2) + &Poly::constant(offset[2].clone()),
        ];
        self.substitute(&images)
    }

    /// Keep only terms with total degree < order.
    pub fn truncated(&self, order: u32) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| total_degree(e) < order)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Render using the given variable names.
    pub fn to_string_with(&self, names: [&str; 3]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut parts: Vec<String> = Vec::new();
            let is_const = *e == [0, 0, 0];
            if !abs.is_one() || is_const {
                parts.push(abs.to_string());
            }
            for i in 0..3 {
                match e[i] {
                    0 => {}
                    1 => parts.push(names[i].to_string()),
                    k => parts.push(format!("{}^{}", names[i], k)),
                }
            }
            out.push_str(&parts.join("*"));
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with(["z1", "z2", "z3"]))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(*e, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(*e, -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.insert_add(add_exp(ea, eb), ca * cb);
            }
        }
        out
    }
}

/// Homogeneous decomposition f = sum of f_{d+j}, d the order of f.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousDecomposition {
    pub order: u32,
    pub parts: BTreeMap<u32, Poly>,
}

impl HomogeneousDecomposition {
    /// The lowest part f_d.
    pub fn initial(&self) -> &Poly {
        &self.parts[&self.order]
    }

    pub fn part(&self, k: u32) -> Poly {
        self.parts.get(&k).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn reconstruct(&self) -> Poly {
        let mut out = Poly::zero();
        for p in self.parts.values() {
            out = &out + p;
        }
        out
    }
}

pub fn homogeneous_decompose(f: &Poly) -> Result<HomogeneousDecomposition> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !f.coeff(&[0, 0, 0]).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let order = f.order().unwrap();
    let mut parts = BTreeMap::new();
    for (e, c) in f.terms() {
        let d = total_degree(e);
        parts
            .entry(d)
            .or_insert_with(Poly::zero)
            .insert_add(*e, c.clone());
    }
    Ok(HomogeneousDecomposition { order, parts })
}

/// True iff each axis monomial z_i^deg appears with nonzero coefficient.
pub fn is_convenient(fd: &Poly) -> bool {
    match fd.is_homogeneous() {
        None => false,
        Some(d) => {
            let d = d as u16;
            (0..3).all(|i| {
                let mut e = [0u16; 3];
                e[i] = d;
                !fd.coeff(&e).is_zero()
            })
        }
    }
}

/// Generic convenience for possibly non-homogeneous germs: every axis carries
/// a pure power.
pub fn is_convenient_germ(f: &Poly) -> bool {
    (0..3).all(|i| {
        f.terms().any(|(e, _)| {
            e[i] > 0 && (0..3).all(|j| j == i || e[j] == 0)
        })
    })
}
