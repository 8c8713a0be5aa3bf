//! Truncated power series: a polynomial together with a truncation order N.
//!
//! All stored terms have total degree < N. Arithmetic results carry the
//! minimum of the operand truncation orders, so downstream consumers can
//! detect insufficient precision.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{total_degree, Poly, Rat};

pub const DEFAULT_TRUNCATION: u32 = 64;

#[derive(Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    poly: Poly,
    order: u32,
}

impl TruncatedSeries {
    pub fn new(poly: Poly, order: u32) -> Self {
        assert!(order > 0, "truncation order must be positive");
        TruncatedSeries { poly: poly.truncated(order), order }
    }

    pub fn zero(order: u32) -> Self {
        TruncatedSeries::new(Poly::zero(), order)
    }

    pub fn var(i: usize, order: u32) -> Self {
        TruncatedSeries::new(Poly::var(i), order)
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn into_poly(self) -> Poly {
        self.poly
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn truncate_to(&self, order: u32) -> TruncatedSeries {
        TruncatedSeries::new(self.poly.clone(), order.min(self.order))
    }

    pub fn scale(&self, c: &Rat) -> TruncatedSeries {
        TruncatedSeries { poly: self.poly.scale(c), order: self.order }
    }

    fn pow_trunc(&self, n: u32, order: u32) -> TruncatedSeries {
        let mut result = TruncatedSeries::new(Poly::one(), order);
        let mut base = self.truncate_to(order);
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

    /// Composition with one series per variable. Each image must kill the
    /// constant term, otherwise truncation would be unsound.
    pub fn substitute(&self, images: &[TruncatedSeries; 3]) -> Result<TruncatedSeries> {
        let mut order = self.order;
        for img in images {
            order = order.min(img.order);
            if !img.poly.coeff(&[0, 0, 0]).is_zero() {
                return Err(Error::TruncationMismatch {
                    msg: "substituted series must have zero constant term".into(),
                });
            }
        }
        substitute_poly(&self.poly, images, order)
    }
}

/// Compose an exact polynomial with series images, producing a series of the
/// given order. Images must have zero constant term.
pub fn substitute_poly(
    f: &Poly,
    images: &[TruncatedSeries; 3],
    order: u32,
) -> Result<TruncatedSeries> {
    let mut order = order;
    for img in images {
        order = order.min(img.order);
        if !img.poly.coeff(&[0, 0, 0]).is_zero() {
            return Err(Error::TruncationMismatch {
                msg: "substituted series must have zero constant term".into(),
            });
        }
    }
    let mut out = TruncatedSeries::zero(order);
    let mut pow_cache: [std::collections::BTreeMap<u16, TruncatedSeries>; 3] = Default::default();
    for (e, c) in f.terms() {
        // Terms of total degree >= order cannot contribute below the cut.
        if total_degree(e) >= order {
            continue;
        }
        let mut t = TruncatedSeries::new(Poly::constant(c.clone()), order);
        for i in 0..3 {
            if e[i] == 0 {
                continue;
            }
            let p = pow_cache[i]
                .entry(e[i])
                .or_insert_with(|| images[i].pow_trunc(e[i] as u32, order))
                .clone();
            t = &t * &p;
        }
        out = &out + &t;
    }
    Ok(out)
}

/// Identity substitution triple at the given order.
pub fn identity_images(order: u32) -> [TruncatedSeries; 3] {
    [
        TruncatedSeries::var(0, order),
        TruncatedSeries::var(1, order),
        TruncatedSeries::var(2, order),
    ]
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(rhs.order);
        TruncatedSeries::new(&self.poly + &rhs.poly, order)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(rhs.order);
        TruncatedSeries::new(&self.poly - &rhs.poly, order)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { poly: -&self.poly, order: self.order }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order.min(rhs.order);
        TruncatedSeries::new(&self.poly * &rhs.poly, order)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.poly, self.order)
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
