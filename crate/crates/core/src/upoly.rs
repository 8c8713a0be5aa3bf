//! Dense univariate polynomials over Q: gcd, square-free part, rational
//! roots, and the integer factoring they require.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::Rat;

/// Coefficients in ascending degree order, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UPoly(pub Vec<Rat>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = UPoly(vec![c]);
        p.trim();
        p
    }

    pub fn one() -> Self {
        UPoly::constant(Rat::one())
    }

    pub fn x() -> Self {
        UPoly(vec![Rat::zero(), Rat::one()])
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = UPoly(coeffs);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.0.last(), Some(c) if c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn is_constant(&self) -> bool {
        self.0.len() <= 1
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.0.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn lc(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UPoly {
        if self.0.len() <= 1 {
            return UPoly::zero();
        }
        UPoly::from_coeffs(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    pub fn add(&self, rhs: &UPoly) -> UPoly {
        let n = self.0.len().max(rhs.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + rhs.coeff(i));
        }
        UPoly::from_coeffs(out)
    }

    pub fn sub(&self, rhs: &UPoly) -> UPoly {
        let n = self.0.len().max(rhs.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - rhs.coeff(i));
        }
        UPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c.clone()).collect())
    }

    pub fn mul(&self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rat) -> UPoly {
        if c.is_zero() {
            return UPoly::zero();
        }
        UPoly(self.0.iter().map(|v| v * c).collect())
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let lc = self.lc();
        self.scale(&(Rat::one() / lc))
    }

    /// Euclidean division; panics on zero divisor.
    pub fn div_rem(&self, rhs: &UPoly) -> (UPoly, UPoly) {
        assert!(!rhs.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let dd = rhs.degree().unwrap();
        let lc = rhs.lc();
        if rem.degree().is_none_or(|d| d < dd) {
            return (UPoly::zero(), rem);
        }
        let mut q = vec![Rat::zero(); rem.0.len() - dd];
        while let Some(d) = rem.degree() {
            if d < dd {
                break;
            }
            let f = rem.lc() / lc.clone();
            q[d - dd] = f.clone();
            for i in 0..=dd {
                let c = rem.coeff(i + d - dd) - rhs.coeff(i) * &f;
                if i + d - dd < rem.0.len() {
                    rem.0[i + d - dd] = c;
                }
            }
            rem.trim();
        }
        (UPoly::from_coeffs(q), rem)
    }

    /// Exact division; None when not divisible.
    pub fn exact_div(&self, rhs: &UPoly) -> Option<UPoly> {
        let (q, r) = self.div_rem(rhs);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd via the Euclidean algorithm.
    pub fn gcd(&self, rhs: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    pub fn squarefree_part(&self) -> UPoly {
        if self.is_constant() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.exact_div(&g).expect("gcd divides").monic()
    }

    /// Strip the largest power of x dividing the polynomial; returns
    /// (stripped, power).
    pub fn strip_x_power(&self) -> (UPoly, usize) {
        if self.is_zero() {
            return (UPoly::zero(), 0);
        }
        let k = self.0.iter().take_while(|c| c.is_zero()).count();
        (UPoly::from_coeffs(self.0[k..].to_vec()), k)
    }

    /// Clear denominators and content: primitive integer coefficients with
    /// positive leading coefficient.
    pub fn primitive_int(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut den = BigInt::one();
        for c in &self.0 {
            den = den.lcm(c.denom());
        }
        let mut ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut content = BigInt::zero();
        for v in &ints {
            content = content.gcd(v);
        }
        if !content.is_zero() {
            for v in ints.iter_mut() {
                *v = &*v / &content;
            }
        }
        if ints.last().is_some_and(|v| v.is_negative()) {
            for v in ints.iter_mut() {
                *v = -v.clone();
            }
        }
        ints
    }

    /// All rational roots with multiplicity stripped; returns the roots and
    /// the remaining factor after deflating them (and any power of x).
    pub fn rational_roots(&self) -> (Vec<Rat>, UPoly) {
        if self.is_constant() {
            return (Vec::new(), self.clone());
        }
        let (mut p, k) = self.strip_x_power();
        let mut roots = Vec::new();
        if k > 0 {
            roots.push(Rat::zero());
        }
        loop {
            if p.is_constant() {
                break;
            }
            let ints = p.primitive_int();
            let a0 = ints[0].magnitude().clone();
            let an = ints.last().unwrap().magnitude().clone();
            let mut found = None;
            'outer: for num in divisors(&a0) {
                for den in divisors(&an) {
                    for sign in [1i64, -1] {
                        let cand = Rat::new(
                            BigInt::from(sign) * BigInt::from(num.clone()),
                            BigInt::from(den.clone()),
                        );
                        if p.eval(&cand).is_zero() {
                            found = Some(cand);
                            break 'outer;
                        }
                    }
                }
            }
            match found {
                Some(r) => {
                    // deflate all copies of the root
                    let lin = UPoly::from_coeffs(vec![-r.clone(), Rat::one()]);
                    while let Some(q) = p.exact_div(&lin) {
                        roots.push(r.clone());
                        p = q;
                        if p.is_constant() {
                            break;
                        }
                    }
                }
                None => break,
            }
        }
        roots.sort();
        (roots, p)
    }
}

/// All positive divisors of n (n > 0).
pub fn divisors(n: &BigUint) -> Vec<BigUint> {
    assert!(!n.is_zero());
    let fac = factorize(n.clone());
    let mut divs = vec![BigUint::one()];
    for (p, e) in fac {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        let mut pe = BigUint::one();
        for _ in 0..=e {
            for d in &divs {
                next.push(d * &pe);
            }
            pe *= &p;
        }
        divs = next;
    }
    divs.sort();
    divs
}

/// Prime factorization by trial division plus Pollard-Brent rho.
pub fn factorize(mut n: BigUint) -> Vec<(BigUint, u32)> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    if n <= BigUint::one() {
        return out;
    }
    let push = |p: BigUint, out: &mut Vec<(BigUint, u32)>| {
        if let Some(last) = out.iter_mut().find(|(q, _)| *q == p) {
            last.1 += 1;
        } else {
            out.push((p, 1));
        }
    };
    for small in 2u64..=997 {
        let sp = BigUint::from(small);
        if &sp * &sp > n {
            break;
        }
        while (&n % &sp).is_zero() {
            n /= &sp;
            push(sp.clone(), &mut out);
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m <= BigUint::one() {
            continue;
        }
        if is_probable_prime(&m) {
            push(m, &mut out);
            continue;
        }
        let d = pollard_brent(&m);
        stack.push(&m / &d);
        stack.push(d);
    }
    out.sort();
    out
}

fn mod_pow(base: &BigUint, exp: &BigUint, m: &BigUint) -> BigUint {
    base.modpow(exp, m)
}

/// Miller-Rabin with fixed witnesses; deterministic below 3.3e24.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let bp = BigUint::from(p);
        if n == &bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let n1 = n - BigUint::one();
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = mod_pow(&BigUint::from(a), &d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint) -> BigUint {
    // n odd composite, no factor < 1000.
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if (n % &two).is_zero() {
        return two;
    }
    let mut c = BigUint::from(1u32);
    loop {
        let mut x = BigUint::from(2u32);
        let mut y = BigUint::from(2u32);
        let mut d = BigUint::one();
        let f = |v: &BigUint| (v * v + &c) % n;
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if !d.is_one() && &d != n {
            return d;
        }
        c += &one;
    }
}

/// Computations in Q\[t\]/(m) by dynamic evaluation: inversions either succeed
/// or split the modulus, and queries recurse over the factors.
pub mod quot {
    use super::UPoly;
    use crate::poly::Rat;
    use num_traits::One;

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum RootCheck {
        NoCommonRoot,
        CommonRoot,
        Indeterminate,
    }

    fn reduce(p: &UPoly, m: &UPoly) -> UPoly {
        let (_, r) = p.div_rem(m);
        r
    }

    enum Inv {
        Unit(UPoly),
        Split(UPoly),
        Zero,
    }

    /// Inverse of a mod m, or a nontrivial factor of m.
    fn invert(a: &UPoly, m: &UPoly) -> Inv {
        let a = reduce(a, m);
        if a.is_zero() {
            return Inv::Zero;
        }
        // extended Euclid on (m, a)
        let (mut r0, mut r1) = (m.clone(), a.clone());
        let (mut s0, mut s1) = (UPoly::zero(), UPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        if r0.is_constant() {
            let inv = s0.scale(&(Rat::one() / r0.lc()));
            Inv::Unit(reduce(&inv, m))
        } else {
            // r0 = gcd(a, m) is a nontrivial factor of m
            Inv::Split(r0.monic())
        }
    }

    /// Polynomials in x with coefficients in Q\[t\]/(m): Vec<UPoly>, index =
    /// power of x.
    type QP = Vec<UPoly>;

    fn qp_reduce(p: &[UPoly], m: &UPoly) -> QP {
        let mut out: QP = p.iter().map(|c| reduce(c, m)).collect();
        while matches!(out.last(), Some(c) if c.is_zero()) {
            out.pop();
        }
        out
    }

    /// Does the system have a common root x over some root t of m?
    /// With `torus_only`, the root x must be nonzero.
    pub fn system_common_root_mod(polys: &[QP], m: &UPoly, torus_only: bool) -> RootCheck {
        go(polys, &m.monic(), torus_only, 0)
    }

    const MAX_DEPTH: u32 = 64;

    fn go(polys: &[QP], m: &UPoly, torus_only: bool, depth: u32) -> RootCheck {
        if depth > MAX_DEPTH {
            return RootCheck::Indeterminate;
        }
        if m.is_constant() {
            return RootCheck::NoCommonRoot; // no roots t at all
        }
        let reduced: Vec<QP> = polys.iter().map(|p| qp_reduce(p, m)).collect();
        let live: Vec<&QP> = reduced.iter().filter(|p| !p.is_empty()).collect();
        if live.is_empty() {
            // every equation vanishes identically: any x works
            return RootCheck::CommonRoot;
        }
        // constants (degree 0 in x) must be zero divisors to allow roots
        for p in &live {
            if p.len() == 1 {
                match invert(&p[0], m) {
                    Inv::Unit(_) => return RootCheck::NoCommonRoot,
                    Inv::Zero => unreachable!("live polys are nonzero"),
                    Inv::Split(g) => {
                        let cof = m.exact_div(&g).expect("factor divides").monic();
                        // on g the constant may vanish; on cof it is a unit
                        let on_g = {
                            let rest: Vec<QP> = polys.to_vec();
                            go(&rest, &g, torus_only, depth + 1)
                        };
                        let on_cof = go_without_units(polys, &cof, torus_only, depth + 1);
                        return combine(on_g, on_cof);
                    }
                }
            }
        }
        // gcd chain of the positive-degree members
        let mut g: QP = live[0].clone();
        for p in live.iter().skip(1) {
            match qp_gcd(&g, p, m, depth) {
                Ok(h) => g = h,
                Err(split) => {
                    let cof = m.exact_div(&split).expect("factor divides").monic();
                    let a = go(polys, &split, torus_only, depth + 1);
                    let b = go(polys, &cof, torus_only, depth + 1);
                    return combine(a, b);
                }
            }
            if g.is_empty() {
                return RootCheck::CommonRoot; // everything shared so far vanishes
            }
        }
        if g.len() == 1 {
            return RootCheck::NoCommonRoot;
        }
        if !torus_only {
            return RootCheck::CommonRoot;
        }
        // need a nonzero root: strip powers of x with zero-divisor care
        let mut h = g;
        loop {
            let t0 = h[0].clone();
            if t0.is_zero() {
                h.remove(0);
                if h.len() == 1 {
                    return RootCheck::NoCommonRoot; // h was a pure power of x
                }
                continue;
            }
            match invert(&t0, m) {
                Inv::Unit(_) => return RootCheck::CommonRoot, // nonzero constant term: roots are nonzero
                Inv::Zero => unreachable!(),
                Inv::Split(split) => {
                    let cof = m.exact_div(&split).expect("factor divides").monic();
                    let a = go(polys, &split, torus_only, depth + 1);
                    let b = go(polys, &cof, torus_only, depth + 1);
                    return combine(a, b);
                }
            }
        }
    }

    fn go_without_units(polys: &[QP], m: &UPoly, torus_only: bool, depth: u32) -> RootCheck {
        // same as go; the unit constants will be rediscovered there
        go(polys, m, torus_only, depth)
    }

    fn combine(a: RootCheck, b: RootCheck) -> RootCheck {
        use RootCheck::*;
        match (a, b) {
            (CommonRoot, _) | (_, CommonRoot) => CommonRoot,
            (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
            _ => NoCommonRoot,
        }
    }

    /// Monic gcd in (Q\[t\]/(m))\[x\]; Err carries a modulus factor on split.
    fn qp_gcd(a: &QP, b: &QP, m: &UPoly, depth: u32) -> Result<QP, UPoly> {
        if depth > MAX_DEPTH {
            // treated as a split failure by callers via Indeterminate path
            return Err(m.clone());
        }
        let mut p = qp_reduce(a, m);
        let mut q = qp_reduce(b, m);
        loop {
            if q.is_empty() {
                return make_monic(&p, m);
            }
            // ensure leading coefficient of q is a unit
            let lc = q.last().unwrap().clone();
            match invert(&lc, m) {
                Inv::Zero => {
                    q.pop();
                    continue;
                }
                Inv::Split(g) => return Err(g),
                Inv::Unit(inv) => {
                    let qm: QP = q.iter().map(|c| reduce(&c.mul(&inv), m)).collect();
                    // p mod qm
                    let r = qp_rem(&p, &qm, m)?;
                    p = q;
                    q = r;
                }
            }
        }
    }

    fn make_monic(p: &QP, m: &UPoly) -> Result<QP, UPoly> {
        if p.is_empty() {
            return Ok(Vec::new());
        }
        match invert(p.last().unwrap(), m) {
            Inv::Unit(inv) => Ok(p.iter().map(|c| reduce(&c.mul(&inv), m)).collect()),
            Inv::Split(g) => Err(g),
            Inv::Zero => unreachable!("trimmed polynomials have nonzero lc"),
        }
    }

    /// Remainder of p by monic q over Q[t]/(m).
    fn qp_rem(p: &QP, q: &QP, m: &UPoly) -> Result<QP, UPoly> {
        let dq = q.len() - 1;
        let mut r = p.clone();
        loop {
            if r.len() < q.len() {
                break;
            }
            let dr = r.len() - 1;
            let f = r.last().unwrap().clone();
            for i in 0..q.len() {
                let t = reduce(&r[i + dr - dq].sub(&q[i].mul(&f)), m);
                r[i + dr - dq] = t;
            }
            while matches!(r.last(), Some(c) if c.is_zero()) {
                r.pop();
            }
            if r.len() == dr + 1 {
                // leading term did not cancel; can happen only through reduce
                r.pop();
            }
        }
        Ok(qp_reduce(&r, m))
    }

    #[cfg(test)]
    mod tests {
        use super::*;
        use crate::poly::rat_int;

        fn up(coeffs: &[i64]) -> UPoly {
            UPoly::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
        }

        #[test]
        fn sqrt2_common_root() {
            // m = t^2 - 2; polys in x: x - t and x^2 - 2 share the root x = t.
            let m = up(&[-2, 0, 1]);
            let p1 = vec![up(&[0, -1]), up(&[1])]; // x - t
            let p2 = vec![up(&[-2]), up(&[0]), up(&[1])]; // x^2 - 2
            assert_eq!(
                system_common_root_mod(&[p1, p2], &m, true),
                RootCheck::CommonRoot
            );
        }

        #[test]
        fn no_common_root() {
            // m = t^2 - 2; x - t and x + t share only x = 0 when t = 0, but t != 0.
            let m = up(&[-2, 0, 1]);
            let p1 = vec![up(&[0, -1]), up(&[1])]; // x - t
            let p2 = vec![up(&[0, 1]), up(&[1])]; // x + t
            assert_eq!(
                system_common_root_mod(&[p1, p2], &m, true),
                RootCheck::NoCommonRoot
            );
        }

        #[test]
        fn split_modulus_resolves() {
            // m = (t-1)(t-2); constant t-1 vanishes on one factor only.
            let m = up(&[2, -3, 1]);
            let p1 = vec![up(&[-1, 1])]; // constant (in x): t - 1
            let p2 = vec![up(&[0, 0]), up(&[1])]; // x
            // common root requires t = 1 branch, where x = 0 is forced: not a torus root
            assert_eq!(
                system_common_root_mod(&[p1.clone(), p2], &m, true),
                RootCheck::NoCommonRoot
            );
            let p3 = vec![up(&[-3, 1]), up(&[1])]; // x + t - 3 -> x = 2 at t = 1
            assert_eq!(
                system_common_root_mod(&[p1, p3], &m, true),
                RootCheck::CommonRoot
            );
        }
    }
}
