//! Parser for the polynomial input grammar.
//!
//! expr := term (('+'|'-') term)* ; term := coeff ('*'? factor)* ;
//! factor := var ('^' nat)? ; coeff := int | int '/' nat ; whitespace ignored.
//! Variables are z1,z2,z3; x1,x2,x3 and y1,y2,y3 are accepted as aliases in
//! local-chart contexts. Family input additionally admits the parameter `s`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Rat};

const MAX_EXP: u64 = u16::MAX as u64;

/// Exponent vector with a fourth slot for the deformation parameter s.
pub type Exp4 = [u16; 4];

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn err(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn nat(&mut self) -> Result<(u64, bool)> {
        // Returns (value saturated at MAX_EXP+1, overflowed) for exponent checks.
        self.skip_ws();
        let start = self.pos;
        let mut value: u64 = 0;
        let mut overflow = false;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            let d = (self.src[self.pos] - b'0') as u64;
            value = value.saturating_mul(10).saturating_add(d);
            if value > MAX_EXP {
                overflow = true;
            }
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        Ok((value, overflow))
    }

    fn bigint(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(text.parse::<BigInt>().unwrap())
    }

    /// Variable token: z1..z3 / x1..x3 / y1..y3 -> slot 0..2, s -> slot 3.
    fn var(&mut self, allow_s: bool) -> Result<Option<usize>> {
        self.skip_ws();
        let c = match self.src.get(self.pos) {
            Some(c) => *c,
            None => return Ok(None),
        };
        match c {
            b'z' | b'x' | b'y' => {
                let d = self.src.get(self.pos + 1).copied();
                match d {
                    Some(b'1') => {
                        self.pos += 2;
                        Ok(Some(0))
                    }
                    Some(b'2') => {
                        self.pos += 2;
                        Ok(Some(1))
                    }
                    Some(b'3') => {
                        self.pos += 2;
                        Ok(Some(2))
                    }
                    _ => Err(self.err("expected a variable index 1, 2, or 3")),
                }
            }
            b's' if allow_s => {
                self.pos += 1;
                Ok(Some(3))
            }
            _ => Ok(None),
        }
    }
}

/// Shared parser core over four slots (z1,z2,z3,s).
pub fn parse_terms(text: &str, allow_s: bool) -> Result<BTreeMap<Exp4, Rat>> {
    let mut lx = Lexer::new(text);
    let mut acc: BTreeMap<Exp4, Rat> = BTreeMap::new();
    let mut first = true;
    loop {
        let mut sign = BigRational::one();
        match lx.peek() {
            None if first => return Err(lx.err("empty input")),
            None => break,
            Some(b'+') => {
                lx.bump();
            }
            Some(b'-') => {
                lx.bump();
                sign = -sign;
            }
            Some(_) if first => {}
            Some(_) => return Err(lx.err("expected '+' or '-' between terms")),
        }
        first = false;
        let (exp, coeff) = parse_term(&mut lx, allow_s)?;
        let entry = acc.entry(exp).or_insert_with(Rat::zero);
        *entry += sign * coeff;
        if entry.is_zero() {
            acc.remove(&exp);
        }
    }
    Ok(acc)
}

fn parse_term(lx: &mut Lexer, allow_s: bool) -> Result<(Exp4, Rat)> {
    let mut coeff = BigRational::one();
    let mut exp: Exp4 = [0; 4];
    let mut any = false;
    loop {
        match lx.peek() {
            Some(c) if c.is_ascii_digit() => {
                let num = lx.bigint()?;
                let mut val = BigRational::from_integer(num);
                if lx.peek() == Some(b'/') {
                    lx.bump();
                    let den = lx.bigint()?;
                    if den.is_zero() {
                        return Err(lx.err("zero denominator"));
                    }
                    val /= BigRational::from_integer(den);
                }
                coeff *= val;
                any = true;
            }
            Some(b'*') => {
                lx.bump();
                if !any {
                    return Err(lx.err("unexpected '*' at start of term"));
                }
                continue;
            }
            _ => {
                let var_start = lx.pos;
                match lx.var(allow_s)? {
                    Some(slot) => {
                        any = true;
                        let mut e: u64 = 1;
                        if lx.peek() == Some(b'^') {
                            lx.bump();
                            let nat_pos = lx.pos;
                            let (v, overflow) = lx.nat()?;
                            if overflow || v > MAX_EXP {
                                return Err(Error::ExponentOverflow { pos: nat_pos, value: v });
                            }
                            e = v;
                        }
                        let total = exp[slot] as u64 + e;
                        if total > MAX_EXP {
                            return Err(Error::ExponentOverflow { pos: var_start, value: total });
                        }
                        exp[slot] = total as u16;
                    }
                    None => break,
                }
            }
        }
    }
    if !any {
        return Err(lx.err("expected a term"));
    }
    Ok((exp, coeff))
}

/// Parse a polynomial in z1,z2,z3 (x/y aliases accepted).
pub fn parse_polynomial(text: &str) -> Result<Poly> {
    let raw = parse_terms(text, false)?;
    let mut p = Poly::zero();
    for (e, c) in raw {
        p.insert_add([e[0], e[1], e[2]], c);
    }
    Ok(p)
}
