//! Polynomial literals such as `t^3 + 2*t + 1`, `(g+1)*x^2`, `z*x0*x1`.
//!
//! Sums, differences, products (explicit or by juxtaposition), powers and
//! parentheses are accepted. Integers are reduced mod `p`; `g` is the
//! extension generator of `F_q`. Each caller declares which variable names
//! are legal.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::poly::{Poly, PolyRing};

const MAX_TERMS: usize = 20_000;
const MAX_EXP: u64 = 1 << 16;
const MAX_DEPTH: usize = 64;

/// Sparse polynomial in the declared variables, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, FqElem>,
}

impl MPoly {
    fn constant(nvars: usize, c: FqElem) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        MPoly { nvars, terms }
    }

    fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, FqElem::ONE);
        MPoly { nvars, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest exponent of variable `i`.
    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Total degrees of the terms, deduplicated.
    pub fn total_degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|e| e.iter().sum()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    fn add(&self, fq: &Fq, other: &MPoly, negate: bool) -> Result<MPoly> {
        let mut terms = self.terms.clone();
        for (e, &c) in &other.terms {
            let c = if negate { fq.neg(c) } else { c };
            let entry = terms.entry(e.clone()).or_insert(FqElem::ZERO);
            *entry = fq.add(*entry, c);
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        if terms.len() > MAX_TERMS {
            return Err(Error::InvalidInput("polynomial literal too large".into()));
        }
        Ok(MPoly { nvars: self.nvars, terms })
    }

    fn mul(&self, fq: &Fq, other: &MPoly) -> Result<MPoly> {
        if self.terms.len().saturating_mul(other.terms.len()) > MAX_TERMS * 8 {
            return Err(Error::InvalidInput("polynomial literal too large".into()));
        }
        let mut terms: BTreeMap<Vec<u32>, FqElem> = BTreeMap::new();
        for (ea, &ca) in &self.terms {
            for (eb, &cb) in &other.terms {
                let mut e = Vec::with_capacity(self.nvars);
                for (x, y) in ea.iter().zip(eb) {
                    let s = x + y;
                    if s as u64 > MAX_EXP {
                        return Err(Error::InvalidInput("exponent too large".into()));
                    }
                    e.push(s);
                }
                let entry = terms.entry(e).or_insert(FqElem::ZERO);
                *entry = fq.add(*entry, fq.mul(ca, cb));
            }
        }
        terms.retain(|_, c| !c.is_zero());
        if terms.len() > MAX_TERMS {
            return Err(Error::InvalidInput("polynomial literal too large".into()));
        }
        Ok(MPoly { nvars: self.nvars, terms })
    }

    fn pow(&self, fq: &Fq, mut n: u64) -> Result<MPoly> {
        let mut base = self.clone();
        let mut acc = MPoly::constant(self.nvars, FqElem::ONE);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(fq, &base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(fq, &base)?;
            }
        }
        Ok(acc)
    }
}

struct Parser<'a> {
    fq: &'a Fq,
    src: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
    depth: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
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

    fn starts_atom(&mut self) -> bool {
        match self.peek() {
            Some(c) => c.is_ascii_alphanumeric() || c == b'(' || c >= 0x80,
            None => false,
        }
    }

    fn expr(&mut self) -> Result<MPoly> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return self.err("nesting too deep");
        }
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let zero = MPoly::constant(self.vars.len(), FqElem::ZERO);
        let first = self.term()?;
        let mut acc = zero.add(self.fq, &first, negate)?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(self.fq, &t, false)?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.add(self.fq, &t, true)?;
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<MPoly> {
        let mut acc = self.power()?;
        loop {
            if self.peek() == Some(b'*') {
                self.pos += 1;
                let f = self.power()?;
                acc = acc.mul(self.fq, &f)?;
            } else if self.starts_atom() {
                let f = self.power()?;
                acc = acc.mul(self.fq, &f)?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.exponent()?;
            return base.pow(self.fq, n);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u64> {
        let start = self.pos;
        let mut n: u64 = 0;
        while let Some(&c) = self.src.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            n = n.saturating_mul(10).saturating_add((c - b'0') as u64);
            self.pos += 1;
        }
        if self.pos == start {
            return self.err("expected an exponent");
        }
        if n > MAX_EXP {
            return self.err("exponent too large");
        }
        Ok(n)
    }

    fn atom(&mut self) -> Result<MPoly> {
        let nv = self.vars.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = self.fq.p() as u64;
                let mut n: u64 = 0;
                while let Some(&c) = self.src.get(self.pos) {
                    if !c.is_ascii_digit() {
                        break;
                    }
                    n = (n * 10 + (c - b'0') as u64) % p;
                    self.pos += 1;
                }
                Ok(MPoly::constant(nv, FqElem(n as u32)))
            }
            Some(_) => {
                let rest = std::str::from_utf8(&self.src[self.pos..]).unwrap_or("");
                let name: String = if rest.starts_with('θ') {
                    "θ".into()
                } else {
                    let mut chars = rest.chars();
                    let mut s = String::new();
                    match chars.next() {
                        Some(c) if c.is_ascii_alphabetic() => s.push(c),
                        _ => return self.err("unexpected character"),
                    }
                    s.extend(chars.take_while(|c| c.is_ascii_digit()));
                    s
                };
                let canonical = if name == "θ" { "x" } else { name.as_str() };
                if let Some(i) = self.vars.iter().position(|v| *v == canonical) {
                    self.pos += name.len();
                    return Ok(MPoly::var(nv, i));
                }
                if name == "g" {
                    if self.fq.is_prime_field() {
                        return self.err("the generator g is only defined for extension fields");
                    }
                    self.pos += 1;
                    return Ok(MPoly::constant(nv, self.fq.generator()));
                }
                self.err(format!("unknown variable '{name}'"))
            }
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses a literal in the variables `vars` (`θ` is accepted for `x`).
pub fn parse_mpoly(fq: &Fq, text: &str, vars: &[&str]) -> Result<MPoly> {
    let mut p = Parser { fq, src: text.as_bytes(), pos: 0, vars, depth: 0 };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// A constant of `F_q`, e.g. `3` or `g^2+1`.
pub fn parse_fq(fq: &Fq, text: &str) -> Result<FqElem> {
    let m = parse_mpoly(fq, text, &[])?;
    Ok(m.terms.get(&Vec::new()).copied().unwrap_or(FqElem::ZERO))
}

/// A univariate polynomial over `F_q` in `ring.var`.
pub fn parse_poly(ring: &PolyRing<crate::field::Fq>, text: &str) -> Result<Poly<FqElem>> {
    let m = parse_mpoly(&ring.base, text, &[ring.var])?;
    Ok(to_univariate(ring, &m, 0))
}

/// Collapses an `MPoly` to the univariate polynomial in variable `i`
/// (other exponents must be zero).
pub fn to_univariate(ring: &PolyRing<Fq>, m: &MPoly, i: usize) -> Poly<FqElem> {
    let deg = m.degree_in(i) as usize;
    let mut c = vec![FqElem::ZERO; deg + 1];
    for (e, &x) in &m.terms {
        c[e[i] as usize] = x;
    }
    ring.from_vec(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{ring_a, ring_r};

    #[test]
    fn univariate() {
        let f3 = Fq::prime(3).unwrap();
        let a = ring_a(&f3);
        assert_eq!(parse_poly(&a, "t^3 + 2*t + 4").unwrap(), a.from_ints(&[1, 2, 0, 1]));
        assert_eq!(parse_poly(&a, "(t+1)^2 - t^2").unwrap(), a.from_ints(&[1, 2]));
        assert_eq!(parse_poly(&a, "2t").unwrap(), a.from_ints(&[0, 2]));
        let r = ring_r(&f3);
        assert_eq!(parse_poly(&r, "θ^2+x").unwrap(), r.from_ints(&[0, 1, 1]));
    }

    #[test]
    fn generator_coefficients() {
        let f4 = Fq::from_q(4).unwrap();
        assert_eq!(parse_fq(&f4, "g^2").unwrap(), parse_fq(&f4, "g+1").unwrap());
        assert!(parse_fq(&Fq::prime(2).unwrap(), "g").is_err());
    }

    #[test]
    fn multivariate_and_errors() {
        let f2 = Fq::prime(2).unwrap();
        let m = parse_mpoly(&f2, "z*x0*x1 + x1^2", &["z", "x0", "x1"]).unwrap();
        assert_eq!(m.terms.len(), 2);
        assert_eq!(m.total_degrees(), vec![2, 3]);
        assert!(parse_mpoly(&f2, "t +", &["t"]).is_err());
        assert!(parse_mpoly(&f2, "y", &["t"]).is_err());
        assert!(parse_mpoly(&f2, "(t", &["t"]).is_err());
        assert!(parse_mpoly(&f2, "t^99999999", &["t"]).is_err());
    }
}
