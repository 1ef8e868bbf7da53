//! Dense univariate polynomials over a [`Ring`].

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::ring::{ExactDiv, FiniteRing, Ring};

/// Coefficients low to high, never with a trailing zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Poly<E> {
    coeffs: Vec<E>,
}

impl<E> Poly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }
    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn lead(&self) -> Option<&E> {
        self.coeffs.last()
    }
    pub fn coeff(&self, i: usize) -> Option<&E> {
        self.coeffs.get(i)
    }
}

/// `base[var]`. When `twisted_var` is set the twist sends `var` to `var^q`
/// (the variable belongs to the twisted factor, as `θ` in `R = F_q[θ]`);
/// otherwise the twist acts on coefficients only (as on `t` in `A`).
#[derive(Clone, Debug)]
pub struct PolyRing<R: Ring> {
    pub base: R,
    pub var: &'static str,
    pub twisted_var: bool,
}

/// `F_q[t]`, the ring `A`.
pub fn ring_a(fq: &Fq) -> PolyRing<Fq> {
    PolyRing { base: fq.clone(), var: "t", twisted_var: false }
}

/// `F_q[θ]`, the ring `R` (printed with `x`).
pub fn ring_r(fq: &Fq) -> PolyRing<Fq> {
    PolyRing { base: fq.clone(), var: "x", twisted_var: true }
}

impl<R: Ring> PolyRing<R> {
    pub fn new(base: R, var: &'static str, twisted_var: bool) -> Self {
        PolyRing { base, var, twisted_var }
    }

    /// Builds a polynomial, trimming trailing zeros.
    pub fn from_vec(&self, mut c: Vec<R::Elem>) -> Poly<R::Elem> {
        while c.last().is_some_and(|x| self.base.is_zero(x)) {
            c.pop();
        }
        Poly { coeffs: c }
    }

    pub fn constant(&self, c: R::Elem) -> Poly<R::Elem> {
        self.from_vec(vec![c])
    }

    /// `c * var^n`.
    pub fn monomial(&self, c: R::Elem, n: usize) -> Poly<R::Elem> {
        let mut v = vec![self.base.zero(); n + 1];
        v[n] = c;
        self.from_vec(v)
    }

    pub fn x(&self) -> Poly<R::Elem> {
        self.monomial(self.base.one(), 1)
    }

    pub fn coeff_or_zero(&self, a: &Poly<R::Elem>, i: usize) -> R::Elem {
        a.coeffs.get(i).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn is_monic(&self, a: &Poly<R::Elem>) -> bool {
        a.lead().is_some_and(|l| self.base.is_one(l))
    }

    pub fn scale_by(&self, c: &R::Elem, a: &Poly<R::Elem>) -> Poly<R::Elem> {
        self.from_vec(a.coeffs.iter().map(|x| self.base.mul(c, x)).collect())
    }

    /// Multiplies by `var^n`.
    pub fn shift(&self, a: &Poly<R::Elem>, n: usize) -> Poly<R::Elem> {
        if a.is_empty() {
            return a.clone();
        }
        let mut v = vec![self.base.zero(); n];
        v.extend(a.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    /// Horner evaluation at a base element.
    pub fn eval(&self, a: &Poly<R::Elem>, x: &R::Elem) -> R::Elem {
        let mut acc = self.base.zero();
        for c in a.coeffs.iter().rev() {
            acc = self.base.add(&self.base.mul(&acc, x), c);
        }
        acc
    }

    /// Evaluation in another ring through a coefficient map.
    pub fn eval_in<S: Ring>(
        &self,
        a: &Poly<R::Elem>,
        target: &S,
        x: &S::Elem,
        embed: impl Fn(&R::Elem) -> S::Elem,
    ) -> S::Elem {
        let mut acc = target.zero();
        for c in a.coeffs.iter().rev() {
            acc = target.add(&target.mul(&acc, x), &embed(c));
        }
        acc
    }

    /// Division with remainder by a polynomial with invertible leading coefficient.
    pub fn divrem(
        &self,
        a: &Poly<R::Elem>,
        b: &Poly<R::Elem>,
    ) -> Result<(Poly<R::Elem>, Poly<R::Elem>)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let inv_lead = self
            .base
            .inv(b.lead().expect("nonzero"))
            .ok_or_else(|| Error::InvalidInput("divisor leading coefficient is not a unit".into()))?;
        let mut r = a.coeffs.clone();
        if r.len() <= db {
            return Ok((Poly { coeffs: Vec::new() }, a.clone()));
        }
        let mut quo = vec![self.base.zero(); r.len() - db];
        for k in (db..r.len()).rev() {
            if self.base.is_zero(&r[k]) {
                continue;
            }
            let c = self.base.mul(&r[k], &inv_lead);
            for (i, bi) in b.coeffs.iter().enumerate() {
                if !self.base.is_zero(bi) {
                    r[k - db + i] = self.base.sub(&r[k - db + i], &self.base.mul(&c, bi));
                }
            }
            quo[k - db] = c;
        }
        r.truncate(db);
        Ok((self.from_vec(quo), self.from_vec(r)))
    }

    pub fn rem(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Result<Poly<R::Elem>> {
        Ok(self.divrem(a, b)?.1)
    }

    /// Scales to leading coefficient one (base must be a field for nonconstant leads).
    pub fn make_monic(&self, a: &Poly<R::Elem>) -> Option<Poly<R::Elem>> {
        let l = a.lead()?;
        let inv = self.base.inv(l)?;
        Some(self.scale_by(&inv, a))
    }

    /// Monic gcd over a field base; `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &Poly<R::Elem>, b: &Poly<R::Elem>) -> Result<Poly<R::Elem>> {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_empty() {
            let r = self.rem(&x, &y)?;
            x = y;
            y = r;
        }
        if x.is_empty() {
            return Ok(x);
        }
        self.make_monic(&x).ok_or_else(|| Error::InvalidInput("gcd needs a field".into()))
    }

    /// Extended Euclid: returns `(g, s)` with `s*a ≡ g (mod m)` and `g` monic.
    pub fn gcdex_mod(
        &self,
        a: &Poly<R::Elem>,
        m: &Poly<R::Elem>,
    ) -> Result<(Poly<R::Elem>, Poly<R::Elem>)> {
        let (mut r0, mut r1) = (m.clone(), self.rem(a, m)?);
        let (mut s0, mut s1) = (Poly { coeffs: Vec::new() }, self.constant(self.base.one()));
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1)?;
            let s = self.sub(&s0, &self.mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
        }
        match r0.lead() {
            None => Ok((r0, s0)),
            Some(l) => {
                let inv = self.base.inv(l).ok_or_else(|| Error::InvalidInput("gcd needs a field".into()))?;
                Ok((self.scale_by(&inv, &r0), self.scale_by(&inv, &s0)))
            }
        }
    }

    pub fn derivative(&self, a: &Poly<R::Elem>) -> Poly<R::Elem> {
        let fq = self.base.fq().clone();
        self.from_vec(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| self.base.scale(fq.from_int(i as i64), c))
                .collect(),
        )
    }

    /// Applies `f` to each coefficient into another base ring.
    pub fn map<S: Ring>(
        &self,
        target: &PolyRing<S>,
        a: &Poly<R::Elem>,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> Poly<S::Elem> {
        target.from_vec(a.coeffs.iter().map(f).collect())
    }
}

impl<R: Ring> Ring for PolyRing<R> {
    type Elem = Poly<R::Elem>;

    fn fq(&self) -> &Fq {
        self.base.fq()
    }
    fn zero(&self) -> Self::Elem {
        Poly { coeffs: Vec::new() }
    }
    fn one(&self) -> Self::Elem {
        self.constant(self.base.one())
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.coeffs.is_empty()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
        let mut c = long.coeffs.clone();
        for (x, y) in c.iter_mut().zip(short.coeffs.iter()) {
            *x = self.base.add(x, y);
        }
        self.from_vec(c)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        Poly { coeffs: a.coeffs.iter().map(|x| self.base.neg(x)).collect() }
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let n = a.len().max(b.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(match (a.coeffs.get(i), b.coeffs.get(i)) {
                (Some(x), Some(y)) => self.base.sub(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => self.base.neg(y),
                (None, None) => unreachable!(),
            });
        }
        self.from_vec(c)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.from_vec(self.base.mul_slices(&a.coeffs, &b.coeffs))
    }
    fn from_fq(&self, c: FqElem) -> Self::Elem {
        self.constant(self.base.from_fq(c))
    }
    fn scale(&self, c: FqElem, a: &Self::Elem) -> Self::Elem {
        self.from_vec(a.coeffs.iter().map(|x| self.base.scale(c, x)).collect())
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        // units of a polynomial ring over a reduced base are the constant units
        if a.len() == 1 {
            self.base.inv(&a.coeffs[0]).map(|c| self.constant(c))
        } else {
            None
        }
    }
    fn twist(&self, a: &Self::Elem) -> Self::Elem {
        if !self.twisted_var {
            return Poly { coeffs: a.coeffs.iter().map(|x| self.base.twist(x)).collect() };
        }
        let q = self.base.fq().q() as usize;
        let Some(d) = a.degree() else { return a.clone() };
        let mut c = vec![self.base.zero(); d * q + 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            c[i * q] = self.base.twist(x);
        }
        self.from_vec(c)
    }
    fn fmt_elem(&self, a: &Self::Elem) -> String {
        fmt_poly(&self.base, a.coeffs(), self.var)
    }
}

impl<R: Ring> ExactDiv for PolyRing<R> {
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        let (q, r) = self.divrem(a, b).ok()?;
        r.is_empty().then_some(q)
    }
}

/// Renders `sum c_i var^i`, highest degree first.
pub fn fmt_poly<R: Ring>(base: &R, coeffs: &[R::Elem], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if base.is_zero(c) {
            continue;
        }
        let cs = base.fmt_elem(c);
        let atomic = !cs.contains(['+', '-', '*']) || (cs.starts_with('-') && !cs[1..].contains(['+', '-']));
        let cs_wrapped = if atomic { cs.clone() } else { format!("({cs})") };
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        terms.push(if i == 0 {
            cs
        } else if base.is_one(c) {
            mono
        } else {
            format!("{cs_wrapped}*{mono}")
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

impl PolyRing<Fq> {
    /// Polynomials over `F_q` from packed integer coefficients.
    pub fn from_ints(&self, c: &[u32]) -> Poly<FqElem> {
        self.from_vec(c.iter().map(|&x| FqElem(x % self.base.q())).collect())
    }

    /// The `i`-th monic polynomial of degree `d` in lexicographic order
    /// (coefficients read from the top as base-`q` digits).
    pub fn monic_from_index(&self, d: usize, mut idx: u64) -> Poly<FqElem> {
        let q = self.base.q() as u64;
        let mut c = vec![FqElem(0); d + 1];
        c[d] = FqElem(1);
        for k in 0..d {
            c[k] = FqElem((idx % q) as u32);
            idx /= q;
        }
        Poly { coeffs: c }
    }
}

/// Reduction context over `F_q[x]` with sparse access to a modulus, used by
/// [`crate::quotient::QuotientRing`].
pub(crate) fn sparse_terms<R: Ring>(base: &R, m: &Poly<R::Elem>) -> Vec<(usize, R::Elem)> {
    m.coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !base.is_zero(c))
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

impl<R: FiniteRing> PolyRing<R> {
    /// `x^(|base|^n) mod f` by repeated powering.
    pub fn frobenius_power_mod(&self, f: &Poly<R::Elem>, n: usize) -> Result<Poly<R::Elem>> {
        let card = self.base.cardinality();
        let mut x = self.rem(&self.x(), f)?;
        for _ in 0..n {
            x = self.pow_mod(&x, card, f)?;
        }
        Ok(x)
    }

    pub fn pow_mod(&self, a: &Poly<R::Elem>, mut n: u128, f: &Poly<R::Elem>) -> Result<Poly<R::Elem>> {
        let mut base = self.rem(a, f)?;
        let mut acc = self.rem(&self.one(), f)?;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &base), f)?;
            }
            n >>= 1;
            if n > 0 {
                base = self.rem(&self.mul(&base, &base), f)?;
            }
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_two_square() {
        let a = ring_a(&Fq::prime(2).unwrap());
        let f = a.from_ints(&[1, 1]);
        assert_eq!(a.mul(&f, &f), a.from_ints(&[1, 0, 1]));
    }

    #[test]
    fn divrem_example() {
        let a = ring_a(&Fq::prime(2).unwrap());
        let (q, r) = a.divrem(&a.from_ints(&[0, 1, 0, 1]), &a.from_ints(&[1, 0, 1])).unwrap();
        assert_eq!(q, a.from_ints(&[0, 1]));
        assert!(r.is_empty());
        assert_eq!(a.divrem(&q, &a.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_with_zero_is_monic() {
        let a = ring_a(&Fq::prime(3).unwrap());
        let f = a.from_ints(&[1, 2, 2]);
        assert_eq!(a.gcd(&f, &a.zero()).unwrap(), a.from_ints(&[2, 1, 1]));
    }

    #[test]
    fn twist_of_r_raises_theta() {
        let r = ring_r(&Fq::prime(3).unwrap());
        let f = r.from_ints(&[1, 1]);
        assert_eq!(r.twist(&f), r.from_ints(&[1, 0, 0, 1]));
        let a = ring_a(&Fq::prime(3).unwrap());
        assert_eq!(a.twist(&f), f);
    }

    #[test]
    fn printing() {
        let a = ring_a(&Fq::prime(3).unwrap());
        assert_eq!(a.fmt_elem(&a.from_ints(&[2, 0, 1])), "t^2+2");
        assert_eq!(a.fmt_elem(&a.zero()), "0");
    }
}
