//! Quotients `base[y]/(m)` by a monic modulus.
//!
//! Used for residue fields `k = F_q[θ]/(f)`, the artinian rings
//! `Λ = F_q[z]/(z^e)`, and their tensor products `Λ⊗k`, `Λ⊗R`.

use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::poly::{fmt_poly, ring_r, sparse_terms, Poly, PolyRing};
use crate::ring::{FiniteRing, Ring};

#[derive(Clone, Debug)]
pub struct QuotientRing<R: Ring> {
    pub poly: PolyRing<R>,
    modulus: Poly<R::Elem>,
    n: usize,
    // nonzero terms of the modulus below the top degree
    tail: Vec<(usize, R::Elem)>,
    // y^(q i) mod m for i < n, present when the variable is twisted
    frob: Option<Vec<Vec<R::Elem>>>,
    nilpotent: bool,
    field: bool,
}

impl<R: Ring> QuotientRing<R> {
    /// `poly / (modulus)`; the modulus must be monic of degree at least one.
    pub fn new(poly: PolyRing<R>, modulus: Poly<R::Elem>) -> Result<Self> {
        let n = modulus
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::InvalidInput("quotient modulus must have degree >= 1".into()))?;
        if !poly.is_monic(&modulus) {
            return Err(Error::InvalidInput("quotient modulus must be monic".into()));
        }
        let tail: Vec<_> = sparse_terms(&poly.base, &modulus).into_iter().filter(|(i, _)| *i < n).collect();
        let nilpotent = tail.is_empty();
        let mut ring = QuotientRing { poly, modulus, n, tail, frob: None, nilpotent, field: false };
        if ring.poly.twisted_var {
            let q = ring.poly.base.fq().q() as usize;
            let yq = ring.reduce(ring.poly.monomial(ring.poly.base.one(), q).into_coeffs());
            let mut powers = Vec::with_capacity(n);
            let mut cur = ring.one();
            for _ in 0..n {
                let mut v = cur.coeffs().to_vec();
                v.resize(n, ring.poly.base.zero());
                powers.push(v);
                cur = ring.mul(&cur, &yq);
            }
            ring.frob = Some(powers);
        }
        Ok(ring)
    }

    /// Declares the quotient a field (the caller has checked irreducibility).
    pub fn assume_field(mut self) -> Self {
        self.field = true;
        self
    }

    pub fn modulus(&self) -> &Poly<R::Elem> {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn is_nilpotent_quotient(&self) -> bool {
        self.nilpotent
    }

    /// The class of the variable.
    pub fn gen(&self) -> Poly<R::Elem> {
        self.reduce(self.poly.x().into_coeffs())
    }

    pub fn embed(&self, c: R::Elem) -> Poly<R::Elem> {
        self.poly.constant(c)
    }

    /// Reduces an arbitrary coefficient vector modulo the modulus.
    pub fn reduce(&self, mut r: Vec<R::Elem>) -> Poly<R::Elem> {
        let base = &self.poly.base;
        let n = self.n;
        if r.len() > n {
            for k in (n..r.len()).rev() {
                if base.is_zero(&r[k]) {
                    continue;
                }
                let c = std::mem::replace(&mut r[k], base.zero());
                for (i, m) in &self.tail {
                    let idx = k - n + i;
                    r[idx] = base.sub(&r[idx], &base.mul(&c, m));
                }
            }
            r.truncate(n);
        }
        self.poly.from_vec(r)
    }

    pub fn from_poly(&self, a: &Poly<R::Elem>) -> Poly<R::Elem> {
        self.reduce(a.coeffs().to_vec())
    }

    fn coeff(&self, a: &Poly<R::Elem>, i: usize) -> R::Elem {
        self.poly.coeff_or_zero(a, i)
    }
}

impl<R: Ring> Ring for QuotientRing<R> {
    type Elem = Poly<R::Elem>;

    fn fq(&self) -> &Fq {
        self.poly.base.fq()
    }
    fn zero(&self) -> Self::Elem {
        self.poly.zero()
    }
    fn one(&self) -> Self::Elem {
        self.poly.one()
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_empty()
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.poly.add(a, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.poly.neg(a)
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.poly.sub(a, b)
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.is_empty() || b.is_empty() {
            return self.zero();
        }
        if self.nilpotent {
            // truncated product, no reduction needed
            let base = &self.poly.base;
            let n = self.n;
            let len = (a.len() + b.len() - 1).min(n);
            let mut out = vec![base.zero(); len];
            for (i, x) in a.coeffs().iter().enumerate().take(len) {
                if base.is_zero(x) {
                    continue;
                }
                for (j, y) in b.coeffs().iter().enumerate().take(len - i) {
                    if !base.is_zero(y) {
                        out[i + j] = base.add(&out[i + j], &base.mul(x, y));
                    }
                }
            }
            return self.poly.from_vec(out);
        }
        self.reduce(self.poly.base.mul_slices(a.coeffs(), b.coeffs()))
    }
    fn from_fq(&self, c: FqElem) -> Self::Elem {
        self.poly.from_fq(c)
    }
    fn scale(&self, c: FqElem, a: &Self::Elem) -> Self::Elem {
        self.poly.scale(c, a)
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        if a.is_empty() {
            return None;
        }
        let base = &self.poly.base;
        if self.nilpotent {
            let b = base.inv(&self.coeff(a, 0))?;
            let mut r: Vec<R::Elem> = Vec::with_capacity(self.n);
            r.push(b.clone());
            for k in 1..self.n {
                let mut s = base.zero();
                for j in 1..=k.min(a.len().saturating_sub(1)) {
                    s = base.add(&s, &base.mul(&a.coeffs()[j], &r[k - j]));
                }
                r.push(base.neg(&base.mul(&b, &s)));
            }
            return Some(self.poly.from_vec(r));
        }
        if !base.is_field() {
            return None;
        }
        let (g, s) = self.poly.gcdex_mod(a, &self.modulus).ok()?;
        (g == self.poly.one()).then(|| self.from_poly(&s))
    }
    fn twist(&self, a: &Self::Elem) -> Self::Elem {
        let base = &self.poly.base;
        match &self.frob {
            None => self.poly.from_vec(a.coeffs().iter().map(|c| base.twist(c)).collect()),
            Some(powers) => {
                let mut out = vec![base.zero(); self.n];
                for (i, c) in a.coeffs().iter().enumerate() {
                    if base.is_zero(c) {
                        continue;
                    }
                    let tc = base.twist(c);
                    for (o, p) in out.iter_mut().zip(&powers[i]) {
                        if !base.is_zero(p) {
                            *o = base.add(o, &base.mul(&tc, p));
                        }
                    }
                }
                self.poly.from_vec(out)
            }
        }
    }
    fn fmt_elem(&self, a: &Self::Elem) -> String {
        fmt_poly(&self.poly.base, a.coeffs(), self.poly.var)
    }
    fn is_field(&self) -> bool {
        self.field
    }
}

impl<R: FiniteRing> FiniteRing for QuotientRing<R> {
    fn dim(&self) -> usize {
        self.n * self.poly.base.dim()
    }
    fn coords(&self, a: &Self::Elem) -> Vec<FqElem> {
        let bd = self.poly.base.dim();
        let mut out = Vec::with_capacity(self.n * bd);
        for i in 0..self.n {
            match a.coeff(i) {
                Some(c) => out.extend(self.poly.base.coords(c)),
                None => out.extend(std::iter::repeat_n(FqElem::ZERO, bd)),
            }
        }
        out
    }
    fn from_coords(&self, c: &[FqElem]) -> Self::Elem {
        let bd = self.poly.base.dim();
        self.poly.from_vec(c.chunks(bd).take(self.n).map(|ch| self.poly.base.from_coords(ch)).collect())
    }
}

/// The residue field `k = F_q[θ]/(f)`; `f` must be monic irreducible
/// (checked by the caller).
pub fn residue_field(fq: &Fq, f: &Poly<FqElem>) -> Result<QuotientRing<Fq>> {
    Ok(QuotientRing::new(ring_r(fq), f.clone())?.assume_field())
}

/// `Λ = F_q[z]/(z^e)`.
pub fn lambda(fq: &Fq, e: usize) -> Result<QuotientRing<Fq>> {
    let z = PolyRing::new(fq.clone(), "z", false);
    let m = z.monomial(fq.one(), e);
    let ring = QuotientRing::new(z, m)?;
    Ok(if e == 1 { ring.assume_field() } else { ring })
}

/// `base[z]/(z^e)` with `z` fixed by the twist, e.g. `Λ⊗k` or `Λ⊗R`.
pub fn lambda_over<R: Ring>(base: R, e: usize) -> Result<QuotientRing<R>> {
    let z = PolyRing::new(base, "z", false);
    let m = z.monomial(z.base.one(), e);
    QuotientRing::new(z, m)
}
