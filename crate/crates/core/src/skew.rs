//! Skew polynomials `K{τ}` with `τ·c = twist(c)·τ`, and semilinear maps.

use crate::error::{Error, Result};
use crate::field::Fq;
use crate::matrix::{mat_mul, mat_twist, Matrix};
use crate::parse::{parse_mpoly, MPoly};
use crate::poly::{fmt_poly, Poly, PolyRing};
use crate::ring::Ring;

/// `sum c_i τ^i` in left normal form, no trailing zero coefficient.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TauPoly<E> {
    coeffs: Vec<E>,
}

impl<E> TauPoly<E> {
    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// The ring `base{τ}`; the twist of `base` supplies the commutation rule.
#[derive(Clone, Debug)]
pub struct TauRing<R: Ring> {
    pub base: R,
}

impl<R: Ring> TauRing<R> {
    pub fn new(base: R) -> Self {
        TauRing { base }
    }

    pub fn from_vec(&self, mut c: Vec<R::Elem>) -> TauPoly<R::Elem> {
        while c.last().is_some_and(|x| self.base.is_zero(x)) {
            c.pop();
        }
        TauPoly { coeffs: c }
    }

    pub fn zero(&self) -> TauPoly<R::Elem> {
        TauPoly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> TauPoly<R::Elem> {
        self.constant(self.base.one())
    }

    pub fn constant(&self, c: R::Elem) -> TauPoly<R::Elem> {
        self.from_vec(vec![c])
    }

    /// `τ` itself.
    pub fn tau(&self) -> TauPoly<R::Elem> {
        self.from_vec(vec![self.base.zero(), self.base.one()])
    }

    pub fn coeff(&self, a: &TauPoly<R::Elem>, i: usize) -> R::Elem {
        a.coeffs.get(i).cloned().unwrap_or_else(|| self.base.zero())
    }

    pub fn add(&self, a: &TauPoly<R::Elem>, b: &TauPoly<R::Elem>) -> TauPoly<R::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        self.from_vec((0..n).map(|i| self.base.add(&self.coeff(a, i), &self.coeff(b, i))).collect())
    }

    pub fn sub(&self, a: &TauPoly<R::Elem>, b: &TauPoly<R::Elem>) -> TauPoly<R::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        self.from_vec((0..n).map(|i| self.base.sub(&self.coeff(a, i), &self.coeff(b, i))).collect())
    }

    /// `(sum a_i τ^i)(sum b_j τ^j) = sum a_i twist^i(b_j) τ^(i+j)`.
    pub fn mul(&self, a: &TauPoly<R::Elem>, b: &TauPoly<R::Elem>) -> TauPoly<R::Elem> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let mut out = vec![self.base.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        let mut twisted = b.coeffs.clone();
        for (i, ai) in a.coeffs.iter().enumerate() {
            if i > 0 {
                twisted = twisted.iter().map(|x| self.base.twist(x)).collect();
            }
            if self.base.is_zero(ai) {
                continue;
            }
            for (j, bj) in twisted.iter().enumerate() {
                if !self.base.is_zero(bj) {
                    out[i + j] = self.base.add(&out[i + j], &self.base.mul(ai, bj));
                }
            }
        }
        self.from_vec(out)
    }

    /// Left multiplication by a scalar.
    pub fn scalar_mul(&self, c: &R::Elem, a: &TauPoly<R::Elem>) -> TauPoly<R::Elem> {
        self.from_vec(a.coeffs.iter().map(|x| self.base.mul(c, x)).collect())
    }

    /// The operator `x ↦ sum c_i twist^i(x)`.
    pub fn apply(&self, f: &TauPoly<R::Elem>, x: &R::Elem) -> R::Elem {
        let mut acc = self.base.zero();
        let mut xi = x.clone();
        for (i, c) in f.coeffs.iter().enumerate() {
            if i > 0 {
                xi = self.base.twist(&xi);
            }
            if !self.base.is_zero(c) {
                acc = self.base.add(&acc, &self.base.mul(c, &xi));
            }
        }
        acc
    }

    /// Maps coefficients into another carrier.
    pub fn map<S: Ring>(
        &self,
        target: &TauRing<S>,
        a: &TauPoly<R::Elem>,
        f: impl Fn(&R::Elem) -> S::Elem,
    ) -> TauPoly<S::Elem> {
        target.from_vec(a.coeffs.iter().map(f).collect())
    }

    /// Text form `c0 + c1*T + c2*T^2 + ...`.
    pub fn fmt(&self, a: &TauPoly<R::Elem>) -> String {
        fmt_poly(&self.base, &a.coeffs, "T")
    }
}

impl TauRing<PolyRing<Fq>> {
    /// Parses `c0 + c1*T + ...` with coefficients polynomials in `x` (or `θ`).
    ///
    /// The text is read in left normal form: every monomial is collected as
    /// (coefficient in `x`)·`T^i`, regardless of the order of factors.
    pub fn parse(&self, text: &str) -> Result<TauPoly<Poly<crate::field::FqElem>>> {
        let m: MPoly = parse_mpoly(&self.base.base, text, &["T", self.base.var])?;
        let deg = m.degree_in(0) as usize;
        let mut c = vec![self.base.zero(); deg + 1];
        let mut groups: Vec<Vec<crate::field::FqElem>> = vec![Vec::new(); deg + 1];
        for (e, &x) in &m.terms {
            let g = &mut groups[e[0] as usize];
            let k = e[1] as usize;
            if g.len() <= k {
                g.resize(k + 1, crate::field::FqElem::ZERO);
            }
            g[k] = x;
        }
        for (i, g) in groups.into_iter().enumerate() {
            c[i] = self.base.from_vec(g);
        }
        Ok(self.from_vec(c))
    }
}

/// `v ↦ C·σ(v)` for a square matrix `C`.
#[derive(Clone, Debug)]
pub struct SemilinearMap<E> {
    pub matrix: Matrix<E>,
}

impl<E: Clone> SemilinearMap<E> {
    pub fn new(matrix: Matrix<E>) -> Self {
        SemilinearMap { matrix }
    }

    pub fn apply<R: Ring<Elem = E>>(&self, ring: &R, v: &[E]) -> Result<Vec<E>> {
        let tv: Vec<E> = v.iter().map(|x| ring.twist(x)).collect();
        crate::matrix::mat_vec(ring, &self.matrix, &tv)
    }
}

/// The matrix `C·C^σ·…·C^(σ^(d-1))` of the `d`-fold composite.
pub fn frobenius_norm<R: Ring>(ring: &R, c: &Matrix<R::Elem>, d: usize) -> Result<Matrix<R::Elem>> {
    if d == 0 {
        return Err(Error::InvalidInput("frobenius_norm needs d >= 1".into()));
    }
    if !c.is_square() {
        return Err(Error::Dimension("frobenius_norm needs a square matrix".into()));
    }
    let mut acc = c.clone();
    let mut tw = c.clone();
    for _ in 1..d {
        tw = mat_twist(ring, &tw);
        acc = mat_mul(ring, &acc, &tw)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ring_r;

    #[test]
    fn twist_rule() {
        let f2 = Fq::prime(2).unwrap();
        let r = ring_r(&f2);
        let tr = TauRing::new(r.clone());
        let theta = tr.constant(r.x());
        assert_eq!(tr.mul(&tr.tau(), &theta), tr.from_vec(vec![r.zero(), r.from_ints(&[0, 0, 1])]));
        let phi = tr.add(&theta, &tr.tau());
        let sq = tr.mul(&phi, &phi);
        assert_eq!(
            sq,
            tr.from_vec(vec![r.from_ints(&[0, 0, 1]), r.from_ints(&[0, 1, 1]), r.one()])
        );
        assert_eq!(tr.mul(&tr.one(), &phi), phi);
    }

    #[test]
    fn apply_examples() {
        let f2 = Fq::prime(2).unwrap();
        let r = ring_r(&f2);
        let tr = TauRing::new(r.clone());
        assert_eq!(tr.apply(&tr.tau(), &r.x()), r.from_ints(&[0, 0, 1]));
        let phi = tr.parse("x + T").unwrap();
        assert_eq!(tr.apply(&phi, &r.one()), r.from_ints(&[1, 1]));
        assert_eq!(tr.apply(&tr.zero(), &r.x()), r.zero());
        assert_eq!(tr.fmt(&phi), "T+x");
    }
}
