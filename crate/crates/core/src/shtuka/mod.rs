//! Shtukas `M₀ ⇉ M₁` with coefficients in `Λ = F_q[z]/(z^e)`.
//!
//! Finite shtukas live over `Λ⊗k` for a residue field `k = F_q[θ]/(f)`,
//! affine ones over `Λ⊗R`, and the projective ones over `Λ × P¹` are given by
//! matrices of homogeneous forms in `x0, x1`.

mod finite;
mod pone;
pub mod random;
mod trace;

pub use finite::{AffineCohomology, AffineShtuka, FactorRow, FiniteShtuka, GlobalL, Witness};
pub use pone::{h1_dim, HomPoly, POneShtuka, ShtukaFile};
pub use trace::{
    artinian_regulator, check_arttrace, check_nilptrace, split_surjection, zeta_scalar, Hypothesis,
    Split, TraceReport,
};

use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::matrix::{det_cofactor, Matrix};
use crate::poly::Poly;
use crate::quotient::{lambda, lambda_over, QuotientRing};
use crate::ring::Ring;

/// An element of `Λ`, a polynomial in `z` of degree `< e`.
pub type LamElem = Poly<FqElem>;

/// The coefficient ring `Λ = F_q[z]/(z^e)`.
#[derive(Clone, Debug)]
pub struct Lambda {
    pub e: usize,
    pub ring: QuotientRing<Fq>,
}

impl Lambda {
    pub fn new(fq: &Fq, e: usize) -> Result<Self> {
        if e == 0 {
            return Err(Error::InvalidInput("Λ needs e >= 1".into()));
        }
        Ok(Lambda { e, ring: lambda(fq, e)? })
    }

    pub fn fq(&self) -> &Fq {
        self.ring.fq()
    }

    /// `Λ ⊗ base`, written as `base[z]/(z^e)`.
    pub fn over<R: Ring>(&self, base: R) -> Result<QuotientRing<R>> {
        lambda_over(base, self.e)
    }

    /// The image of `x ∈ Λ` in `base[z]/(z^e)`.
    pub fn embed<R: Ring>(&self, target: &QuotientRing<R>, x: &LamElem) -> Poly<R::Elem> {
        let base = &target.poly.base;
        target.poly.from_vec(x.coeffs().iter().map(|c| base.from_fq(*c)).collect())
    }

    /// Largest `v` with `x ∈ z^v Λ`; `e` for zero.
    pub fn valuation(&self, x: &LamElem) -> usize {
        x.coeffs().iter().position(|c| !c.is_zero()).unwrap_or(self.e)
    }

    pub fn is_unit(&self, x: &LamElem) -> bool {
        x.coeff(0).is_some_and(|c| !c.is_zero())
    }

    pub fn fmt(&self, x: &LamElem) -> String {
        self.ring.fmt_elem(x)
    }

    /// `λ z^v` summed from a list of `F_q` digits starting at `z^v`.
    pub fn from_digits(&self, v: usize, digits: &[FqElem]) -> LamElem {
        let mut c = vec![FqElem::ZERO; v];
        c.extend_from_slice(digits);
        self.ring.reduce(c)
    }
}

/// `z`-adic valuation of an element of `base[z]/(z^e)`.
pub(crate) fn z_valuation<R: Ring>(ring: &QuotientRing<R>, x: &Poly<R::Elem>, e: usize) -> usize {
    let base = &ring.poly.base;
    x.coeffs().iter().position(|c| !base.is_zero(c)).unwrap_or(e)
}

/// Row reduction over a local ring using unit pivots only, normalized to 1.
/// Columns with no unit entry below the current row are skipped.
pub(crate) fn local_rref<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> (Matrix<R::Elem>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols() {
        if row == a.rows() {
            break;
        }
        let Some((p, inv)) = (row..a.rows()).find_map(|r| ring.inv(a.get(r, col)).map(|u| (r, u))) else {
            continue;
        };
        if p != row {
            for c in 0..a.cols() {
                let x = a.get(p, c).clone();
                let y = a.get(row, c).clone();
                a.set(p, c, y);
                a.set(row, c, x);
            }
        }
        for c in 0..a.cols() {
            let v = ring.mul(a.get(row, c), &inv);
            a.set(row, c, v);
        }
        for r in 0..a.rows() {
            if r == row {
                continue;
            }
            let f = a.get(r, col).clone();
            if ring.is_zero(&f) {
                continue;
            }
            for c in 0..a.cols() {
                let v = ring.sub(a.get(r, c), &ring.mul(&f, a.get(row, c)));
                a.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

/// Some `x` with `B x = w`, when the columns of `B` reduce to unit pivots.
pub(crate) fn solve_local<R: Ring>(ring: &R, b: &Matrix<R::Elem>, w: &[R::Elem]) -> Result<Option<Vec<R::Elem>>> {
    let k = b.cols();
    let aug = b.hcat(&Matrix::from_cols(b.rows(), vec![w.to_vec()])?)?;
    let (red, pivots) = local_rref(ring, &aug);
    if pivots.len() < k || pivots[..k] != (0..k).collect::<Vec<_>>()[..] {
        return Ok(None);
    }
    // rows below the pivots must vanish in the augmented column
    if (k..red.rows()).any(|r| !ring.is_zero(red.get(r, k))) {
        return Ok(None);
    }
    Ok(Some((0..k).map(|r| red.get(r, k).clone()).collect()))
}

/// The adjugate, from cofactor minors.
pub(crate) fn adjugate<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    let n = m.rows();
    if n != m.cols() {
        return Err(Error::Dimension("adjugate of a non-square matrix".into()));
    }
    let mut out = Matrix::from_fn(n, n, |_, _| ring.zero());
    for r in 0..n {
        for c in 0..n {
            let rows: Vec<usize> = (0..n).filter(|&x| x != c).collect();
            let cols: Vec<usize> = (0..n).filter(|&x| x != r).collect();
            let minor = det_cofactor(ring, &m.submatrix(&rows, &cols))?;
            out.set(r, c, if (r + c) % 2 == 1 { ring.neg(&minor) } else { minor });
        }
    }
    Ok(out)
}

/// `m^{-1}` when `det m` is a unit.
pub(crate) fn inverse_adj<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<Option<Matrix<R::Elem>>> {
    let Some(di) = ring.inv(&det_cofactor(ring, m)?) else { return Ok(None) };
    Ok(Some(adjugate(ring, m)?.map(|x| ring.mul(x, &di))))
}

/// `1 - m` for a square matrix.
pub(crate) fn one_minus<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    Matrix::from_fn(m.rows(), m.cols(), |r, c| {
        let x = ring.neg(m.get(r, c));
        if r == c {
            ring.add(&x, &ring.one())
        } else {
            x
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_rref_skips_nilpotent_columns() {
        let f2 = Fq::prime(2).unwrap();
        let lam = Lambda::new(&f2, 2).unwrap();
        let z = lam.ring.gen();
        let one = lam.ring.one();
        let m = Matrix::from_rows(vec![vec![z.clone(), one.clone()]]).unwrap();
        let (_, piv) = local_rref(&lam.ring, &m);
        assert_eq!(piv, vec![1]);
        let inv = inverse_adj(&lam.ring, &Matrix::from_rows(vec![vec![lam.ring.add(&one, &z)]]).unwrap())
            .unwrap()
            .unwrap();
        assert_eq!(*inv.get(0, 0), lam.ring.add(&one, &z));
        assert_eq!(lam.valuation(&z), 1);
    }
}
