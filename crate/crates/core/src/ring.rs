//! Ring objects: a ring is a value carrying whatever context its elements need
//! (the ground field, a modulus, ...), and elements are plain data.

use std::fmt::Debug;

use crate::field::{Fq, FqElem};

/// A commutative `F_q`-algebra with a designated endomorphism `twist`.
///
/// `twist` raises the "base" tensor factor to the `q`-th power and fixes the
/// coefficient factor (`A` or `Λ`). Carriers without a twisted factor use the
/// identity, which is the `q`-power map on `F_q` itself.
pub trait Ring: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Debug + Send + Sync;

    fn fq(&self) -> &Fq;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_fq(&self, c: FqElem) -> Self::Elem;
    fn scale(&self, c: FqElem, a: &Self::Elem) -> Self::Elem;
    /// Inverse of a unit, `None` for non-units.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn twist(&self, a: &Self::Elem) -> Self::Elem;
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn is_field(&self) -> bool {
        false
    }

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut n: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn twist_n(&self, a: &Self::Elem, n: usize) -> Self::Elem {
        let mut x = a.clone();
        for _ in 0..n {
            x = self.twist(&x);
        }
        x
    }

    /// Product of coefficient sequences (a polynomial product over this ring).
    fn mul_slices(&self, a: &[Self::Elem], b: &[Self::Elem]) -> Vec<Self::Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if self.is_zero(y) {
                    continue;
                }
                out[i + j] = self.add(&out[i + j], &self.mul(x, y));
            }
        }
        out
    }
}

/// A ring that is finite-dimensional over `F_q` with a fixed basis.
pub trait FiniteRing: Ring {
    fn dim(&self) -> usize;
    fn coords(&self, a: &Self::Elem) -> Vec<FqElem>;
    fn from_coords(&self, c: &[FqElem]) -> Self::Elem;

    /// Number of elements, saturating.
    fn cardinality(&self) -> u128 {
        (self.fq().q() as u128).saturating_pow(self.dim() as u32)
    }
}

/// Rings with exact division (used by fraction-free elimination).
pub trait ExactDiv: Ring {
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
}

impl Ring for Fq {
    type Elem = FqElem;

    fn fq(&self) -> &Fq {
        self
    }
    fn zero(&self) -> FqElem {
        FqElem::ZERO
    }
    fn one(&self) -> FqElem {
        FqElem::ONE
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        Fq::add(self, *a, *b)
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        Fq::neg(self, *a)
    }
    fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        Fq::sub(self, *a, *b)
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        Fq::mul(self, *a, *b)
    }
    fn from_fq(&self, c: FqElem) -> FqElem {
        c
    }
    fn scale(&self, c: FqElem, a: &FqElem) -> FqElem {
        Fq::mul(self, c, *a)
    }
    fn inv(&self, a: &FqElem) -> Option<FqElem> {
        Fq::inv(self, *a).ok()
    }
    fn twist(&self, a: &FqElem) -> FqElem {
        *a
    }
    fn fmt_elem(&self, a: &FqElem) -> String {
        Fq::fmt_elem(self, *a)
    }
    fn is_field(&self) -> bool {
        true
    }
    fn mul_slices(&self, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
        self.poly_mul(a, b)
    }
}

impl FiniteRing for Fq {
    fn dim(&self) -> usize {
        1
    }
    fn coords(&self, a: &FqElem) -> Vec<FqElem> {
        vec![*a]
    }
    fn from_coords(&self, c: &[FqElem]) -> FqElem {
        c[0]
    }
}

impl ExactDiv for Fq {
    fn div_exact(&self, a: &FqElem, b: &FqElem) -> Option<FqElem> {
        Fq::div(self, *a, *b).ok()
    }
}
