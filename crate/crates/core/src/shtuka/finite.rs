//! Shtukas over `Λ⊗k` and `Λ⊗R`: cohomology, nilpotence and L-factors.

use serde_json::{json, Value};

use super::{inverse_adj, one_minus, z_valuation, LamElem, Lambda};
use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::irreducible::irreducibles_of_degree;
use crate::matrix::{det_cofactor, is_zero_matrix, kernel, mat_mul, mat_twist, Matrix, QuotientSpace};
use crate::poly::{ring_r, Poly, PolyRing};
use crate::quotient::{residue_field, QuotientRing};
use crate::ring::{FiniteRing, Ring};

pub type TensorElem = Poly<Poly<FqElem>>;

/// `i, j : M₀ → M₁` over `Λ⊗k`; `j(v) = J·σ(v)` with `σ` the `q`-Frobenius of `k`.
#[derive(Clone, Debug)]
pub struct FiniteShtuka {
    pub lambda: Lambda,
    pub k: QuotientRing<Fq>,
    /// `Λ⊗k = k[z]/(z^e)`.
    pub ring: QuotientRing<QuotientRing<Fq>>,
    pub i: Matrix<TensorElem>,
    pub j: Matrix<TensorElem>,
}

/// `H⁰ = ker(i - j)` and `H¹ = coker(i - j)` as `F_q`-spaces.
#[derive(Clone, Debug)]
pub struct AffineCohomology {
    pub h0: Vec<Vec<FqElem>>,
    pub h1: QuotientSpace<FqElem>,
    pub source_dim: usize,
    pub target_dim: usize,
}

impl AffineCohomology {
    pub fn h0_dim(&self) -> usize {
        self.h0.len()
    }
    pub fn h1_dim(&self) -> usize {
        self.h1.dim()
    }
}

impl FiniteShtuka {
    pub fn new(lambda: &Lambda, k: QuotientRing<Fq>, i: Matrix<TensorElem>, j: Matrix<TensorElem>) -> Result<Self> {
        if i.rows() != j.rows() || i.cols() != j.cols() {
            return Err(Error::Dimension("i and j must have the same shape".into()));
        }
        let ring = lambda.over(k.clone())?;
        Ok(FiniteShtuka { lambda: lambda.clone(), k, ring, i, j })
    }

    /// The linearization over `F_q`, with `F_q`-bases of `(Λ⊗k)^n` by coordinates.
    pub fn affine_cohomology(&self) -> Result<AffineCohomology> {
        let ring = &self.ring;
        let dim = ring.dim();
        let (n1, n0) = (self.i.rows(), self.i.cols());
        let mut cols = Vec::with_capacity(n0 * dim);
        for c in 0..n0 {
            for b in 0..dim {
                let mut unit = vec![FqElem::ZERO; dim];
                unit[b] = FqElem::ONE;
                let beta = ring.from_coords(&unit);
                let tb = ring.twist(&beta);
                let mut col = Vec::with_capacity(n1 * dim);
                for r in 0..n1 {
                    let y = ring.sub(&ring.mul(self.i.get(r, c), &beta), &ring.mul(self.j.get(r, c), &tb));
                    col.extend(ring.coords(&y));
                }
                cols.push(col);
            }
        }
        let m = Matrix::from_cols(n1 * dim, cols)?;
        let fq = self.lambda.fq();
        let h0 = kernel(fq, &m);
        let images: Vec<Vec<FqElem>> = (0..m.cols()).map(|c| m.col(c)).collect();
        let h1 = QuotientSpace::new(fq, n1 * dim, &images);
        Ok(AffineCohomology { h0, h1, source_dim: n0 * dim, target_dim: n1 * dim })
    }

    /// `i^{-1}J` when `det i` is a unit.
    pub fn semilinear_part(&self) -> Result<Option<Matrix<TensorElem>>> {
        if !self.i.is_square() {
            return Ok(None);
        }
        let Some(inv) = inverse_adj(&self.ring, &self.i)? else { return Ok(None) };
        Ok(Some(mat_mul(&self.ring, &inv, &self.j)?))
    }

    /// Least `n` with `(i^{-1}j)^n = 0`, if `i` is invertible and one exists.
    /// A nilpotent semilinear map on an `F_q`-space of dimension `N` has `n <= N`.
    pub fn nilpotence_order(&self) -> Result<Option<usize>> {
        let Some(a) = self.semilinear_part()? else { return Ok(None) };
        let bound = a.rows() * self.ring.dim();
        if is_zero_matrix(&self.ring, &a) {
            return Ok(Some(if a.rows() == 0 { 0 } else { 1 }));
        }
        let mut acc = a.clone();
        let mut tw = a;
        for n in 1..=bound {
            if is_zero_matrix(&self.ring, &acc) {
                return Ok(Some(n));
            }
            tw = mat_twist(&self.ring, &tw);
            acc = mat_mul(&self.ring, &acc, &tw)?;
        }
        Ok(None)
    }

    pub fn is_nilpotent(&self) -> Result<bool> {
        Ok(self.nilpotence_order()?.is_some())
    }

    /// The reduction modulo `z`, over `Λ/m = F_q`.
    pub fn mod_maximal(&self) -> Result<FiniteShtuka> {
        let lam1 = Lambda::new(self.lambda.fq(), 1)?;
        let cut = |m: &Matrix<TensorElem>| {
            m.map(|x| self.ring.poly.from_vec(x.coeffs().iter().take(1).cloned().collect()))
        };
        FiniteShtuka::new(&lam1, self.k.clone(), cut(&self.i), cut(&self.j))
    }

    /// `det_Λ(1 - i^{-1}j | M₀)` with `M₀` viewed as a free `Λ`-module on
    /// `θ̄^a e_c`.
    pub fn local_l(&self) -> Result<LamElem> {
        let a = self.checked_part()?;
        let lam = &self.lambda.ring;
        let d = self.k.degree();
        let n = a.rows();
        let theta = self.k.gen();
        let mut lin = Matrix::from_fn(n * d, n * d, |_, _| lam.zero());
        for c in 0..n {
            for s in 0..d {
                // S(θ̄^s e_c) = θ̄^{qs} · A e_c
                let tw = self.ring.embed(self.k.twist(&self.k.pow(&theta, s as u64)));
                for r in 0..n {
                    let y = self.ring.mul(a.get(r, c), &tw);
                    for b in 0..d {
                        let digits: Vec<FqElem> = (0..self.lambda.e)
                            .map(|i| y.coeff(i).map(|kc| self.k.coords(kc)[b]).unwrap_or(FqElem::ZERO))
                            .collect();
                        lin.set(r * d + b, c * d + s, lam.reduce(digits));
                    }
                }
            }
        }
        det_cofactor(lam, &one_minus(lam, &lin))
    }

    /// `det_{Λ⊗k}(1 - N)` for the norm `N` of `i^{-1}j` over `d = [k : F_q]`
    /// steps, which lands in `Λ`.
    pub fn local_l_by_norm(&self) -> Result<LamElem> {
        let a = self.checked_part()?;
        let norm = crate::skew::frobenius_norm(&self.ring, &a, self.k.degree())?;
        let det = det_cofactor(&self.ring, &one_minus(&self.ring, &norm))?;
        let mut digits = Vec::with_capacity(self.lambda.e);
        for c in det.coeffs() {
            match c.degree() {
                None => digits.push(FqElem::ZERO),
                Some(0) => digits.push(c.coeffs()[0]),
                Some(_) => return Err(Error::Certificate("norm determinant is not in Λ".into())),
            }
        }
        Ok(self.lambda.ring.reduce(digits))
    }

    fn checked_part(&self) -> Result<Matrix<TensorElem>> {
        if !self.mod_maximal()?.is_nilpotent()? {
            return Err(Error::Hypothesis("the shtuka is not nilpotent modulo the maximal ideal of Λ".into()));
        }
        self.semilinear_part()?.ok_or_else(|| Error::Hypothesis("i is not invertible".into()))
    }
}

/// An ideal `(z^v) ⊂ Λ` with `(z^v)^order = 0` containing every entry of `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Witness {
    pub v: usize,
    pub order: usize,
}

impl Witness {
    pub fn new(lambda: &Lambda, v: usize, order: usize) -> Result<Self> {
        if v == 0 {
            return Err(Error::Hypothesis("the witness ideal must lie in the maximal ideal".into()));
        }
        if v.saturating_mul(order) < lambda.e {
            return Err(Error::Hypothesis(format!("(z^{v})^{order} is not zero in Λ")));
        }
        Ok(Witness { v, order })
    }

    pub fn to_json(&self, lambda: &Lambda) -> Value {
        let ideal = if self.v >= lambda.e { "0".to_string() } else if self.v == 1 { "z".into() } else { format!("z^{}", self.v) };
        json!({"ideal": ideal, "order": self.order})
    }
}

/// `i, j` over `Λ⊗R`, `R = F_q[θ]`.
#[derive(Clone, Debug)]
pub struct AffineShtuka {
    pub lambda: Lambda,
    /// `Λ⊗R = R[z]/(z^e)`.
    pub ring: QuotientRing<PolyRing<Fq>>,
    pub i: Matrix<TensorElem>,
    pub j: Matrix<TensorElem>,
}

#[derive(Clone, Debug)]
pub struct FactorRow {
    pub prime: Poly<FqElem>,
    pub local: LamElem,
    /// `local^{-1}`, the Euler factor.
    pub factor: LamElem,
}

#[derive(Clone, Debug)]
pub struct GlobalL {
    pub value: LamElem,
    pub factors: Vec<FactorRow>,
    /// Primes of this degree and above contribute 1.
    pub trivial_from_degree: usize,
}

impl GlobalL {
    pub fn factors_json(&self, lambda: &Lambda) -> Value {
        let r = ring_r(lambda.fq());
        Value::Array(
            self.factors
                .iter()
                .map(|f| {
                    json!({
                        "prime": r.fmt_elem(&f.prime),
                        "local": lambda.fmt(&f.local),
                        "factor": lambda.fmt(&f.factor),
                    })
                })
                .collect(),
        )
    }
}

impl AffineShtuka {
    pub fn new(lambda: &Lambda, i: Matrix<TensorElem>, j: Matrix<TensorElem>) -> Result<Self> {
        if i.rows() != j.rows() || i.cols() != j.cols() {
            return Err(Error::Dimension("i and j must have the same shape".into()));
        }
        let ring = lambda.over(ring_r(lambda.fq()))?;
        Ok(AffineShtuka { lambda: lambda.clone(), ring, i, j })
    }

    /// Smallest `z`-adic valuation among the entries of `j`.
    pub fn j_valuation(&self) -> usize {
        self.j.entries().iter().map(|x| z_valuation(&self.ring, x, self.lambda.e)).min().unwrap_or(self.lambda.e)
    }

    /// The witness `(z^v, ceil(e/v))` with `v` the valuation of `j`.
    pub fn detect_witness(&self) -> Result<Witness> {
        let v = self.j_valuation();
        Witness::new(&self.lambda, v, self.lambda.e.div_ceil(v.max(1)))
    }

    /// Checks that a supplied witness contains `j`.
    pub fn check_witness(&self, w: &Witness) -> Result<()> {
        Witness::new(&self.lambda, w.v, w.order)?;
        if self.j_valuation() < w.v {
            return Err(Error::Hypothesis(format!("j has an entry outside (z^{})", w.v)));
        }
        Ok(())
    }

    /// The fiber at the prime `f`.
    pub fn reduce(&self, f: &Poly<FqElem>) -> Result<FiniteShtuka> {
        let fq = self.lambda.fq();
        let k = residue_field(fq, f)?;
        let lk = self.lambda.over(k.clone())?;
        let red = |m: &Matrix<TensorElem>| {
            m.map(|x| lk.poly.from_vec(x.coeffs().iter().map(|c| k.from_poly(c)).collect()))
        };
        let (i, j) = (red(&self.i), red(&self.j));
        FiniteShtuka::new(&self.lambda, k, i, j)
    }

    /// `Π_f local_l(S mod f)^{-1}`. Primes of degree `>= order` are skipped:
    /// the norm of `i^{-1}j` there lies in `I^{deg f} = 0`.
    pub fn global_l(&self, w: &Witness) -> Result<GlobalL> {
        self.check_witness(w)?;
        let lam = &self.lambda.ring;
        let mut value = lam.one();
        let mut factors = Vec::new();
        for d in 1..w.order {
            for f in irreducibles_of_degree(self.lambda.fq(), d) {
                let local = self.reduce(&f)?.local_l()?;
                let factor = lam
                    .inv(&local)
                    .ok_or_else(|| Error::Certificate(format!("local factor {} is not a unit", self.lambda.fmt(&local))))?;
                value = lam.mul(&value, &factor);
                factors.push(FactorRow { prime: f, local, factor });
            }
        }
        Ok(GlobalL { value, factors, trivial_from_degree: w.order })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2_lambda(e: usize) -> Lambda {
        Lambda::new(&Fq::prime(2).unwrap(), e).unwrap()
    }

    fn scalar(s: &FiniteShtuka, x: TensorElem) -> Matrix<TensorElem> {
        let _ = s;
        Matrix::from_rows(vec![vec![x]]).unwrap()
    }

    #[test]
    fn local_l_examples() {
        let lam = f2_lambda(2);
        let fq = lam.fq().clone();
        let r = ring_r(&fq);
        // k = F_2, j = z
        let k = residue_field(&fq, &r.x()).unwrap();
        let lk = lam.over(k.clone()).unwrap();
        let z = lk.gen();
        let s = FiniteShtuka::new(&lam, k, Matrix::from_rows(vec![vec![lk.one()]]).unwrap(), Matrix::from_rows(vec![vec![z]]).unwrap()).unwrap();
        let one_z = lam.ring.add(&lam.ring.one(), &lam.ring.gen());
        assert_eq!(s.local_l().unwrap(), one_z);
        assert_eq!(s.local_l_by_norm().unwrap(), one_z);
        assert_eq!(s.nilpotence_order().unwrap(), Some(2));

        // k = F_4, j = z θ̄ Frob
        let k4 = residue_field(&fq, &r.from_ints(&[1, 1, 1])).unwrap();
        let lk4 = lam.over(k4.clone()).unwrap();
        let zt = lk4.mul(&lk4.gen(), &lk4.embed(k4.gen()));
        let s4 = FiniteShtuka::new(&lam, k4, Matrix::from_rows(vec![vec![lk4.one()]]).unwrap(), scalar(&s, zt)).unwrap();
        assert_eq!(s4.local_l().unwrap(), lam.ring.one());
        assert_eq!(s4.local_l_by_norm().unwrap(), lam.ring.one());
    }

    #[test]
    fn cohomology_examples() {
        let lam = f2_lambda(1);
        let fq = lam.fq().clone();
        let k = residue_field(&fq, &ring_r(&fq).x()).unwrap();
        let lk = lam.over(k.clone()).unwrap();
        let one = Matrix::from_rows(vec![vec![lk.one()]]).unwrap();
        let zero = Matrix::from_rows(vec![vec![lk.zero()]]).unwrap();
        let h = FiniteShtuka::new(&lam, k.clone(), one.clone(), zero.clone()).unwrap().affine_cohomology().unwrap();
        assert_eq!((h.h0_dim(), h.h1_dim()), (0, 0));
        let h = FiniteShtuka::new(&lam, k.clone(), one.clone(), one.clone()).unwrap().affine_cohomology().unwrap();
        assert_eq!((h.h0_dim(), h.h1_dim()), (1, 1));
        let s = FiniteShtuka::new(&lam, k, zero, one).unwrap();
        assert!(!s.is_nilpotent().unwrap());
    }

    #[test]
    fn global_l_fixture() {
        let lam = f2_lambda(2);
        let lr = lam.over(ring_r(lam.fq())).unwrap();
        let r = &lr.poly.base;
        // j = zθ on rank 1
        let j = lr.poly.from_vec(vec![r.zero(), r.x()]);
        let s = AffineShtuka::new(&lam, Matrix::from_rows(vec![vec![lr.one()]]).unwrap(), Matrix::from_rows(vec![vec![j]]).unwrap()).unwrap();
        let w = s.detect_witness().unwrap();
        assert_eq!(w, Witness { v: 1, order: 2 });
        let l = s.global_l(&w).unwrap();
        assert_eq!(l.value, lam.ring.add(&lam.ring.one(), &lam.ring.gen()));
        assert_eq!(l.factors.len(), 2);
        assert_eq!(l.factors[0].factor, lam.ring.one());
    }
}
