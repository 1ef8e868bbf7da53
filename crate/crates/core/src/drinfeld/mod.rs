//! Drinfeld `F_q[t]`-modules over `R = F_q[θ]` with `ι(t) = θ`.

mod explog;
mod lfactor;
mod oracle;

pub use explog::{ball_exponent, ExpLog};
pub use lfactor::{local_lfactor, LocalFactor};
pub(crate) use lfactor::local_lfactor_trusted;
pub use oracle::torsion_frobenius_oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::matrix::Matrix;
use crate::parse::{parse_mpoly, parse_poly, to_univariate};
use crate::poly::{ring_r, Poly, PolyRing};
use crate::quotient::{residue_field, QuotientRing};
use crate::ring::Ring;
use crate::skew::{TauPoly, TauRing};

/// Module description as read from JSON:
/// `{"q":2, "modulus":null, "rank":2, "coeffs":["1","1"]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub q: u32,
    #[serde(default)]
    pub modulus: Option<String>,
    pub rank: usize,
    pub coeffs: Vec<String>,
}

/// Builds the ground field from `q` and an optional modulus literal in `g`.
pub fn field_from_spec(q: u32, modulus: Option<&str>) -> Result<Fq> {
    let (p, e) = crate::field::prime_power(q)
        .ok_or_else(|| Error::UnsupportedField(format!("{q} is not a prime power")))?;
    match modulus {
        None => Fq::from_q(q),
        Some(text) => {
            let fp = Fq::prime(p)?;
            let m = parse_mpoly(&fp, text, &["g"])?;
            let poly = to_univariate(&crate::poly::ring_a(&fp), &m, 0);
            if poly.degree() != Some(e as usize) {
                return Err(Error::UnsupportedField(format!("modulus must have degree {e}")));
            }
            Fq::new(p, e, Some(poly.coeffs().iter().map(|c| c.value()).collect()))
        }
    }
}

/// `φ_t = θ + a_1 τ + … + a_r τ^r` with `a_r ∈ F_q^×`.
#[derive(Clone, Debug)]
pub struct DrinfeldModule {
    fq: Fq,
    r: PolyRing<Fq>,
    coeffs: Vec<Poly<FqElem>>,
}

impl DrinfeldModule {
    /// Validates the data; `coeffs` are `a_1, …, a_r`.
    pub fn new(fq: &Fq, coeffs: Vec<Poly<FqElem>>) -> Result<Self> {
        let rank = coeffs.len();
        if rank == 0 {
            return Err(Error::InvalidInput("rank must be at least 1".into()));
        }
        let r = ring_r(fq);
        let top = &coeffs[rank - 1];
        if top.degree() != Some(0) {
            return Err(Error::BadReduction(format!(
                "a_{rank} = {} is not a nonzero constant",
                r.fmt_elem(top)
            )));
        }
        Ok(DrinfeldModule { fq: fq.clone(), r, coeffs })
    }

    pub fn from_spec(spec: &ModuleSpec) -> Result<Self> {
        let fq = field_from_spec(spec.q, spec.modulus.as_deref())?;
        if spec.rank != spec.coeffs.len() {
            return Err(Error::InvalidInput(format!(
                "rank {} but {} coefficients",
                spec.rank,
                spec.coeffs.len()
            )));
        }
        let r = ring_r(&fq);
        let coeffs = spec.coeffs.iter().map(|c| parse_poly(&r, c)).collect::<Result<Vec<_>>>()?;
        DrinfeldModule::new(&fq, coeffs)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ModuleSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("module spec: {e}")))?;
        DrinfeldModule::from_spec(&spec)
    }

    /// The Carlitz module `θ + τ`.
    pub fn carlitz(fq: &Fq) -> Self {
        let r = ring_r(fq);
        DrinfeldModule::new(fq, vec![r.one()]).expect("valid")
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }
    /// `a_1, …, a_r`.
    pub fn coeffs(&self) -> &[Poly<FqElem>] {
        &self.coeffs
    }
    pub fn ring_r(&self) -> &PolyRing<Fq> {
        &self.r
    }
    pub fn leading(&self) -> FqElem {
        self.coeffs[self.rank() - 1].coeffs()[0]
    }
    /// `max deg a_j`.
    pub fn max_coeff_degree(&self) -> usize {
        self.coeffs.iter().filter_map(Poly::degree).max().unwrap_or(0)
    }

    pub fn spec(&self) -> ModuleSpec {
        ModuleSpec {
            q: self.fq.q(),
            modulus: (!self.fq.is_prime_field()).then(|| self.fq.modulus_text()),
            rank: self.rank(),
            coeffs: self.coeffs.iter().map(|c| self.r.fmt_elem(c)).collect(),
        }
    }

    pub fn tau_ring(&self) -> TauRing<PolyRing<Fq>> {
        TauRing::new(self.r.clone())
    }

    pub fn phi_t(&self) -> TauPoly<Poly<FqElem>> {
        let mut c = vec![self.r.x()];
        c.extend(self.coeffs.iter().cloned());
        self.tau_ring().from_vec(c)
    }

    /// `φ_a` for `a ∈ A`, by Horner's rule in `φ_t`.
    pub fn phi(&self, a: &Poly<FqElem>) -> TauPoly<Poly<FqElem>> {
        let tr = self.tau_ring();
        let phi_t = self.phi_t();
        let mut acc = tr.zero();
        for c in a.coeffs().iter().rev() {
            acc = tr.mul(&acc, &phi_t);
            acc = tr.add(&acc, &tr.constant(self.r.constant(*c)));
        }
        acc
    }

    /// The τ-matrix of the motive over `A⊗k`, `k = R/(f)`, on the basis
    /// `1, τ, …, τ^(r-1)`: `τ(v) = C·σ(v)`.
    pub fn motive_matrix_at(
        &self,
        k: &QuotientRing<Fq>,
    ) -> Matrix<Poly<Poly<FqElem>>> {
        let ak = PolyRing::new(k.clone(), "t", false);
        let inv_top = self.fq.inv(self.leading()).expect("unit");
        let reduce = |a: &Poly<FqElem>| k.from_poly(a);
        let rank = self.rank();
        let last: Vec<Poly<Poly<FqElem>>> = (0..rank)
            .map(|i| {
                if i == 0 {
                    // a_r^{-1} (t - θ̄)
                    let th = k.neg(&k.gen());
                    let c0 = k.scale(inv_top, &th);
                    ak.from_vec(vec![c0, k.from_fq(inv_top)])
                } else {
                    let ai = reduce(&self.coeffs[i - 1]);
                    ak.constant(k.neg(&k.scale(inv_top, &ai)))
                }
            })
            .collect();
        Matrix::from_fn(rank, rank, |row, col| {
            if col == rank - 1 {
                last[row].clone()
            } else if row == col + 1 {
                ak.one()
            } else {
                ak.zero()
            }
        })
    }

    /// The generic τ-matrix over `A⊗R` (twist on the `R` factor).
    pub fn motive_matrix_generic(&self) -> Matrix<Poly<Poly<FqElem>>> {
        let ar = PolyRing::new(self.r.clone(), "t", false);
        let inv_top = self.fq.inv(self.leading()).expect("unit");
        let rank = self.rank();
        Matrix::from_fn(rank, rank, |row, col| {
            if col == rank - 1 {
                if row == 0 {
                    let c0 = self.r.scale(inv_top, &self.r.neg(&self.r.x()));
                    ar.from_vec(vec![c0, self.r.from_fq(inv_top)])
                } else {
                    ar.constant(self.r.neg(&self.r.scale(inv_top, &self.coeffs[row - 1])))
                }
            } else if row == col + 1 {
                ar.one()
            } else {
                ar.zero()
            }
        })
    }

    /// Residue field at a monic irreducible `f ∈ R`, checking irreducibility.
    pub fn residue_field(&self, f: &Poly<FqElem>) -> Result<QuotientRing<Fq>> {
        if !self.r.is_monic(f) {
            return Err(Error::InvalidInput("prime must be monic".into()));
        }
        if !crate::irreducible::is_irreducible(&self.r, f)? {
            return Err(Error::Reducible(self.r.fmt_elem(f)));
        }
        residue_field(&self.fq, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ring_a;

    #[test]
    fn construction() {
        let f2 = Fq::prime(2).unwrap();
        let e = DrinfeldModule::from_json(r#"{"q":2,"modulus":null,"rank":2,"coeffs":["1","1"]}"#).unwrap();
        assert_eq!(e.rank(), 2);
        let bad = DrinfeldModule::from_json(r#"{"q":2,"rank":1,"coeffs":["x"]}"#);
        assert!(matches!(bad, Err(Error::BadReduction(_))));
        let c = DrinfeldModule::carlitz(&f2);
        assert_eq!(c.tau_ring().fmt(&c.phi_t()), "T+x");
    }

    #[test]
    fn phi_t_squared() {
        let f2 = Fq::prime(2).unwrap();
        let c = DrinfeldModule::carlitz(&f2);
        let a = ring_a(&f2);
        let r = c.ring_r().clone();
        let p = c.phi(&a.from_ints(&[0, 0, 1]));
        let tr = c.tau_ring();
        assert_eq!(p, tr.from_vec(vec![r.from_ints(&[0, 0, 1]), r.from_ints(&[0, 1, 1]), r.one()]));
        assert_eq!(c.phi(&a.one()), tr.one());
    }

    #[test]
    fn motive_matrices() {
        let f2 = Fq::prime(2).unwrap();
        let e = DrinfeldModule::from_json(r#"{"q":2,"rank":2,"coeffs":["1","1"]}"#).unwrap();
        let r = e.ring_r().clone();
        let k = e.residue_field(&r.from_ints(&[0, 1])).unwrap();
        let m = e.motive_matrix_at(&k);
        let ak = PolyRing::new(k.clone(), "t", false);
        assert_eq!(m.get(0, 0), &ak.zero());
        assert_eq!(m.get(0, 1), &ak.x());
        assert_eq!(m.get(1, 0), &ak.one());
        assert_eq!(m.get(1, 1), &ak.one());
        let g = DrinfeldModule::carlitz(&f2).motive_matrix_generic();
        assert_eq!(g.rows(), 1);
    }
}
