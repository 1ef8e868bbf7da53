//! Local L-factors from the norm of the motive's τ-matrix.

use serde_json::{json, Value};

use super::DrinfeldModule;
use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::laurent::{LaurentSeries, SeriesVar};
use crate::matrix::{charpoly, Matrix};
use crate::poly::{ring_a, Poly, PolyRing};
use crate::quotient::QuotientRing;
use crate::ring::Ring;
use crate::skew::frobenius_norm;

/// Frobenius data at a prime `m = (f)` of `R`.
#[derive(Clone, Debug)]
pub struct LocalFactor {
    pub prime: Poly<FqElem>,
    pub degree: usize,
    /// `N = C·C^σ·…·C^(σ^(d-1))` over `A⊗k`.
    pub norm: Matrix<Poly<Poly<FqElem>>>,
    /// `c(X) = det(X - N)` with coefficients in `A`, low to high.
    pub charpoly: Vec<Poly<FqElem>>,
    /// `c(1)` and `c(0)`, so that `P_m(1) = c(1)/c(0)`.
    pub value_num: Poly<FqElem>,
    pub value_den: Poly<FqElem>,
    /// `P_m(1)` and `P_m(1)^{-1}` as series in `t^{-1}`.
    pub value: LaurentSeries,
    pub inverse: LaurentSeries,
}

/// Computes the local factor at `f`, checking that `f` is irreducible.
pub fn local_lfactor(e: &DrinfeldModule, f: &Poly<FqElem>, prec: i64) -> Result<LocalFactor> {
    let k = e.residue_field(f)?;
    factor_in_field(e, f, &k, prec)
}

/// Same as [`local_lfactor`] for a prime already known to be irreducible.
pub(crate) fn local_lfactor_trusted(e: &DrinfeldModule, f: &Poly<FqElem>, prec: i64) -> Result<LocalFactor> {
    let k = crate::quotient::residue_field(e.fq(), f)?;
    factor_in_field(e, f, &k, prec)
}

fn factor_in_field(
    e: &DrinfeldModule,
    f: &Poly<FqElem>,
    k: &QuotientRing<Fq>,
    prec: i64,
) -> Result<LocalFactor> {
    let fq = e.fq();
    let d = f.degree().ok_or(Error::ConstantPolynomial)?;
    let ak = PolyRing::new(k.clone(), "t", false);
    let c = e.motive_matrix_at(k);
    let norm = frobenius_norm(&ak, &c, d)?;
    let cp = charpoly(&ak, &norm)?;
    let a = ring_a(fq);
    // integrality: every coefficient must lie in A·1 ⊂ A⊗k
    let mut coeffs = Vec::with_capacity(cp.len());
    for (i, ci) in cp.iter().enumerate() {
        let mut out = Vec::with_capacity(ci.len());
        for x in ci.coeffs() {
            match x.degree() {
                None => out.push(FqElem::ZERO),
                Some(0) => out.push(x.coeffs()[0]),
                Some(_) => {
                    return Err(Error::Integrality(format!(
                        "coefficient of X^{i} at prime {} is {}",
                        e.ring_r().fmt_elem(f),
                        ak.fmt_elem(ci)
                    )))
                }
            }
        }
        coeffs.push(a.from_vec(out));
    }
    let den = coeffs[0].clone();
    let num = coeffs.iter().fold(a.zero(), |acc, x| a.add(&acc, x));
    let num_s = LaurentSeries::from_poly(fq, SeriesVar::T, &num);
    let den_s = LaurentSeries::from_poly(fq, SeriesVar::T, &den);
    let value = num_s.div(&den_s, Some(prec))?;
    let inverse = den_s.div(&num_s, Some(prec))?;
    Ok(LocalFactor {
        prime: f.clone(),
        degree: d,
        norm,
        charpoly: coeffs,
        value_num: num,
        value_den: den,
        value,
        inverse,
    })
}

impl LocalFactor {
    /// `c(X)` as text, e.g. `X^2+X+t`.
    pub fn charpoly_text(&self, fq: &Fq) -> String {
        let a = ring_a(fq);
        crate::poly::fmt_poly(&a, &self.charpoly, "X")
    }

    /// `P_m(T) = c(T)/c(0)` as text with reduced fractions, e.g. `1 - (1/t)*T`.
    pub fn lpoly_text(&self, fq: &Fq) -> String {
        let a = ring_a(fq);
        let den = &self.value_den;
        let mut out = String::from("1");
        for (i, ci) in self.charpoly.iter().enumerate().skip(1) {
            if ci.is_empty() {
                continue;
            }
            let g = a.gcd(ci, den).expect("nonzero");
            let mut n = a.divrem(ci, &g).expect("divides").0;
            let mut d = a.divrem(den, &g).expect("divides").0;
            // make the denominator monic, then pull the scalar out of the numerator
            let dl = *d.lead().expect("nonzero");
            let dinv = fq.inv(dl).expect("unit");
            d = a.scale(dinv, &d);
            n = a.scale(dinv, &n);
            let nl = *n.lead().expect("nonzero");
            n = a.scale(fq.inv(nl).expect("unit"), &n);
            let minus_one = fq.neg(fq.one());
            let (sign, scalar) = if nl == minus_one && fq.p() != 2 {
                (" - ", String::new())
            } else if nl == fq.one() {
                (" + ", String::new())
            } else {
                (" + ", format!("{}*", fq.fmt_elem(nl)))
            };
            let wrap = |s: String| if s.contains(['+', '-']) { format!("({s})") } else { s };
            let frac = if d == a.one() {
                wrap(a.fmt_elem(&n))
            } else {
                format!("({}/{})", wrap(a.fmt_elem(&n)), wrap(a.fmt_elem(&d)))
            };
            let mono = if i == 1 { "T".to_string() } else { format!("T^{i}") };
            out.push_str(&format!("{sign}{scalar}{frac}*{mono}"));
        }
        out
    }

    pub fn to_json(&self, fq: &Fq) -> Value {
        let a = ring_a(fq);
        let r = crate::poly::ring_r(fq);
        json!({
            "prime": r.fmt_elem(&self.prime),
            "degree": self.degree,
            "charpoly": self.charpoly_text(fq),
            "lpoly": self.lpoly_text(fq),
            "value_num": a.fmt_elem(&self.value_num),
            "value_den": a.fmt_elem(&self.value_den),
            "value": self.value.to_json(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ring_r;

    #[test]
    fn carlitz_factor() {
        let f3 = Fq::prime(3).unwrap();
        let e = DrinfeldModule::carlitz(&f3);
        let r = ring_r(&f3);
        let a = ring_a(&f3);
        let f = r.from_ints(&[2, 0, 1, 1]);
        let lf = local_lfactor(&e, &f, 10).unwrap();
        // c(X) = X - f(t)
        assert_eq!(lf.charpoly, vec![a.neg(&a.from_ints(&[2, 0, 1, 1])), a.one()]);
        let lf_t = local_lfactor(&e, &r.x(), 4).unwrap();
        assert_eq!(lf_t.lpoly_text(&f3), "1 - (1/t)*T");
    }

    #[test]
    fn rank_two_examples() {
        let f2 = Fq::prime(2).unwrap();
        let e = DrinfeldModule::from_json(r#"{"q":2,"rank":2,"coeffs":["1","1"]}"#).unwrap();
        let r = ring_r(&f2);
        let lf = local_lfactor(&e, &r.x(), 6).unwrap();
        assert_eq!(lf.charpoly_text(&f2), "X^2+X+t");
        assert_eq!(lf.value, LaurentSeries::one(&f2, SeriesVar::T).truncate(6));
        let lf2 = local_lfactor(&e, &r.from_ints(&[1, 1, 1]), 6).unwrap();
        assert_eq!(lf2.charpoly_text(&f2), "X^2+t^2+t+1");
        assert!(matches!(local_lfactor(&e, &r.from_ints(&[1, 0, 1]), 6), Err(Error::Reducible(_))));
    }
}
