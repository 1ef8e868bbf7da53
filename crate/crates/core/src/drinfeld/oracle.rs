//! Brute-force Frobenius on `p`-torsion, an independent check of the local factors.

use super::DrinfeldModule;
use crate::error::{Error, Result};
use crate::field::FqElem;
use crate::irreducible::is_irreducible;
use crate::matrix::{charpoly, kernel, rank, solve, Matrix};
use crate::poly::{ring_a, Poly, PolyRing};
use crate::quotient::QuotientRing;
use crate::ring::{FiniteRing, Ring};
use crate::skew::TauRing;

/// Characteristic polynomial, over `A/(p)`, of the `q^(deg f)`-power Frobenius
/// on the `p`-torsion of `E mod f`, found inside explicit extensions of
/// `k = R/(f)` of degree at most `max_ext`. Coefficients are returned as
/// polynomials in `t` of degree `< deg p`, low to high.
pub fn torsion_frobenius_oracle(
    e: &DrinfeldModule,
    f: &Poly<FqElem>,
    p: &Poly<FqElem>,
    max_ext: usize,
) -> Result<Vec<Poly<FqElem>>> {
    let fq = e.fq();
    let a = ring_a(fq);
    let k = e.residue_field(f)?;
    let d = k.degree();
    if !a.is_monic(p) || !is_irreducible(&a, p)? {
        return Err(Error::Reducible(a.fmt_elem(p)));
    }
    let m = p.degree().expect("nonconstant");
    let r = e.rank();
    let theta_bar = k.gen();
    if k.is_zero(&a.eval_in(p, &k, &theta_bar, |c| k.from_fq(*c))) {
        return Err(Error::InvalidInput("p must be coprime to f".into()));
    }
    let phi_p = e.phi(p);
    let phi_t = e.phi_t();
    let want = r * m;
    for n in 1..=max_ext {
        let ky = PolyRing::new(k.clone(), "y", true);
        let h = if n == 1 { ky.x() } else { find_irreducible(&ky, n)? };
        let l = QuotientRing::new(ky, h)?.assume_field();
        let tl = TauRing::new(l.clone());
        let lift = |poly: &Poly<FqElem>| l.embed(k.from_poly(poly));
        let phi_p_l = e.tau_ring().map(&tl, &phi_p, lift);
        let phi_t_l = e.tau_ring().map(&tl, &phi_t, lift);
        let dim = l.dim();
        let basis: Vec<_> = (0..dim)
            .map(|i| {
                let mut c = vec![FqElem::ZERO; dim];
                c[i] = FqElem::ONE;
                l.from_coords(&c)
            })
            .collect();
        let cols: Vec<Vec<FqElem>> = basis.iter().map(|b| l.coords(&tl.apply(&phi_p_l, b))).collect();
        let mat = Matrix::from_cols(dim, cols)?;
        let ker = kernel(fq, &mat);
        if ker.len() < want {
            continue;
        }
        if ker.len() > want {
            return Err(Error::InvalidInput("torsion larger than its rank; bad input".into()));
        }
        let act = |v: &[FqElem], op: &dyn Fn(&Poly<Poly<FqElem>>) -> Poly<Poly<FqElem>>| {
            l.coords(&op(&l.from_coords(v)))
        };
        let t_op = |x: &Poly<Poly<FqElem>>| tl.apply(&phi_t_l, x);
        let frob_op = |x: &Poly<Poly<FqElem>>| l.twist_n(x, d);
        // greedy basis over κ = A/(p)
        let mut chosen: Vec<Vec<FqElem>> = Vec::new();
        let mut span: Vec<Vec<FqElem>> = Vec::new();
        for v in &ker {
            if chosen.len() == r {
                break;
            }
            let mut trial = span.clone();
            trial.push(v.clone());
            if rank(fq, &Matrix::from_cols(dim, trial)?) == span.len() {
                continue;
            }
            chosen.push(v.clone());
            let mut w = v.clone();
            for _ in 0..m {
                span.push(w.clone());
                w = act(&w, &t_op);
            }
        }
        if chosen.len() < r {
            return Err(Error::InvalidInput("torsion is not free over A/(p)".into()));
        }
        let span_mat = Matrix::from_cols(dim, span.clone())?;
        let kappa = QuotientRing::new(PolyRing::new(fq.clone(), "t", false), p.clone())?.assume_field();
        let mut entries = vec![vec![kappa.zero(); r]; r];
        for (j, b) in chosen.iter().enumerate() {
            let image = act(b, &frob_op);
            let x = solve(fq, &span_mat, &image)?
                .ok_or_else(|| Error::InvalidInput("Frobenius does not preserve torsion".into()))?;
            for (i, row) in entries.iter_mut().enumerate() {
                row[j] = kappa.reduce(x[i * m..(i + 1) * m].to_vec());
            }
        }
        let fm = Matrix::from_rows(entries)?;
        let cp = charpoly(&kappa, &fm)?;
        return Ok(cp.into_iter().map(|c| a.from_vec(c.into_coeffs())).collect());
    }
    Err(Error::Budget(format!("no splitting field of degree <= {max_ext} over k")))
}

fn find_irreducible(ring: &PolyRing<QuotientRing<crate::field::Fq>>, n: usize) -> Result<Poly<Poly<FqElem>>> {
    let k = &ring.base;
    let kd = k.dim();
    let qsize = ring.base.fq().q() as u64;
    let total = (qsize.saturating_pow((kd * n) as u32)).min(1 << 20);
    for idx in 0..total {
        let mut rest = idx;
        let mut coeffs = Vec::with_capacity(n + 1);
        for _ in 0..n {
            let mut digits = Vec::with_capacity(kd);
            for _ in 0..kd {
                digits.push(FqElem((rest % qsize) as u32));
                rest /= qsize;
            }
            coeffs.push(k.from_coords(&digits));
        }
        coeffs.push(k.one());
        let h = ring.from_vec(coeffs);
        if is_irreducible(ring, &h)? {
            return Ok(h);
        }
    }
    Err(Error::Budget(format!("no irreducible of degree {n} found")))
}
