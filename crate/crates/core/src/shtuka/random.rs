//! Seeded random shtukas for the trace-formula experiments.

use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::finite::{FiniteShtuka, Witness};
use super::pone::{HomPoly, POneShtuka};
use super::trace::{artinian_regulator, split_surjection, zeta_scalar};
use super::{LamElem, Lambda};
use crate::error::Result;
use crate::field::{Fq, FqElem};
use crate::irreducible::irreducibles_of_degree;
use crate::matrix::{det_cofactor, mat_mul, mat_sub, Matrix};
use crate::quotient::residue_field;
use crate::ring::{FiniteRing, Ring};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_fq(fq: &Fq, rng: &mut ChaCha8Rng) -> FqElem {
    FqElem(rng.gen_range(0..fq.q()))
}

/// A random element of `z^v Λ`.
pub fn random_lambda(lambda: &Lambda, rng: &mut ChaCha8Rng, v: usize) -> LamElem {
    let digits: Vec<FqElem> = (v..lambda.e).map(|_| random_fq(lambda.fq(), rng)).collect();
    lambda.from_digits(v, &digits)
}

/// A random form of the given degree with coefficients in `z^v Λ`, divisible
/// by `x1^min_order`.
pub fn random_form(lambda: &Lambda, rng: &mut ChaCha8Rng, degree: i64, min_order: i64, v: usize) -> HomPoly {
    if degree < 0 || rng.gen_bool(0.2) {
        return HomPoly::zero(degree);
    }
    let terms: Vec<(usize, LamElem)> = (0..=degree)
        .filter(|a| degree - a >= min_order)
        .map(|a| (a as usize, random_lambda(lambda, rng, v)))
        .collect();
    HomPoly::from_terms(lambda, degree, &terms).expect("degrees fit")
}

fn random_lambda_ring(rng: &mut ChaCha8Rng) -> Result<Lambda> {
    let q = *[2u32, 3].choose(rng).expect("nonempty");
    let e = rng.gen_range(1..=3);
    Lambda::new(&Fq::prime(q)?, e)
}

fn twists(rng: &mut ChaCha8Rng, choices: &[i64]) -> Vec<i64> {
    let n = rng.gen_range(1..=2);
    (0..n).map(|_| *choices.choose(rng).expect("nonempty")).collect()
}

fn random_j(lambda: &Lambda, rng: &mut ChaCha8Rng, t0: &[i64], t1: &[i64], min_order: i64) -> Matrix<HomPoly> {
    let q = lambda.fq().q() as i64;
    Matrix::from_fn(t1.len(), t0.len(), |r, c| random_form(lambda, rng, t1[r] - q * t0[c], min_order, 1))
}

fn maybe_witness(lambda: &Lambda, rng: &mut ChaCha8Rng) -> Option<Witness> {
    rng.gen_bool(0.5).then(|| Witness::new(lambda, 1, lambda.e).expect("(z)^e = 0"))
}

/// `i = 1` on `⊕ O(d)`, `d ∈ {-2, -3}`, with `j` in `(z)` and divisible by `x1`.
pub fn nilptrace_instance(rng: &mut ChaCha8Rng) -> Result<POneShtuka> {
    let lambda = random_lambda_ring(rng)?;
    let t = twists(rng, &[-2, -3]);
    let n = t.len();
    let i = Matrix::from_fn(n, n, |r, c| {
        if r == c {
            HomPoly::from_terms(&lambda, 0, &[(0, lambda.ring.one())]).expect("constant")
        } else {
            HomPoly::zero(t[r] - t[c])
        }
    });
    let j = random_j(&lambda, rng, &t, &t, 1);
    let w = maybe_witness(&lambda, rng);
    POneShtuka::new(&lambda, t.clone(), t, i, j, w)
}

/// `x1^shift` times a constant matrix that is invertible over `Λ` and
/// respects the twist blocks.
fn block_unit(lambda: &Lambda, rng: &mut ChaCha8Rng, t0: &[i64], t1: &[i64], shift: i64) -> Matrix<HomPoly> {
    let n = t0.len();
    loop {
        let consts = Matrix::from_fn(n, n, |r, c| {
            if t0[r] == t0[c] {
                random_lambda(lambda, rng, 0)
            } else {
                lambda.ring.zero()
            }
        });
        let det = det_cofactor(&lambda.ring, &consts).expect("square");
        if lambda.is_unit(&det) {
            return Matrix::from_fn(n, n, |r, c| {
                let deg = t1[r] - t0[c];
                let x = consts.get(r, c);
                if x.is_empty() || deg != shift {
                    HomPoly::zero(deg)
                } else {
                    HomPoly::from_terms(lambda, deg, &[(0, x.clone())]).expect("fits")
                }
            });
        }
    }
}

/// A constant `i` with unit determinant, `j` in `(z)` and divisible by `x1²`.
pub fn arttrace_constant_instance(rng: &mut ChaCha8Rng) -> Result<POneShtuka> {
    let lambda = random_lambda_ring(rng)?;
    let t = twists(rng, &[-2, -3]);
    let i = block_unit(&lambda, rng, &t, &t, 0);
    let j = random_j(&lambda, rng, &t, &t, 2);
    let w = maybe_witness(&lambda, rng);
    POneShtuka::new(&lambda, t.clone(), t, i, j, w)
}

/// `i = U·x1 : ⊕ O(d) → ⊕ O(d + 1)`, so `ker i` on `H¹` is free of rank
/// equal to the number of summands and the regulator is nontrivial.
pub fn arttrace_shifted_instance(rng: &mut ChaCha8Rng) -> Result<POneShtuka> {
    let lambda = random_lambda_ring(rng)?;
    let t0 = twists(rng, &[-3, -4]);
    let t1: Vec<i64> = t0.iter().map(|d| d + 1).collect();
    let i = block_unit(&lambda, rng, &t0, &t1, 1);
    let j = random_j(&lambda, rng, &t0, &t1, 2);
    let w = maybe_witness(&lambda, rng);
    POneShtuka::new(&lambda, t0, t1, i, j, w)
}

/// Recomputes `ζ` after moving the complements by kernel vectors (must not
/// change) and after random changes of the kernel bases (the identity must
/// survive with the regulator recomputed). Returns `true` if both hold.
pub fn zeta_invariance(p: &POneShtuka, rng: &mut ChaCha8Rng) -> Result<bool> {
    let lam = &p.lambda.ring;
    let (i_h, j_h) = (p.i_h1(), p.j_h1());
    let diff = mat_sub(lam, &i_h, &j_h)?;
    let (Some(sm), Some(sd)) = (split_surjection(&p.lambda, &diff), split_surjection(&p.lambda, &i_h)) else {
        return Ok(false);
    };
    let zeta = zeta_scalar(&p.lambda, &i_h, &j_h, &sm.kernel, &sm.complement, &sd.kernel, &sd.complement)?;
    let mut perturb = |comp: &[Vec<LamElem>], ker: &[Vec<LamElem>]| -> Vec<Vec<LamElem>> {
        comp.iter()
            .map(|c| {
                let mut v = c.clone();
                for k in ker {
                    let s = random_lambda(&p.lambda, rng, 0);
                    for (x, y) in v.iter_mut().zip(k) {
                        *x = lam.add(x, &lam.mul(&s, y));
                    }
                }
                v
            })
            .collect()
    };
    let cm = perturb(&sm.complement, &sm.kernel);
    let cd = perturb(&sd.complement, &sd.kernel);
    let moved = zeta_scalar(&p.lambda, &i_h, &j_h, &sm.kernel, &cm, &sd.kernel, &cd)?;
    if moved != zeta {
        return Ok(false);
    }
    // kernel bases B·P with P unit upper triangular plus a unit diagonal
    let mut change = |basis: &[Vec<LamElem>]| -> Result<Vec<Vec<LamElem>>> {
        let k = basis.len();
        let pm = Matrix::from_fn(k, k, |r, c| {
            if r == c {
                loop {
                    let u = random_lambda(&p.lambda, rng, 0);
                    if p.lambda.is_unit(&u) {
                        break u;
                    }
                }
            } else if r < c {
                random_lambda(&p.lambda, rng, 0)
            } else {
                lam.zero()
            }
        });
        let b = Matrix::from_cols(i_h.cols(), basis.to_vec())?;
        let nb = mat_mul(lam, &b, &pm)?;
        Ok((0..k).map(|c| nb.col(c)).collect())
    };
    let bm = change(&sm.kernel)?;
    let bd = change(&sd.kernel)?;
    let z2 = zeta_scalar(&p.lambda, &i_h, &j_h, &bm, &sm.complement, &bd, &sd.complement)?;
    let reg = artinian_regulator(p, &bm, &bd)?;
    let det = det_cofactor(lam, &reg)?;
    let aff = p.affine()?;
    let w = match p.witness {
        Some(w) => w,
        None => aff.detect_witness()?,
    };
    let l = aff.global_l(&w)?.value;
    Ok(lam.inv(&det).is_some_and(|inv| lam.mul(&l, &inv) == z2))
}

/// A finite shtuka over `Λ⊗k` with `i` invertible and `i^{-1}j` nilpotent:
/// strictly upper triangular modulo `z`.
pub fn nilpotent_finite_instance(rng: &mut ChaCha8Rng) -> Result<FiniteShtuka> {
    let lambda = random_lambda_ring(rng)?;
    let fq = lambda.fq().clone();
    let d = rng.gen_range(1..=2);
    let primes = irreducibles_of_degree(&fq, d);
    let f = primes.choose(rng).expect("primes exist").clone();
    let k = residue_field(&fq, &f)?;
    let lk = lambda.over(k.clone())?;
    let n = rng.gen_range(1..=2);
    let mut elem = |v: usize| {
        let mut c = vec![FqElem::ZERO; lk.dim()];
        for x in c.iter_mut().skip(v * k.dim()) {
            *x = random_fq(&fq, rng);
        }
        lk.from_coords(&c)
    };
    let i = loop {
        let m = Matrix::from_fn(n, n, |_, _| elem(0));
        if lk.inv(&det_cofactor(&lk, &m)?).is_some() {
            break m;
        }
    };
    let a = Matrix::from_fn(n, n, |r, c| if r < c { elem(0) } else { elem(1) });
    let j = mat_mul(&lk, &i, &a)?;
    FiniteShtuka::new(&lambda, k, i, j)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shtuka::{check_arttrace, check_nilptrace};

    #[test]
    fn families_pass() {
        let mut r = rng(7);
        for _ in 0..10 {
            let p = nilptrace_instance(&mut r).unwrap();
            let rep = check_nilptrace(&p).unwrap();
            assert!(rep.verdict, "{}", serde_json::to_string(&p.to_json()).unwrap());
        }
        for _ in 0..10 {
            let p = arttrace_constant_instance(&mut r).unwrap();
            let rep = check_arttrace(&p).unwrap();
            assert!(rep.verdict && rep.hypotheses_hold(), "{}", rep.to_json(&p.lambda));
            assert!(zeta_invariance(&p, &mut r).unwrap());
        }
        for _ in 0..10 {
            let p = arttrace_shifted_instance(&mut r).unwrap();
            let rep = check_arttrace(&p).unwrap();
            assert!(rep.verdict && rep.hypotheses_hold(), "{} {}", serde_json::to_string(&p.to_json()).unwrap(), rep.to_json(&p.lambda));
            assert!(zeta_invariance(&p, &mut r).unwrap());
        }
    }

    #[test]
    fn nilpotent_is_acyclic() {
        let mut r = rng(11);
        for _ in 0..20 {
            let s = nilpotent_finite_instance(&mut r).unwrap();
            assert!(s.is_nilpotent().unwrap());
            let h = s.affine_cohomology().unwrap();
            assert_eq!((h.h0_dim(), h.h1_dim()), (0, 0));
            assert_eq!(s.local_l().unwrap(), s.local_l_by_norm().unwrap());
        }
    }
}
