//! Irreducibility over finite fields and enumeration of monic irreducibles.

use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::poly::{ring_a, Poly, PolyRing};
use crate::ring::{FiniteRing, Ring};

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's test over a finite field base: `f` of degree `n` is irreducible iff
/// `x^(Q^n) ≡ x (mod f)` and `gcd(x^(Q^(n/l)) - x, f) = 1` for primes `l | n`.
pub fn is_irreducible<R: FiniteRing>(ring: &PolyRing<R>, f: &Poly<R::Elem>) -> Result<bool> {
    let n = match f.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
    };
    if !ring.base.is_field() {
        return Err(Error::InvalidInput("irreducibility needs a field of coefficients".into()));
    }
    if n == 1 {
        return Ok(true);
    }
    if ring.base.is_zero(&f.coeffs()[0]) {
        return Ok(false);
    }
    let f = ring.make_monic(f).expect("nonzero lead over a field");
    let card = ring.base.cardinality();
    let x = ring.rem(&ring.x(), &f)?;
    // powers[i] = x^(Q^i) mod f
    let mut powers = Vec::with_capacity(n + 1);
    powers.push(x.clone());
    for i in 1..=n {
        let next = ring.pow_mod(&powers[i - 1], card, &f)?;
        powers.push(next);
    }
    if powers[n] != x {
        return Ok(false);
    }
    for l in prime_divisors(n) {
        let h = ring.sub(&powers[n / l], &x);
        if ring.gcd(&h, &f)?.degree() != Some(0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Trial division by every monic polynomial of degree at most `deg f / 2`.
pub fn is_irreducible_trial(fq: &Fq, f: &Poly<FqElem>) -> Result<bool> {
    let a = ring_a(fq);
    let n = match f.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(n) => n,
    };
    for d in 1..=n / 2 {
        let count = (fq.q() as u64).pow(d as u32);
        for idx in 0..count {
            let g = a.monic_from_index(d, idx);
            if a.rem(f, &g)?.is_empty() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Monic irreducibles of exactly degree `d`, in lexicographic order.
pub fn irreducibles_of_degree(fq: &Fq, d: usize) -> Vec<Poly<FqElem>> {
    let a = ring_a(fq);
    let count = (fq.q() as u64).pow(d as u32);
    (0..count)
        .map(|idx| a.monic_from_index(d, idx))
        .filter(|f| is_irreducible(&a, f).unwrap_or(false))
        .collect()
}

/// All monic irreducibles of degree `1..=d_max`, grouped by degree.
pub fn monic_irreducibles(fq: &Fq, d_max: usize) -> Vec<Poly<FqElem>> {
    (1..=d_max).flat_map(|d| irreducibles_of_degree(fq, d)).collect()
}

/// Number of monic irreducibles of degree `d` from the necklace formula
/// `(1/d) sum_{e | d} mu(e) q^(d/e)`.
pub fn necklace_count(q: u64, d: usize) -> u64 {
    let mut total: i128 = 0;
    for e in 1..=d {
        if !d.is_multiple_of(e) {
            continue;
        }
        let mu = mobius(e);
        if mu != 0 {
            total += mu as i128 * (q as i128).pow((d / e) as u32);
        }
    }
    (total / d as i128) as u64
}

fn mobius(n: usize) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let f2 = Fq::prime(2).unwrap();
        let a = ring_a(&f2);
        assert!(is_irreducible(&a, &a.from_ints(&[1, 1, 1])).unwrap());
        assert!(!is_irreducible(&a, &a.from_ints(&[1, 0, 1])).unwrap());
        let f3 = Fq::prime(3).unwrap();
        let a3 = ring_a(&f3);
        assert!(is_irreducible(&a3, &a3.from_ints(&[1, 0, 1])).unwrap());
        assert_eq!(is_irreducible(&a3, &a3.one()), Err(Error::ConstantPolynomial));
    }

    #[test]
    fn enumeration_q2() {
        let f2 = Fq::prime(2).unwrap();
        let a = ring_a(&f2);
        let list = monic_irreducibles(&f2, 3);
        let expect = [vec![0, 1], vec![1, 1], vec![1, 1, 1], vec![1, 1, 0, 1], vec![1, 0, 1, 1]];
        assert_eq!(list, expect.iter().map(|c| a.from_ints(c)).collect::<Vec<_>>());
    }

    #[test]
    fn rabin_matches_trial_division() {
        for q in [2, 3, 4, 5] {
            let fq = Fq::from_q(q).unwrap();
            let a = ring_a(&fq);
            for d in 1..=4usize {
                let count = (q as u64).pow(d as u32).min(400);
                for idx in 0..count {
                    let f = a.monic_from_index(d, idx);
                    assert_eq!(is_irreducible(&a, &f).unwrap(), is_irreducible_trial(&fq, &f).unwrap());
                }
            }
        }
    }

    #[test]
    fn necklace() {
        assert_eq!(necklace_count(2, 3), 2);
        assert_eq!(necklace_count(3, 2), 3);
        assert_eq!(necklace_count(2, 16), 4080);
    }
}
