//! Checks shared by the acceptance run and the property suites. Each returns
//! `Err` with a description of the first counterexample.
#![allow(dead_code)]

use rand::Rng as _;
use rand_chacha::ChaCha8Rng;

use shtukalab_core::drinfeld::{ball_exponent, local_lfactor, torsion_frobenius_oracle, DrinfeldModule, ExpLog};
use shtukalab_core::irreducible::{irreducibles_of_degree, necklace_count};
use shtukalab_core::laurent::{LaurentSeries, SeriesVar};
use shtukalab_core::poly::{ring_a, ring_r};
use shtukalab_core::quotient::residue_field;
use shtukalab_core::skew::{TauPoly, TauRing};
use shtukalab_core::special_values::l_value;
use shtukalab_core::{Error, Fq, FqElem, Poly, Ring};

pub type Check = Result<(), String>;

pub fn module(q: u32, coeffs: &[&str]) -> DrinfeldModule {
    let text = serde_json::json!({"q": q, "rank": coeffs.len(), "coeffs": coeffs}).to_string();
    DrinfeldModule::from_json(&text).expect("valid test module")
}

/// Ranks 1 to 3 over F_2 and F_3, all with good reduction everywhere.
pub fn test_modules() -> Vec<DrinfeldModule> {
    vec![
        module(2, &["1"]),
        module(2, &["1", "1"]),
        module(2, &["x", "1"]),
        module(2, &["1", "x", "1"]),
        module(3, &["1"]),
        module(3, &["x", "1"]),
        module(3, &["2", "x^2", "1"]),
    ]
}

pub fn random_fq(fq: &Fq, rng: &mut ChaCha8Rng) -> FqElem {
    fq.elem(rng.gen_range(0..fq.q())).expect("in range")
}

pub fn random_poly(fq: &Fq, rng: &mut ChaCha8Rng, max_deg: usize) -> Poly<FqElem> {
    let d = rng.gen_range(0..=max_deg);
    ring_r(fq).from_vec((0..=d).map(|_| random_fq(fq, rng)).collect())
}

pub fn random_tau(fq: &Fq, rng: &mut ChaCha8Rng, max_deg: usize) -> TauPoly<Poly<FqElem>> {
    let tr = TauRing::new(ring_r(fq));
    let d = rng.gen_range(0..=max_deg);
    tr.from_vec((0..=d).map(|_| random_poly(fq, rng, 3)).collect())
}

/// `(ab)c = a(bc)`, distributivity, and `(ab)(x) = a(b(x))`.
pub fn skew_laws(fq: &Fq, a: &TauPoly<Poly<FqElem>>, b: &TauPoly<Poly<FqElem>>, c: &TauPoly<Poly<FqElem>>, x: &Poly<FqElem>) -> Check {
    let tr = TauRing::new(ring_r(fq));
    let show = |p: &TauPoly<Poly<FqElem>>| tr.fmt(p);
    if tr.mul(&tr.mul(a, b), c) != tr.mul(a, &tr.mul(b, c)) {
        return Err(format!("associativity fails for {}, {}, {}", show(a), show(b), show(c)));
    }
    if tr.mul(a, &tr.add(b, c)) != tr.add(&tr.mul(a, b), &tr.mul(a, c)) {
        return Err(format!("left distributivity fails for {}, {}, {}", show(a), show(b), show(c)));
    }
    if tr.mul(&tr.add(a, b), c) != tr.add(&tr.mul(a, c), &tr.mul(b, c)) {
        return Err(format!("right distributivity fails for {}, {}, {}", show(a), show(b), show(c)));
    }
    if tr.apply(&tr.mul(a, b), x) != tr.apply(a, &tr.apply(b, x)) {
        return Err(format!("action is not compatible with products: {}, {}", show(a), show(b)));
    }
    Ok(())
}

/// `φ` is an `F_q`-algebra map `A → R{τ}` with `φ_t` as given and constant
/// term `a(θ)`.
pub fn phi_hom_laws(e: &DrinfeldModule, a: &Poly<FqElem>, b: &Poly<FqElem>, c: FqElem) -> Check {
    let fq = e.fq();
    let ra = ring_a(fq);
    let tr = e.tau_ring();
    let (pa, pb) = (e.phi(a), e.phi(b));
    if e.phi(&ra.add(a, b)) != tr.add(&pa, &pb) {
        return Err("φ is not additive".into());
    }
    if e.phi(&ra.mul(a, b)) != tr.mul(&pa, &pb) {
        return Err("φ is not multiplicative".into());
    }
    if tr.mul(&pa, &pb) != tr.mul(&pb, &pa) {
        return Err("φ_a and φ_b do not commute".into());
    }
    if e.phi(&ra.constant(c)) != tr.constant(ring_r(fq).constant(c)) {
        return Err("φ does not fix constants".into());
    }
    if e.phi(&ra.x()) != e.phi_t() {
        return Err("φ(t) differs from φ_t".into());
    }
    // a(θ) as an element of R: same coefficients, other variable
    let a_theta = ring_r(fq).from_vec(a.coeffs().to_vec());
    if tr.coeff(&pa, 0) != a_theta {
        return Err("constant term of φ_a is not a(θ)".into());
    }
    Ok(())
}

/// `φ_t(x) = θx + Σ a_i x^{q^i}` on series in `θ^{-1}`.
fn phi_t_series(e: &DrinfeldModule, x: &LaurentSeries) -> Result<LaurentSeries, Error> {
    let fq = e.fq();
    let theta = LaurentSeries::monomial(fq, SeriesVar::Theta, fq.one(), -1);
    let mut acc = theta.mul(x)?;
    for (i, a) in e.coeffs().iter().enumerate() {
        let ai = LaurentSeries::from_poly(fq, SeriesVar::Theta, a);
        acc = acc.add(&ai.mul(&x.frobenius(i as u32 + 1))?)?;
    }
    Ok(acc)
}

/// For `z = θ^{-v}·(1 + …)` inside the ball: `log(exp z) = z`,
/// `exp(log z) = z`, `exp(θz) = φ_t(exp z)` and `log(φ_t z) = θ log z`,
/// all modulo `θ^{-prec}`.
pub fn explog_laws(e: &DrinfeldModule, z: &LaurentSeries, prec: i64) -> Check {
    let el = ExpLog::new(e);
    let err = |x: Error| x.to_string();
    let ez = el.exp(z, prec + 1).map_err(err)?;
    let back = el.log(&ez, prec).map_err(err)?;
    if !back.eq_mod(z, prec).map_err(err)? {
        return Err(format!("log(exp z) != z for z = {z}"));
    }
    let lz = el.log(z, prec + 1).map_err(err)?;
    if !el.exp(&lz, prec).map_err(err)?.eq_mod(z, prec).map_err(err)? {
        return Err(format!("exp(log z) != z for z = {z}"));
    }
    let theta = LaurentSeries::monomial(e.fq(), SeriesVar::Theta, e.fq().one(), -1);
    let tz = theta.mul(z).map_err(err)?;
    let lhs = el.exp(&tz, prec).map_err(err)?;
    let rhs = phi_t_series(e, &ez).map_err(err)?;
    if !lhs.eq_mod(&rhs, prec).map_err(err)? {
        return Err(format!("exp(θz) != φ_t(exp z) for z = {z}"));
    }
    let pz = phi_t_series(e, z).map_err(err)?;
    let lhs = el.log(&pz, prec).map_err(err)?;
    let rhs = theta.mul(&lz).map_err(err)?;
    if !lhs.eq_mod(&rhs, prec).map_err(err)? {
        return Err(format!("log(φ_t z) != θ log z for z = {z}"));
    }
    Ok(())
}

/// A random `z` with `v(z) >= v0`, where `v0` keeps `z` and `θz` in the ball.
pub fn random_ball_element(e: &DrinfeldModule, rng: &mut ChaCha8Rng, len: usize) -> LaurentSeries {
    let fq = e.fq();
    let v0 = ball_exponent(e).expect("ball exists") + 1;
    let mut coeffs: Vec<FqElem> = (0..len).map(|_| random_fq(fq, rng)).collect();
    coeffs[0] = fq.one();
    LaurentSeries::new(fq, SeriesVar::Theta, v0 + rng.gen_range(0..3), shtukalab_core::laurent::EXACT, coeffs)
}

/// `Σ_{d|n} d·N_d = q^n` for the enumerated irreducibles.
pub fn necklace_identity(fq: &Fq, n_max: usize) -> Check {
    let q = fq.q() as u64;
    let counts: Vec<u64> = (0..=n_max).map(|d| if d == 0 { 0 } else { irreducibles_of_degree(fq, d).len() as u64 }).collect();
    for n in 1..=n_max {
        if counts[n] != necklace_count(q, n) {
            return Err(format!("q={q}, n={n}: enumerated {} vs necklace {}", counts[n], necklace_count(q, n)));
        }
        let sum: u64 = (1..=n).filter(|d| n % d == 0).map(|d| d as u64 * counts[d]).sum();
        if sum != q.pow(n as u32) {
            return Err(format!("q={q}, n={n}: Σ d N_d = {sum}"));
        }
    }
    Ok(())
}

/// `c(X)` has coefficients in `A` (checked inside `local_lfactor`) and is
/// monic of degree `r` with `c(0) = ε·f(t)` up to a unit.
pub fn integrality(e: &DrinfeldModule, max_deg: usize) -> Result<usize, String> {
    let fq = e.fq();
    let a = ring_a(fq);
    let mut count = 0;
    for d in 1..=max_deg {
        for f in irreducibles_of_degree(fq, d) {
            let lf = local_lfactor(e, &f, 4).map_err(|x| format!("prime {}: {x}", a.fmt_elem(&f)))?;
            if lf.charpoly.len() != e.rank() + 1 || !a.is_one(&lf.charpoly[e.rank()]) {
                return Err(format!("prime {}: c(X) is not monic of degree r", a.fmt_elem(&f)));
            }
            if lf.charpoly[0].degree() != Some(d) {
                return Err(format!("prime {}: deg c(0) = {:?}", a.fmt_elem(&f), lf.charpoly[0].degree()));
            }
            count += 1;
        }
    }
    Ok(count)
}

/// For Carlitz, `P_m(T) = 1 - T/f(t)`, i.e. `c(X) = X - f(t)`.
pub fn carlitz_anchor(fq: &Fq, max_deg: usize) -> Result<usize, String> {
    let e = DrinfeldModule::carlitz(fq);
    let a = ring_a(fq);
    let mut count = 0;
    for d in 1..=max_deg {
        for f in irreducibles_of_degree(fq, d) {
            let lf = local_lfactor(&e, &f, 4).map_err(|x| x.to_string())?;
            let f_t = a.from_vec(f.coeffs().to_vec());
            if lf.charpoly != vec![a.neg(&f_t), a.one()] {
                return Err(format!("prime {}: c(X) = {}", a.fmt_elem(&f_t), lf.charpoly_text(fq)));
            }
            count += 1;
        }
    }
    Ok(count)
}

/// `c(X) mod p` against brute-force Frobenius on `E[p]` over `R/(f)`.
/// Pairs with `p(θ) ≡ 0 mod f` are skipped. Returns the number compared.
pub fn oracle_agreement(e: &DrinfeldModule, f_deg: usize, p_deg: usize, max_ext: usize) -> Result<usize, String> {
    let fq = e.fq();
    let a = ring_a(fq);
    let mut count = 0;
    for df in 1..=f_deg {
        for f in irreducibles_of_degree(fq, df) {
            let k = residue_field(fq, &f).map_err(|x| x.to_string())?;
            let lf = local_lfactor(e, &f, 4).map_err(|x| x.to_string())?;
            for dp in 1..=p_deg {
                for p in irreducibles_of_degree(fq, dp) {
                    let at_theta = a.eval_in(&p, &k, &k.gen(), |c| k.from_fq(*c));
                    if k.is_zero(&at_theta) {
                        continue;
                    }
                    let oracle = torsion_frobenius_oracle(e, &f, &p, max_ext).map_err(|x| x.to_string())?;
                    let reduced: Result<Vec<_>, _> = lf.charpoly.iter().map(|c| a.rem(c, &p)).collect();
                    let reduced = reduced.map_err(|x| x.to_string())?;
                    if reduced != oracle {
                        return Err(format!(
                            "f = {}, p = {}: c mod p = {:?}, oracle {:?}",
                            ring_r(fq).fmt_elem(&f),
                            a.fmt_elem(&p),
                            reduced.iter().map(|x| a.fmt_elem(x)).collect::<Vec<_>>(),
                            oracle.iter().map(|x| a.fmt_elem(x)).collect::<Vec<_>>()
                        ));
                    }
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// The Euler product is bit-identical with one and with `n` workers.
pub fn thread_determinism(e: &DrinfeldModule, prec: i64, n: usize) -> Check {
    let one = l_value(e, prec, 1).map_err(|x| x.to_string())?.to_json();
    let many = l_value(e, prec, n).map_err(|x| x.to_string())?.to_json();
    if one != many {
        return Err(format!("1 vs {n} workers differ: {one} / {many}"));
    }
    Ok(())
}
