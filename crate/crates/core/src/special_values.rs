//! `L(E*, 0)` as a certified Euler product, and Carlitz cross-checks.

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::drinfeld::{local_lfactor, DrinfeldModule, ExpLog};
use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::irreducible::irreducibles_of_degree;
use crate::laurent::{LaurentSeries, SeriesVar};
use crate::poly::{ring_a, Poly};
use crate::ring::Ring;

/// Result of an Euler product evaluation.
#[derive(Clone, Debug)]
pub struct LValueReport {
    /// `L(E*, 0)` in `F_q((t^{-1}))`, known modulo `t^{-prec}`.
    pub value: LaurentSeries,
    pub prec_achieved: i64,
    /// Primes of degree `<= cutoff_degree` were multiplied in.
    pub cutoff_degree: usize,
    pub primes: usize,
    /// Factors whose distance from 1 was checked against the tail bound.
    pub factors_checked: usize,
}

impl LValueReport {
    pub fn to_json(&self) -> Value {
        json!({
            "value": self.value.to_json(),
            "prec_achieved": self.prec_achieved,
            "cutoff_degree": self.cutoff_degree,
            "primes": self.primes,
            "factors_checked": self.factors_checked,
        })
    }
}

/// Degree cutoff making the omitted tail vanish modulo `t^{-prec}`:
/// every factor of degree `d` satisfies `v(P_m(1)^{-1} - 1) >= ceil(d/r)`.
pub fn euler_cutoff(rank: usize, prec: i64) -> usize {
    rank * (prec.max(1) - 1) as usize
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))
}

/// `Π_{deg f <= D} P_f(1)^{-1}` modulo `t^{-prec}` with `D` from
/// [`euler_cutoff`], checking each factor against the tail bound.
pub fn l_value(e: &DrinfeldModule, prec: i64, threads: usize) -> Result<LValueReport> {
    l_value_with_cutoff(e, prec, euler_cutoff(e.rank(), prec), threads)
}

/// Same product with an explicit degree cutoff; the result is only
/// certified modulo `t^{-prec}` when `cutoff >= euler_cutoff(r, prec)`.
pub fn l_value_with_cutoff(
    e: &DrinfeldModule,
    prec: i64,
    cutoff: usize,
    threads: usize,
) -> Result<LValueReport> {
    if prec < 1 {
        return Err(Error::InvalidInput("precision must be at least 1".into()));
    }
    let fq = e.fq();
    let r = e.rank();
    let pool = pool(threads)?;
    let mut acc = LaurentSeries::one(fq, SeriesVar::T).truncate(prec);
    let mut primes = 0;
    for d in 1..=cutoff {
        let bound = d.div_ceil(r) as i64;
        let ps = irreducibles_of_degree(fq, d);
        let factors: Vec<LaurentSeries> = pool.install(|| {
            ps.par_iter()
                .map(|f| {
                    let lf = crate::drinfeld::local_lfactor_trusted(e, f, prec)?;
                    let dist = lf.inverse.sub(&LaurentSeries::one(fq, SeriesVar::T))?;
                    if dist.val_bound() < bound.min(prec) {
                        return Err(Error::Certificate(format!(
                            "factor at {} is {} from 1, expected valuation >= {bound}",
                            e.ring_r().fmt_elem(f),
                            dist
                        )));
                    }
                    Ok(lf.inverse)
                })
                .collect::<Result<Vec<_>>>()
        })?;
        for x in &factors {
            acc = acc.mul(x)?.truncate(prec);
        }
        primes += ps.len();
    }
    let prec_achieved = acc.prec();
    Ok(LValueReport { value: acc, prec_achieved, cutoff_degree: cutoff, primes, factors_checked: primes })
}

/// `Σ 1/a` over monic `a` of degree `< prec` whose prime factors all have
/// degree `<= d_max`, enumerated as products of primes.
pub fn carlitz_smooth_sum(fq: &Fq, prec: i64, d_max: usize) -> Result<LaurentSeries> {
    let a = ring_a(fq);
    let top = (prec.max(1) - 1) as usize;
    let mut primes = Vec::new();
    for d in 1..=d_max.min(top) {
        primes.extend(irreducibles_of_degree(fq, d));
    }
    let mut sum = LaurentSeries::zero(fq, SeriesVar::T, prec);
    // depth-first over nondecreasing prime indices
    let mut stack: Vec<(Poly<FqElem>, usize)> = vec![(a.one(), 0)];
    while let Some((m, start)) = stack.pop() {
        let sm = LaurentSeries::from_poly(fq, SeriesVar::T, &m);
        sum = sum.add(&sm.inv(Some(prec))?)?;
        let dm = m.degree().unwrap_or(0);
        for (i, p) in primes.iter().enumerate().skip(start) {
            let dp = p.degree().unwrap_or(0);
            if dm + dp > top {
                continue;
            }
            stack.push((a.mul(&m, p), i));
        }
    }
    Ok(sum.truncate(prec))
}

/// `log_C(1) = Σ_i (-1)^i / Π_{k=1}^i (t^{q^k} - t)` modulo `t^{-prec}`.
pub fn carlitz_log_one_series(fq: &Fq, prec: i64) -> Result<LaurentSeries> {
    let q = fq.q() as i64;
    let t = LaurentSeries::monomial(fq, SeriesVar::T, fq.one(), -1);
    let mut sum = LaurentSeries::one(fq, SeriesVar::T).truncate(prec);
    let mut den = LaurentSeries::one(fq, SeriesVar::T);
    let mut qk = 1i64;
    let mut val = 0i64;
    let mut sign = fq.one();
    for _ in 1.. {
        qk = qk.checked_mul(q).ok_or_else(|| Error::Budget("q^k overflow".into()))?;
        val += qk;
        if val >= prec {
            break;
        }
        let dk = LaurentSeries::monomial(fq, SeriesVar::T, fq.one(), -qk).sub(&t)?;
        den = den.mul(&dk)?;
        sign = fq.neg(sign);
        sum = sum.add(&den.inv(Some(prec))?.scale(sign))?;
    }
    Ok(sum.truncate(prec))
}

/// One line of the Carlitz comparison.
#[derive(Clone, Debug)]
pub struct CarlitzCheck {
    pub cutoff: usize,
    pub prec: i64,
    pub euler: LaurentSeries,
    pub smooth: LaurentSeries,
    pub log_series: LaurentSeries,
    /// `log_C(1)` through the generic logarithm, renamed to `t`.
    pub log_generic: LaurentSeries,
    pub agree: bool,
}

impl CarlitzCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "cutoff_degree": self.cutoff,
            "compared_mod": format!("t^-{}", self.prec),
            "euler": self.euler.to_json(),
            "smooth_sum": self.smooth.to_json(),
            "log_series": self.log_series.to_json(),
            "log_generic": self.log_generic.to_json(),
            "agree": self.agree,
        })
    }
}

/// Euler product up to degree `cutoff`, the smooth sum, and `log_C(1)`,
/// compared modulo `t^{-(cutoff+1)}`.
pub fn carlitz_check(fq: &Fq, cutoff: usize, threads: usize) -> Result<CarlitzCheck> {
    let prec = cutoff as i64 + 1;
    let e = DrinfeldModule::carlitz(fq);
    let euler = l_value_with_cutoff(&e, prec, cutoff, threads)?.value;
    let smooth = carlitz_smooth_sum(fq, prec, cutoff)?;
    let log_series = carlitz_log_one_series(fq, prec)?;
    let one = LaurentSeries::one(fq, SeriesVar::Theta);
    let log_generic = ExpLog::new(&e).log(&one, prec)?.with_var(SeriesVar::T);
    let agree = euler.eq_mod(&smooth, prec)?
        && euler.eq_mod(&log_series, prec)?
        && euler.eq_mod(&log_generic, prec)?;
    Ok(CarlitzCheck { cutoff, prec, euler, smooth, log_series, log_generic, agree })
}

/// The local factor at a prime as JSON, for the CLI.
pub fn lfactor_json(e: &DrinfeldModule, f: &Poly<FqElem>, prec: i64) -> Result<Value> {
    Ok(local_lfactor(e, f, prec)?.to_json(e.fq()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carlitz_small() {
        let f2 = Fq::prime(2).unwrap();
        let c = carlitz_check(&f2, 6, 1).unwrap();
        assert!(c.agree, "{c:?}");
        let f3 = Fq::prime(3).unwrap();
        assert!(carlitz_check(&f3, 4, 2).unwrap().agree);
    }

    #[test]
    fn cutoff_formula() {
        assert_eq!(euler_cutoff(1, 17), 16);
        assert_eq!(euler_cutoff(2, 10), 18);
    }
}
