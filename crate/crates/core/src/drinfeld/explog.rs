//! Exponential and logarithm of a Drinfeld module over `K_∞ = F_q((θ^{-1}))`.
//!
//! Coefficients come from
//! `e_n (θ^{q^n} - θ) = Σ_j a_j e_{n-j}^{q^j}` and
//! `l_n (θ^{q^n} - θ) = -Σ_j l_{n-j} a_j^{q^{n-j}}`,
//! computed as truncated series in `u = θ^{-1}` with just enough precision.
//! Valuations below are in `u`.

use super::DrinfeldModule;
use crate::error::{Error, Result};
use crate::laurent::{LaurentSeries, SeriesVar};

const MAX_TERMS: usize = 64;
const MAX_QPOW: i64 = 1 << 40;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Exp,
    Log,
}

/// Evaluator for `exp_E` and `log_E` with certified truncation.
#[derive(Clone, Debug)]
pub struct ExpLog {
    module: DrinfeldModule,
    q: i64,
    // deg a_j for j = 1..r, None when a_j = 0
    degs: Vec<Option<i64>>,
    a: Vec<LaurentSeries>,
}

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

impl ExpLog {
    pub fn new(e: &DrinfeldModule) -> Self {
        let fq = e.fq();
        let degs = e.coeffs().iter().map(|c| c.degree().map(|d| d as i64)).collect();
        let a = e.coeffs().iter().map(|c| LaurentSeries::from_poly(fq, SeriesVar::Theta, c)).collect();
        ExpLog { module: e.clone(), q: fq.q() as i64, degs, a }
    }

    pub fn module(&self) -> &DrinfeldModule {
        &self.module
    }

    fn qpow(&self, n: usize) -> Result<i64> {
        let mut x: i64 = 1;
        for _ in 0..n {
            x = x.saturating_mul(self.q);
            if x > MAX_QPOW {
                return Err(Error::Budget(format!("q^{n} exceeds the supported range")));
            }
        }
        Ok(x)
    }

    fn rank(&self) -> usize {
        self.degs.len()
    }

    fn max_deg(&self) -> i64 {
        self.degs.iter().flatten().copied().max().unwrap_or(0)
    }

    /// Next term of `T(n) = q^n + min_j (q^j T(n-j) - deg a_j)`, the lower
    /// bound on `v(e_n z^{q^n})` when `T(0) = v(z)`.
    fn exp_step(&self, t: &[i64]) -> Result<i64> {
        let n = t.len();
        let mut best = i64::MAX;
        for (j, d) in self.degs.iter().enumerate().map(|(i, d)| (i + 1, d)) {
            if j > n {
                break;
            }
            if let Some(d) = d {
                best = best.min(self.qpow(j)?.saturating_mul(t[n - j]).saturating_sub(*d));
            }
        }
        Ok(self.qpow(n)?.saturating_add(best))
    }

    /// Next term of `T(n) = q^n (1+v) + min_j (T(n-j) - q^{n-j}(v + deg a_j))`,
    /// the lower bound on `v(l_n z^{q^n})` with `T(0) = v = v(z)`.
    fn log_step(&self, t: &[i64], v: i64) -> Result<i64> {
        let n = t.len();
        let mut best = i64::MAX;
        for (j, d) in self.degs.iter().enumerate().map(|(i, d)| (i + 1, d)) {
            if j > n {
                break;
            }
            if let Some(d) = d {
                best = best.min(t[n - j].saturating_sub(self.qpow(n - j)?.saturating_mul(v + d)));
            }
        }
        Ok(self.qpow(n)?.saturating_mul(1 + v).saturating_add(best))
    }

    fn step(&self, kind: Kind, t: &[i64], v: i64) -> Result<i64> {
        match kind {
            Kind::Exp => self.exp_step(t),
            Kind::Log => self.log_step(t, v),
        }
    }

    /// Lower bounds on `v(e_0), …, v(e_n)`.
    pub fn exp_valuation_bounds(&self, n: usize) -> Result<Vec<i64>> {
        self.term_bounds(Kind::Exp, 0, n)
    }

    /// Lower bounds on `v(l_0), …, v(l_n)`.
    pub fn log_valuation_bounds(&self, n: usize) -> Result<Vec<i64>> {
        self.term_bounds(Kind::Log, 0, n)
    }

    fn term_bounds(&self, kind: Kind, v: i64, n: usize) -> Result<Vec<i64>> {
        let mut t = vec![v];
        for _ in 0..n {
            let next = self.step(kind, &t, v)?;
            t.push(next);
        }
        Ok(t)
    }

    /// `q^j (1+v) >= v + deg a_j` for every `j`: once `r` consecutive log
    /// terms reach a bound, all later ones do.
    pub fn log_stable(&self, v: i64) -> bool {
        self.degs.iter().enumerate().all(|(i, d)| match d {
            None => true,
            Some(d) => self.qpow(i + 1).map(|qj| qj.saturating_mul(1 + v) >= v + d).unwrap_or(false),
        })
    }

    /// Smallest `n0 >= r-1` past which every term bound stays `>= floor`.
    /// Returns the bounds `T(0..=n0)`.
    fn certify_tail(&self, kind: Kind, v: i64, floor: i64) -> Result<Vec<i64>> {
        let floor = floor.max(0);
        if kind == Kind::Log && !self.log_stable(v) {
            return Err(Error::OutsideBall(format!(
                "log series is not certified for valuation {v} (stability condition fails)"
            )));
        }
        let r = self.rank();
        let dmax = self.max_deg();
        let mut t = vec![v];
        loop {
            let n0 = t.len() - 1;
            if n0 + 1 >= r {
                let window_ok = t[n0 + 1 - r..].iter().all(|&x| x >= floor);
                let grows = kind == Kind::Log || self.qpow(n0 + 1).map(|x| x >= dmax).unwrap_or(true);
                if window_ok && grows {
                    return Ok(t);
                }
            }
            if t.len() > MAX_TERMS {
                return Err(Error::Certificate(format!(
                    "no tail certificate within {MAX_TERMS} terms at valuation {v}"
                )));
            }
            let next = self.step(kind, &t, v)?;
            t.push(next);
        }
    }

    /// Indices `n` whose term can be nonzero modulo `u^prec` for an argument
    /// of valuation `v`, with the certified cutoff `n0`.
    pub fn exp_terms_needed(&self, v: i64, prec: i64) -> Result<(Vec<usize>, usize)> {
        let t = self.certify_tail(Kind::Exp, v, prec)?;
        Ok(((0..t.len()).filter(|&n| t[n] < prec).collect(), t.len() - 1))
    }

    pub fn log_terms_needed(&self, v: i64, prec: i64) -> Result<(Vec<usize>, usize)> {
        let t = self.certify_tail(Kind::Log, v, prec)?;
        Ok(((0..t.len()).filter(|&n| t[n] < prec).collect(), t.len() - 1))
    }

    /// Coefficients `0..=n`, each `c_m` known at least modulo `u^{req[m]}`.
    fn coefficients(&self, kind: Kind, req: &[i64]) -> Result<Vec<LaurentSeries>> {
        let fq = self.module.fq();
        let theta = LaurentSeries::monomial(fq, SeriesVar::Theta, fq.one(), -1);
        let mut out: Vec<LaurentSeries> = vec![LaurentSeries::one(fq, SeriesVar::Theta)];
        for n in 1..req.len() {
            let qn = self.qpow(n)?;
            let dn = LaurentSeries::monomial(fq, SeriesVar::Theta, fq.one(), -qn).sub(&theta)?;
            let mut s = LaurentSeries::zero(fq, SeriesVar::Theta, crate::laurent::EXACT);
            for (j, d) in self.degs.iter().enumerate().map(|(i, d)| (i + 1, d)) {
                if j > n || d.is_none() {
                    continue;
                }
                let term = match kind {
                    Kind::Exp => self.a[j - 1].mul(&out[n - j].frobenius(j as u32))?,
                    Kind::Log => out[n - j].mul(&self.a[j - 1].frobenius((n - j) as u32))?,
                };
                s = s.add(&term)?;
            }
            if kind == Kind::Log {
                s = s.neg();
            }
            let cn = s.div(&dn, Some(req[n]))?;
            out.push(cn);
        }
        Ok(out)
    }

    /// Back-propagates precision requirements through the recursion,
    /// never asking for less than the valuation bound.
    fn propagate(&self, kind: Kind, mut req: Vec<i64>) -> Result<Vec<i64>> {
        let bounds = self.term_bounds(kind, 0, req.len() - 1)?;
        for m in (1..req.len()).rev() {
            req[m] = req[m].max(bounds[m]);
            let qm = self.qpow(m)?;
            for (j, d) in self.degs.iter().enumerate().map(|(i, d)| (i + 1, d)) {
                let Some(d) = d else { continue };
                if j > m {
                    break;
                }
                let need = match kind {
                    Kind::Exp => ceil_div(req[m] - qm + d, self.qpow(j)?),
                    Kind::Log => req[m] - qm + self.qpow(m - j)?.saturating_mul(*d),
                };
                req[m - j] = req[m - j].max(need);
            }
        }
        req[0] = req[0].max(0);
        Ok(req)
    }

    /// `e_0, …, e_n` modulo `u^prec`.
    pub fn exp_coefficients(&self, n: usize, prec: i64) -> Result<Vec<LaurentSeries>> {
        let req = self.propagate(Kind::Exp, vec![prec; n + 1])?;
        Ok(self.coefficients(Kind::Exp, &req)?.into_iter().map(|c| c.truncate(prec)).collect())
    }

    /// `l_0, …, l_n` modulo `u^prec`.
    pub fn log_coefficients(&self, n: usize, prec: i64) -> Result<Vec<LaurentSeries>> {
        let req = self.propagate(Kind::Log, vec![prec; n + 1])?;
        Ok(self.coefficients(Kind::Log, &req)?.into_iter().map(|c| c.truncate(prec)).collect())
    }

    fn eval(&self, kind: Kind, z: &LaurentSeries, prec: i64) -> Result<LaurentSeries> {
        let fq = self.module.fq();
        let z = z.clone().with_var(SeriesVar::Theta);
        let Some(v) = z.valuation() else {
            return Ok(LaurentSeries::zero(fq, SeriesVar::Theta, prec.min(z.prec())));
        };
        let (needed, n0) = match kind {
            Kind::Exp => self.exp_terms_needed(v, prec)?,
            Kind::Log => self.log_terms_needed(v, prec)?,
        };
        let mut req = vec![i64::MIN / 4; n0 + 1];
        for &n in &needed {
            req[n] = prec - self.qpow(n)?.saturating_mul(v);
        }
        let req = self.propagate(kind, req)?;
        let coeffs = self.coefficients(kind, &req)?;
        let mut acc = LaurentSeries::zero(fq, SeriesVar::Theta, crate::laurent::EXACT);
        for &n in &needed {
            let term = coeffs[n].mul(&z.frobenius(n as u32))?;
            acc = acc.add(&term)?;
        }
        Ok(acc.truncate(prec))
    }

    /// `exp_E(z)` modulo `u^prec` (less if `z` itself is less precise).
    pub fn exp(&self, z: &LaurentSeries, prec: i64) -> Result<LaurentSeries> {
        self.eval(Kind::Exp, z, prec)
    }

    /// `log_E(z)` modulo `u^prec`; fails with `OutsideBall` when the series
    /// cannot be certified at `v(z)`.
    pub fn log(&self, z: &LaurentSeries, prec: i64) -> Result<LaurentSeries> {
        self.eval(Kind::Log, z, prec)
    }

    /// Whether every bound `T(i)`, `i >= 1`, started from `T(0) = v`, is `>= floor`.
    fn bounded_below(&self, kind: Kind, v: i64, floor: i64) -> Result<bool> {
        let r = self.rank();
        let dmax = self.max_deg();
        let mut t = vec![v];
        while t.len() <= MAX_TERMS {
            let next = self.step(kind, &t, v)?;
            if next < floor {
                return Ok(false);
            }
            t.push(next);
            let n0 = t.len() - 1;
            if n0 >= r {
                let grows = kind == Kind::Log || self.qpow(n0 + 1).map(|x| x >= dmax).unwrap_or(true);
                if grows {
                    return Ok(true);
                }
            }
        }
        Err(Error::Certificate("term bounds undecided within budget".into()))
    }
}

/// Least `b >= 1` such that on `v(z) >= b`: `exp` and `log` are isometries
/// (`v(e_i z^{q^i}) > v(z)`, same for `l_i`), the log tail is certified, and
/// `v(e_i z^{q^i}) >= q b`.
pub fn ball_exponent(e: &DrinfeldModule) -> Result<i64> {
    let el = ExpLog::new(e);
    let bexp1 = el.exp_valuation_bounds(1)?[1];
    for b in 1..=4096 {
        if !el.bounded_below(Kind::Exp, b, b + 1)? {
            continue;
        }
        if bexp1 >= 0 && !el.bounded_below(Kind::Exp, b, el.q * b)? {
            continue;
        }
        if !el.log_stable(b) || !el.bounded_below(Kind::Log, b, b + 1)? {
            continue;
        }
        return Ok(b);
    }
    Err(Error::Budget("no ball exponent below 4096".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fq, FqElem};

    fn theta_series(fq: &Fq, k: i64) -> LaurentSeries {
        LaurentSeries::monomial(fq, SeriesVar::Theta, fq.one(), k)
    }

    #[test]
    fn carlitz_coefficient_valuations() {
        let f2 = Fq::prime(2).unwrap();
        let el = ExpLog::new(&DrinfeldModule::carlitz(&f2));
        let e = el.exp_coefficients(3, 40).unwrap();
        let l = el.log_coefficients(3, 40).unwrap();
        // e_n has valuation n q^n, l_n has valuation q + … + q^n
        assert_eq!(e[1].valuation(), Some(2));
        assert_eq!(e[2].valuation(), Some(8));
        assert_eq!(e[3].valuation(), Some(24));
        assert_eq!(l[2].valuation(), Some(6));
        assert_eq!(el.exp_valuation_bounds(3).unwrap(), vec![0, 2, 8, 24]);
        assert_eq!(el.log_valuation_bounds(3).unwrap(), vec![0, 2, 6, 14]);
    }

    #[test]
    fn exp_log_inverse() {
        let f3 = Fq::prime(3).unwrap();
        let el = ExpLog::new(&DrinfeldModule::carlitz(&f3));
        let z = theta_series(&f3, 2).add(&theta_series(&f3, 5)).unwrap();
        let ez = el.exp(&z, 30).unwrap();
        let back = el.log(&ez, 30).unwrap();
        assert!(back.eq_mod(&z, 30).unwrap());
    }

    #[test]
    fn carlitz_exp_of_theta_power() {
        // e_C(z) = z + z^q/(θ^q - θ) + …; check the first correction term
        let f2 = Fq::prime(2).unwrap();
        let el = ExpLog::new(&DrinfeldModule::carlitz(&f2));
        let z = theta_series(&f2, 1);
        let ez = el.exp(&z, 6).unwrap();
        let expect = LaurentSeries::new(&f2, SeriesVar::Theta, 1, 6, vec![f2.one(), FqElem::ZERO, FqElem::ZERO, f2.one(), f2.one()]);
        assert_eq!(ez, expect);
    }

    #[test]
    fn balls() {
        let f2 = Fq::prime(2).unwrap();
        assert_eq!(ball_exponent(&DrinfeldModule::carlitz(&f2)).unwrap(), 1);
        let e = DrinfeldModule::from_json(r#"{"q":2,"rank":2,"coeffs":["x","1"]}"#).unwrap();
        assert!(ball_exponent(&e).unwrap() >= 1);
        let big = DrinfeldModule::from_json(r#"{"q":2,"rank":1,"coeffs":["1"]}"#).unwrap();
        assert!(ExpLog::new(&big).log(&theta_series(&f2, -3), 10).is_err());
    }
}
