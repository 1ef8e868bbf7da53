//! Truncated Laurent series in `u = t^{-1}` (or `θ^{-1}`) over `F_q`.
//!
//! A series is known modulo `u^prec`; `prec` is absolute. Exact values
//! (polynomials in `t`) carry the sentinel precision [`EXACT`].

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::parse;
use crate::poly::{Poly, PolyRing};
use crate::ring::Ring;

/// Precision of exactly known series.
pub const EXACT: i64 = i64::MAX / 4;

fn sat(x: i64) -> i64 {
    x.min(EXACT)
}

/// Which uniformizer the series is written in; only affects printing and JSON.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum SeriesVar {
    /// `F_q((t^{-1}))`, the completion of `A`.
    T,
    /// `F_q((θ^{-1}))`, the completion of `R`.
    Theta,
}

impl SeriesVar {
    pub fn name(self) -> &'static str {
        match self {
            SeriesVar::T => "t",
            SeriesVar::Theta => "x",
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    fq: Fq,
    var: SeriesVar,
    // exponent of u of coeffs[0]; equals prec for a series that is zero mod u^prec
    start: i64,
    prec: i64,
    coeffs: Vec<FqElem>,
}

impl LaurentSeries {
    /// Builds `sum c_k u^(start+k) + O(u^prec)`, normalizing zeros.
    pub fn new(fq: &Fq, var: SeriesVar, start: i64, prec: i64, coeffs: Vec<FqElem>) -> Self {
        let prec = sat(prec);
        let mut coeffs = coeffs;
        let lead = coeffs.iter().position(|c| !c.is_zero());
        let mut start = start;
        match lead {
            None => coeffs.clear(),
            Some(i) => {
                coeffs.drain(..i);
                start += i as i64;
            }
        }
        if prec < EXACT {
            let room = (prec - start).max(0) as usize;
            coeffs.truncate(room);
        }
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            start = prec;
        }
        LaurentSeries { fq: fq.clone(), var, start, prec, coeffs }
    }

    pub fn zero(fq: &Fq, var: SeriesVar, prec: i64) -> Self {
        LaurentSeries::new(fq, var, 0, prec, Vec::new())
    }

    pub fn one(fq: &Fq, var: SeriesVar) -> Self {
        LaurentSeries::monomial(fq, var, fq.one(), 0)
    }

    /// The exact series `c u^k`.
    pub fn monomial(fq: &Fq, var: SeriesVar, c: FqElem, k: i64) -> Self {
        LaurentSeries::new(fq, var, k, EXACT, vec![c])
    }

    /// The exact image of a polynomial in `t` (or `θ`).
    pub fn from_poly(fq: &Fq, var: SeriesVar, p: &Poly<FqElem>) -> Self {
        match p.degree() {
            None => LaurentSeries::zero(fq, var, EXACT),
            Some(d) => {
                LaurentSeries::new(fq, var, -(d as i64), EXACT, p.coeffs().iter().rev().copied().collect())
            }
        }
    }

    pub fn fq(&self) -> &Fq {
        &self.fq
    }
    pub fn var(&self) -> SeriesVar {
        self.var
    }
    pub fn with_var(mut self, var: SeriesVar) -> Self {
        self.var = var;
        self
    }
    pub fn prec(&self) -> i64 {
        self.prec
    }
    pub fn is_exact(&self) -> bool {
        self.prec >= EXACT
    }
    /// True when the series is zero modulo its precision.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    /// Valuation in `u`, `None` when indistinguishable from zero.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }
    /// Lower bound on the valuation (`prec` for a zero series).
    pub fn val_bound(&self) -> i64 {
        self.start
    }
    pub fn lead(&self) -> Option<FqElem> {
        self.coeffs.first().copied()
    }

    /// Coefficient of `u^k`.
    pub fn coeff(&self, k: i64) -> Result<FqElem> {
        if k >= self.prec {
            return Err(Error::Precision(format!("coefficient of u^{k} beyond precision {}", self.prec)));
        }
        Ok(self.coeff_known(k))
    }

    fn coeff_known(&self, k: i64) -> FqElem {
        if k < self.start {
            return FqElem::ZERO;
        }
        self.coeffs.get((k - self.start) as usize).copied().unwrap_or(FqElem::ZERO)
    }

    /// Nonzero terms as `(exponent of u, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, FqElem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.start + i as i64, *c))
    }

    /// Highest exponent carrying a coefficient (for exact series).
    pub fn last_exponent(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.start + self.coeffs.len() as i64 - 1)
    }

    fn check(&self, other: &Self) -> Result<()> {
        self.fq.check_same(&other.fq)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Result<Self> {
        self.check(other)?;
        let prec = self.prec.min(other.prec);
        let lo = self.start.min(other.start);
        let end = |x: &Self| if x.coeffs.is_empty() { lo } else { x.start + x.coeffs.len() as i64 };
        let (end_a, end_b) = (end(self), end(other));
        let hi = end_a.max(end_b).min(prec);
        if hi <= lo {
            return Ok(LaurentSeries::zero(&self.fq, self.var, prec));
        }
        let mut c = Vec::with_capacity((hi - lo) as usize);
        for k in lo..hi {
            let x = self.coeff_known(k);
            let y = other.coeff_known(k);
            c.push(if negate { self.fq.sub(x, y) } else { self.fq.add(x, y) });
        }
        Ok(LaurentSeries::new(&self.fq, self.var, lo, prec, c))
    }

    pub fn neg(&self) -> Self {
        let c = self.coeffs.iter().map(|&x| self.fq.neg(x)).collect();
        LaurentSeries::new(&self.fq, self.var, self.start, self.prec, c)
    }

    pub fn scale(&self, s: FqElem) -> Self {
        let c = self.coeffs.iter().map(|&x| self.fq.mul(s, x)).collect();
        LaurentSeries::new(&self.fq, self.var, self.start, self.prec, c)
    }

    /// Product with precision `min(N_a + v_b, N_b + v_a)`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let (va, vb) = (self.start, other.start);
        let pa = if self.is_exact() { EXACT } else { sat(self.prec + vb) };
        let pb = if other.is_exact() { EXACT } else { sat(other.prec + va) };
        let prec = pa.min(pb);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(LaurentSeries::zero(&self.fq, self.var, prec));
        }
        let full = self.coeffs.len() + other.coeffs.len() - 1;
        let len = if prec >= EXACT { full } else { ((prec - va - vb).max(0) as usize).min(full) };
        let (sparse, dense) = if self.nnz() <= other.nnz() { (self, other) } else { (other, self) };
        let mut out = vec![FqElem::ZERO; len];
        let fq = &self.fq;
        for (i, &x) in sparse.coeffs.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (o, &y) in out[i..].iter_mut().zip(dense.coeffs.iter()) {
                if !y.is_zero() {
                    *o = fq.add(*o, fq.mul(x, y));
                }
            }
        }
        Ok(LaurentSeries::new(fq, self.var, va + vb, prec, out))
    }

    fn nnz(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Quotient `self / other`, with precision
    /// `min(N_a - v_b, N_b - 2 v_b + v_a)` further capped by `cap`.
    pub fn div(&self, other: &Self, cap: Option<i64>) -> Result<Self> {
        self.check(other)?;
        let vb = other.valuation().ok_or_else(|| {
            Error::Precision(format!("division by a series that is zero modulo u^{}", other.prec))
        })?;
        let va = self.start;
        let pa = if self.is_exact() { EXACT } else { sat(self.prec - vb) };
        let pb = if other.is_exact() { EXACT } else { sat(other.prec - 2 * vb + va) };
        let mut prec = pa.min(pb);
        if let Some(c) = cap {
            prec = prec.min(c);
        }
        if self.coeffs.is_empty() {
            return Ok(LaurentSeries::zero(&self.fq, self.var, prec));
        }
        let monomial = other.coeffs.len() == 1;
        if prec >= EXACT && !monomial {
            return Err(Error::Precision("exact division by a non-monomial needs a precision cap".into()));
        }
        let fq = &self.fq;
        let inv_lead = fq.inv(other.coeffs[0])?;
        let vq = va - vb;
        if monomial {
            let c = self.coeffs.iter().map(|&x| fq.mul(x, inv_lead)).collect();
            return Ok(LaurentSeries::new(fq, self.var, vq, prec, c));
        }
        let len = (prec - vq).max(0) as usize;
        let tail: Vec<(usize, FqElem)> = other
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(j, c)| !c.is_zero() && *j < len)
            .map(|(j, &c)| (j, c))
            .collect();
        let mut out = vec![FqElem::ZERO; len];
        for k in 0..len {
            let mut acc = self.coeffs.get(k).copied().unwrap_or(FqElem::ZERO);
            for &(j, bj) in &tail {
                if j > k {
                    break;
                }
                acc = fq.sub(acc, fq.mul(bj, out[k - j]));
            }
            out[k] = fq.mul(acc, inv_lead);
        }
        Ok(LaurentSeries::new(fq, self.var, vq, prec, out))
    }

    pub fn inv(&self, cap: Option<i64>) -> Result<Self> {
        LaurentSeries::one(&self.fq, self.var).div(self, cap)
    }

    /// Multiplies by `u^n`.
    pub fn shift(&self, n: i64) -> Self {
        let prec = if self.is_exact() { EXACT } else { self.prec + n };
        let start = if self.coeffs.is_empty() { prec } else { self.start + n };
        LaurentSeries { fq: self.fq.clone(), var: self.var, start, prec, coeffs: self.coeffs.clone() }
    }

    /// Forgets everything from `u^n` on.
    pub fn truncate(&self, n: i64) -> Self {
        LaurentSeries::new(&self.fq, self.var, self.start, self.prec.min(n), self.coeffs.clone())
    }

    /// The `q^k`-th power. Coefficients lie in `F_q`, so only exponents move.
    pub fn frobenius(&self, k: u32) -> Self {
        let qk = (self.fq.q() as i64).saturating_pow(k);
        let prec = if self.is_exact() { EXACT } else { sat(self.prec.saturating_mul(qk)) };
        if self.coeffs.is_empty() {
            return LaurentSeries::zero(&self.fq, self.var, prec);
        }
        let span = (self.coeffs.len() as i64 - 1).saturating_mul(qk);
        let len = if prec >= EXACT { span + 1 } else { (prec - self.start * qk).min(span + 1) };
        let mut out = vec![FqElem::ZERO; len.max(0) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let idx = i as i64 * qk;
            if idx >= len {
                break;
            }
            out[idx as usize] = c;
        }
        LaurentSeries::new(&self.fq, self.var, self.start * qk, prec, out)
    }

    /// Equality of all coefficients below `u^n`; errors if either side is unknown there.
    pub fn eq_mod(&self, other: &Self, n: i64) -> Result<bool> {
        if self.prec < n || other.prec < n {
            return Err(Error::Precision(format!(
                "comparison modulo u^{n} needs precision {n}, have {} and {}",
                self.prec, other.prec
            )));
        }
        Ok(self.truncate(n) == other.truncate(n).with_var(self.var))
    }

    /// First exponent below `n` where the two series differ.
    pub fn first_difference(&self, other: &Self, n: i64) -> Option<i64> {
        let lo = self.start.min(other.start);
        (lo..n.min(self.prec).min(other.prec)).find(|&k| self.coeff_known(k) != other.coeff_known(k))
    }

    /// The part with nonpositive exponents, as a polynomial in `t` (resp. `θ`).
    pub fn polynomial_part(&self, ring: &PolyRing<Fq>) -> Poly<FqElem> {
        if self.start > 0 || self.coeffs.is_empty() {
            return ring.zero();
        }
        let deg = (-self.start) as usize;
        let mut c = vec![FqElem::ZERO; deg + 1];
        for (k, x) in self.terms() {
            if k <= 0 {
                c[(-k) as usize] = x;
            }
        }
        ring.from_vec(c)
    }

    /// The terms with exponents in `[lo, hi)`, keeping precision.
    pub fn window(&self, lo: i64, hi: i64) -> Self {
        let c: Vec<FqElem> = (lo..hi.min(self.prec)).map(|k| self.coeff_known(k)).collect();
        LaurentSeries::new(&self.fq, self.var, lo, self.prec, c)
    }

    /// The series with terms of exponent `< lo` removed.
    pub fn drop_below(&self, lo: i64) -> Self {
        if lo <= self.start {
            return self.clone();
        }
        let skip = ((lo - self.start) as usize).min(self.coeffs.len());
        LaurentSeries::new(&self.fq, self.var, lo, self.prec, self.coeffs[skip..].to_vec())
    }

    /// `v(x) = 0`, leading coefficient 1, and `v(x - 1) >= 1`.
    pub fn is_one_unit(&self) -> bool {
        self.prec >= 1 && self.start == 0 && self.coeffs[0] == FqElem::ONE
    }

    pub fn to_json(&self) -> Value {
        let hi = if self.is_exact() { self.start + self.coeffs.len() as i64 } else { self.prec };
        let lo = if self.coeffs.is_empty() { hi } else { self.start };
        let coeffs: Vec<Value> = (lo..hi)
            .map(|k| {
                let c = self.coeff_known(k);
                if self.fq.is_prime_field() {
                    json!(c.value())
                } else {
                    json!(self.fq.fmt_elem(c))
                }
            })
            .collect();
        json!({
            "var": self.var.name(),
            "valuation": lo,
            "precision": if self.is_exact() { Value::Null } else { json!(self.prec) },
            "coeffs": coeffs,
        })
    }

    pub fn from_json(fq: &Fq, v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidInput(format!("laurent json: {m}"));
        let obj = v.as_object().ok_or_else(|| bad("expected an object"))?;
        let var = match obj.get("var").and_then(Value::as_str) {
            Some("t") => SeriesVar::T,
            Some("x") | Some("theta") | Some("θ") => SeriesVar::Theta,
            _ => return Err(bad("var must be \"t\" or \"x\"")),
        };
        let start = obj.get("valuation").and_then(Value::as_i64).ok_or_else(|| bad("missing valuation"))?;
        let prec = match obj.get("precision") {
            None | Some(Value::Null) => EXACT,
            Some(p) => p.as_i64().ok_or_else(|| bad("precision must be an integer"))?,
        };
        const LIMIT: i64 = 1 << 20;
        if start.abs() > LIMIT || (prec != EXACT && prec.abs() > LIMIT) {
            return Err(bad("exponents out of range"));
        }
        if prec != EXACT && start > prec {
            return Err(bad("valuation exceeds precision"));
        }
        let raw = obj.get("coeffs").and_then(Value::as_array).ok_or_else(|| bad("missing coeffs"))?;
        if raw.len() as i64 > LIMIT {
            return Err(bad("too many coefficients"));
        }
        let mut coeffs = Vec::with_capacity(raw.len());
        for c in raw {
            let e = match c {
                Value::Number(n) => {
                    let n = n.as_i64().ok_or_else(|| bad("coefficient must be an integer"))?;
                    fq.from_int(n)
                }
                Value::String(s) => parse::parse_fq(fq, s)?,
                _ => return Err(bad("coefficient must be a number or string")),
            };
            coeffs.push(e);
        }
        Ok(LaurentSeries::new(fq, var, start, prec, coeffs))
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var.name();
        let mut terms = Vec::new();
        for (k, c) in self.terms() {
            let e = -k;
            let cs = self.fq.fmt_elem(c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            let mono = match e {
                0 => String::new(),
                1 => v.to_string(),
                _ => format!("{v}^{e}"),
            };
            terms.push(match (e, c == FqElem::ONE) {
                (0, _) => cs,
                (_, true) => mono,
                _ => format!("{cs}*{mono}"),
            });
        }
        if !self.is_exact() {
            terms.push(format!("O({v}^{})", -self.prec));
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Laurent series as a ring: exact zero and one, inverses capped at `cap`,
/// and the `q`-power map as twist.
#[derive(Clone, Debug)]
pub struct LaurentRing {
    pub fq: Fq,
    pub var: SeriesVar,
    pub cap: i64,
}

impl Ring for LaurentRing {
    type Elem = LaurentSeries;

    fn fq(&self) -> &Fq {
        &self.fq
    }
    fn zero(&self) -> LaurentSeries {
        LaurentSeries::zero(&self.fq, self.var, EXACT)
    }
    fn one(&self) -> LaurentSeries {
        LaurentSeries::one(&self.fq, self.var)
    }
    fn is_zero(&self, a: &LaurentSeries) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a.add(b).expect("same field")
    }
    fn neg(&self, a: &LaurentSeries) -> LaurentSeries {
        a.neg()
    }
    fn mul(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a.mul(b).expect("same field")
    }
    fn from_fq(&self, c: FqElem) -> LaurentSeries {
        LaurentSeries::monomial(&self.fq, self.var, c, 0)
    }
    fn scale(&self, c: FqElem, a: &LaurentSeries) -> LaurentSeries {
        a.scale(c)
    }
    fn inv(&self, a: &LaurentSeries) -> Option<LaurentSeries> {
        a.inv(Some(self.cap)).ok()
    }
    fn twist(&self, a: &LaurentSeries) -> LaurentSeries {
        a.frobenius(1)
    }
    fn fmt_elem(&self, a: &LaurentSeries) -> String {
        a.to_string()
    }
    fn is_field(&self) -> bool {
        true
    }
}
