//! Taelman's unit and class modules in a finite window, and the class number formula.
//!
//! With `b = ball_exponent(E)` and `c = b - 1`, the exponential is an isometry
//! of `θ^{-b} F_q[[θ^{-1}]]` onto itself, so
//! `H(E) = K_∞ / (R + exp K_∞)` is the window `W = span(θ^{-1}, …, θ^{-c})`
//! modulo the window parts of `exp(θ^k)`, `k >= -c`.

use serde_json::{json, Value};

use crate::drinfeld::{ball_exponent, DrinfeldModule, ExpLog};
use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::laurent::{LaurentSeries, SeriesVar};
use crate::matrix::{fitting_generator, kernel, rank, rref, Matrix, QuotientSpace};
use crate::poly::{ring_a, ring_r, Poly};
use crate::ring::Ring;
use crate::special_values::l_value;

const MAX_GROWTH: i64 = 64;

/// Window parameters: `c` window size, `B` top source degree, `N` working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub c: i64,
    pub b: i64,
    pub n: i64,
}

#[derive(Clone, Debug)]
pub struct ClassUnitReport {
    pub window: Window,
    pub class_dim: usize,
    /// Monic generator of `Fitt_0 H(E)`, a polynomial in `t`.
    pub fitting: Poly<FqElem>,
    /// Generator of `U(E)` with leading coefficient 1, modulo `θ^{-N}`.
    pub unit: LaurentSeries,
    pub unit_degree: i64,
    /// `F_q`-dimension of units of degree `<= B`.
    pub kernel_dim: usize,
}

impl ClassUnitReport {
    pub fn to_json(&self, fq: &Fq) -> Value {
        json!({
            "class_dim": self.class_dim,
            "fitting": ring_a(fq).fmt_elem(&self.fitting),
            "unit": self.unit.to_json(),
            "unit_degree": self.unit_degree,
            "window": {"c": self.window.c, "B": self.window.b, "N": self.window.n},
        })
    }
}

/// Window coordinates (coefficients of `θ^{-1}, …, θ^{-c}`) of a series.
fn window_coords(x: &LaurentSeries, c: i64) -> Result<Vec<FqElem>> {
    (1..=c).map(|i| x.coeff(i)).collect()
}

fn theta_power(fq: &Fq, k: i64) -> LaurentSeries {
    LaurentSeries::monomial(fq, SeriesVar::Theta, fq.one(), -k)
}

/// Unit and class module data. `b_top` overrides the starting source degree;
/// it grows until the image of `exp` stabilizes and units appear.
pub fn class_module(e: &DrinfeldModule, prec: i64, b_top: Option<i64>) -> Result<ClassUnitReport> {
    let fq = e.fq();
    let el = ExpLog::new(e);
    let c = ball_exponent(e)? - 1;
    let start = b_top.unwrap_or(c + 1).max(0);
    let mut cols: Vec<Vec<FqElem>> = Vec::new();
    // columns for k = -c, …, B
    let column = |k: i64| -> Result<Vec<FqElem>> {
        let ex = el.exp(&theta_power(fq, k), c + 1)?;
        window_coords(&ex, c)
    };
    for k in -c..=start {
        cols.push(column(k)?);
    }
    let mut b = start;
    loop {
        let w = Matrix::from_cols(c as usize, cols.clone())?;
        let next = column(b + 1)?;
        let mut wider = cols.clone();
        wider.push(next.clone());
        let stable = rank(fq, &w) == rank(fq, &Matrix::from_cols(c as usize, wider)?);
        let ker = kernel(fq, &w);
        if stable && !ker.is_empty() {
            return finish(e, &el, c, b, prec, &cols, ker);
        }
        if b - start >= MAX_GROWTH {
            return Err(Error::Budget(format!("window did not stabilize by B = {b}")));
        }
        cols.push(next);
        b += 1;
    }
}

fn finish(
    e: &DrinfeldModule,
    el: &ExpLog,
    c: i64,
    b: i64,
    prec: i64,
    cols: &[Vec<FqElem>],
    ker: Vec<Vec<FqElem>>,
) -> Result<ClassUnitReport> {
    let fq = e.fq();
    let cu = c as usize;
    // class module: W / W_B with t acting through φ_t
    let images: Vec<Vec<FqElem>> = cols.iter().filter(|v| v.iter().any(|x| !x.is_zero())).cloned().collect();
    let quot = QuotientSpace::new(fq, cu, &images);
    let h = quot.dim();
    let a_series: Vec<LaurentSeries> =
        e.coeffs().iter().map(|a| LaurentSeries::from_poly(fq, SeriesVar::Theta, a)).collect();
    let mut t_cols = Vec::with_capacity(h);
    for &i in quot.free() {
        let x = theta_power(fq, -(i as i64 + 1));
        let mut y = x.shift(-1);
        for (j, a) in a_series.iter().enumerate() {
            y = y.add(&a.mul(&x.frobenius(j as u32 + 1))?)?;
        }
        t_cols.push(quot.coords(fq, &window_coords(&y, c)?));
    }
    let fitting = fitting_generator(fq, &Matrix::from_cols(h, t_cols)?)?;

    // units: kernel vectors indexed by k = -c..=B, reordered by descending k
    let desc: Vec<Vec<FqElem>> = ker.iter().map(|v| v.iter().rev().copied().collect()).collect();
    let (red, pivots) = rref(fq, &Matrix::from_rows(desc)?);
    let kernel_dim = pivots.len();
    let last = red.row(kernel_dim - 1).to_vec();
    let unit_degree = -(pivots[kernel_dim - 1] as i64 - b);
    // enough to certify g(θ)·u modulo θ^{-prec} and the quotients z/u below
    let n = (prec + h as i64).max(1 + prec.max(1) + b - 2 * unit_degree);
    let to_series = |v_desc: &[FqElem]| {
        LaurentSeries::new(fq, SeriesVar::Theta, -b, crate::laurent::EXACT, v_desc.to_vec())
    };
    let unit_of = |z: &LaurentSeries| -> Result<LaurentSeries> {
        let ex = el.exp(z, n)?;
        let ball = ex.drop_below(c + 1);
        if ball.is_zero() {
            return Ok(z.truncate(n));
        }
        z.sub(&el.log(&ball, n)?)
    };
    let u_box = to_series(&last);
    let unit = unit_of(&u_box)?;
    if kernel_dim as i64 != b - unit_degree + 1 {
        return Err(Error::Certificate(format!(
            "units of degree <= {b} span {kernel_dim} dimensions, expected {}",
            b - unit_degree + 1
        )));
    }
    // saturation: every small unit is a polynomial multiple of the generator
    let r = ring_r(fq);
    for i in 0..kernel_dim {
        let z = unit_of(&to_series(red.row(i)))?;
        let ratio = z.div(&unit, Some(n))?;
        let back = LaurentSeries::from_poly(fq, SeriesVar::Theta, &ratio.polynomial_part(&r));
        let check_to = ratio.prec().min(prec);
        if check_to < 1 || !ratio.eq_mod(&back, check_to)? {
            return Err(Error::Certificate("a unit is not a multiple of the generator".into()));
        }
    }
    Ok(ClassUnitReport {
        window: Window { c, b, n },
        class_dim: h,
        fitting,
        unit: unit.truncate(n),
        unit_degree,
        kernel_dim,
    })
}

/// Outcome of comparing `g(θ)·u` against the Euler product.
#[derive(Clone, Debug)]
pub struct CnfReport {
    pub units: ClassUnitReport,
    pub l_value: LaurentSeries,
    pub lhs: LaurentSeries,
    /// `lead(g(θ)u) / lead(L)` when the two sides agree up to this scalar.
    pub alpha: Option<FqElem>,
    /// First exponent of `θ^{-1}` where they differ, on failure.
    pub residual_at: Option<i64>,
    pub prec: i64,
}

impl CnfReport {
    pub fn pass(&self) -> bool {
        self.alpha.is_some()
    }

    pub fn to_json(&self, fq: &Fq) -> Value {
        let mut v = self.units.to_json(fq);
        v["alpha"] = match self.alpha {
            Some(a) => json!(fq.fmt_elem(a)),
            None => json!("FAIL"),
        };
        v["l_value"] = self.l_value.to_json();
        v["lhs"] = self.lhs.to_json();
        if let Some(k) = self.residual_at {
            v["residual_at"] = json!(k);
        }
        v
    }
}

/// Checks `g(θ)·u = α·L(E*, 0)` modulo `θ^{-prec}` for a scalar `α`.
pub fn verify_cnf(e: &DrinfeldModule, prec: i64, threads: usize) -> Result<CnfReport> {
    let fq = e.fq();
    let units = class_module(e, prec, None)?;
    let g = LaurentSeries::from_poly(fq, SeriesVar::Theta, &units.fitting);
    let lhs = g.mul(&units.unit)?.truncate(prec).with_var(SeriesVar::T);
    let l = l_value(e, prec, threads)?.value;
    let (alpha, residual_at) = match (lhs.lead(), l.lead(), lhs.valuation() == l.valuation()) {
        (Some(x), Some(y), true) => {
            let a = fq.div(x, y)?;
            let scaled = l.scale(a);
            if lhs.eq_mod(&scaled, prec)? {
                (Some(a), None)
            } else {
                (None, lhs.first_difference(&scaled, prec))
            }
        }
        _ => (None, lhs.first_difference(&l, prec)),
    };
    Ok(CnfReport { units, l_value: l, lhs, alpha, residual_at, prec })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carlitz_units_are_log_one() {
        for q in [2, 3] {
            let fq = Fq::prime(q).unwrap();
            let e = DrinfeldModule::carlitz(&fq);
            let rep = class_module(&e, 16, None).unwrap();
            assert_eq!(rep.class_dim, 0);
            assert_eq!(rep.fitting, ring_a(&fq).one());
            let log1 = ExpLog::new(&e).log(&LaurentSeries::one(&fq, SeriesVar::Theta), 16).unwrap();
            assert!(rep.unit.eq_mod(&log1, 16).unwrap(), "{} vs {}", rep.unit, log1);
        }
    }

    #[test]
    fn carlitz_cnf() {
        let f3 = Fq::prime(3).unwrap();
        let r = verify_cnf(&DrinfeldModule::carlitz(&f3), 6, 1).unwrap();
        assert_eq!(r.alpha, Some(f3.one()));
    }
}
