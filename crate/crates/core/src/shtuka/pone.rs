//! Shtukas on `Λ × P¹` built from sums of line bundles `O(d)`, `d <= -1`.
//!
//! `H¹(O(d))` has the Čech basis `x0^{-a} x1^{-b}` with `a, b >= 1`,
//! `a + b = -d`. The point at infinity is `[1:0]`, the affine coordinate is
//! `θ = x0/x1`, and at infinity the local parameter is `s = x1/x0`.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::finite::{AffineShtuka, TensorElem, Witness};
use super::{LamElem, Lambda};
use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::matrix::Matrix;
use crate::parse::parse_mpoly;
use crate::poly::{PolyRing, Poly};
use crate::quotient::QuotientRing;
use crate::ring::Ring;

const MAX_SIZE: usize = 8;
const MAX_TWIST: i64 = 64;

/// A form of degree `degree` in `x0, x1`; `coeffs[a]` multiplies
/// `x0^a x1^(degree - a)`. Zero has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomPoly {
    pub degree: i64,
    pub coeffs: Vec<LamElem>,
}

impl HomPoly {
    pub fn zero(degree: i64) -> Self {
        HomPoly { degree, coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_empty())
    }

    /// Builds a form from `(a, λ)` pairs, dropping zeros.
    pub fn from_terms(lambda: &Lambda, degree: i64, terms: &[(usize, LamElem)]) -> Result<Self> {
        let mut out = HomPoly::zero(degree);
        for (a, c) in terms {
            if c.is_empty() {
                continue;
            }
            if degree < 0 || *a as i64 > degree {
                return Err(Error::InvalidInput(format!("x0^{a} does not fit in degree {degree}")));
            }
            out.coeffs.resize(degree as usize + 1, lambda.ring.zero());
            out.coeffs[*a] = lambda.ring.add(&out.coeffs[*a], c);
        }
        out.trim();
        Ok(out)
    }

    fn trim(&mut self) {
        if self.is_zero() {
            self.coeffs.clear();
        }
    }

    pub fn parse(lambda: &Lambda, text: &str, degree: i64) -> Result<Self> {
        let m = parse_mpoly(lambda.fq(), text, &["z", "x0", "x1"])?;
        let mut terms = Vec::new();
        for (exp, &c) in &m.terms {
            let (ez, a, b) = (exp[0] as usize, exp[1] as i64, exp[2] as i64);
            if a + b != degree {
                return Err(Error::InvalidInput(format!(
                    "`{text}` has a term of degree {} where degree {degree} is required",
                    a + b
                )));
            }
            if ez < lambda.e {
                terms.push((a as usize, lambda.from_digits(ez, &[c])));
            }
        }
        HomPoly::from_terms(lambda, degree, &terms)
    }

    pub fn fmt(&self, lambda: &Lambda) -> String {
        let mut parts = Vec::new();
        for (a, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_empty() {
                continue;
            }
            let b = self.degree - a as i64;
            let mut mono = Vec::new();
            if a > 0 {
                mono.push(if a == 1 { "x0".to_string() } else { format!("x0^{a}") });
            }
            if b > 0 {
                mono.push(if b == 1 { "x1".to_string() } else { format!("x1^{b}") });
            }
            let coeff = lambda.fmt(c);
            let coeff = if coeff.contains('+') { format!("({coeff})") } else { coeff };
            parts.push(match (coeff.as_str(), mono.is_empty()) {
                (_, true) => coeff,
                ("1", false) => mono.join("*"),
                _ => format!("{coeff}*{}", mono.join("*")),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    /// Order of vanishing at infinity: the least power of `x1` present.
    pub fn order_at_infinity(&self) -> Option<i64> {
        self.coeffs.iter().enumerate().rev().find(|(_, c)| !c.is_empty()).map(|(a, _)| self.degree - a as i64)
    }

    /// Restriction to `x1 = 1`, a polynomial in `θ` over `Λ`.
    pub fn affine(&self, lambda: &Lambda, ring: &QuotientRing<PolyRing<Fq>>) -> TensorElem {
        let r = &ring.poly.base;
        let by_z: Vec<Poly<FqElem>> = (0..lambda.e)
            .map(|i| r.from_vec(self.coeffs.iter().map(|c| c.coeff(i).copied().unwrap_or(FqElem::ZERO)).collect()))
            .collect();
        ring.poly.from_vec(by_z)
    }

    /// Restriction to `x0 = 1`, a polynomial in `s = x1` over `Λ`.
    pub fn at_infinity(&self, lambda: &Lambda, ring: &QuotientRing<PolyRing<Fq>>) -> TensorElem {
        // nonzero forms carry all degree + 1 coefficients
        let rev = HomPoly { degree: self.degree, coeffs: self.coeffs.iter().rev().cloned().collect() };
        rev.affine(lambda, ring)
    }

    /// The form of degree `degree` whose restriction to `x1 = 1` is `p`,
    /// if `deg p <= degree`.
    pub fn homogenize(lambda: &Lambda, p: &TensorElem, degree: i64) -> Option<HomPoly> {
        let mut terms = Vec::new();
        let top = p.coeffs().iter().filter_map(|c| c.degree()).max();
        if let Some(t) = top {
            if t as i64 > degree {
                return None;
            }
            for a in 0..=t {
                let digits: Vec<FqElem> = p.coeffs().iter().map(|c| c.coeff(a).copied().unwrap_or(FqElem::ZERO)).collect();
                terms.push((a, lambda.ring.reduce(digits)));
            }
        }
        HomPoly::from_terms(lambda, degree, &terms).ok()
    }
}

/// `dim_Λ H¹(P¹, O(d))` for `d <= -1`.
pub fn h1_dim(d: i64) -> usize {
    if d <= -2 {
        (-d - 1) as usize
    } else {
        0
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LambdaSpec {
    pub p: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<u32>,
    /// Coefficients of the `F_q` modulus over `F_p`, low to high.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
    /// `z^e`; absent means `Λ = F_q`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_nilpotent: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct WitnessSpec {
    pub ideal: String,
    pub order: usize,
}

/// The shtuka file format.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ShtukaFile {
    pub lambda: LambdaSpec,
    /// Shorthand for `twists0 = twists1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twists: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twists0: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twists1: Option<Vec<i64>>,
    pub i: Vec<Vec<String>>,
    pub j: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSpec>,
}

/// `i, j : ⊕ O(d0_c) → ⊕ O(d1_r)`, with `i` linear of degrees `d1_r - d0_c`
/// and `j` Frobenius-semilinear of degrees `d1_r - q d0_c`.
#[derive(Clone, Debug)]
pub struct POneShtuka {
    pub lambda: Lambda,
    pub twists0: Vec<i64>,
    pub twists1: Vec<i64>,
    pub i: Matrix<HomPoly>,
    pub j: Matrix<HomPoly>,
    pub witness: Option<Witness>,
}

fn parse_lambda(spec: &LambdaSpec) -> Result<Lambda> {
    let fq = match spec.q {
        None => {
            if spec.modulus.is_some() {
                return Err(Error::InvalidInput("a modulus needs q".into()));
            }
            Fq::prime(spec.p)?
        }
        Some(q) => {
            let (p, e) = crate::field::prime_power(q)
                .ok_or_else(|| Error::UnsupportedField(format!("{q} is not a prime power")))?;
            if p != spec.p {
                return Err(Error::InvalidInput(format!("q = {q} is not a power of p = {}", spec.p)));
            }
            Fq::new(p, e, spec.modulus.clone())?
        }
    };
    let e = match &spec.e_nilpotent {
        None => 1,
        Some(text) => {
            let m = parse_mpoly(&fq, text, &["z"])?;
            let mut it = m.terms.iter();
            match (it.next(), it.next()) {
                (Some((exp, c)), None) if *c == FqElem::ONE && exp[0] >= 1 => exp[0] as usize,
                _ => return Err(Error::InvalidInput(format!("e_nilpotent must be z^e, got `{text}`"))),
            }
        }
    };
    if e > 16 {
        return Err(Error::InvalidInput("Λ limited to e <= 16".into()));
    }
    Lambda::new(&fq, e)
}

impl POneShtuka {
    pub fn new(
        lambda: &Lambda,
        twists0: Vec<i64>,
        twists1: Vec<i64>,
        i: Matrix<HomPoly>,
        j: Matrix<HomPoly>,
        witness: Option<Witness>,
    ) -> Result<Self> {
        let q = lambda.fq().q() as i64;
        let (n0, n1) = (twists0.len(), twists1.len());
        if n0 > MAX_SIZE || n1 > MAX_SIZE {
            return Err(Error::InvalidInput(format!("at most {MAX_SIZE} summands")));
        }
        for &d in twists0.iter().chain(&twists1) {
            if d >= 0 {
                return Err(Error::Hypothesis(format!("twist {d} has nonzero H⁰; twists must be <= -1")));
            }
            if d < -MAX_TWIST {
                return Err(Error::InvalidInput(format!("twists limited to >= -{MAX_TWIST}")));
            }
        }
        for (name, m, pow) in [("i", &i, 1), ("j", &j, q)] {
            if m.rows() != n1 || m.cols() != n0 {
                return Err(Error::Dimension(format!("{name} must be {n1}x{n0}")));
            }
            for r in 0..n1 {
                for c in 0..n0 {
                    let want = twists1[r] - pow * twists0[c];
                    let x = m.get(r, c);
                    if !x.is_zero() && x.degree != want {
                        return Err(Error::InvalidInput(format!(
                            "{name}[{r}][{c}] has degree {}, expected {want}",
                            x.degree
                        )));
                    }
                }
            }
        }
        let norm = |m: &Matrix<HomPoly>, pow: i64| {
            Matrix::from_fn(n1, n0, |r, c| {
                let x = m.get(r, c);
                if x.is_zero() {
                    HomPoly::zero(twists1[r] - pow * twists0[c])
                } else {
                    x.clone()
                }
            })
        };
        let (i, j) = (norm(&i, 1), norm(&j, q));
        Ok(POneShtuka { lambda: lambda.clone(), twists0, twists1, i, j, witness })
    }

    pub fn from_file(file: &ShtukaFile) -> Result<Self> {
        let lambda = parse_lambda(&file.lambda)?;
        let (t0, t1) = match (&file.twists, &file.twists0, &file.twists1) {
            (Some(t), None, None) => (t.clone(), t.clone()),
            (None, Some(a), Some(b)) => (a.clone(), b.clone()),
            _ => return Err(Error::InvalidInput("give either `twists` or both `twists0` and `twists1`".into())),
        };
        if let Some(d) = t0.iter().chain(&t1).find(|&&d| d >= 0) {
            return Err(Error::Hypothesis(format!("twist {d} has nonzero H⁰; twists must be <= -1")));
        }
        let q = lambda.fq().q() as i64;
        let grid = |name: &str, rows: &Vec<Vec<String>>, pow: i64| -> Result<Matrix<HomPoly>> {
            if rows.len() != t1.len() || rows.iter().any(|r| r.len() != t0.len()) {
                return Err(Error::Dimension(format!("{name} must be {}x{}", t1.len(), t0.len())));
            }
            let mut out = Vec::with_capacity(rows.len());
            for (r, row) in rows.iter().enumerate() {
                let mut v = Vec::with_capacity(row.len());
                for (c, text) in row.iter().enumerate() {
                    v.push(HomPoly::parse(&lambda, text, t1[r] - pow * t0[c])?);
                }
                out.push(v);
            }
            if out.is_empty() {
                return Ok(Matrix::from_fn(0, t0.len(), |_, _| HomPoly::zero(0)));
            }
            Matrix::from_rows(out)
        };
        let i = grid("i", &file.i, 1)?;
        let j = grid("j", &file.j, q)?;
        let witness = match &file.witness {
            None => None,
            Some(w) => {
                let m = parse_mpoly(lambda.fq(), &w.ideal, &["z"])?;
                let v = if m.is_zero() { lambda.e } else { m.terms.keys().map(|e| e[0] as usize).min().unwrap_or(0) };
                if m.terms.len() > 1 {
                    return Err(Error::InvalidInput("the witness ideal must be generated by a power of z".into()));
                }
                Some(Witness::new(&lambda, v.min(lambda.e), w.order)?)
            }
        };
        POneShtuka::new(&lambda, t0, t1, i, j, witness)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ShtukaFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("shtuka JSON: {e}")))?;
        POneShtuka::from_file(&file)
    }

    pub fn to_file(&self) -> ShtukaFile {
        let fq = self.lambda.fq();
        let lambda = LambdaSpec {
            p: fq.p(),
            q: (!fq.is_prime_field()).then(|| fq.q()),
            modulus: (!fq.is_prime_field()).then(|| fq.modulus().to_vec()),
            e_nilpotent: (self.lambda.e > 1).then(|| format!("z^{}", self.lambda.e)),
        };
        let grid = |m: &Matrix<HomPoly>| {
            (0..m.rows()).map(|r| (0..m.cols()).map(|c| m.get(r, c).fmt(&self.lambda)).collect()).collect()
        };
        let (twists, twists0, twists1) = if self.twists0 == self.twists1 {
            (Some(self.twists0.clone()), None, None)
        } else {
            (None, Some(self.twists0.clone()), Some(self.twists1.clone()))
        };
        ShtukaFile {
            lambda,
            twists,
            twists0,
            twists1,
            i: grid(&self.i),
            j: grid(&self.j),
            witness: self.witness.map(|w| {
                let v = w.to_json(&self.lambda);
                WitnessSpec { ideal: v["ideal"].as_str().unwrap_or("0").to_string(), order: w.order }
            }),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self.to_file()).expect("serializable")
    }

    pub fn q(&self) -> i64 {
        self.lambda.fq().q() as i64
    }

    /// Offsets of the summands inside `H¹(⊕ O(d))`.
    fn offsets(twists: &[i64]) -> Vec<usize> {
        let mut out = Vec::with_capacity(twists.len() + 1);
        let mut acc = 0;
        out.push(0);
        for &d in twists {
            acc += h1_dim(d);
            out.push(acc);
        }
        out
    }

    /// Matrix over `Λ` of `ξ ↦ m·ξ^pow` from `H¹(⊕ O(src))` to `H¹(⊕ O(dst))`.
    pub fn h1_matrix(lambda: &Lambda, src: &[i64], dst: &[i64], m: &Matrix<HomPoly>, pow: i64) -> Matrix<LamElem> {
        let (os, od) = (Self::offsets(src), Self::offsets(dst));
        let lam = &lambda.ring;
        let mut out = Matrix::from_fn(od[dst.len()], os[src.len()], |_, _| lam.zero());
        for (c, &dc) in src.iter().enumerate() {
            for a in 1..(-dc) {
                let b = -dc - a;
                for (r, _) in dst.iter().enumerate() {
                    let entry = m.get(r, c);
                    for (alpha, coeff) in entry.coeffs.iter().enumerate() {
                        if coeff.is_empty() {
                            continue;
                        }
                        let beta = entry.degree - alpha as i64;
                        let (ea, eb) = (alpha as i64 - pow * a, beta - pow * b);
                        if ea <= -1 && eb <= -1 {
                            let row = od[r] + (-ea) as usize - 1;
                            let col = os[c] + a as usize - 1;
                            let v = lam.add(out.get(row, col), coeff);
                            out.set(row, col, v);
                        }
                    }
                }
            }
        }
        out
    }

    /// Labels `x0^-a*x1^-b` of the `H¹` basis, summand by summand.
    pub fn h1_labels(twists: &[i64]) -> Vec<String> {
        let mut out = Vec::new();
        for (c, &d) in twists.iter().enumerate() {
            for a in 1..(-d) {
                out.push(format!("e{c}:x0^-{a}*x1^-{}", -d - a));
            }
        }
        out
    }

    pub fn i_h1(&self) -> Matrix<LamElem> {
        Self::h1_matrix(&self.lambda, &self.twists0, &self.twists1, &self.i, 1)
    }

    pub fn j_h1(&self) -> Matrix<LamElem> {
        Self::h1_matrix(&self.lambda, &self.twists0, &self.twists1, &self.j, self.q())
    }

    /// Restriction to the chart `x1 ≠ 0`.
    pub fn affine(&self) -> Result<AffineShtuka> {
        let lr = self.lambda.over(crate::poly::ring_r(self.lambda.fq()))?;
        let res = |m: &Matrix<HomPoly>| m.map(|x| x.affine(&self.lambda, &lr));
        AffineShtuka::new(&self.lambda, res(&self.i), res(&self.j))
    }

    /// `i` is the identity map of `⊕ O(d)`.
    pub fn i_is_identity(&self) -> bool {
        if self.twists0 != self.twists1 {
            return false;
        }
        let one = self.lambda.ring.one();
        (0..self.i.rows()).all(|r| {
            (0..self.i.cols()).all(|c| {
                let x = self.i.get(r, c);
                if r == c {
                    x.degree == 0 && x.coeffs.len() == 1 && x.coeffs[0] == one
                } else {
                    x.is_zero()
                }
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const FIXTURE: &str = r#"{"lambda":{"p":2,"e_nilpotent":"z^2"},"twists":[-2],"i":[["1"]],"j":[["z*x0*x1"]],"witness":{"ideal":"z","order":2}}"#;

    #[test]
    fn parse_fixture_and_h1() {
        let p = POneShtuka::from_json(FIXTURE).unwrap();
        assert!(p.i_is_identity());
        assert_eq!(p.witness, Some(Witness { v: 1, order: 2 }));
        let jh = p.j_h1();
        assert_eq!((jh.rows(), jh.cols()), (1, 1));
        assert_eq!(*jh.get(0, 0), p.lambda.ring.gen());
        assert_eq!(h1_dim(-2), 1);
        assert_eq!(h1_dim(-3), 2);
        assert_eq!(POneShtuka::h1_labels(&[-2]), vec!["e0:x0^-1*x1^-1"]);
    }

    #[test]
    fn round_trip() {
        let p = POneShtuka::from_json(FIXTURE).unwrap();
        let back = POneShtuka::from_file(&p.to_file()).unwrap();
        assert_eq!(back.to_file(), p.to_file());
        assert_eq!(p.to_file().j[0][0], "z*x0*x1");
    }

    #[test]
    fn rejects_bad_degree() {
        let bad = FIXTURE.replace("z*x0*x1", "z*x0");
        assert!(POneShtuka::from_json(&bad).is_err());
        let bad = FIXTURE.replace("[-2]", "[0]");
        assert!(matches!(POneShtuka::from_json(&bad), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn charts() {
        let p = POneShtuka::from_json(FIXTURE).unwrap();
        let lr = p.lambda.over(crate::poly::ring_r(p.lambda.fq())).unwrap();
        let x = p.j.get(0, 0);
        assert_eq!(x.order_at_infinity(), Some(1));
        let aff = x.affine(&p.lambda, &lr);
        assert_eq!(HomPoly::homogenize(&p.lambda, &aff, 2).unwrap(), *x);
        assert!(HomPoly::homogenize(&p.lambda, &aff, 0).is_none());
        let inf = x.at_infinity(&p.lambda, &lr);
        // z s
        assert_eq!(inf, lr.poly.from_vec(vec![lr.poly.base.zero(), lr.poly.base.x()]));
    }
}
