//! Finite fields `F_q = F_p[g]/(m(g))` with `q = p^e <= 2^16`.
//!
//! Elements are packed as the integer `sum d_i p^i` of their residue
//! polynomial digits. Multiplication in proper extensions goes through
//! discrete log tables built once per descriptor.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_Q: u32 = 1 << 16;

/// An element of `F_q`, meaningful only together with its [`Fq`] descriptor.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FqElem(pub(crate) u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(0);
    pub const ONE: FqElem = FqElem(1);

    /// Packed integer encoding (base-`p` digits of the residue polynomial).
    pub fn value(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

struct Tables {
    // exp[i] = gen^i for 0 <= i < 2(q-1); log[x] for x != 0.
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus over F_p, low to high, length e + 1. Empty for prime fields.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// Descriptor of the ground field `F_q`. Cheap to clone.
#[derive(Clone)]
pub struct Fq(Arc<Inner>);

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.e == other.0.e && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Fq {}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}[g]/({})", self.0.p, self.modulus_text())
        }
    }
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q = p^e`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while !q.is_multiple_of(p) {
        p += 1;
    }
    let mut rest = q;
    let mut e = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Conway polynomials for the extension fields with a built-in modulus.
pub fn builtin_modulus(q: u32) -> Option<Vec<u32>> {
    let m: &[u32] = match q {
        4 => &[1, 1, 1],
        8 => &[1, 1, 0, 1],
        9 => &[2, 2, 1],
        16 => &[1, 1, 0, 0, 1],
        25 => &[2, 4, 1],
        27 => &[1, 2, 0, 1],
        _ => return None,
    };
    Some(m.to_vec())
}

// Slow digit-vector arithmetic, used to build the tables and to test them.
fn digits_of(x: u32, p: u32, e: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    let mut x = x;
    for _ in 0..e {
        out.push(x % p);
        x /= p;
    }
    out
}

fn pack(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn slow_mul(a: u32, b: u32, p: u32, e: u32, modulus: &[u32]) -> u32 {
    let (da, db) = (digits_of(a, p, e), digits_of(b, p, e));
    let e = e as usize;
    let mut prod = vec![0u64; 2 * e];
    for i in 0..e {
        for j in 0..e {
            prod[i + j] += (da[i] * db[j]) as u64;
        }
    }
    let mut prod: Vec<u32> = prod.iter().map(|&c| (c % p as u64) as u32).collect();
    for k in (e..2 * e).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..e {
            let sub = (c * modulus[i]) % p;
            prod[k - e + i] = (prod[k - e + i] + p - sub) % p;
        }
    }
    pack(&prod[..e], p)
}

/// Irreducibility over F_p by trial division against every monic of lower degree.
fn modulus_is_irreducible(p: u32, m: &[u32]) -> bool {
    let deg = m.len() - 1;
    for d in 1..=deg / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut div = digits_of(code as u32, p, d as u32);
            div.push(1);
            // remainder of m by div
            let mut r: Vec<u32> = m.to_vec();
            for k in (d..r.len()).rev() {
                let c = r[k];
                if c == 0 {
                    continue;
                }
                for i in 0..=d {
                    let sub = (c * div[i]) % p;
                    r[k - d + i] = (r[k - d + i] + p - sub) % p;
                }
            }
            if r[..d].iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Fq {
    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Fq> {
        Fq::new(p, 1, None)
    }

    /// `F_q` with the built-in modulus when `q` is a proper prime power.
    pub fn from_q(q: u32) -> Result<Fq> {
        let (p, e) =
            prime_power(q).ok_or_else(|| Error::UnsupportedField(format!("{q} is not a prime power")))?;
        if e == 1 {
            return Fq::prime(p);
        }
        let m = builtin_modulus(q).ok_or_else(|| {
            Error::UnsupportedField(format!("no built-in modulus for q = {q}; supply one"))
        })?;
        Fq::new(p, e, Some(m))
    }

    /// General constructor. `modulus` is monic over F_p, low to high, of degree `e`.
    pub fn new(p: u32, e: u32, modulus: Option<Vec<u32>>) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::UnsupportedField(format!("{p} is not prime")));
        }
        if e == 0 {
            return Err(Error::UnsupportedField("extension degree must be >= 1".into()));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_Q as u64).ok_or_else(|| {
            Error::UnsupportedField(format!("{p}^{e} exceeds the supported size 2^16"))
        })? as u32;
        if e == 1 {
            return Ok(Fq(Arc::new(Inner { p, e, q, modulus: Vec::new(), tables: None })));
        }
        let modulus = modulus
            .or_else(|| builtin_modulus(q))
            .ok_or_else(|| Error::UnsupportedField(format!("no modulus for q = {q}")))?;
        let modulus: Vec<u32> = modulus.iter().map(|&c| c % p).collect();
        if modulus.len() != e as usize + 1 || modulus[e as usize] != 1 {
            return Err(Error::UnsupportedField(format!("modulus must be monic of degree {e}")));
        }
        if !modulus_is_irreducible(p, &modulus) {
            return Err(Error::UnsupportedField("modulus is reducible over F_p".into()));
        }
        let tables = build_tables(p, e, q, &modulus)?;
        Ok(Fq(Arc::new(Inner { p, e, q, modulus, tables: Some(tables) })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn e(&self) -> u32 {
        self.0.e
    }
    pub fn q(&self) -> u32 {
        self.0.q
    }
    pub fn is_prime_field(&self) -> bool {
        self.0.e == 1
    }

    /// Modulus digits over F_p (empty for a prime field).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn modulus_text(&self) -> String {
        let mut terms = Vec::new();
        for (i, &c) in self.0.modulus.iter().enumerate().rev() {
            if c != 0 {
                terms.push(mono_text(c, i as u32, "g"));
            }
        }
        terms.join("+")
    }

    pub fn zero(&self) -> FqElem {
        FqElem(0)
    }
    pub fn one(&self) -> FqElem {
        FqElem(1)
    }

    /// The extension generator `g` (equal to 0 in a prime field, where it is unused).
    pub fn generator(&self) -> FqElem {
        if self.0.e == 1 {
            FqElem(0)
        } else {
            FqElem(self.0.p)
        }
    }

    /// Elements in packed order `0, 1, ..., q-1`.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> {
        (0..self.0.q).map(FqElem)
    }

    pub fn elem(&self, packed: u32) -> Result<FqElem> {
        if packed < self.0.q {
            Ok(FqElem(packed))
        } else {
            Err(Error::InvalidInput(format!("{packed} is not an element of F_{}", self.0.q)))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FqElem {
        FqElem(n.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn digits(&self, a: FqElem) -> Vec<u32> {
        digits_of(a.0, self.0.p, self.0.e)
    }

    pub fn from_digits(&self, d: &[u32]) -> FqElem {
        let p = self.0.p;
        let e = self.0.e as usize;
        // reduce a digit vector of any length modulo the modulus
        let mut r: Vec<u32> = d.iter().map(|&c| c % p).collect();
        if r.len() > e && e > 1 {
            for k in (e..r.len()).rev() {
                let c = r[k];
                if c == 0 {
                    continue;
                }
                r[k] = 0;
                for i in 0..e {
                    let sub = (c * self.0.modulus[i]) % p;
                    r[k - e + i] = (r[k - e + i] + p - sub) % p;
                }
            }
        } else if e == 1 && r.len() > 1 {
            // in F_p the generator is not defined; only constants make sense
            let s = r.iter().fold(0u64, |acc, &c| acc + c as u64);
            return FqElem((s % p as u64) as u32);
        }
        r.resize(e, 0);
        FqElem(pack(&r, p))
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        let p = self.0.p;
        if p == 2 {
            return FqElem(a.0 ^ b.0);
        }
        if self.0.e == 1 {
            let s = a.0 + b.0;
            return FqElem(if s >= p { s - p } else { s });
        }
        let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0u32, 1u32);
        while x > 0 || y > 0 {
            let d = (x % p + y % p) % p;
            out += d * place;
            place *= p;
            x /= p;
            y /= p;
        }
        FqElem(out)
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        if self.0.e == 1 {
            return FqElem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let (mut x, mut out, mut place) = (a.0, 0u32, 1u32);
        while x > 0 {
            let d = (p - x % p) % p;
            out += d * place;
            place *= p;
            x /= p;
        }
        FqElem(out)
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.0 == 0 || b.0 == 0 {
            return FqElem(0);
        }
        match &self.0.tables {
            None => FqElem(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32),
            Some(t) => FqElem(t.exp[(t.log[a.0 as usize] + t.log[b.0 as usize]) as usize]),
        }
    }

    pub fn inv(&self, a: FqElem) -> Result<FqElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        match &self.0.tables {
            None => Ok(self.pow(a, (self.0.p - 2) as u64)),
            Some(t) => {
                let l = t.log[a.0 as usize];
                Ok(FqElem(t.exp[((self.0.q - 1 - l) % (self.0.q - 1)) as usize]))
            }
        }
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FqElem, mut n: u64) -> FqElem {
        let mut base = a;
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    /// The absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: FqElem) -> FqElem {
        self.pow(a, self.0.p as u64)
    }

    /// Checks that both operands live in this field.
    pub fn check_same(&self, other: &Fq) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Schoolbook product of coefficient slices with delayed reduction in prime fields.
    pub fn poly_mul(&self, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let n = a.len() + b.len() - 1;
        if self.0.e == 1 {
            let p = self.0.p as u64;
            if self.0.p == 2 {
                let mut acc = vec![0u32; n];
                for (i, x) in a.iter().enumerate() {
                    if x.0 == 0 {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        acc[i + j] ^= y.0;
                    }
                }
                return acc.into_iter().map(FqElem).collect();
            }
            let mut acc = vec![0u64; n];
            // p < 2^16 so each product < 2^32 and the sums cannot overflow
            for (i, x) in a.iter().enumerate() {
                if x.0 == 0 {
                    continue;
                }
                let xv = x.0 as u64;
                for (j, y) in b.iter().enumerate() {
                    acc[i + j] += xv * y.0 as u64;
                }
            }
            return acc.into_iter().map(|c| FqElem((c % p) as u32)).collect();
        }
        let mut acc = vec![FqElem(0); n];
        for (i, &x) in a.iter().enumerate() {
            if x.0 == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                acc[i + j] = self.add(acc[i + j], self.mul(x, y));
            }
        }
        acc
    }

    /// Text form: an integer in prime fields, a `g`-polynomial otherwise.
    pub fn fmt_elem(&self, a: FqElem) -> String {
        if self.0.e == 1 {
            return a.0.to_string();
        }
        let d = self.digits(a);
        let mut terms = Vec::new();
        for (i, &c) in d.iter().enumerate().rev() {
            if c != 0 {
                terms.push(mono_text(c, i as u32, "g"));
            }
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Reference multiplication through digit vectors, independent of the log tables.
    pub fn mul_reference(&self, a: FqElem, b: FqElem) -> FqElem {
        if self.0.e == 1 {
            return FqElem(((a.0 as u64 * b.0 as u64) % self.0.p as u64) as u32);
        }
        FqElem(slow_mul(a.0, b.0, self.0.p, self.0.e, &self.0.modulus))
    }
}

fn mono_text(c: u32, i: u32, var: &str) -> String {
    match (c, i) {
        (c, 0) => c.to_string(),
        (1, 1) => var.to_string(),
        (1, i) => format!("{var}^{i}"),
        (c, 1) => format!("{c}*{var}"),
        (c, i) => format!("{c}*{var}^{i}"),
    }
}

fn build_tables(p: u32, e: u32, q: u32, modulus: &[u32]) -> Result<Tables> {
    let order = q - 1;
    let mut prime_factors = Vec::new();
    let mut n = order;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            prime_factors.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        prime_factors.push(n);
    }
    let slow_pow = |a: u32, mut k: u32| {
        let (mut base, mut acc) = (a, 1u32);
        while k > 0 {
            if k & 1 == 1 {
                acc = slow_mul(acc, base, p, e, modulus);
            }
            base = slow_mul(base, base, p, e, modulus);
            k >>= 1;
        }
        acc
    };
    let gen = (2..q)
        .find(|&cand| prime_factors.iter().all(|&l| slow_pow(cand, order / l) != 1))
        .ok_or_else(|| Error::UnsupportedField("no primitive element found".into()))?;
    let mut exp = vec![0u32; 2 * order as usize];
    let mut log = vec![0u32; q as usize];
    let mut x = 1u32;
    for i in 0..order {
        exp[i as usize] = x;
        exp[(i + order) as usize] = x;
        log[x as usize] = i;
        x = slow_mul(x, gen, p, e, modulus);
    }
    Ok(Tables { exp, log })
}
