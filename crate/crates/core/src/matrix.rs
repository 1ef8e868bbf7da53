//! Dense matrices over a [`Ring`]: products, determinants, characteristic
//! polynomials, and linear algebra over fields.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::field::{Fq, FqElem};
use crate::poly::{ring_a, Poly};
use crate::ring::{ExactDiv, Ring};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_cols(rows: usize, cols: Vec<Vec<E>>) -> Result<Self> {
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::Dimension("column length mismatch".into()));
        }
        let n = cols.len();
        Ok(Matrix::from_fn(rows, n, |r, c| cols[c][r].clone()))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }
    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn col(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }
    pub fn entries(&self) -> &[E] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn map<F: Clone>(&self, f: impl Fn(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| self.get(rows[r], cols[c]).clone())
    }

    /// Horizontal concatenation.
    pub fn hcat(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::Dimension("hcat row mismatch".into()));
        }
        Ok(Matrix::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                other.get(r, c - self.cols).clone()
            }
        }))
    }
}

pub fn zeros<R: Ring>(ring: &R, rows: usize, cols: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(rows, cols, |_, _| ring.zero())
}

pub fn identity<R: Ring>(ring: &R, n: usize) -> Matrix<R::Elem> {
    Matrix::from_fn(n, n, |r, c| if r == c { ring.one() } else { ring.zero() })
}

pub fn mat_mul<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!("{}x{} times {}x{}", a.rows, a.cols, b.rows, b.cols)));
    }
    let mut out = zeros(ring, a.rows, b.cols);
    for r in 0..a.rows {
        for k in 0..a.cols {
            let x = a.get(r, k);
            if ring.is_zero(x) {
                continue;
            }
            for c in 0..b.cols {
                let y = b.get(k, c);
                if ring.is_zero(y) {
                    continue;
                }
                let cur = out.get(r, c);
                let v = ring.add(cur, &ring.mul(x, y));
                out.set(r, c, v);
            }
        }
    }
    Ok(out)
}

pub fn mat_vec<R: Ring>(ring: &R, a: &Matrix<R::Elem>, v: &[R::Elem]) -> Result<Vec<R::Elem>> {
    if a.cols != v.len() {
        return Err(Error::Dimension("matrix-vector size mismatch".into()));
    }
    Ok((0..a.rows)
        .map(|r| {
            let mut acc = ring.zero();
            for (x, y) in a.row(r).iter().zip(v) {
                if !ring.is_zero(x) && !ring.is_zero(y) {
                    acc = ring.add(&acc, &ring.mul(x, y));
                }
            }
            acc
        })
        .collect())
}

pub fn mat_add<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::Dimension("matrix sum shape mismatch".into()));
    }
    Ok(Matrix::from_fn(a.rows, a.cols, |r, c| ring.add(a.get(r, c), b.get(r, c))))
}

pub fn mat_sub<R: Ring>(ring: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::Dimension("matrix difference shape mismatch".into()));
    }
    Ok(Matrix::from_fn(a.rows, a.cols, |r, c| ring.sub(a.get(r, c), b.get(r, c))))
}

/// Entrywise twist `C^σ`.
pub fn mat_twist<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    a.map(|x| ring.twist(x))
}

pub fn is_zero_matrix<R: Ring>(ring: &R, a: &Matrix<R::Elem>) -> bool {
    a.data.iter().all(|x| ring.is_zero(x))
}

fn require_square<E>(m: &Matrix<E>) -> Result<usize> {
    if m.rows != m.cols {
        return Err(Error::Dimension(format!("expected a square matrix, got {}x{}", m.rows, m.cols)));
    }
    Ok(m.rows)
}

/// Laplace expansion with memoization over column subsets; division free,
/// valid over any commutative ring. `O(2^n n)` ring operations.
pub fn det_cofactor<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<R::Elem> {
    let n = require_square(m)?;
    if n == 0 {
        return Ok(ring.one());
    }
    if n > 24 {
        return Err(Error::Dimension("cofactor determinant limited to 24x24".into()));
    }
    // minors[mask] = det of rows 0..popcount(mask) on the columns in mask
    let mut minors: HashMap<u32, R::Elem> = HashMap::new();
    minors.insert(0, ring.one());
    let mut layer: Vec<u32> = vec![0];
    for row in 0..n {
        let mut next: HashMap<u32, R::Elem> = HashMap::new();
        for &mask in &layer {
            let sub = minors[&mask].clone();
            if ring.is_zero(&sub) {
                continue;
            }
            for c in 0..n {
                if mask & (1 << c) != 0 {
                    continue;
                }
                let x = m.get(row, c);
                if ring.is_zero(x) {
                    continue;
                }
                // sign: number of chosen columns to the right of c
                let above = (mask >> (c + 1)).count_ones();
                let term = ring.mul(&sub, x);
                let term = if above % 2 == 1 { ring.neg(&term) } else { term };
                let key = mask | (1 << c);
                let entry = next.entry(key).or_insert_with(|| ring.zero());
                *entry = ring.add(entry, &term);
            }
        }
        layer = next.keys().copied().collect();
        layer.sort_unstable();
        minors = next;
        let _ = row;
    }
    Ok(minors.get(&((1u32 << n) - 1)).cloned().unwrap_or_else(|| ring.zero()))
}

/// Gaussian elimination over a field.
pub fn det_field<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<R::Elem> {
    let n = require_square(m)?;
    let mut a = m.clone();
    let mut det = ring.one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !ring.is_zero(a.get(r, col))) else {
            return Ok(ring.zero());
        };
        if p != col {
            swap_rows(&mut a, p, col);
            det = ring.neg(&det);
        }
        let piv = a.get(col, col).clone();
        det = ring.mul(&det, &piv);
        let inv = ring.inv(&piv).ok_or_else(|| Error::InvalidInput("pivot not invertible".into()))?;
        for r in col + 1..n {
            let f = ring.mul(a.get(r, col), &inv);
            if ring.is_zero(&f) {
                continue;
            }
            for c in col..n {
                let v = ring.sub(a.get(r, c), &ring.mul(&f, a.get(col, c)));
                a.set(r, c, v);
            }
        }
    }
    Ok(det)
}

/// Fraction-free (Bareiss) elimination over an integral domain with exact division.
pub fn det_bareiss<R: ExactDiv>(ring: &R, m: &Matrix<R::Elem>) -> Result<R::Elem> {
    let n = require_square(m)?;
    if n == 0 {
        return Ok(ring.one());
    }
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = ring.one();
    for k in 0..n - 1 {
        if ring.is_zero(a.get(k, k)) {
            let Some(p) = (k + 1..n).find(|&r| !ring.is_zero(a.get(r, k))) else {
                return Ok(ring.zero());
            };
            swap_rows(&mut a, p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = ring.sub(
                    &ring.mul(a.get(i, j), a.get(k, k)),
                    &ring.mul(a.get(i, k), a.get(k, j)),
                );
                let v = ring
                    .div_exact(&num, &prev)
                    .ok_or_else(|| Error::InvalidInput("inexact division in Bareiss elimination".into()))?;
                a.set(i, j, v);
            }
        }
        prev = a.get(k, k).clone();
    }
    let d = a.get(n - 1, n - 1).clone();
    Ok(if sign { ring.neg(&d) } else { d })
}

/// Determinant: elimination over fields, cofactor expansion otherwise.
pub fn det<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<R::Elem> {
    if ring.is_field() {
        det_field(ring, m)
    } else {
        det_cofactor(ring, m)
    }
}

fn swap_rows<E>(a: &mut Matrix<E>, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..a.cols {
        a.data.swap(i * a.cols + c, j * a.cols + c);
    }
}

/// `det(X I - M)` by Berkowitz's division-free algorithm; coefficients low to
/// high, monic of degree `n`.
pub fn charpoly<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<Vec<R::Elem>> {
    let n = require_square(m)?;
    // p holds coefficients from the highest degree down
    let mut p = vec![ring.one()];
    for k in 0..n {
        // leading k x k block A, column C = m[0..k][k], row Rw = m[k][0..k]
        let mut toeplitz = Vec::with_capacity(k + 2);
        toeplitz.push(ring.one());
        toeplitz.push(ring.neg(m.get(k, k)));
        let mut v: Vec<R::Elem> = (0..k).map(|r| m.get(r, k).clone()).collect();
        for _ in 0..k {
            let mut s = ring.zero();
            for (j, vj) in v.iter().enumerate() {
                let x = m.get(k, j);
                if !ring.is_zero(x) && !ring.is_zero(vj) {
                    s = ring.add(&s, &ring.mul(x, vj));
                }
            }
            toeplitz.push(ring.neg(&s));
            // v <- A v
            let nv: Vec<R::Elem> = (0..k)
                .map(|r| {
                    let mut acc = ring.zero();
                    for (j, vj) in v.iter().enumerate() {
                        let x = m.get(r, j);
                        if !ring.is_zero(x) && !ring.is_zero(vj) {
                            acc = ring.add(&acc, &ring.mul(x, vj));
                        }
                    }
                    acc
                })
                .collect();
            v = nv;
        }
        let mut next = Vec::with_capacity(k + 2);
        for i in 0..=k + 1 {
            let mut acc = ring.zero();
            for (j, pj) in p.iter().enumerate() {
                if j > i {
                    break;
                }
                let t = &toeplitz[i - j];
                if !ring.is_zero(t) && !ring.is_zero(pj) {
                    acc = ring.add(&acc, &ring.mul(t, pj));
                }
            }
            next.push(acc);
        }
        p = next;
    }
    p.reverse();
    Ok(p)
}

/// Evaluates a polynomial with ring coefficients at a square matrix.
pub fn poly_at_matrix<R: Ring>(ring: &R, coeffs: &[R::Elem], m: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>> {
    let n = require_square(m)?;
    let mut acc = zeros(ring, n, n);
    for c in coeffs.iter().rev() {
        acc = mat_mul(ring, &acc, m)?;
        for i in 0..n {
            let v = ring.add(acc.get(i, i), c);
            acc.set(i, i, v);
        }
    }
    Ok(acc)
}

/// Reduced row echelon form over a field; returns the pivot columns.
pub fn rref<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> (Matrix<R::Elem>, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| !ring.is_zero(a.get(r, col))) else { continue };
        swap_rows(&mut a, p, row);
        let inv = ring.inv(a.get(row, col)).expect("field carrier");
        for c in col..a.cols {
            let v = ring.mul(a.get(row, c), &inv);
            a.set(row, c, v);
        }
        for r in 0..a.rows {
            if r == row {
                continue;
            }
            let f = a.get(r, col).clone();
            if ring.is_zero(&f) {
                continue;
            }
            for c in col..a.cols {
                let v = ring.sub(a.get(r, c), &ring.mul(&f, a.get(row, c)));
                a.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (a, pivots)
}

pub fn rank<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> usize {
    rref(ring, m).1.len()
}

/// Basis of the right kernel over a field, one vector per free column.
pub fn kernel<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Vec<Vec<R::Elem>> {
    let (a, pivots) = rref(ring, m);
    let mut out = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![ring.zero(); m.cols];
        v[free] = ring.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = ring.neg(a.get(r, free));
        }
        out.push(v);
    }
    out
}

/// Some solution of `m x = b` over a field, or `None`.
pub fn solve<R: Ring>(ring: &R, m: &Matrix<R::Elem>, b: &[R::Elem]) -> Result<Option<Vec<R::Elem>>> {
    if b.len() != m.rows {
        return Err(Error::Dimension("right-hand side length mismatch".into()));
    }
    let aug = m.hcat(&Matrix::from_cols(m.rows, vec![b.to_vec()])?)?;
    let (a, pivots) = rref(ring, &aug);
    if pivots.last() == Some(&m.cols) {
        return Ok(None);
    }
    let mut x = vec![ring.zero(); m.cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = a.get(r, m.cols).clone();
    }
    Ok(Some(x))
}

/// Inverse over a field.
pub fn inverse<R: Ring>(ring: &R, m: &Matrix<R::Elem>) -> Result<Option<Matrix<R::Elem>>> {
    let n = require_square(m)?;
    let aug = m.hcat(&identity(ring, n))?;
    let (a, pivots) = rref(ring, &aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Ok(None);
    }
    Ok(Some(Matrix::from_fn(n, n, |r, c| a.get(r, n + c).clone())))
}

/// `F^n` modulo the span of some vectors, with coordinates on the complement
/// spanned by the non-pivot standard vectors.
#[derive(Clone, Debug)]
pub struct QuotientSpace<E> {
    rows: Vec<(usize, Vec<E>)>,
    free: Vec<usize>,
}

impl<E: Clone> QuotientSpace<E> {
    pub fn new<R: Ring<Elem = E>>(ring: &R, n: usize, span: &[Vec<E>]) -> Self {
        let (rows, pivots) = if span.is_empty() {
            (Vec::new(), Vec::new())
        } else {
            let m = Matrix { rows: span.len(), cols: n, data: span.concat() };
            let (red, pivots) = rref(ring, &m);
            let rows = pivots.iter().enumerate().map(|(i, &p)| (p, red.row(i).to_vec())).collect();
            (rows, pivots)
        };
        let free = (0..n).filter(|c| !pivots.contains(c)).collect();
        QuotientSpace { rows, free }
    }

    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Positions of the standard vectors spanning the complement.
    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn coords<R: Ring<Elem = E>>(&self, ring: &R, v: &[E]) -> Vec<E> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            let f = v[*p].clone();
            if ring.is_zero(&f) {
                continue;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x = ring.sub(x, &ring.mul(&f, y));
            }
        }
        self.free.iter().map(|&i| v[i].clone()).collect()
    }
}

/// Monic generator of the 0-th Fitting ideal of the `F_q[t]`-module given by
/// an `F_q`-matrix of the `t`-action: its characteristic polynomial in `t`.
pub fn fitting_generator(fq: &Fq, t_action: &Matrix<FqElem>) -> Result<Poly<FqElem>> {
    let c = charpoly(fq, t_action)?;
    Ok(ring_a(fq).from_vec(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ring_a;
    use crate::quotient::lambda;

    #[test]
    fn two_by_two_over_f2t() {
        let f2 = Fq::prime(2).unwrap();
        let a = ring_a(&f2);
        let m = Matrix::from_rows(vec![vec![a.zero(), a.x()], vec![a.one(), a.one()]]).unwrap();
        assert_eq!(det_cofactor(&a, &m).unwrap(), a.x());
        assert_eq!(det_bareiss(&a, &m).unwrap(), a.x());
        let c = charpoly(&a, &m).unwrap();
        assert_eq!(c, vec![a.x(), a.one(), a.one()]);
    }

    #[test]
    fn det_over_lambda() {
        let f2 = Fq::prime(2).unwrap();
        let l = lambda(&f2, 2).unwrap();
        let one_plus_z = l.add(&l.one(), &l.gen());
        let m = Matrix::from_rows(vec![vec![one_plus_z.clone(), l.zero()], vec![l.zero(), l.one()]]).unwrap();
        assert_eq!(det(&l, &m).unwrap(), one_plus_z);
        assert_eq!(det(&l, &identity(&l, 3)).unwrap(), l.one());
    }

    #[test]
    fn fitting_examples() {
        let f2 = Fq::prime(2).unwrap();
        let a = ring_a(&f2);
        let empty: Matrix<FqElem> = Matrix::from_rows(vec![]).unwrap();
        assert_eq!(fitting_generator(&f2, &empty).unwrap(), a.one());
        let jordan = Matrix::from_rows(vec![vec![FqElem(0), FqElem(1)], vec![FqElem(0), FqElem(0)]]).unwrap();
        assert_eq!(fitting_generator(&f2, &jordan).unwrap(), a.from_ints(&[0, 0, 1]));
        let id = identity(&f2, 1);
        assert_eq!(fitting_generator(&f2, &id).unwrap(), a.from_ints(&[1, 1]));
    }

    #[test]
    fn kernel_and_solve() {
        let f3 = Fq::prime(3).unwrap();
        let e = |x: u32| FqElem(x);
        let m = Matrix::from_rows(vec![vec![e(1), e(2), e(0)], vec![e(2), e(1), e(0)]]).unwrap();
        let k = kernel(&f3, &m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&f3, &m, v).unwrap().iter().all(|x| x.is_zero()));
        }
        assert!(solve(&f3, &m, &[e(1), e(1)]).unwrap().is_none());
        assert!(solve(&f3, &m, &[e(1), e(2)]).unwrap().is_some());
    }
}
