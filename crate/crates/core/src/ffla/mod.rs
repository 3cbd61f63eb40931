//! Exact dense linear algebra over a prime field GF(p).
//!
//! Residues are stored as `u32` in `[0, p)`. Products are formed in 64 bits
//! and reduced with a precomputed Barrett constant, so a multiply-accumulate
//! never needs a hardware division. Pivoting takes the first nonzero entry,
//! which makes every routine deterministic given its input.

pub mod sparse;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// A prime `2 <= p < 2^31`, verified at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u32);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if !(2..(1u64 << 31)).contains(&p) || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(p as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    /// True when `q` is a positive power `p^e` with `e >= 1`.
    pub fn is_power(self, q: u64) -> bool {
        let p = self.0 as u64;
        if q < p {
            return false;
        }
        let mut x = q;
        while x % p == 0 {
            x /= p;
        }
        x == 1
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(p: u64) -> Result<Prime> {
        Prime::new(p)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0 as u64
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 4 {
        return n >= 2;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Arithmetic in GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Field {
    p: u32,
    barrett: u64,
}

impl Field {
    pub fn new(p: Prime) -> Field {
        Field { p: p.0, barrett: u64::MAX / p.0 as u64 }
    }

    pub fn prime(self) -> Prime {
        Prime(self.p)
    }

    pub fn p(self) -> u32 {
        self.p
    }

    /// Reduce any `x < 2^64` into `[0, p)`.
    #[inline(always)]
    pub fn reduce(self, x: u64) -> u32 {
        let q = ((x as u128 * self.barrett as u128) >> 64) as u64;
        let mut r = x - q * self.p as u64;
        let p = self.p as u64;
        if r >= p {
            r -= p;
        }
        if r >= p {
            r -= p;
        }
        r as u32
    }

    #[inline(always)]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a as u64 + b as u64;
        if s >= self.p as u64 {
            (s - self.p as u64) as u32
        } else {
            s as u32
        }
    }

    #[inline(always)]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }

    #[inline(always)]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline(always)]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        self.reduce(a as u64 * b as u64)
    }

    /// `acc + c*a` reduced.
    #[inline(always)]
    pub fn mul_add(self, acc: u32, c: u32, a: u32) -> u32 {
        self.reduce(acc as u64 + c as u64 * a as u64)
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero in GF({})", self.p);
        self.pow(a, self.p as u64 - 2)
    }

    pub fn from_i64(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`.
    pub fn to_signed(self, a: u32) -> i64 {
        if a as u64 * 2 > self.p as u64 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

/// Dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq)]
pub struct FMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FMatrix {}x{} over GF({})", self.rows, self.cols, self.field.p)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl FMatrix {
    pub fn zeros(p: Prime, rows: usize, cols: usize) -> FMatrix {
        FMatrix { field: Field::new(p), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: Prime, n: usize) -> FMatrix {
        let mut m = FMatrix::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1 % p.get());
        }
        m
    }

    /// Build from row vectors; entries are reduced mod p.
    pub fn from_rows(p: Prime, cols: usize, rows: &[Vec<u32>]) -> Result<FMatrix> {
        let field = Field::new(p);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::Dimension(format!("row {i} has length {}, expected {cols}", r.len())));
            }
            data.extend(r.iter().map(|&v| v % field.p));
        }
        Ok(FMatrix { field, rows: rows.len(), cols, data })
    }

    /// Build from signed integers, reduced mod p.
    pub fn from_i64(p: Prime, rows: usize, cols: usize, entries: &[i64]) -> Result<FMatrix> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        let field = Field::new(p);
        Ok(FMatrix { field, rows, cols, data: entries.iter().map(|&v| field.from_i64(v)).collect() })
    }

    pub fn from_fn(p: Prime, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> FMatrix {
        let field = Field::new(p);
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j) % field.p);
            }
        }
        FMatrix { field, rows, cols, data }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn prime(&self) -> Prime {
        self.field.prime()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v % self.field.p;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> FMatrix {
        let mut t = FMatrix { field: self.field, rows: self.cols, cols: self.rows, data: vec![0; self.data.len()] };
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        t
    }

    pub fn mul(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let mut out = FMatrix { field: f, rows: self.rows, cols: other.cols, data: vec![0; self.rows * other.cols] };
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o = f.mul_add(*o, a, b);
                }
            }
        }
        Ok(out)
    }

    /// Apply the matrix to a row vector: `v * M`.
    pub fn left_apply(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!("vector of length {} against {} rows", v.len(), self.rows)));
        }
        let f = self.field;
        let mut out = vec![0u32; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(i)) {
                *o = f.mul_add(*o, a, b);
            }
        }
        Ok(out)
    }

    /// Stack `self` on top of `other`.
    pub fn vstack(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.cols != other.cols {
            return Err(Error::Dimension(format!("vstack of {} and {} columns", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(FMatrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Place `self` and `other` side by side.
    pub fn hstack(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.rows != other.rows {
            return Err(Error::Dimension(format!("hstack of {} and {} rows", self.rows, other.rows)));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(FMatrix { field: self.field, rows: self.rows, cols, data })
    }

    pub fn rank(&self) -> usize {
        echelon_in_place(&mut self.clone(), false).len()
    }
}

/// Subtract `c * src` from `dst` on columns `from..`.
#[inline]
fn axpy_neg(f: Field, dst: &mut [u32], src: &[u32], c: u32) {
    let neg = f.neg(c);
    for (d, &s) in dst.iter_mut().zip(src) {
        *d = f.mul_add(*d, neg, s);
    }
}

/// Gaussian elimination in place. Returns the pivot columns. With `reduce`
/// the result is the reduced row echelon form, otherwise a row echelon form
/// with normalized pivots.
fn echelon_in_place(m: &mut FMatrix, reduce: bool) -> Vec<usize> {
    let f = m.field;
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m.data[i * cols + c] != 0) else { continue };
        if pr != r {
            for j in c..cols {
                m.data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(m.data[r * cols + c]);
        for v in &mut m.data[r * cols + c..(r + 1) * cols] {
            *v = f.mul(*v, inv);
        }
        let start = if reduce { 0 } else { r + 1 };
        for i in start..rows {
            if i == r {
                continue;
            }
            let v = m.data[i * cols + c];
            if v == 0 {
                continue;
            }
            let (lo, hi) = m.data.split_at_mut(i.max(r) * cols);
            let (dst, src) = if i < r {
                (&mut lo[i * cols + c..(i + 1) * cols], &hi[c..cols])
            } else {
                (&mut hi[c..cols], &lo[r * cols + c..(r + 1) * cols])
            };
            axpy_neg(f, dst, src, v);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Reduced row echelon form, rank and pivot columns.
pub fn rref(m: &FMatrix) -> (FMatrix, usize, Vec<usize>) {
    let mut r = m.clone();
    let piv = echelon_in_place(&mut r, true);
    (r, piv.len(), piv)
}

/// Basis of the right null space `{v : M v = 0}`, one vector per row. Each
/// vector has a 1 in its free column, zeros in the other free columns and the
/// back-substituted values in the pivot columns.
pub fn kernel_basis(m: &FMatrix) -> FMatrix {
    let (r, rank, piv) = rref(m);
    let f = m.field;
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &c in &piv {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut out = FMatrix { field: f, rows: free.len(), cols, data: vec![0; free.len() * cols] };
    for (k, &fc) in free.iter().enumerate() {
        out.data[k * cols + fc] = 1 % f.p;
        for (i, &pc) in piv.iter().enumerate().take(rank) {
            out.data[k * cols + pc] = f.neg(r.get(i, fc));
        }
    }
    out
}

/// Basis of the left null space `{v : v M = 0}`, one vector per row.
pub fn left_kernel_basis(m: &FMatrix) -> FMatrix {
    kernel_basis(&m.transpose())
}

/// True iff `v` lies in the row space of `m`.
pub fn row_space_membership(m: &FMatrix, v: &[u32]) -> Result<bool> {
    if v.len() != m.cols {
        return Err(Error::Dimension(format!("vector of length {} against {} columns", v.len(), m.cols)));
    }
    let (r, rank, piv) = rref(m);
    let f = m.field;
    let mut w: Vec<u32> = v.iter().map(|&x| x % f.p).collect();
    for (i, &pc) in piv.iter().enumerate().take(rank) {
        let c = w[pc];
        if c != 0 {
            axpy_neg(f, &mut w[pc..], &r.row(i)[pc..], c);
        }
    }
    Ok(w.iter().all(|&x| x == 0))
}

/// Determinant of a square matrix.
pub fn det(m: &FMatrix) -> Result<u32> {
    if m.rows != m.cols {
        return Err(Error::Dimension(format!("determinant of a {}x{} matrix", m.rows, m.cols)));
    }
    let f = m.field;
    let n = m.rows;
    let mut a = m.clone();
    let mut d = 1 % f.p;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| a.data[i * n + c] != 0) else { return Ok(0) };
        if pr != c {
            for j in 0..n {
                a.data.swap(pr * n + j, c * n + j);
            }
            d = f.neg(d);
        }
        let pv = a.data[c * n + c];
        d = f.mul(d, pv);
        let inv = f.inv(pv);
        for i in c + 1..n {
            let v = a.data[i * n + c];
            if v == 0 {
                continue;
            }
            let factor = f.mul(v, inv);
            let (lo, hi) = a.data.split_at_mut(i * n);
            axpy_neg(f, &mut hi[c..n], &lo[c * n + c..(c + 1) * n], factor);
        }
    }
    Ok(d)
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &FMatrix) -> Result<Option<FMatrix>> {
    if m.rows != m.cols {
        return Err(Error::Dimension(format!("inverse of a {}x{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    let aug = m.hstack(&FMatrix::identity(m.prime(), n))?;
    let (r, _, piv) = rref(&aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return Ok(None);
    }
    Ok(Some(FMatrix::from_fn(m.prime(), n, n, |i, j| r.get(i, n + j))))
}

/// Incrementally grown row space in semi-echelon form. Used for span-growth
/// minimal generator extraction.
#[derive(Clone, Debug)]
pub struct Span {
    field: Field,
    dim: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(p: Prime, dim: usize) -> Span {
        Span { field: Field::new(p), dim, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    fn reduce(&self, v: &mut [u32]) {
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                axpy_neg(self.field, &mut v[pc..], &row[pc..], c);
            }
        }
    }

    /// Insert `v`; returns true when the rank grew.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.dim, "span vector length");
        if self.rows.len() == self.dim {
            return false;
        }
        let mut w: Vec<u32> = v.iter().map(|&x| x % self.field.p).collect();
        self.reduce(&mut w);
        match w.iter().position(|&x| x != 0) {
            None => false,
            Some(pc) => {
                let inv = self.field.inv(w[pc]);
                for x in &mut w[pc..] {
                    *x = self.field.mul(*x, inv);
                }
                self.rows.push(w);
                self.pivots.push(pc);
                true
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w: Vec<u32> = v.iter().map(|&x| x % self.field.p).collect();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(2).is_ok());
        assert!(Prime::new(2_147_483_647).is_ok());
        assert_eq!(Prime::new(1), Err(Error::NotPrime(1)));
        assert_eq!(Prime::new(91), Err(Error::NotPrime(91)));
        assert!(Prime::new(1 << 31).is_err());
        assert!(p(5).is_power(125));
        assert!(!p(5).is_power(1));
        assert!(!p(5).is_power(50));
    }

    #[test]
    fn barrett_matches_remainder() {
        for &q in &[2u64, 3, 5, 7, 101, 65_521, 2_147_483_647] {
            let f = Field::new(p(q));
            for &x in &[0u64, 1, q - 1, q, q + 1, u64::MAX, u64::MAX - 1, (q - 1) * (q - 1) + q - 1, 1 << 63] {
                assert_eq!(f.reduce(x) as u64, x % q, "x={x} p={q}");
            }
        }
    }

    #[test]
    fn rref_examples() {
        let (_, r, piv) = rref(&FMatrix::identity(p(5), 3));
        assert_eq!((r, piv), (3, vec![0, 1, 2]));
        let (_, r, piv) = rref(&FMatrix::zeros(p(5), 2, 4));
        assert_eq!((r, piv), (0, vec![]));
        let m = FMatrix::from_i64(p(5), 2, 2, &[1, 2, 2, 4]).unwrap();
        let (_, r, piv) = rref(&m);
        assert_eq!((r, piv), (1, vec![0]));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(kernel_basis(&FMatrix::identity(p(7), 4)).rows(), 0);
        let k = kernel_basis(&FMatrix::zeros(p(7), 2, 3));
        assert_eq!(k, FMatrix::identity(p(7), 3));
        let k = kernel_basis(&FMatrix::from_i64(p(5), 1, 2, &[1, 2]).unwrap());
        assert_eq!(k.to_rows(), vec![vec![3, 1]]);
    }

    #[test]
    fn membership_examples() {
        let id = FMatrix::identity(p(5), 3);
        assert!(row_space_membership(&id, &[1, 4, 2]).unwrap());
        assert!(!row_space_membership(&FMatrix::zeros(p(5), 2, 3), &[0, 1, 0]).unwrap());
        let m = FMatrix::from_i64(p(5), 1, 2, &[1, 2]).unwrap();
        assert!(row_space_membership(&m, &[2, 4]).unwrap());
        assert!(!row_space_membership(&m, &[2, 3]).unwrap());
        assert!(matches!(row_space_membership(&m, &[1]), Err(Error::Dimension(_))));
    }

    #[test]
    fn det_and_inverse() {
        let m = FMatrix::from_i64(p(7), 2, 2, &[1, 2, 3, 4]).unwrap();
        assert_eq!(det(&m).unwrap(), 5); // -2 mod 7
        let inv = inverse(&m).unwrap().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FMatrix::identity(p(7), 2));
        let s = FMatrix::from_i64(p(7), 2, 2, &[1, 2, 2, 4]).unwrap();
        assert_eq!(det(&s).unwrap(), 0);
        assert!(inverse(&s).unwrap().is_none());
    }

    #[test]
    fn span_growth() {
        let mut s = Span::new(p(3), 3);
        assert!(s.insert(&[1, 1, 0]));
        assert!(s.insert(&[0, 1, 1]));
        assert!(!s.insert(&[1, 2, 1]));
        assert!(s.contains(&[2, 2, 0]));
        assert!(s.insert(&[0, 0, 1]));
        assert_eq!(s.rank(), 3);
    }
}
