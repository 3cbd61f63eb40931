//! Pfaffians and Pfaffian adjoints of alternating matrices, the signed
//! maximal Pfaffian check for odd alternating matrices, and the determinant
//! test `det(A) = v·f²` for linear tails of matrix factorizations.

use crate::error::{Error, Result};
use crate::ffla::{Field, Prime};
use crate::polymat::PolyMatrix;
use crate::polyring::{HomogPoly, SparsePoly};
use std::collections::HashMap;
use std::fmt::Debug;

/// Commutative ring operations needed for Pfaffian expansion.
pub trait Ring: Clone + PartialEq + Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

/// An element of `GF(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp {
    pub field: Field,
    pub v: u32,
}

impl Fp {
    pub fn new(p: Prime, v: u32) -> Fp {
        let field = Field::new(p);
        Fp { field, v: field.reduce(v as u64) }
    }
}

impl Ring for Fp {
    fn zero_like(&self) -> Fp {
        Fp { field: self.field, v: 0 }
    }
    fn one_like(&self) -> Fp {
        Fp { field: self.field, v: 1 }
    }
    fn add(&self, o: &Fp) -> Fp {
        Fp { field: self.field, v: self.field.add(self.v, o.v) }
    }
    fn mul(&self, o: &Fp) -> Fp {
        Fp { field: self.field, v: self.field.mul(self.v, o.v) }
    }
    fn neg(&self) -> Fp {
        Fp { field: self.field, v: self.field.neg(self.v) }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
}

impl Ring for SparsePoly {
    fn zero_like(&self) -> SparsePoly {
        SparsePoly::zero(self.prime(), self.n())
    }
    fn one_like(&self) -> SparsePoly {
        SparsePoly::constant(self.prime(), self.n(), 1)
    }
    fn add(&self, o: &SparsePoly) -> SparsePoly {
        SparsePoly::add(self, o)
    }
    fn mul(&self, o: &SparsePoly) -> SparsePoly {
        SparsePoly::mul(self, o)
    }
    fn neg(&self) -> SparsePoly {
        SparsePoly::neg(self)
    }
    fn is_zero(&self) -> bool {
        SparsePoly::is_zero(self)
    }
}

/// A square alternating matrix: zero diagonal and `X[j][i] = −X[i][j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix<T: Ring> {
    size: usize,
    entries: Vec<T>,
}

pub type SkewPolyMatrix = SkewMatrix<SparsePoly>;

impl<T: Ring> SkewMatrix<T> {
    /// Build from the full matrix, checking that it is alternating.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<SkewMatrix<T>> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(Error::Dimension("alternating matrix must be square".into()));
        }
        for i in 0..size {
            if !rows[i][i].is_zero() {
                return Err(Error::Precondition(format!("diagonal entry {i} is nonzero")));
            }
            for j in 0..i {
                if rows[i][j] != rows[j][i].neg() {
                    return Err(Error::Precondition(format!("entries ({i},{j}) and ({j},{i}) are not opposite")));
                }
            }
        }
        Ok(SkewMatrix { size, entries: rows.into_iter().flatten().collect() })
    }

    /// Build from the strict upper triangle, read row by row; `zero` fixes
    /// the ring for the diagonal.
    pub fn from_upper(size: usize, zero: &T, upper: &[T]) -> Result<SkewMatrix<T>> {
        if upper.len() != size * size.saturating_sub(1) / 2 {
            return Err(Error::Dimension(format!(
                "{} entries do not fill the upper triangle of size {size}",
                upper.len()
            )));
        }
        let mut entries = vec![zero.zero_like(); size * size];
        let mut it = upper.iter();
        for i in 0..size {
            for j in i + 1..size {
                let v = it.next().unwrap().clone();
                entries[j * size + i] = v.neg();
                entries[i * size + j] = v;
            }
        }
        Ok(SkewMatrix { size, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.size + j]
    }

    /// The alternating matrix on the kept indices.
    pub fn submatrix(&self, keep: &[usize]) -> SkewMatrix<T> {
        let entries = keep.iter().flat_map(|&i| keep.iter().map(move |&j| self.get(i, j).clone())).collect();
        SkewMatrix { size: keep.len(), entries }
    }

    /// Swap indices `i` and `j` in both rows and columns.
    pub fn swap(&self, i: usize, j: usize) -> SkewMatrix<T> {
        let mut perm: Vec<usize> = (0..self.size).collect();
        perm.swap(i, j);
        self.submatrix(&perm)
    }

    fn zero(&self) -> T {
        self.entries.first().map(|e| e.zero_like()).expect("nonempty matrix")
    }

    /// Plain product `X·Y` of the underlying square matrices.
    pub fn product(&self, other: &SkewMatrix<T>) -> Vec<Vec<T>> {
        let n = self.size;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(self.zero(), |acc, k| {
                            let (a, b) = (self.get(i, k), other.get(k, j));
                            if a.is_zero() || b.is_zero() {
                                acc
                            } else {
                                acc.add(&a.mul(b))
                            }
                        })
                    })
                    .collect()
            })
            .collect()
    }
}

/// Pfaffian of the principal submatrix on the index set `mask`, by
/// expansion along its first index with memoization on subsets.
fn pf_subset<T: Ring>(x: &SkewMatrix<T>, mask: u32, one: &T, memo: &mut HashMap<u32, T>) -> T {
    if mask == 0 {
        return one.clone();
    }
    if mask.count_ones() % 2 == 1 {
        return one.zero_like();
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let first = mask.trailing_zeros() as usize;
    let mut acc = one.zero_like();
    let mut pos = 0usize;
    let mut rest = mask & !(1 << first);
    while rest != 0 {
        let j = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        pos += 1;
        let a = x.get(first, j);
        if a.is_zero() {
            continue;
        }
        let sub = pf_subset(x, mask & !(1 << first) & !(1 << j), one, memo);
        if sub.is_zero() {
            continue;
        }
        let term = a.mul(&sub);
        acc = if pos % 2 == 1 { acc.add(&term) } else { acc.sub(&term) };
    }
    memo.insert(mask, acc.clone());
    acc
}

fn check_size<T: Ring>(x: &SkewMatrix<T>) -> Result<()> {
    if x.size() > 30 {
        return Err(Error::OutOfRange(format!("Pfaffian expansion limited to size 30, got {}", x.size())));
    }
    Ok(())
}

/// `Pf(X)`; the matrix must have even size.
pub fn pfaffian<T: Ring>(x: &SkewMatrix<T>) -> Result<T> {
    check_size(x)?;
    if x.size() % 2 == 1 {
        return Err(Error::Precondition(format!("Pfaffian needs even size, got {}", x.size())));
    }
    if x.size() == 0 {
        return Err(Error::Precondition("empty matrix has no ring context".into()));
    }
    let one = x.zero().one_like();
    Ok(pf_subset(x, (1u32 << x.size()) - 1, &one, &mut HashMap::new()))
}

/// `X^∨` with entries `(−1)^{i+j} Pf_{ij}(X)` above the diagonal and
/// `(−1)^{i+j+1} Pf_{ji}(X)` below it, so that `X·X^∨ = Pf(X)·I`.
pub fn pfaffian_adjoint<T: Ring>(x: &SkewMatrix<T>) -> Result<SkewMatrix<T>> {
    check_size(x)?;
    let n = x.size();
    if n % 2 == 1 || n == 0 {
        return Err(Error::Precondition(format!("Pfaffian adjoint needs positive even size, got {n}")));
    }
    let one = x.zero().one_like();
    let full = (1u32 << n) - 1;
    let mut memo = HashMap::new();
    let mut upper = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let pf = pf_subset(x, full & !(1 << i) & !(1 << j), &one, &mut memo);
            upper.push(if (i + j) % 2 == 0 { pf } else { pf.neg() });
        }
    }
    SkewMatrix::from_upper(n, &one, &upper)
}

/// Signed maximal Pfaffians `(−1)^{j} Pf_j(X)` (0-based `j`, so the first
/// carries a plus sign) of an odd alternating matrix.
pub fn signed_maximal_pfaffians<T: Ring>(x: &SkewMatrix<T>) -> Result<Vec<T>> {
    check_size(x)?;
    let n = x.size();
    if n % 2 == 0 {
        return Err(Error::Precondition(format!("maximal Pfaffians need odd size, got {n}")));
    }
    let one = x.zero().one_like();
    let full = (1u32 << n) - 1;
    let mut memo = HashMap::new();
    Ok((0..n)
        .map(|j| {
            let pf = pf_subset(x, full & !(1 << j), &one, &mut memo);
            if j % 2 == 0 {
                pf
            } else {
                pf.neg()
            }
        })
        .collect())
}

/// The scalar `u ≠ 0` with `a = u·b` for every pair, if one exists.
fn common_scalar(a: &[SparsePoly], b: &[SparsePoly]) -> Option<u32> {
    let (k, bk) = b.iter().enumerate().find(|(_, v)| !v.is_zero())?;
    let (e, cb) = bk.terms().next()?;
    let ca = a[k].terms().find(|(x, _)| *x == e).map(|(_, c)| c)?;
    let field = Field::new(bk.prime());
    let u = field.mul(ca, field.inv(cb));
    a.iter().zip(b).all(|(x, y)| *x == y.scale(u)).then_some(u)
}

/// Whether `gens_j = u·(−1)^{j} Pf_j(X)` for one unit `u` (0-based `j`).
pub fn be_pfaffian_check(gens: &[SparsePoly], x: &SkewPolyMatrix) -> Result<bool> {
    if gens.len() != x.size() {
        return Err(Error::Dimension(format!("{} generators for a matrix of size {}", gens.len(), x.size())));
    }
    let pfs = signed_maximal_pfaffians(x)?;
    Ok(common_scalar(gens, &pfs).is_some())
}

/// `det(A)` for a square polynomial matrix by expansion over column subsets:
/// after placing the first `k` rows, `dp[S]` holds the signed sum over the
/// ways to use exactly the columns in `S`.
pub fn poly_det(a: &PolyMatrix) -> Result<SparsePoly> {
    let n = a.rows();
    if n != a.cols() {
        return Err(Error::Dimension(format!("determinant of a {}x{} matrix", a.rows(), a.cols())));
    }
    if n > 20 {
        return Err(Error::OutOfRange(format!("subset expansion limited to size 20, got {n}")));
    }
    let zero = SparsePoly::zero(a.prime(), a.nvars());
    let mut dp: HashMap<u32, SparsePoly> = HashMap::new();
    dp.insert(0, SparsePoly::constant(a.prime(), a.nvars(), 1));
    for row in 0..n {
        let mut next: HashMap<u32, SparsePoly> = HashMap::new();
        for (&mask, val) in &dp {
            for c in 0..n {
                if mask & (1 << c) != 0 || a.get(row, c).is_zero() {
                    continue;
                }
                let above = (mask >> (c + 1)).count_ones();
                let term = val.mul(a.get(row, c));
                let term = if above % 2 == 1 { term.neg() } else { term };
                let slot = next.entry(mask | (1 << c)).or_insert_with(|| zero.clone());
                *slot = slot.add(&term);
            }
        }
        next.retain(|_, v| !v.is_zero());
        dp = next;
    }
    Ok(dp.remove(&((1u32 << n) - 1)).unwrap_or(zero))
}

/// Outcome of the determinant test on a tail matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfCertificate {
    pub holds: bool,
    /// `v` with `det(A) = v·f²` when it holds.
    pub scalar: Option<u32>,
    pub det: SparsePoly,
}

/// Whether `det(A)` is a nonzero scalar multiple of `f²`.
pub fn certify_pf_of_tail(a: &PolyMatrix, f: &HomogPoly) -> Result<PfCertificate> {
    if a.rows() != 2 * f.degree() as usize {
        log::warn!("matrix of size {} for a form of degree {}; the claim concerns size 2d", a.rows(), f.degree());
    }
    let det = poly_det(a)?;
    let fp = SparsePoly::from_homog(f);
    let f2 = fp.mul(&fp);
    let scalar = common_scalar(std::slice::from_ref(&det), std::slice::from_ref(&f2));
    Ok(PfCertificate { holds: scalar.is_some(), scalar, det })
}
