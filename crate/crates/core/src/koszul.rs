//! Strands of Koszul type on the symmetric algebra S and on the divided
//! powers D, the subcomplex on `D' = S·φ`, its homology ranks `C_{i,j}` and
//! the generator-degree ledger of truncated ideals.
//!
//! Bases: wedge monomials `e_I` for increasing index tuples `I` in
//! lexicographic order; tensor products are wedge-major (`e_I ⊗ m` sits at
//! `index(I)·dim + rank(m)`). Matrices act on row vectors, so consecutive
//! maps compose as `M_{a} · M_{a-1} = 0`. The differential removes the
//! `j`-th wedge factor (1-indexed) with sign `(−1)^j`.

use crate::error::{Error, Result};
use crate::ffla::sparse::{SparseEchelon, SparseVec};
use crate::ffla::{rref, FMatrix, Field, Prime};
use crate::invsys::{dprime_basis, truncated_ideal_generators};
use crate::polyring::{binom, monomial_count, rank_exps, unrank_into, DividedElem};
use serde::Serialize;
use std::collections::BTreeSet;

/// Increasing `a`-subsets of `0..n` in lexicographic order.
pub fn wedge_basis(n: usize, a: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(a);
    fn rec(start: usize, n: usize, a: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == a {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, a, cur, out);
            cur.pop();
        }
    }
    if a <= n {
        rec(0, n, a, &mut cur, &mut out);
    }
    out
}

/// Position of each subset (as a bitmask) in [`wedge_basis`].
fn wedge_index(n: usize, a: usize) -> Vec<u32> {
    let mut idx = vec![u32::MAX; 1 << n];
    for (k, w) in wedge_basis(n, a).iter().enumerate() {
        let mask: usize = w.iter().map(|&i| 1 << i).sum();
        idx[mask] = k as u32;
    }
    idx
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrandKind {
    /// `κ_{a,b} : Λ^a ⊗ S_b → Λ^{a−1} ⊗ S_{b+1}`, multiplying by the removed variable.
    Kappa,
    /// The Koszul differential on `P = k[x]`, same shape as `Kappa`.
    Kos,
    /// `η_{a,b} : Λ^a ⊗ D_b → Λ^{a−1} ⊗ D_{b−1}`, contracting by the removed variable.
    Eta,
    /// `η` restricted to `Λ^a ⊗ D'_b → Λ^{a−1} ⊗ D'_{b−1}` in the echelon bases of `D'`.
    EtaPrime,
}

/// A strand map with its bidegree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandMatrix {
    pub kind: StrandKind,
    pub a: usize,
    pub b: u32,
    pub matrix: FMatrix,
}

/// Sparse rows of a strand map whose source is `Λ^a ⊗ V` for a space `V`
/// spanned by the given rows over monomials of degree `b`. `raise` selects
/// multiplication (S side) versus contraction (D side).
fn strand_rows(field: Field, n: usize, a: usize, b: u32, src: &[SparseVec], raise: bool) -> (Vec<SparseVec>, usize) {
    let tdeg = if raise { b as i64 + 1 } else { b as i64 - 1 };
    let tdim = monomial_count(n, tdeg);
    let wedges = wedge_basis(n, a);
    let tidx = if a > 0 { wedge_index(n, a - 1) } else { Vec::new() };
    let mut rows = Vec::with_capacity(wedges.len() * src.len());
    let mut buf = vec![0u32; n];
    for w in &wedges {
        let mask: usize = w.iter().map(|&i| 1 << i).sum();
        for v in src {
            let mut pairs = Vec::new();
            if a > 0 && tdeg >= 0 {
                for (pos, &var) in w.iter().enumerate() {
                    let sign_neg = (pos + 1) % 2 == 1;
                    let t = tidx[mask & !(1 << var)] as usize;
                    for (col, c) in v.iter() {
                        unrank_into(n, b, col, &mut buf);
                        if raise {
                            buf[var] += 1;
                        } else if buf[var] == 0 {
                            continue;
                        } else {
                            buf[var] -= 1;
                        }
                        let val = if sign_neg { field.neg(c) } else { c };
                        pairs.push(((t * tdim + rank_exps(&buf)) as u32, val));
                    }
                }
            }
            rows.push(SparseVec::from_pairs(field, pairs));
        }
    }
    let cols = if a > 0 && tdeg >= 0 { binom(n as i64, a as i64 - 1) as usize * tdim } else { 0 };
    (rows, cols)
}

fn unit_rows(dim: usize) -> Vec<SparseVec> {
    (0..dim).map(|k| SparseVec { idx: vec![k as u32], val: vec![1] }).collect()
}

fn to_dense(p: Prime, rows: &[SparseVec], cols: usize) -> FMatrix {
    let dense: Vec<Vec<u32>> = rows.iter().map(|r| r.to_dense(cols)).collect();
    FMatrix::from_rows(p, cols, &dense).expect("row lengths match")
}

fn sparse_rows(m: &FMatrix) -> Vec<SparseVec> {
    let f = m.field();
    (0..m.rows())
        .map(|r| SparseVec::from_pairs(f, m.row(r).iter().enumerate().map(|(c, &v)| (c as u32, v)).collect()))
        .collect()
}

/// The strand map of the given kind in bidegree `(a, b)`. `phi` is required
/// for `EtaPrime` and supplies the prime otherwise only through `p`.
pub fn strand_matrix(
    kind: StrandKind,
    p: Prime,
    n: usize,
    a: usize,
    b: u32,
    phi: Option<&DividedElem>,
) -> Result<StrandMatrix> {
    if a > n {
        return Err(Error::OutOfRange(format!("wedge degree {a} above n={n}")));
    }
    let field = Field::new(p);
    let matrix = match kind {
        StrandKind::Kappa | StrandKind::Kos => {
            let (rows, cols) = strand_rows(field, n, a, b, &unit_rows(monomial_count(n, b as i64)), true);
            to_dense(p, &rows, cols)
        }
        StrandKind::Eta => {
            let (rows, cols) = strand_rows(field, n, a, b, &unit_rows(monomial_count(n, b as i64)), false);
            to_dense(p, &rows, cols)
        }
        StrandKind::EtaPrime => {
            let phi = phi.ok_or_else(|| Error::Precondition("eta_prime needs φ".into()))?;
            if phi.n() != n || phi.prime() != p {
                return Err(Error::Dimension("φ does not match p or n".into()));
            }
            let s = phi.degree();
            if b > s {
                return Err(Error::OutOfRange(format!("D' degree {b} above socle degree {s}")));
            }
            let src = dprime_basis(phi, s - b)?;
            let (rows, cols) = strand_rows(field, n, a, b, &sparse_rows(&src), false);
            let ambient = to_dense(p, &rows, cols);
            if a == 0 || b == 0 {
                FMatrix::zeros(p, ambient.rows(), 0)
            } else {
                // Coordinates in the echelon basis of Λ^{a−1} ⊗ D'_{b−1} are
                // read at the pivot columns of each wedge block.
                let tgt = dprime_basis(phi, s - b + 1)?;
                let (_, _, piv) = rref(&tgt);
                let tdim = monomial_count(n, b as i64 - 1);
                let blocks = binom(n as i64, a as i64 - 1) as usize;
                FMatrix::from_fn(p, ambient.rows(), blocks * piv.len(), |r, c| {
                    let (blk, k) = (c / piv.len(), c % piv.len());
                    ambient.get(r, blk * tdim + piv[k])
                })
            }
        }
    };
    Ok(StrandMatrix { kind, a, b, matrix })
}

/// A spanning set of `D'_j = S_{s−j}·φ`, as sparse rows over `D_j`. When
/// the span fills every divided monomial whose exponents stay below those
/// occurring in `φ`, the monomials themselves are returned.
fn dprime_rows(phi: &DividedElem, j: i64) -> Vec<SparseVec> {
    let s = phi.degree() as i64;
    if j < 0 || j > s {
        return Vec::new();
    }
    let n = phi.n();
    let field = phi.field();
    let j = j as u32;
    let terms = phi.terms();
    let bound: Vec<u32> = (0..n).map(|k| terms.iter().map(|t| t.0[k]).max().unwrap_or(0)).collect();
    let dim = monomial_count(n, j as i64);
    let mut e = SparseEchelon::new(phi.prime(), dim);
    let m = s as u32 - j;
    let mut a = vec![0u32; n];
    let mut diff = vec![0u32; n];
    for r in 0..monomial_count(n, m as i64) {
        unrank_into(n, m, r, &mut a);
        let mut pairs = Vec::new();
        for (b, c) in &terms {
            if a.iter().zip(b).all(|(x, y)| x <= y) {
                for k in 0..n {
                    diff[k] = b[k] - a[k];
                }
                pairs.push((rank_exps(&diff) as u32, *c));
            }
        }
        e.insert(&SparseVec::from_pairs(field, pairs));
    }
    let mut boxed = Vec::new();
    let mut buf = vec![0u32; n];
    for r in 0..dim {
        unrank_into(n, j, r, &mut buf);
        if buf.iter().zip(&bound).all(|(x, y)| x <= y) {
            boxed.push(r);
        }
    }
    if e.rank() == boxed.len() {
        boxed.into_iter().map(|r| SparseVec { idx: vec![r as u32], val: vec![1] }).collect()
    } else {
        e.basis_rows().to_vec()
    }
}

fn eta_prime_rank(phi: &DividedElem, i: usize, j: i64, src: &[SparseVec]) -> usize {
    let n = phi.n();
    if i == 0 || i > n || j <= 0 || src.is_empty() {
        return 0;
    }
    let (rows, cols) = strand_rows(phi.field(), n, i, j as u32, src, false);
    let mut e = SparseEchelon::new(phi.prime(), cols);
    for r in &rows {
        e.insert(r);
    }
    e.rank()
}

/// `rank C_{i,j}`: homology of the `η'` strand at `Λ^i ⊗ D'_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CRank {
    pub i: usize,
    pub j: u32,
    pub rank: usize,
}

pub fn c_rank(phi: &DividedElem, i: usize, j: u32) -> Result<CRank> {
    let n = phi.n();
    if i > n || j > phi.degree() {
        return Err(Error::OutOfRange(format!("C_{{{i},{j}}} outside 0..={n} × 0..={}", phi.degree())));
    }
    let here = dprime_rows(phi, j as i64);
    let above = dprime_rows(phi, j as i64 + 1);
    let cycles = binom(n as i64, i as i64) as usize * here.len() - eta_prime_rank(phi, i, j as i64, &here);
    let bounds = eta_prime_rank(phi, i + 1, j as i64 + 1, &above);
    Ok(CRank { i, j, rank: cycles - bounds })
}

/// Generator degrees of `ann(φ)_{≥m}`: measured, and the superset allowed by
/// the strand homology (`m`, `m+1`, and `m+t−j+1` for each `j < t = s−m`
/// with `C_{1,j} ≠ 0`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeLedger {
    pub m: u32,
    pub measured: BTreeSet<u32>,
    pub predicted: BTreeSet<u32>,
    pub contained: bool,
}

pub fn truncated_degree_ledger(phi: &DividedElem, m: u32) -> Result<DegreeLedger> {
    let s = phi.degree();
    if m == 0 || m > s + 1 {
        return Err(Error::OutOfRange(format!("truncation degree {m} outside 1..={}", s + 1)));
    }
    let measured: BTreeSet<u32> = truncated_ideal_generators(phi, m).into_keys().collect();
    let mut predicted: BTreeSet<u32> = [m, m + 1].into_iter().collect();
    let t = s.saturating_sub(m);
    for j in 0..t {
        if c_rank(phi, 1, j)?.rank != 0 {
            predicted.insert(m + t - j + 1);
        }
    }
    let contained = measured.is_subset(&predicted);
    Ok(DegreeLedger { m, measured, predicted, contained })
}

/// `dim L_{a,b} = dim ker κ_{a,b}`.
pub fn l_rank(p: Prime, n: usize, a: usize, b: u32) -> Result<usize> {
    let k = strand_matrix(StrandKind::Kappa, p, n, a, b, None)?.matrix;
    Ok(k.rows() - k.rank())
}
