//! Betti numbers as homology: `Tor^P(M, k)` from the Koszul complex on
//! `M = P/(x^q, f)`, and `Tor^R(M, k)` from the Tate resolution of `k` over
//! `R = P/(f)`. Neither route builds a resolution of `M`, so both serve as
//! independent checks of the syzygy engine.
//!
//! The Tate complex is `Λ(e_1..e_n) ⊗ Γ(y) ⊗ M` with `e_k` in bidegree
//! `(1, 1)`, `y` in `(2, d)`, `d(e_k) = x_k` and `d(y) = Σ h_k e_k` where
//! `f = Σ x_k h_k`.

use super::table::{BettiTable, RingTag};
use crate::artinian::QuotientModel;
use crate::error::{Error, Result};
use crate::ffla::FMatrix;
use crate::koszul::wedge_basis;
use crate::polyring::HomogPoly;

/// `h_k` with `f = Σ x_k h_k`: each term goes to its first variable.
pub(crate) fn split_by_variables(f: &HomogPoly) -> Vec<HomogPoly> {
    let n = f.n();
    let d = f.degree();
    let mut out = vec![HomogPoly::zero(f.prime(), n, d - 1); n];
    for (mut e, c) in f.terms() {
        let k = e.iter().position(|&x| x > 0).expect("positive degree");
        e[k] -= 1;
        out[k] = out[k].add(&HomogPoly::monomial(f.prime(), &e).scale(c)).expect("same degree");
    }
    out
}

struct TateComplex {
    model: QuotientModel,
    n: usize,
    d: u32,
    /// `None` for the plain Koszul complex.
    h: Option<Vec<HomogPoly>>,
}

#[derive(Clone, Copy)]
struct Summand {
    a: usize,
    b: usize,
}

impl TateComplex {
    fn summands(&self, i: usize) -> Vec<Summand> {
        let bmax = if self.h.is_some() { i / 2 } else { 0 };
        (0..=bmax).map(|b| Summand { a: i - 2 * b, b }).filter(|s| s.a <= self.n).collect()
    }

    fn mdeg(&self, s: Summand, j: i64) -> i64 {
        j - s.a as i64 - (s.b as i64) * self.d as i64
    }

    fn layout(&self, i: usize, j: i64) -> (Vec<Summand>, Vec<usize>) {
        let sums = self.summands(i);
        let mut off = vec![0];
        for &s in &sums {
            let blk = wedge_basis(self.n, s.a).len() * self.model.dim(self.mdeg(s, j));
            off.push(off.last().unwrap() + blk);
        }
        (sums, off)
    }

    fn dim(&self, i: usize, j: i64) -> usize {
        *self.layout(i, j).1.last().unwrap()
    }

    /// Matrix of `d: C_{i,j} → C_{i−1,j}` acting on row vectors.
    fn differential(&self, i: usize, j: i64) -> FMatrix {
        let p = self.model.prime();
        let field = self.model.field();
        let (src, soff) = self.layout(i, j);
        if i == 0 {
            return FMatrix::zeros(p, *soff.last().unwrap(), 0);
        }
        let (tgt, toff) = self.layout(i - 1, j);
        let mut m = FMatrix::zeros(p, *soff.last().unwrap(), *toff.last().unwrap());
        let tpos = |a: usize, b: usize| tgt.iter().position(|s| s.a == a && s.b == b);
        for (si, &s) in src.iter().enumerate() {
            let mj = self.mdeg(s, j);
            let mdim = self.model.dim(mj);
            if mdim == 0 {
                continue;
            }
            let wedges = wedge_basis(self.n, s.a);
            // Koszul part: remove one wedge factor, multiply by its variable.
            if let Some(ti) = tpos(s.a.wrapping_sub(1), s.b).filter(|_| s.a > 0) {
                let twedges = wedge_basis(self.n, s.a - 1);
                let tdim = self.model.dim(mj + 1);
                let mats: Vec<FMatrix> = (0..self.n).map(|k| self.model.mul_var(k, mj as u32)).collect();
                for (wi, w) in wedges.iter().enumerate() {
                    for (pos, &var) in w.iter().enumerate() {
                        let rest: Vec<usize> = w.iter().copied().filter(|&x| x != var).collect();
                        let twi = twedges.iter().position(|t| *t == rest).unwrap();
                        let neg = pos % 2 == 1;
                        for r in 0..mdim {
                            let row = soff[si] + wi * mdim + r;
                            for c in 0..tdim {
                                let v = mats[var].get(r, c);
                                if v != 0 {
                                    let col = toff[ti] + twi * tdim + c;
                                    let v = if neg { field.neg(v) } else { v };
                                    m.set(row, col, field.add(m.get(row, col), v));
                                }
                            }
                        }
                    }
                }
            }
            // Divided-power part: y^(b) ↦ (Σ h_k e_k) y^(b−1), placed after e_I.
            if let (Some(h), true) = (&self.h, s.b > 0) {
                if let Some(ti) = tpos(s.a + 1, s.b - 1) {
                    let twedges = wedge_basis(self.n, s.a + 1);
                    let tdim = self.model.dim(mj + self.d as i64 - 1);
                    let mats: Vec<FMatrix> = h.iter().map(|hk| self.model.mul_poly(hk, mj as u32)).collect();
                    for (wi, w) in wedges.iter().enumerate() {
                        for k in 0..self.n {
                            if w.contains(&k) {
                                continue;
                            }
                            let mut joined = w.clone();
                            joined.push(k);
                            joined.sort_unstable();
                            let twi = twedges.iter().position(|t| *t == joined).unwrap();
                            let above = w.iter().filter(|&&x| x > k).count();
                            let neg = (s.a + above) % 2 == 1;
                            for r in 0..mdim {
                                let row = soff[si] + wi * mdim + r;
                                for c in 0..tdim {
                                    let v = mats[k].get(r, c);
                                    if v != 0 {
                                        let col = toff[ti] + twi * tdim + c;
                                        let v = if neg { field.neg(v) } else { v };
                                        m.set(row, col, field.add(m.get(row, col), v));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        m
    }

    /// Largest internal degree with a nonzero piece in homological degree `i`.
    fn top(&self, i: usize) -> i64 {
        let t = self.model.top_degree() as i64;
        self.summands(i).iter().map(|s| t + s.a as i64 + (s.b as i64) * self.d as i64).max().unwrap_or(-1)
    }

    fn betti(&self, steps: usize, tag: RingTag) -> BettiTable {
        let mut table = BettiTable::new(tag, steps);
        for i in 0..=steps {
            for j in 0..=self.top(i) {
                let dim = self.dim(i, j);
                if dim == 0 {
                    continue;
                }
                let out = self.differential(i, j).rank();
                let inc = self.differential(i + 1, j).rank();
                table.add(i, j, dim - out - inc);
            }
        }
        table
    }
}

fn check(f: &HomogPoly, q: u32) -> Result<()> {
    if f.is_zero() || f.degree() == 0 {
        return Err(Error::Precondition("f must be a nonzero form of positive degree".into()));
    }
    if q < 1 {
        return Err(Error::Precondition("q must be positive".into()));
    }
    Ok(())
}

/// `β^P_{i,j}(P/(x^q, f)) = dim H_i(K(x) ⊗ M)_j`.
pub fn koszul_betti_over_p(f: &HomogPoly, q: u32) -> Result<BettiTable> {
    check(f, q)?;
    let model = QuotientModel::new(f.prime(), f.n(), q, Some(f))?;
    let cx = TateComplex { n: f.n(), d: f.degree(), model, h: None };
    Ok(cx.betti(f.n(), RingTag::P))
}

/// `β^R_{i,j}(R/m^[q])` for `i ≤ steps` from the Tate complex.
pub fn tate_betti_over_r(f: &HomogPoly, q: u32, steps: usize) -> Result<BettiTable> {
    check(f, q)?;
    let model = QuotientModel::new(f.prime(), f.n(), q, Some(f))?;
    let cx = TateComplex { n: f.n(), d: f.degree(), model, h: Some(split_by_variables(f)) };
    Ok(cx.betti(steps, RingTag::R))
}

#[cfg(test)]
pub(crate) fn tate_square_is_zero(f: &HomogPoly, q: u32, steps: usize) -> bool {
    let model = QuotientModel::new(f.prime(), f.n(), q, Some(f)).unwrap();
    let cx = TateComplex { n: f.n(), d: f.degree(), model, h: Some(split_by_variables(f)) };
    (2..=steps).all(|i| {
        (0..=cx.top(i)).all(|j| {
            let a = cx.differential(i, j);
            let b = cx.differential(i - 1, j);
            a.rows() == 0 || b.cols() == 0 || a.mul(&b).unwrap().is_zero()
        })
    })
}
