//! Minimal graded free resolutions of `M = A/I` over `A = P` or `A = P/(f)`,
//! computed degree by degree with kernels of the evaluated differentials.
//!
//! In each homological step the kernel of the previous differential is
//! computed in every internal degree up to a bound; its minimal generators
//! in degree `j` are the kernel vectors outside the span of `x_k·K_{j−1}`.
//!
//! Degree bounds. `M` has finite length with top degree `T`, so over `P`
//! every syzygy of step `i` lives in degree at most `T + i`. Over `R` the
//! Shamash construction turns a `P`-resolution `G` of `M` into an
//! `R`-resolution with `F_i = ⊕_k G_{i−2k}(−kd)`; the minimal resolution is a
//! summand, so step `i` stays below `max_k (T + i − 2k + kd)`.

mod homology;
mod mf;
mod table;

pub use homology::{koszul_betti_over_p, tate_betti_over_r};
pub use mf::{extract_tail_mf, MatrixFactorization};
pub use table::{compare_tails, detect_periodic_tail, BettiTable, RingTag, TailComparison, TailDescriptor};

use crate::error::{Error, Result};
use crate::ffla::sparse::{NormalForms, SparseEchelon, SparseVec};
use crate::ffla::{Field, Prime};
use crate::hk::quotient_profile;
use crate::polymat::PolyMatrix;
use crate::polyring::{monomial_count, rank_exps, unrank_into, HomogPoly, SparsePoly};
use serde::Serialize;

/// One graded piece of `A`: its monomial basis and, over `P/(f)`, the
/// normal forms of all monomials of that degree.
struct Piece {
    dim: usize,
    exps: Vec<u32>,
    nf: Option<NormalForms>,
}

/// `P` or `P/(f)`, with pieces built on demand.
pub(crate) struct GradedRing {
    p: Prime,
    field: Field,
    n: usize,
    f: Option<HomogPoly>,
    pieces: Vec<Option<Piece>>,
}

impl GradedRing {
    pub(crate) fn new(p: Prime, n: usize, f: Option<&HomogPoly>) -> GradedRing {
        GradedRing { p, field: Field::new(p), n, f: f.cloned(), pieces: Vec::new() }
    }

    fn ensure(&mut self, j: i64) {
        if j < 0 {
            return;
        }
        let j = j as usize;
        if self.pieces.len() <= j {
            self.pieces.resize_with(j + 1, || None);
        }
        if self.pieces[j].is_some() {
            return;
        }
        let n = self.n;
        let full = monomial_count(n, j as i64);
        let mut buf = vec![0u32; n];
        let piece = match &self.f {
            Some(f) if f.degree() as usize <= j => {
                let d = f.degree();
                let mut e = SparseEchelon::new(self.p, full);
                let terms = f.terms();
                for r in 0..monomial_count(n, j as i64 - d as i64) {
                    unrank_into(n, j as u32 - d, r, &mut buf);
                    let base = buf.clone();
                    let pairs = terms
                        .iter()
                        .map(|(t, c)| {
                            for k in 0..n {
                                buf[k] = base[k] + t[k];
                            }
                            (rank_exps(&buf) as u32, *c)
                        })
                        .collect();
                    e.insert(&SparseVec::from_pairs(self.field, pairs));
                }
                let nf = e.normal_forms();
                let mut exps = Vec::with_capacity(nf.dim() * n);
                for &c in nf.basis_columns() {
                    unrank_into(n, j as u32, c, &mut buf);
                    exps.extend_from_slice(&buf);
                }
                Piece { dim: nf.dim(), exps, nf: Some(nf) }
            }
            _ => {
                let mut exps = Vec::with_capacity(full * n);
                for r in 0..full {
                    unrank_into(n, j as u32, r, &mut buf);
                    exps.extend_from_slice(&buf);
                }
                Piece { dim: full, exps, nf: None }
            }
        };
        self.pieces[j] = Some(piece);
    }

    fn piece(&self, j: i64) -> Option<&Piece> {
        if j < 0 {
            return None;
        }
        self.pieces.get(j as usize).and_then(|p| p.as_ref())
    }

    fn dim(&mut self, j: i64) -> usize {
        self.ensure(j);
        self.piece(j).map_or(0, |p| p.dim)
    }

    fn basis_exps(&self, j: i64, k: usize) -> &[u32] {
        let pc = self.piece(j).expect("piece built");
        &pc.exps[k * self.n..(k + 1) * self.n]
    }

    /// Add `c·class(x^exps)` into `acc`, a dense vector over the basis of
    /// degree `|exps|` (which must have been built).
    fn accumulate(&self, acc: &mut [u32], exps: &[u32], c: u32) {
        let j: u32 = exps.iter().sum();
        let pc = self.piece(j as i64).expect("piece built");
        let r = rank_exps(exps);
        match &pc.nf {
            Some(nf) => nf.accumulate(self.field, acc, r, c),
            None => acc[r] = self.field.add(acc[r], c),
        }
    }

    /// Class of a form in the basis of its degree.
    fn class_of(&mut self, g: &HomogPoly) -> Vec<u32> {
        let j = g.degree() as i64;
        let mut acc = vec![0u32; self.dim(j)];
        for (e, c) in g.terms() {
            self.accumulate(&mut acc, &e, c);
        }
        acc
    }

    /// Polynomial with the given coordinates over the basis of degree `j`.
    fn poly_of(&self, coords: &[u32], j: i64) -> SparsePoly {
        let mut out = SparsePoly::zero(self.p, self.n);
        for (k, &c) in coords.iter().enumerate() {
            if c != 0 {
                out.add_term(self.basis_exps(j, k).to_vec(), c);
            }
        }
        out
    }
}

/// A map of graded free modules. `entries` has one row per target generator
/// and one column per source generator; entry `(l, k)` is homogeneous of
/// degree `source[k] − target[l]` (zero when that is negative).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFreeMap {
    pub source: Vec<i64>,
    pub target: Vec<i64>,
    pub entries: PolyMatrix,
}

/// A minimal resolution truncated after `steps` homological steps.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub ring: RingTag,
    pub table: BettiTable,
    /// `maps[i]` is the differential `F_{i+1} → F_i`.
    pub maps: Vec<GradedFreeMap>,
    /// Largest internal degree scanned in each step.
    pub scanned_through: Vec<i64>,
}

/// Scan limits for one resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBounds {
    /// Top degree of the resolved module.
    pub top: i64,
    /// Degree of `f` over `P/(f)`, absent over `P`.
    pub hyper_degree: Option<u32>,
    pub n: usize,
}

impl DegreeBounds {
    /// Largest twist a minimal generator of step `i ≥ 2` can have.
    pub fn bound(&self, i: usize) -> i64 {
        match self.hyper_degree {
            None => self.top + i as i64,
            Some(d) => (0..=i / 2)
                .filter(|k| i - 2 * k <= self.n)
                .map(|k| self.top + (i - 2 * k) as i64 + (k as i64) * d as i64)
                .max()
                .unwrap_or(self.top + i as i64),
        }
    }
}

struct Step {
    twists: Vec<i64>,
    /// Image of each generator in the previous module, at its own twist.
    images: Vec<Vec<u32>>,
}

struct Engine {
    ring: GradedRing,
}

impl Engine {
    fn offsets(&mut self, twists: &[i64], j: i64) -> Vec<usize> {
        let mut off = Vec::with_capacity(twists.len() + 1);
        let mut total = 0;
        off.push(0);
        for &t in twists {
            total += self.ring.dim(j - t);
            off.push(total);
        }
        off
    }

    /// `acc += b · v` where `v` lies in degree `vdeg` of the free module with
    /// the given twists and `b` is a monomial; `acc` is laid out in degree
    /// `vdeg + |b|` with offsets `off`.
    fn mul_into(
        &self,
        v: &[u32],
        vdeg: i64,
        twists: &[i64],
        voff: &[usize],
        b: &[u32],
        acc: &mut [u32],
        off: &[usize],
    ) {
        let n = self.ring.n;
        let mut buf = vec![0u32; n];
        for (l, &t) in twists.iter().enumerate() {
            let block = &v[voff[l]..voff[l + 1]];
            let dst = &mut acc[off[l]..off[l + 1]];
            for (u, &c) in block.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let e = self.ring.basis_exps(vdeg - t, u);
                for k in 0..n {
                    buf[k] = e[k] + b[k];
                }
                self.ring.accumulate(dst, &buf, c);
            }
        }
    }

    fn ensure_range(&mut self, twists: &[i64], j: i64) {
        for &t in twists {
            self.ring.ensure(j - t);
        }
    }

    /// Basis of the kernel of `d: F_src → F_tgt` in degree `j`, as dense
    /// vectors over the basis of `(F_src)_j`.
    fn kernel(&mut self, src: &Step, tgt_twists: &[i64], j: i64) -> Vec<Vec<u32>> {
        let soff = self.offsets(&src.twists, j);
        let toff = self.offsets(tgt_twists, j);
        let cols = *toff.last().unwrap();
        let rows = *soff.last().unwrap();
        for &t in &src.twists {
            self.ring.ensure(t);
            self.ensure_range(tgt_twists, t);
        }
        self.ensure_range(tgt_twists, j);
        let field = self.ring.field;
        let mut e = SparseEchelon::with_tracking(self.ring.p, cols);
        let mut acc = vec![0u32; cols];
        for (k, &t) in src.twists.iter().enumerate() {
            let ioff = self.offsets(tgt_twists, t);
            let bdim = self.ring.dim(j - t);
            for bi in 0..bdim {
                acc.iter_mut().for_each(|a| *a = 0);
                let b = self.ring.basis_exps(j - t, bi).to_vec();
                self.mul_into(&src.images[k], t, tgt_twists, &ioff, &b, &mut acc, &toff);
                let pairs = acc.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (c as u32, v)).collect();
                e.insert(&SparseVec::from_pairs(field, pairs));
            }
        }
        debug_assert_eq!(e.inserted(), rows);
        e.kernel().iter().map(|v| v.to_dense(rows)).collect()
    }

    /// `I_j` for the ideal generated by `gens` (given by their classes).
    fn ideal_piece(&mut self, gens: &[(i64, Vec<u32>)], j: i64) -> Vec<Vec<u32>> {
        let dim = self.ring.dim(j);
        let field = self.ring.field;
        let mut e = SparseEchelon::new(self.ring.p, dim);
        let zero = [0i64];
        let off = [0, dim];
        for (t, g) in gens {
            if *t > j {
                continue;
            }
            let goff = [0, g.len()];
            for bi in 0..self.ring.dim(j - t) {
                let b = self.ring.basis_exps(j - t, bi).to_vec();
                let mut acc = vec![0u32; dim];
                self.mul_into(g, *t, &zero, &goff, &b, &mut acc, &off);
                let pairs = acc.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (c as u32, v)).collect();
                e.insert(&SparseVec::from_pairs(field, pairs));
            }
        }
        e.basis_rows().iter().map(|v| v.to_dense(dim)).collect()
    }

    /// New minimal generators in degree `j`: members of `kj` outside the span
    /// of `x_k · k_prev` (with `k_prev` in degree `j − 1`).
    fn new_generators(&mut self, twists: &[i64], k_prev: &[Vec<u32>], kj: &[Vec<u32>], j: i64) -> Vec<Vec<u32>> {
        if kj.is_empty() {
            return Vec::new();
        }
        let off = self.offsets(twists, j);
        let poff = self.offsets(twists, j - 1);
        let dim = *off.last().unwrap();
        let field = self.ring.field;
        let mut e = SparseEchelon::new(self.ring.p, dim);
        let n = self.ring.n;
        'outer: for v in k_prev {
            for k in 0..n {
                if e.rank() == kj.len() {
                    break 'outer;
                }
                let mut b = vec![0u32; n];
                b[k] = 1;
                let mut acc = vec![0u32; dim];
                self.mul_into(v, j - 1, twists, &poff, &b, &mut acc, &off);
                let pairs = acc.iter().enumerate().filter(|(_, &v)| v != 0).map(|(c, &v)| (c as u32, v)).collect();
                e.insert(&SparseVec::from_pairs(field, pairs));
            }
        }
        let mut out = Vec::new();
        for v in kj {
            if e.rank() == kj.len() {
                break;
            }
            let sv = SparseVec::from_pairs(
                field,
                v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(c, &x)| (c as u32, x)).collect(),
            );
            if e.insert(&sv) {
                out.push(v.clone());
            }
        }
        out
    }

    fn to_map(&mut self, src: &Step, tgt_twists: &[i64]) -> GradedFreeMap {
        let mut m = PolyMatrix::zeros(self.ring.p, self.ring.n, tgt_twists.len(), src.twists.len());
        for (k, &t) in src.twists.iter().enumerate() {
            let off = self.offsets(tgt_twists, t);
            for (l, &tl) in tgt_twists.iter().enumerate() {
                let poly = self.ring.poly_of(&src.images[k][off[l]..off[l + 1]], t - tl);
                m.set(l, k, poly);
            }
        }
        GradedFreeMap { source: src.twists.clone(), target: tgt_twists.to_vec(), entries: m }
    }
}

/// Resolve `A/(gens)` for `A = P` or `P/(f)` through `steps` steps. `top`
/// is the top degree of the quotient; `cap` optionally limits the scan.
fn resolve(ring: GradedRing, gens: &[HomogPoly], steps: usize, top: i64, cap: Option<i64>) -> Result<Resolution> {
    let tag = if ring.f.is_some() { RingTag::R } else { RingTag::P };
    let bounds = DegreeBounds { top, hyper_degree: ring.f.as_ref().map(|f| f.degree()), n: ring.n };
    let mut eng = Engine { ring };
    let mut table = BettiTable::new(tag, steps);
    table.add(0, 0, 1);
    let mut prev = Step { twists: vec![0], images: Vec::new() };
    let mut maps = Vec::new();
    let mut scanned = Vec::new();

    // Step 1: minimal generators of the ideal.
    let mut classes: Vec<(i64, Vec<u32>)> = gens.iter().map(|g| (g.degree() as i64, eng.ring.class_of(g))).collect();
    classes.retain(|(_, v)| v.iter().any(|&c| c != 0));
    if steps == 0 {
        return Ok(Resolution { ring: tag, table, maps, scanned_through: scanned });
    }
    let lo = classes.iter().map(|g| g.0).min().unwrap_or(0);
    let hi = classes.iter().map(|g| g.0).max().unwrap_or(-1);
    let mut step = Step { twists: Vec::new(), images: Vec::new() };
    let mut k_prev: Vec<Vec<u32>> = Vec::new();
    for j in lo..=hi {
        let kj = eng.ideal_piece(&classes, j);
        for g in eng.new_generators(&prev.twists, &k_prev, &kj, j) {
            step.twists.push(j);
            step.images.push(g);
        }
        k_prev = kj;
    }
    scanned.push(hi);

    for i in 1..=steps {
        for &t in &step.twists {
            table.add(i, t, 1);
        }
        maps.push(eng.to_map(&step, &prev.twists));
        if i == steps || step.twists.is_empty() {
            break;
        }
        // Step i+1: generators of ker(F_i → F_{i−1}).
        let bound = bounds.bound(i + 1);
        let hi = cap.map_or(bound, |c| c.min(bound));
        let lo = step.twists.iter().copied().min().unwrap() + 1;
        let mut next = Step { twists: Vec::new(), images: Vec::new() };
        let mut k_prev: Vec<Vec<u32>> = Vec::new();
        for j in lo..=hi {
            let kj = eng.kernel(&step, &prev.twists, j);
            let fresh = eng.new_generators(&step.twists, &k_prev, &kj, j);
            if j == hi && hi < bound && !fresh.is_empty() {
                return Err(Error::UncertifiedCap {
                    step: i + 1,
                    reason: format!("{} new generators at the cap degree {hi}", fresh.len()),
                    suggested: bound.max(0) as u32,
                });
            }
            for g in fresh {
                next.twists.push(j);
                next.images.push(g);
            }
            k_prev = kj;
        }
        if hi < bound {
            log::warn!("step {}: scan stopped at the cap {hi} below the certified bound {bound}", i + 1);
        }
        scanned.push(hi.max(lo - 1));
        prev = step;
        step = next;
    }
    Ok(Resolution { ring: tag, table, maps, scanned_through: scanned })
}

fn frobenius_gens(p: Prime, n: usize, q: u32) -> Vec<HomogPoly> {
    (0..n)
        .map(|k| {
            let mut e = vec![0u32; n];
            e[k] = q;
            HomogPoly::monomial(p, &e)
        })
        .collect()
}

/// Top degree of `P/(x^q, f)` (of `P/(x^q)` when `f` is absent).
fn quotient_top(n: usize, q: u32, f: Option<&HomogPoly>) -> i64 {
    match f {
        None => n as i64 * (q as i64 - 1),
        Some(f) => quotient_profile(f, q).iter().rposition(|&v| v > 0).map_or(-1, |t| t as i64),
    }
}

fn check_q(f: &HomogPoly, q: u32) -> Result<()> {
    if f.is_zero() || f.degree() == 0 {
        return Err(Error::Precondition("f must be a nonzero form of positive degree".into()));
    }
    if q < 1 {
        return Err(Error::Precondition("q must be positive".into()));
    }
    Ok(())
}

/// Minimal resolution of `P/(x1^q..xn^q, f)` over `P` (finite, length ≤ n).
pub fn resolve_over_p(f: &HomogPoly, q: u32) -> Result<Resolution> {
    check_q(f, q)?;
    let (p, n) = (f.prime(), f.n());
    let mut gens = frobenius_gens(p, n, q);
    gens.push(f.clone());
    resolve(GradedRing::new(p, n, None), &gens, n, quotient_top(n, q, Some(f)), None)
}

pub fn betti_over_p(f: &HomogPoly, q: u32) -> Result<BettiTable> {
    Ok(resolve_over_p(f, q)?.table)
}

/// The Koszul resolution of `P/(x1^q..xn^q)`.
pub fn betti_over_p_ci(p: Prime, n: usize, q: u32) -> Result<BettiTable> {
    if q < 1 {
        return Err(Error::Precondition("q must be positive".into()));
    }
    let gens = frobenius_gens(p, n, q);
    Ok(resolve(GradedRing::new(p, n, None), &gens, n, quotient_top(n, q, None), None)?.table)
}

/// Minimal resolution of `R/m^[q]` over `R = P/(f)` through `steps` steps.
pub fn resolve_over_r(f: &HomogPoly, q: u32, steps: usize, degree_cap: Option<i64>) -> Result<Resolution> {
    check_q(f, q)?;
    if steps == 0 {
        return Err(Error::Precondition("steps must be at least 1".into()));
    }
    let (p, n) = (f.prime(), f.n());
    let gens = frobenius_gens(p, n, q);
    resolve(GradedRing::new(p, n, Some(f)), &gens, steps, quotient_top(n, q, Some(f)), degree_cap)
}

pub fn betti_over_r(f: &HomogPoly, q: u32, steps: usize, degree_cap: Option<i64>) -> Result<BettiTable> {
    Ok(resolve_over_r(f, q, steps, degree_cap)?.table)
}

#[cfg(test)]
mod tests;
