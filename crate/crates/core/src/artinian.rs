//! Graded pieces of `P/c` with `c = (x1^q, ..., xn^q)` and of its quotients
//! by a hypersurface. Monomials with every exponent below `q` form a basis of
//! `P/c`, so multiplication by `f` is a sparse map between such bases.

use crate::error::{Error, Result};
use crate::ffla::sparse::{NormalForms, SparseEchelon, SparseVec};
use crate::ffla::{FMatrix, Field, Prime};
use crate::polyring::{binom, monomial_count, rank_exps, HomogPoly};

/// `dim (P/c)_j`: monomials of degree `j` in `n` variables with exponents
/// below `q`, by inclusion–exclusion.
pub fn hilbert_ci(n: usize, q: u32, j: i64) -> usize {
    if j < 0 {
        return 0;
    }
    let mut total: i128 = 0;
    for k in 0..=n as i64 {
        let term = binom(n as i64, k) * binom(j - k * q as i64 + n as i64 - 1, n as i64 - 1);
        if k % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total as usize
}

const NONE: u32 = u32::MAX;

/// Monomials of one degree with all exponents below `q`, in graded-lex order.
#[derive(Clone, Debug)]
pub struct TruncBasis {
    n: usize,
    q: u32,
    deg: u32,
    flat: Vec<u32>,
    full_to_local: Vec<u32>,
}

impl TruncBasis {
    pub fn new(n: usize, q: u32, deg: u32) -> TruncBasis {
        let mut flat = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(i: usize, rem: u32, q: u32, cur: &mut [u32], flat: &mut Vec<u32>) {
            let n = cur.len();
            if i == n - 1 {
                if rem < q {
                    cur[i] = rem;
                    flat.extend_from_slice(cur);
                }
                return;
            }
            // The remaining n-1-i variables hold at most (n-1-i)(q-1).
            let room = (n - 1 - i) as u32 * (q - 1);
            let hi = rem.min(q - 1);
            let lo = rem.saturating_sub(room);
            if lo > hi {
                return;
            }
            for e in (lo..=hi).rev() {
                cur[i] = e;
                rec(i + 1, rem - e, q, cur, flat);
            }
        }
        if n > 0 && q > 0 {
            rec(0, deg, q, &mut cur, &mut flat);
        }
        let mut full_to_local = vec![NONE; monomial_count(n, deg as i64)];
        for (k, e) in flat.chunks_exact(n.max(1)).enumerate() {
            full_to_local[rank_exps(e)] = k as u32;
        }
        TruncBasis { n, q, deg, flat, full_to_local }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn len(&self) -> usize {
        self.flat.len().checked_div(self.n).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn exps(&self, k: usize) -> &[u32] {
        &self.flat[k * self.n..(k + 1) * self.n]
    }

    /// Local position of a monomial of this degree, `None` when some
    /// exponent reaches `q`.
    pub fn local(&self, exps: &[u32]) -> Option<usize> {
        if exps.iter().any(|&e| e >= self.q) {
            return None;
        }
        match self.full_to_local[rank_exps(exps)] {
            NONE => None,
            k => Some(k as usize),
        }
    }
}

/// Rows of multiplication by `f` from `(P/c)_i` to `(P/c)_{i+d}`, one per
/// source monomial. Rows whose leading product survives truncation come
/// first: their leads are pairwise distinct, so the echelon absorbs them
/// without any reduction.
pub struct MultRows {
    pub src: TruncBasis,
    pub tgt: TruncBasis,
    /// Source local index of each row, in insertion order.
    pub order: Vec<u32>,
    pub rows: Vec<SparseVec>,
}

pub fn mult_rows(f: &HomogPoly, q: u32, i: u32) -> MultRows {
    let n = f.n();
    let d = f.degree();
    let field = f.field();
    let src = TruncBasis::new(n, q, i);
    let tgt = TruncBasis::new(n, q, i + d);
    let terms = f.terms();
    let lead = terms.first().map(|t| t.0.clone());
    let mut clean = Vec::new();
    let mut defective = Vec::new();
    let mut buf = vec![0u32; n];
    for k in 0..src.len() {
        let u = src.exps(k);
        let mut pairs = Vec::with_capacity(terms.len());
        for (t, c) in &terms {
            for v in 0..n {
                buf[v] = u[v] + t[v];
            }
            if let Some(l) = tgt.local(&buf) {
                pairs.push((l as u32, *c));
            }
        }
        let row = SparseVec::from_pairs(field, pairs);
        let is_clean = lead.as_ref().is_some_and(|l| u.iter().zip(l).all(|(a, b)| a + b < q));
        if is_clean {
            clean.push((k as u32, row));
        } else {
            defective.push((k as u32, row));
        }
    }
    let (order, rows) = clean.into_iter().chain(defective).unzip();
    MultRows { src, tgt, order, rows }
}

/// Rank of multiplication by `f` on `(P/c)_i`.
pub fn mult_rank(f: &HomogPoly, q: u32, i: u32) -> usize {
    if f.is_zero() {
        return 0;
    }
    let mr = mult_rows(f, q, i);
    let mut e = SparseEchelon::new(f.prime(), mr.tgt.len());
    for r in &mr.rows {
        e.insert(r);
    }
    e.rank()
}

/// Kernel of multiplication by `f` on `(P/c)_i`, i.e. the degree-`i` piece
/// of `(c : f)/c`.
#[derive(Clone, Debug)]
pub struct KernelPiece {
    pub basis: TruncBasis,
    /// Kernel vectors over the local monomial indices of `basis`.
    pub vectors: Vec<SparseVec>,
    /// For each kernel vector, the local index where it has coefficient 1
    /// and every other vector has coefficient 0.
    pub anchors: Vec<usize>,
}

impl KernelPiece {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Map from local index to anchor position, for projecting elements of
    /// the kernel onto anchor coordinates (a faithful projection).
    pub fn anchor_positions(&self) -> Vec<u32> {
        let mut pos = vec![NONE; self.basis.len()];
        for (k, &a) in self.anchors.iter().enumerate() {
            pos[a] = k as u32;
        }
        pos
    }
}

pub fn mult_kernel(f: &HomogPoly, q: u32, i: u32) -> KernelPiece {
    let mr = mult_rows(f, q, i);
    let field = f.field();
    if f.is_zero() {
        let vectors = (0..mr.src.len()).map(|k| SparseVec { idx: vec![k as u32], val: vec![1] }).collect();
        let anchors = (0..mr.src.len()).collect();
        return KernelPiece { basis: mr.src, vectors, anchors };
    }
    let mut e = SparseEchelon::with_tracking(f.prime(), mr.tgt.len());
    for r in &mr.rows {
        e.insert(r);
    }
    let mut vectors = Vec::with_capacity(e.kernel().len());
    let mut anchors = Vec::with_capacity(e.kernel().len());
    for (kv, &dep) in e.kernel().iter().zip(e.dependent_rows()) {
        let pairs = kv.iter().map(|(ins, v)| (mr.order[ins], v)).collect();
        vectors.push(SparseVec::from_pairs(field, pairs));
        anchors.push(mr.order[dep] as usize);
    }
    KernelPiece { basis: mr.src, vectors, anchors }
}

/// The graded algebra `M = P/(x1^q, ..., xn^q, f)` degree by degree: a
/// monomial basis of each piece and normal forms of all truncated monomials.
/// With `f = None` this is `P/c` itself.
pub struct QuotientModel {
    field: Field,
    n: usize,
    q: u32,
    pieces: Vec<QPiece>,
}

struct QPiece {
    trunc: TruncBasis,
    nf: NormalForms,
}

impl QuotientModel {
    pub fn new(p: Prime, n: usize, q: u32, f: Option<&HomogPoly>) -> Result<QuotientModel> {
        if n == 0 || q == 0 {
            return Err(Error::Precondition("need n >= 1 and q >= 1".into()));
        }
        if let Some(f) = f {
            if f.n() != n || f.prime() != p {
                return Err(Error::Dimension("f does not live in the requested ring".into()));
            }
        }
        let top = n as u32 * (q - 1);
        let mut pieces = Vec::with_capacity(top as usize + 1);
        for j in 0..=top {
            let trunc = TruncBasis::new(n, q, j);
            let mut e = SparseEchelon::new(p, trunc.len());
            if let Some(f) = f.filter(|f| !f.is_zero() && f.degree() <= j) {
                let mr = mult_rows(f, q, j - f.degree());
                for r in &mr.rows {
                    e.insert(r);
                }
            }
            pieces.push(QPiece { nf: e.normal_forms(), trunc });
        }
        Ok(QuotientModel { field: Field::new(p), n, q, pieces })
    }

    pub fn prime(&self) -> Prime {
        self.field.prime()
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Largest degree carried (`n(q-1)`); pieces above it vanish.
    pub fn top_degree(&self) -> u32 {
        (self.pieces.len() - 1) as u32
    }

    pub fn dim(&self, j: i64) -> usize {
        if j < 0 || j as usize >= self.pieces.len() {
            0
        } else {
            self.pieces[j as usize].nf.dim()
        }
    }

    /// Hilbert function over `0..=top_degree`.
    pub fn hilbert(&self) -> Vec<usize> {
        self.pieces.iter().map(|pc| pc.nf.dim()).collect()
    }

    /// Exponents of the `k`-th basis monomial of degree `j`.
    pub fn basis_exps(&self, j: u32, k: usize) -> &[u32] {
        let pc = &self.pieces[j as usize];
        pc.trunc.exps(pc.nf.basis_columns()[k])
    }

    /// Add `c` times the class of the monomial `exps` into `acc` (a dense
    /// vector over the basis of its degree). Truncated monomials vanish.
    pub fn accumulate_monomial(&self, acc: &mut [u32], exps: &[u32], c: u32) {
        let j: u32 = exps.iter().sum();
        if j as usize >= self.pieces.len() {
            return;
        }
        let pc = &self.pieces[j as usize];
        if let Some(l) = pc.trunc.local(exps) {
            pc.nf.accumulate(self.field, acc, l, c);
        }
    }

    /// Matrix of multiplication by `x_k` from degree `j` to `j + 1`, rows
    /// indexed by the basis of degree `j`.
    pub fn mul_var(&self, k: usize, j: u32) -> FMatrix {
        let rows = self.dim(j as i64);
        let cols = self.dim(j as i64 + 1);
        let mut m = FMatrix::zeros(self.prime(), rows, cols);
        if cols == 0 {
            return m;
        }
        let mut buf = vec![0u32; self.n];
        for r in 0..rows {
            buf.copy_from_slice(self.basis_exps(j, r));
            buf[k] += 1;
            self.accumulate_monomial(m.row_mut(r), &buf, 1);
        }
        m
    }

    /// Matrix of multiplication by a homogeneous polynomial from degree `j`.
    pub fn mul_poly(&self, g: &HomogPoly, j: u32) -> FMatrix {
        let rows = self.dim(j as i64);
        let cols = self.dim((j + g.degree()) as i64);
        let mut m = FMatrix::zeros(self.prime(), rows, cols);
        if cols == 0 {
            return m;
        }
        let terms = g.terms();
        let mut buf = vec![0u32; self.n];
        for r in 0..rows {
            let u = self.basis_exps(j, r).to_vec();
            for (t, c) in &terms {
                for v in 0..self.n {
                    buf[v] = u[v] + t[v];
                }
                self.accumulate_monomial(m.row_mut(r), &buf, *c);
            }
        }
        m
    }

    /// `dim soc(M)_j` for every degree: elements killed by all variables.
    pub fn socle_dims(&self) -> Vec<usize> {
        (0..=self.top_degree())
            .map(|j| {
                let dim = self.dim(j as i64);
                if dim == 0 {
                    return 0;
                }
                let mut stacked = self.mul_var(0, j);
                for k in 1..self.n {
                    stacked = stacked.hstack(&self.mul_var(k, j)).expect("equal row counts");
                }
                dim - stacked.rank()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, GradedBasis};

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn hilbert_ci_counts_monomials() {
        for n in 1..=4 {
            for q in 1..=5u32 {
                for j in 0..=(n as u32 * q) {
                    let direct = GradedBasis::new(n, j).iter().filter(|e| e.iter().all(|&x| x < q)).count();
                    assert_eq!(hilbert_ci(n, q, j as i64), direct, "n={n} q={q} j={j}");
                    assert_eq!(TruncBasis::new(n, q, j).len(), direct);
                }
            }
        }
    }

    #[test]
    fn ci_model_is_truncated_monomials() {
        let m = QuotientModel::new(p(5), 3, 3, None).unwrap();
        assert_eq!(m.top_degree(), 6);
        assert_eq!(m.hilbert(), vec![1, 3, 6, 7, 6, 3, 1]);
        let soc = m.socle_dims();
        assert_eq!(soc, vec![0, 0, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let pr = p(7);
        let f = parse_poly("x^4 + y^4 + z^4", pr, 3).unwrap();
        for i in 0..=18 {
            let kp = mult_kernel(&f, 7, i);
            let rank = mult_rank(&f, 7, i);
            assert_eq!(kp.dim() + rank, hilbert_ci(3, 7, i as i64));
            let model = QuotientModel::new(pr, 3, 7, None).unwrap();
            let mf = model.mul_poly(&f, i);
            for v in &kp.vectors {
                let dense = v.to_dense(kp.basis.len());
                assert!(mf.left_apply(&dense).unwrap().iter().all(|&x| x == 0));
            }
            let pos = kp.anchor_positions();
            for (k, v) in kp.vectors.iter().enumerate() {
                for (c, val) in v.iter() {
                    if pos[c] != NONE {
                        assert_eq!(val, u32::from(pos[c] as usize == k));
                    }
                }
            }
        }
    }
}
