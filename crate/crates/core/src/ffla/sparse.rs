//! Incremental sparse row echelon over GF(p).
//!
//! Multiplication-by-f matrices on truncated monomial bases have a handful
//! of nonzeros per row and, after a suitable insertion order, mostly distinct
//! leading columns. A semi-echelon form with sparse pivot rows keeps both the
//! fill-in and the work proportional to what actually needs reducing.

use super::{Field, Prime};

/// A sparse vector with strictly increasing column indices and nonzero values.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    pub idx: Vec<u32>,
    pub val: Vec<u32>,
}

impl SparseVec {
    pub fn new() -> SparseVec {
        SparseVec::default()
    }

    /// Build from unsorted `(column, value)` pairs, summing duplicates.
    pub fn from_pairs(field: Field, mut pairs: Vec<(u32, u32)>) -> SparseVec {
        pairs.sort_unstable_by_key(|&(c, _)| c);
        let mut out = SparseVec::new();
        for (c, v) in pairs {
            if out.idx.last() == Some(&c) {
                let last = out.val.len() - 1;
                out.val[last] = field.add(out.val[last], v % field.p());
            } else {
                out.idx.push(c);
                out.val.push(v % field.p());
            }
        }
        out.prune();
        out
    }

    fn prune(&mut self) {
        let mut k = 0;
        for i in 0..self.idx.len() {
            if self.val[i] != 0 {
                self.idx[k] = self.idx[i];
                self.val[k] = self.val[i];
                k += 1;
            }
        }
        self.idx.truncate(k);
        self.val.truncate(k);
    }

    pub fn is_empty(&self) -> bool {
        self.idx.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.idx.len()
    }

    pub fn to_dense(&self, len: usize) -> Vec<u32> {
        let mut out = vec![0; len];
        for (&c, &v) in self.idx.iter().zip(&self.val) {
            out[c as usize] = v;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.idx.iter().zip(&self.val).map(|(&c, &v)| (c as usize, v))
    }
}

const NONE: u32 = u32::MAX;

/// Semi-echelon basis of a growing row space. Pivot rows are stored with a
/// leading coefficient of 1; rows are never reduced above their lead.
///
/// With tracking enabled every inserted row is assigned an insertion index
/// and each dependent row yields a kernel vector over those indices. The
/// kernel vector of a dependent row has coefficient 1 at its own index and
/// involves only earlier rows, so projecting the kernel onto the indices of
/// the dependent rows gives the identity.
#[derive(Clone, Debug)]
pub struct SparseEchelon {
    field: Field,
    ncols: usize,
    rows: Vec<SparseVec>,
    combos: Vec<SparseVec>,
    pivot_of: Vec<u32>,
    track: bool,
    inserted: usize,
    kernel: Vec<SparseVec>,
    dependent: Vec<usize>,
    work: Vec<u32>,
    cwork: Vec<u32>,
    ctouched: Vec<u32>,
}

impl SparseEchelon {
    pub fn new(p: Prime, ncols: usize) -> SparseEchelon {
        SparseEchelon::build(p, ncols, false)
    }

    /// Echelon that records, for each dependent row, the relation expressing
    /// it through earlier rows.
    pub fn with_tracking(p: Prime, ncols: usize) -> SparseEchelon {
        SparseEchelon::build(p, ncols, true)
    }

    fn build(p: Prime, ncols: usize, track: bool) -> SparseEchelon {
        SparseEchelon {
            field: Field::new(p),
            ncols,
            rows: Vec::new(),
            combos: Vec::new(),
            pivot_of: vec![NONE; ncols],
            track,
            inserted: 0,
            kernel: Vec::new(),
            dependent: Vec::new(),
            work: vec![0; ncols],
            cwork: Vec::new(),
            ctouched: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of[col] != NONE
    }

    /// Columns that carry no pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| self.pivot_of[c] == NONE).collect()
    }

    /// Kernel vectors over insertion indices (tracking mode only).
    pub fn kernel(&self) -> &[SparseVec] {
        &self.kernel
    }

    /// Insertion indices of the rows that turned out dependent.
    pub fn dependent_rows(&self) -> &[usize] {
        &self.dependent
    }

    /// Pivot rows in insertion order; together they span the row space.
    pub fn basis_rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivot_row(&self, col: usize) -> Option<&SparseVec> {
        match self.pivot_of[col] {
            NONE => None,
            r => Some(&self.rows[r as usize]),
        }
    }

    /// Insert a row; returns true when the rank grew.
    pub fn insert(&mut self, row: &SparseVec) -> bool {
        let index = self.inserted;
        self.inserted += 1;
        let f = self.field;
        let Some(&first) = row.idx.first() else {
            self.record_dependent(index, &[]);
            return false;
        };

        // Fast path: leading column unclaimed, nothing to reduce.
        if self.pivot_of[first as usize] == NONE {
            let inv = f.inv(row.val[0]);
            let mut stored = row.clone();
            if inv != 1 {
                for v in &mut stored.val {
                    *v = f.mul(*v, inv);
                }
            }
            let combo =
                if self.track { SparseVec { idx: vec![index as u32], val: vec![inv] } } else { SparseVec::new() };
            self.push_pivot(first as usize, stored, combo);
            return true;
        }

        let mut hi = 0usize;
        for (c, v) in row.iter() {
            self.work[c] = v;
            hi = c;
        }
        let mut used: Vec<(u32, u32)> = Vec::new();
        let mut lead = None;
        let mut c = first as usize;
        while c <= hi {
            let v = self.work[c];
            if v != 0 {
                let r = self.pivot_of[c];
                if r == NONE {
                    if lead.is_none() {
                        lead = Some(c);
                    }
                } else {
                    let neg = f.neg(v);
                    let prow = &self.rows[r as usize];
                    for (&pc, &pv) in prow.idx.iter().zip(&prow.val) {
                        let pc = pc as usize;
                        self.work[pc] = f.mul_add(self.work[pc], neg, pv);
                    }
                    if let Some(&last) = prow.idx.last() {
                        hi = hi.max(last as usize);
                    }
                    if self.track {
                        used.push((r, v));
                    }
                }
            }
            c += 1;
        }

        let combo = if self.track { self.combine(index, &used) } else { SparseVec::new() };
        match lead {
            None => {
                if self.track {
                    self.kernel.push(combo);
                    self.dependent.push(index);
                }
                clear_range(&mut self.work, first as usize, hi);
                false
            }
            Some(l) => {
                let inv = f.inv(self.work[l]);
                let mut stored = SparseVec::new();
                for c in l..=hi {
                    let v = self.work[c];
                    if v != 0 {
                        stored.idx.push(c as u32);
                        stored.val.push(f.mul(v, inv));
                    }
                }
                clear_range(&mut self.work, first as usize, hi);
                let combo = if self.track {
                    let mut cmb = combo;
                    for v in &mut cmb.val {
                        *v = f.mul(*v, inv);
                    }
                    cmb
                } else {
                    combo
                };
                self.push_pivot(l, stored, combo);
                true
            }
        }
    }

    fn record_dependent(&mut self, index: usize, used: &[(u32, u32)]) {
        if self.track {
            let combo = self.combine(index, used);
            self.kernel.push(combo);
            self.dependent.push(index);
        }
    }

    /// `e_index − Σ v·combo(r)` as a sparse vector.
    fn combine(&mut self, index: usize, used: &[(u32, u32)]) -> SparseVec {
        let f = self.field;
        if self.cwork.len() < self.inserted {
            self.cwork.resize(self.inserted.max(2 * self.cwork.len()), 0);
        }
        self.ctouched.clear();
        self.cwork[index] = 1 % f.p();
        self.ctouched.push(index as u32);
        for &(r, v) in used {
            let neg = f.neg(v);
            let combo = &self.combos[r as usize];
            for (&k, &cv) in combo.idx.iter().zip(&combo.val) {
                let slot = &mut self.cwork[k as usize];
                if *slot == 0 {
                    self.ctouched.push(k);
                }
                *slot = f.mul_add(*slot, neg, cv);
            }
        }
        self.ctouched.sort_unstable();
        self.ctouched.dedup();
        let mut out = SparseVec::new();
        for &k in &self.ctouched {
            let v = self.cwork[k as usize];
            if v != 0 {
                out.idx.push(k);
                out.val.push(v);
            }
            self.cwork[k as usize] = 0;
        }
        out
    }

    fn push_pivot(&mut self, lead: usize, row: SparseVec, combo: SparseVec) {
        self.pivot_of[lead] = self.rows.len() as u32;
        self.rows.push(row);
        if self.track {
            self.combos.push(combo);
        }
    }

    /// Normal forms of every column modulo the row space, expressed in the
    /// free columns. Free column `c` maps to the unit vector at its position
    /// among the free columns; a pivot column maps to the class of its
    /// monomial, computed by back substitution in decreasing lead order.
    pub fn normal_forms(&self) -> NormalForms {
        let free = self.free_columns();
        let mut local = vec![NONE; self.ncols];
        for (k, &c) in free.iter().enumerate() {
            local[c] = k as u32;
        }
        let f = self.field;
        let width = free.len();
        let mut nf: Vec<Option<Vec<u32>>> = vec![None; self.ncols];
        for col in (0..self.ncols).rev() {
            let r = self.pivot_of[col];
            if r == NONE {
                continue;
            }
            let row = &self.rows[r as usize];
            let mut acc = vec![0u32; width];
            for (c, v) in row.iter().skip(1) {
                let neg = f.neg(v);
                if local[c] != NONE {
                    let k = local[c] as usize;
                    acc[k] = f.add(acc[k], neg);
                } else {
                    let sub = nf[c].as_ref().expect("pivot normal form computed");
                    for (a, &s) in acc.iter_mut().zip(sub) {
                        *a = f.mul_add(*a, neg, s);
                    }
                }
            }
            nf[col] = Some(acc);
        }
        NormalForms { free, local, nf }
    }
}

fn clear_range(work: &mut [u32], lo: usize, hi: usize) {
    for w in &mut work[lo..=hi] {
        *w = 0;
    }
}

/// Coordinates of every column class in a quotient by a row space.
#[derive(Clone, Debug)]
pub struct NormalForms {
    free: Vec<usize>,
    local: Vec<u32>,
    nf: Vec<Option<Vec<u32>>>,
}

impl NormalForms {
    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    /// Free columns in increasing order; they index the quotient basis.
    pub fn basis_columns(&self) -> &[usize] {
        &self.free
    }

    /// Add `c * class(col)` into a dense quotient vector.
    pub fn accumulate(&self, field: Field, acc: &mut [u32], col: usize, c: u32) {
        if self.local[col] != NONE {
            let k = self.local[col] as usize;
            acc[k] = field.mul_add(acc[k], c, 1);
        } else if let Some(v) = &self.nf[col] {
            for (a, &s) in acc.iter_mut().zip(v) {
                *a = field.mul_add(*a, c, s);
            }
        }
    }
}
