//! Matrices with polynomial entries over a prime field.

use crate::error::{Error, Result};
use crate::ffla::{FMatrix, Prime};
use crate::polyring::SparsePoly;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    p: Prime,
    n: usize,
    rows: usize,
    cols: usize,
    entries: Vec<SparsePoly>,
}

impl PolyMatrix {
    pub fn zeros(p: Prime, n: usize, rows: usize, cols: usize) -> PolyMatrix {
        PolyMatrix { p, n, rows, cols, entries: vec![SparsePoly::zero(p, n); rows * cols] }
    }

    /// `c·I` of the given size.
    pub fn scalar(p: Prime, n: usize, size: usize, c: &SparsePoly) -> PolyMatrix {
        let mut m = PolyMatrix::zeros(p, n, size, size);
        for i in 0..size {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_fn(
        p: Prime,
        n: usize,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> SparsePoly,
    ) -> PolyMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix { p, n, rows, cols, entries }
    }

    /// Constant matrix.
    pub fn from_scalars(m: &FMatrix, n: usize) -> PolyMatrix {
        PolyMatrix::from_fn(m.prime(), n, m.rows(), m.cols(), |i, j| SparsePoly::constant(m.prime(), n, m.get(i, j)))
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &SparsePoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: SparsePoly) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(self.p, self.n, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows || self.n != other.n || self.p != other.p {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(PolyMatrix::from_fn(self.p, self.n, self.rows, other.cols, |i, j| {
            let mut acc = SparsePoly::zero(self.p, self.n);
            for k in 0..self.cols {
                let (a, b) = (self.get(i, k), other.get(k, j));
                if !a.is_zero() && !b.is_zero() {
                    acc = acc.add(&a.mul(b));
                }
            }
            acc
        }))
    }

    /// Right multiplication by a scalar matrix.
    pub fn mul_scalars(&self, m: &FMatrix) -> Result<PolyMatrix> {
        self.mul(&PolyMatrix::from_scalars(m, self.n))
    }

    /// Evaluate every entry at a point.
    pub fn eval(&self, point: &[u32]) -> FMatrix {
        FMatrix::from_fn(self.p, self.rows, self.cols, |i, j| self.get(i, j).eval(point))
    }

    /// Largest total degree of a nonzero entry.
    pub fn max_degree(&self) -> Option<u32> {
        self.entries.iter().flat_map(|e| e.terms().map(|(x, _)| x.iter().sum::<u32>())).max()
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
