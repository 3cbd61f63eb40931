//! Matrix factorizations read off the periodic tail of a resolution over
//! `R = P/(f)`.

use super::resolve_over_r;
use super::table::detect_periodic_tail;
use crate::error::{Error, Result};
use crate::ffla::{inverse, FMatrix};
use crate::polymat::PolyMatrix;
use crate::polyring::{HomogPoly, SparsePoly};

/// `(A, B)` over `P` with `A·B = B·A = f·I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFactorization {
    pub a: PolyMatrix,
    pub b: PolyMatrix,
    pub f: HomogPoly,
    /// Homological index of the differential lifted to `A`.
    pub at_step: usize,
    /// Twists of the source of `A` and of the source of `B`.
    pub a_source: Vec<i64>,
    pub b_source: Vec<i64>,
}

impl MatrixFactorization {
    /// Recheck both products exactly.
    pub fn verify(&self) -> Result<bool> {
        let fi = PolyMatrix::scalar(self.a.prime(), self.a.nvars(), self.a.rows(), &SparsePoly::from_homog(&self.f));
        Ok(self.a.mul(&self.b)? == fi && self.b.mul(&self.a)? == fi)
    }
}

/// The scalar `c` with `g = c·f`, if any.
fn scalar_multiple(g: &SparsePoly, f: &SparsePoly) -> Option<u32> {
    if g.is_zero() {
        return Some(0);
    }
    let (e, cf) = f.terms().next()?;
    let cg = g.terms().find(|(x, _)| *x == e).map_or(0, |(_, c)| c);
    let field = crate::ffla::Field::new(f.prime());
    let c = field.mul(cg, field.inv(cf));
    (f.scale(c) == *g).then_some(c)
}

/// Lift `d_{at}: F_at → F_{at−1}` and `d_{at+1}` to `P` (the normal-form
/// representatives are the lifts) and rescale the second so that the
/// product is exactly `f·I`. Both `F_{at−1}` and `F_at` must lie in the tail.
pub fn extract_tail_mf(f: &HomogPoly, q: u32, at_step: usize) -> Result<MatrixFactorization> {
    if at_step < 1 {
        return Err(Error::Precondition("at_step must be at least 1".into()));
    }
    let res = resolve_over_r(f, q, (at_step + 1).max(4), None)?;
    let tail = detect_periodic_tail(&res.table)?;
    match tail {
        Some(t) if t.start < at_step => {}
        Some(t) => {
            return Err(Error::NotMatrixFactorization(format!(
                "periodic tail starts at step {}; A must map into the tail",
                t.start
            )))
        }
        None => return Err(Error::NotMatrixFactorization("no periodic tail in the computed range".into())),
    }
    let da = &res.maps[at_step - 1];
    let db = &res.maps[at_step];
    let (a, b) = (&da.entries, &db.entries);
    if a.rows() != a.cols() || b.rows() != b.cols() || a.cols() != b.rows() {
        return Err(Error::NotMatrixFactorization(format!(
            "tail differentials are {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let fp = SparsePoly::from_homog(f);
    let ab = a.mul(b)?;
    let r = a.rows();
    let mut c = FMatrix::zeros(f.prime(), r, r);
    for i in 0..r {
        for j in 0..r {
            let s = scalar_multiple(ab.get(i, j), &fp).ok_or_else(|| {
                Error::NotMatrixFactorization(format!("entry ({i},{j}) of A·B is not a multiple of f"))
            })?;
            c.set(i, j, s);
        }
    }
    let cinv = inverse(&c)?.ok_or_else(|| Error::NotMatrixFactorization("A·B = f·C with C singular".into()))?;
    let b = b.mul_scalars(&cinv)?;
    let mf = MatrixFactorization {
        a: a.clone(),
        b,
        f: f.clone(),
        at_step,
        a_source: da.source.clone(),
        b_source: db.source.clone(),
    };
    if !mf.verify()? {
        return Err(Error::NotMatrixFactorization("normalized product differs from f·I".into()));
    }
    Ok(mf)
}
