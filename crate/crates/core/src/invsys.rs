//! Macaulay inverse systems: catalecticant maps of a divided-power element,
//! the graded pieces of its annihilator and the relatively compressed test.

use crate::artinian::{hilbert_ci, mult_rank};
use crate::error::{Error, Result};
use crate::ffla::{kernel_basis, rref, FMatrix, Prime, Span};
use crate::polyring::{monomial_count, rank_exps, unrank_into, DividedElem, GradedBasis, HomogPoly};
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

/// The matrix of `Φ_i : S_i → D_{s-i}, g ↦ g·φ`. Row `r` is the image of the
/// `r`-th monomial of degree `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalecticant {
    pub phi: DividedElem,
    pub i: u32,
    pub matrix: FMatrix,
}

pub fn catalecticant(phi: &DividedElem, i: u32) -> Result<Catalecticant> {
    let s = phi.degree();
    if i > s {
        return Err(Error::OutOfRange(format!("catalecticant degree {i} above socle degree {s}")));
    }
    let n = phi.n();
    let rows = monomial_count(n, i as i64);
    let cols = monomial_count(n, (s - i) as i64);
    let mut m = FMatrix::zeros(phi.prime(), rows, cols);
    let terms = phi.terms();
    let mut a = vec![0u32; n];
    let mut diff = vec![0u32; n];
    for r in 0..rows {
        unrank_into(n, i, r, &mut a);
        for (b, c) in &terms {
            if a.iter().zip(b).all(|(x, y)| x <= y) {
                for k in 0..n {
                    diff[k] = b[k] - a[k];
                }
                m.set(r, rank_exps(&diff), *c);
            }
        }
    }
    Ok(Catalecticant { phi: phi.clone(), i, matrix: m })
}

/// Basis of `ann(φ)_i` as coefficient rows over the monomials of degree `i`.
/// Above the socle degree every polynomial annihilates `φ`.
pub fn ann_piece(phi: &DividedElem, i: u32) -> FMatrix {
    if i > phi.degree() {
        return FMatrix::identity(phi.prime(), monomial_count(phi.n(), i as i64));
    }
    let cat = catalecticant(phi, i).expect("degree checked");
    kernel_basis(&cat.matrix.transpose())
}

/// `H_i(S/ann φ)` for `i = 0..=s`, as ranks of the catalecticants.
pub fn hilbert_function(phi: &DividedElem) -> Result<Vec<usize>> {
    if phi.is_zero() {
        return Err(Error::Precondition("the zero element has no inverse-system algebra".into()));
    }
    (0..=phi.degree()).map(|i| Ok(catalecticant(phi, i)?.matrix.rank())).collect()
}

/// Row basis, in reduced echelon form, of `D'_{s-m} = S_m·φ ⊆ D_{s-m}`.
pub fn dprime_basis(phi: &DividedElem, m: u32) -> Result<FMatrix> {
    let cat = catalecticant(phi, m)?;
    let (r, rank, _) = rref(&cat.matrix);
    Ok(FMatrix::from_fn(phi.prime(), rank, r.cols(), |i, j| r.get(i, j)))
}

/// Minimal generator degrees of the truncated ideal `ann(φ)_{≥m}`, measured
/// by span growth on annihilator pieces. All of `ann(φ)_m` is minimal; in
/// each higher degree the count is the codimension of `S_1·ann(φ)_{i-1}`.
/// Degrees above `max(m, s+1)` carry no generators since `ann(φ)_{≥s+1}` is
/// a power of the maximal ideal.
pub fn truncated_ideal_generators(phi: &DividedElem, m: u32) -> BTreeMap<u32, usize> {
    let n = phi.n();
    let s = phi.degree();
    let mut out = BTreeMap::new();
    let mut prev = ann_piece(phi, m);
    if prev.rows() > 0 {
        out.insert(m, prev.rows());
    }
    let last = (s + 1).max(m);
    let mut buf = vec![0u32; n];
    for i in m + 1..=last {
        let cur = ann_piece(phi, i);
        let dim_i = monomial_count(n, i as i64);
        let mut span = Span::new(phi.prime(), dim_i);
        let src_basis = GradedBasis::new(n, i - 1);
        'outer: for row in 0..prev.rows() {
            for k in 0..n {
                if span.rank() == cur.rows() {
                    break 'outer;
                }
                let mut v = vec![0u32; dim_i];
                for (col, &c) in prev.row(row).iter().enumerate() {
                    if c != 0 {
                        buf.copy_from_slice(src_basis.exps(col));
                        buf[k] += 1;
                        v[rank_exps(&buf)] = c;
                    }
                }
                span.insert(&v);
            }
        }
        let gens = cur.rows() - span.rank();
        if gens > 0 {
            out.insert(i, gens);
        }
        prev = cur;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Quick,
    Full,
}

/// Outcome of the relatively compressed test for `J = (x1^q..xn^q) : f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompressedReport {
    pub q: u32,
    pub d: u32,
    pub s: u32,
    pub verdict: bool,
    /// `(degree, H_i(P/J), min{H_i(P/c), H_{s-i}(P/c)})` for each checked degree.
    pub checked: Vec<(u32, usize, usize)>,
}

/// Socle degree `n(q-1) - d` of `P/((x^q) : f)`.
pub fn link_socle_degree(n: usize, q: u32, d: u32) -> Result<u32> {
    let top = n as u32 * q.saturating_sub(1);
    if q <= d || top < d {
        return Err(Error::Precondition(format!("need q > deg f, got q={q}, d={d}")));
    }
    Ok(top - d)
}

/// `H_i(P/J)` for the link `J = c : f`, as the rank of multiplication by `f`
/// on `(P/c)_i` (since `P/J ≅ (f·P + c)/c` up to a shift by `d`).
pub fn link_hilbert_value(f: &HomogPoly, q: u32, i: u32) -> usize {
    mult_rank(f, q, i)
}

/// Decide whether `J = (x1^q..xn^q) : f` is relatively compressed. Quick mode
/// checks the single degree `⌈s/2⌉`; full mode checks every degree `0..=s`.
pub fn is_relatively_compressed(f: &HomogPoly, q: u32, mode: Mode) -> Result<CompressedReport> {
    let n = f.n();
    let d = f.degree();
    if d == 0 || f.is_zero() {
        return Err(Error::Precondition("f must be a nonzero form of positive degree".into()));
    }
    let s = link_socle_degree(n, q, d)?;
    if !f.prime().is_power(q as u64) {
        log::warn!("q={q} is not a power of p={}", f.prime());
    }
    let degrees: Vec<u32> = match mode {
        Mode::Quick => vec![s.div_ceil(2)],
        Mode::Full => (0..=s).collect(),
    };
    let checked: Vec<(u32, usize, usize)> = degrees
        .into_par_iter()
        .map(|i| {
            let h = link_hilbert_value(f, q, i);
            let target = hilbert_ci(n, q, i as i64).min(hilbert_ci(n, q, (s - i) as i64));
            (i, h, target)
        })
        .collect();
    let verdict = checked.iter().all(|&(_, h, t)| h == t);
    Ok(CompressedReport { q, d, s, verdict, checked })
}

/// A form of degree `d` with independent uniform coefficients.
pub fn random_form<R: Rng>(p: Prime, n: usize, d: u32, rng: &mut R) -> HomogPoly {
    let len = monomial_count(n, d as i64);
    let coeffs = (0..len).map(|_| rng.gen_range(0..p.get())).collect();
    HomogPoly::from_coeffs(p, n, d, coeffs).expect("length matches basis")
}

/// The first nonzero form drawn from a SplitMix64 stream seeded by `seed`.
pub fn seeded_form(p: Prime, n: usize, d: u32, seed: u64) -> HomogPoly {
    let mut rng = SplitMix64::seed_from_u64(seed);
    loop {
        let f = random_form(p, n, d, &mut rng);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Result of a successful sampling run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchHit {
    pub f: HomogPoly,
    pub attempts: u64,
}

/// Draw forms from a SplitMix64 stream seeded by `seed` until one has a
/// relatively compressed link (quick test).
pub fn random_compressed_search(p: Prime, n: usize, d: u32, q: u32, seed: u64, max_attempts: u64) -> Result<SearchHit> {
    if q <= d {
        return Err(Error::Precondition(format!("need q > d, got q={q}, d={d}")));
    }
    if d == 0 {
        return Err(Error::Precondition("need d >= 1".into()));
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let f = random_form(p, n, d, &mut rng);
        if f.is_zero() {
            continue;
        }
        if is_relatively_compressed(&f, q, Mode::Quick)?.verdict {
            return Ok(SearchHit { f, attempts: attempt });
        }
    }
    Err(Error::SearchExhausted { attempts: max_attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, poly_apply};

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn squares(pr: Prime) -> DividedElem {
        DividedElem::from_terms(pr, 3, 2, &[(vec![2, 0, 0], 1), (vec![0, 2, 0], 1), (vec![0, 0, 2], 1)]).unwrap()
    }

    #[test]
    fn catalecticant_examples() {
        let pr = p(5);
        let phi = squares(pr);
        let c1 = catalecticant(&phi, 1).unwrap();
        assert_eq!(c1.matrix, FMatrix::identity(pr, 3));
        let c0 = catalecticant(&phi, 0).unwrap();
        assert_eq!(c0.matrix.row(0), phi.coeffs());
        let c2 = catalecticant(&phi, 2).unwrap();
        assert_eq!((c2.matrix.rows(), c2.matrix.cols(), c2.matrix.rank()), (6, 1, 1));
        assert!(matches!(catalecticant(&phi, 3), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn ann_piece_of_sum_of_squares() {
        let pr = p(5);
        let phi = squares(pr);
        let k = ann_piece(&phi, 2);
        assert_eq!(k.rows(), 5);
        // Expected annihilator: xy, yz, xz, x^2 - y^2, x^2 - z^2.
        let expected = ["x*y", "y*z", "x*z", "x^2 - y^2", "x^2 - z^2"];
        for e in expected {
            let g = parse_poly(e, pr, 3).unwrap();
            assert!(poly_apply(&g, &phi).unwrap().is_zero());
            assert!(crate::ffla::row_space_membership(&k, g.coeffs()).unwrap());
        }
        assert_eq!(ann_piece(&phi, 0).rows(), 0);
        assert_eq!(ann_piece(&phi, 3).rows(), 10);
    }

    #[test]
    fn hilbert_function_examples() {
        let pr = p(5);
        assert_eq!(hilbert_function(&squares(pr)).unwrap(), vec![1, 3, 1]);
        let x2 = DividedElem::monomial(pr, &[2, 0, 0]);
        assert_eq!(hilbert_function(&x2).unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn dprime_examples() {
        let pr = p(7);
        let phi = squares(pr);
        let b0 = dprime_basis(&phi, 0).unwrap();
        assert_eq!(b0.rows(), 1);
        assert_eq!(b0.row(0), phi.coeffs());
        let b2 = dprime_basis(&phi, 2).unwrap();
        assert_eq!(b2.to_rows(), vec![vec![1]]);
    }

    #[test]
    fn compressed_examples() {
        let f = parse_poly("x^3*y - x*y^3 + x^3*z - x*z^3 - y*z^3", p(5), 3).unwrap();
        assert!(is_relatively_compressed(&f, 25, Mode::Quick).unwrap().verdict);
        let g = parse_poly("x^4 + y^4 + z^4", p(7), 3).unwrap();
        assert!(!is_relatively_compressed(&g, 7, Mode::Quick).unwrap().verdict);
        let h = parse_poly("x*y^2 + y*z^2 + z*x^2", p(5), 3).unwrap();
        assert!(is_relatively_compressed(&h, 25, Mode::Quick).unwrap().verdict);
        assert!(matches!(is_relatively_compressed(&g, 4, Mode::Quick), Err(Error::Precondition(_))));
    }

    #[test]
    fn search_examples() {
        let hit = random_compressed_search(p(7), 3, 4, 7, 1, 50).unwrap();
        assert!(is_relatively_compressed(&hit.f, 7, Mode::Full).unwrap().verdict);
        let again = random_compressed_search(p(7), 3, 4, 7, 1, 50).unwrap();
        assert_eq!(hit, again);
        assert!(matches!(random_compressed_search(p(7), 3, 7, 7, 1, 5), Err(Error::Precondition(_))));
        assert_eq!(random_compressed_search(p(7), 3, 4, 7, 1, 0), Err(Error::SearchExhausted { attempts: 0 }));
    }
}
