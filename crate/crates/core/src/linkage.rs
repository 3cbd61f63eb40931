//! The link `J_q = (x1^q, ..., xn^q) : f`: its inverse polynomial, minimal
//! generator degrees, and the socle of `P/(x1^q, ..., xn^q, f)` computed
//! directly and through the link.
//!
//! Generator counting works in `P/c`, where `J/c` is the kernel of
//! multiplication by `f`. In degree `i` the new generators number
//! `dim Ĵ_i − dim x·Ĵ_{i−1}`, with the complete intersection generators
//! accounted separately in degree `q`.

use crate::artinian::{hilbert_ci, mult_kernel, mult_rank, KernelPiece, QuotientModel};
use crate::error::{Error, Result};
use crate::ffla::Span;
use crate::invsys::{is_relatively_compressed, link_socle_degree, Mode};
use crate::polyring::{binom, DividedElem, HomogPoly};
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Degree → number of minimal generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GeneratorProfile(pub BTreeMap<u32, usize>);

impl GeneratorProfile {
    pub fn get(&self, degree: u32) -> usize {
        self.0.get(&degree).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.0.keys().copied().collect()
    }

    fn add(&mut self, degree: u32, count: usize) {
        if count > 0 {
            *self.0.entry(degree).or_insert(0) += count;
        }
    }
}

impl fmt::Display for GeneratorProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(d, c)| format!("{d}:{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

impl From<BTreeMap<u32, usize>> for GeneratorProfile {
    fn from(m: BTreeMap<u32, usize>) -> Self {
        GeneratorProfile(m.into_iter().filter(|&(_, c)| c > 0).collect())
    }
}

/// Socle dimensions of `P/I_q` by degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SocleReport {
    pub dims: BTreeMap<u32, usize>,
    pub total: usize,
}

impl SocleReport {
    fn from_dims(dims: BTreeMap<u32, usize>) -> SocleReport {
        let dims: BTreeMap<u32, usize> = dims.into_iter().filter(|&(_, c)| c > 0).collect();
        let total = dims.values().sum();
        SocleReport { dims, total }
    }

    /// The same report with every degree moved up by `shift`.
    pub fn shifted(&self, shift: i64) -> SocleReport {
        SocleReport::from_dims(self.dims.iter().map(|(&d, &c)| ((d as i64 + shift) as u32, c)).collect())
    }
}

impl fmt::Display for SocleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(|(d, c)| format!("{d}:{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn check_link_degree(f: &HomogPoly, q: u32) -> Result<u32> {
    let d = f.degree();
    if f.is_zero() || d == 0 {
        return Err(Error::Precondition("f must be a nonzero form of positive degree".into()));
    }
    if d >= q {
        return Err(Error::Precondition(format!("need deg f < q, got d={d}, q={q}")));
    }
    if d == 1 {
        log::warn!("linear f: the link is degenerate and only useful as a smoke test");
    }
    link_socle_degree(f.n(), q, d)
}

/// The inverse polynomial of `J_q`: the coefficient of `x^a` in `f` sits on
/// the divided monomial `x^(q-1-a)`.
pub fn link_inverse_poly(f: &HomogPoly, q: u32) -> Result<DividedElem> {
    let s = check_link_degree(f, q)?;
    let n = f.n();
    let terms: Vec<(Vec<u32>, i64)> =
        f.terms().into_iter().map(|(a, c)| (a.iter().map(|&e| q - 1 - e).collect(), c as i64)).collect();
    DividedElem::from_terms(f.prime(), n, s, &terms)
}

/// How the generators above the middle degree are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scan {
    /// Measure every degree up to `s + 1`.
    Direct,
    /// For three variables, measure through `⌊(s+3)/2⌋ + 1` and read the
    /// remaining degrees off the Gorenstein symmetry of the resolution of
    /// `P/J` (audited on the overlap); other `n` measure directly.
    Auto,
}

/// Generator data of the link together with the quantities it was read from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkData {
    pub q: u32,
    pub s: u32,
    pub profile: GeneratorProfile,
    /// True when `x1^q..xn^q` are part of a minimal generating set.
    pub ci_minimal: bool,
    /// First degree where `J` exceeds `c`.
    pub first_new_degree: u32,
    /// `H_i(P/J)` for `i = 0..=s`.
    pub hilbert: Vec<usize>,
    /// Largest degree measured directly.
    pub measured_through: u32,
}

/// First degree `i` with `(J/c)_i ≠ 0`. Nonvanishing persists upward because
/// the socle of `P/c` sits in its top degree alone.
fn first_new_degree(f: &HomogPoly, q: u32, s: u32) -> u32 {
    let n = f.n();
    let nonzero = |i: u32| mult_rank(f, q, i) < hilbert_ci(n, q, i as i64);
    let mid = s / 2;
    let (mut lo, mut hi) = if nonzero(mid) { (0, mid) } else { (mid + 1, s + 1) };
    while lo < hi {
        let m = lo + (hi - lo) / 2;
        if nonzero(m) {
            hi = m;
        } else {
            lo = m + 1;
        }
    }
    lo
}

/// Measure generators of `J` in degrees `from..=to` given the kernel pieces.
struct Walker<'a> {
    f: &'a HomogPoly,
    q: u32,
    prev: Option<KernelPiece>,
}

impl Walker<'_> {
    /// Returns `(generator count, kernel dimension, ci minimal)` in degree `i`
    /// and advances to the next degree.
    fn step(&mut self, i: u32) -> (usize, usize, bool) {
        let n = self.f.n();
        let q = self.q;
        let cur = mult_kernel(self.f, q, i);
        let dim = cur.dim();
        let pos = cur.anchor_positions();
        let with_ci = i == q;
        let width = dim + if with_ci { n } else { 0 };
        let target = width;
        let mut span = Span::new(self.f.prime(), width);
        let mut buf = vec![0u32; n];
        if let Some(prev) = &self.prev {
            'outer: for g in &prev.vectors {
                for k in 0..n {
                    if span.rank() == target {
                        break 'outer;
                    }
                    let mut v = vec![0u32; width];
                    let mut any = false;
                    for (c, val) in g.iter() {
                        buf.copy_from_slice(prev.basis.exps(c));
                        buf[k] += 1;
                        if buf[k] >= q {
                            // x_k * x_k^(q-1): lands on the generator x_k^q.
                            if with_ci {
                                v[dim + k] = val;
                                any = true;
                            }
                            continue;
                        }
                        let l = cur.basis.local(&buf).expect("exponents below q");
                        let a = pos[l];
                        if a != u32::MAX {
                            v[a as usize] = val;
                            any = true;
                        }
                    }
                    if any {
                        span.insert(&v);
                    }
                }
            }
        }
        let products = span.rank();
        let mut ci_minimal = true;
        let gens = if with_ci {
            for k in 0..n {
                let mut e = vec![0u32; width];
                e[dim + k] = 1;
                span.insert(&e);
            }
            ci_minimal = span.rank() == products + n;
            n + dim - products
        } else {
            dim - products
        };
        self.prev = Some(cur);
        (gens, dim, ci_minimal)
    }
}

/// Generator profile and Hilbert function of the link.
pub fn link_data(f: &HomogPoly, q: u32, scan: Scan) -> Result<LinkData> {
    let s = check_link_degree(f, q)?;
    let n = f.n();
    let i0 = first_new_degree(f, q, s);
    let through = match scan {
        Scan::Auto if n == 3 => ((s + 3) / 2 + 1).min(s + 1),
        _ => s + 1,
    };
    let mut profile = GeneratorProfile::default();
    let mut ci_minimal = true;
    if q < i0 {
        profile.add(q, n);
    }
    let mut jhat = BTreeMap::new();
    let mut walker = Walker { f, q, prev: None };
    if i0 > 0 && i0 <= through {
        // Seed with the (zero) piece below i0 so degree q is handled uniformly.
        walker.prev = Some(mult_kernel(f, q, i0 - 1));
    }
    for i in i0..=through {
        let (gens, dim, minimal) = walker.step(i);
        if i == q {
            ci_minimal = minimal;
        }
        profile.add(i, gens);
        jhat.insert(i, dim);
    }

    let mut hilbert = vec![0usize; s as usize + 1];
    for i in 0..=s / 2 {
        let h = hilbert_ci(n, q, i as i64) - jhat.get(&i).copied().unwrap_or(0);
        hilbert[i as usize] = h;
        hilbert[(s - i) as usize] = h;
    }

    if through < s + 1 {
        // Three variables: the resolution 0 → P(−s−3) → ⊕P(−b) → ⊕P(−a) → P
        // is self-dual with b = s + 3 − a, so the numerator N of the Hilbert
        // series gives β1,k = β1,s+3−k − N_k.
        let num = hilbert_numerator(&hilbert, 3);
        let coef = |k: i64| -> i64 {
            if k < 0 || k as usize >= num.len() {
                0
            } else {
                num[k as usize]
            }
        };
        let snapshot = profile.clone();
        let measured = |k: u32| snapshot.get(k) as i64;
        let lo = (s + 3).saturating_sub(through).max(1);
        for k in lo..=through {
            let mirror = s + 3 - k;
            if mirror >= 1 && mirror <= through && measured(k) - measured(mirror) != -coef(k as i64) {
                return Err(Error::Internal(format!(
                    "Gorenstein symmetry audit failed in degree {k}: β={} mirror β={} N={}",
                    measured(k),
                    measured(mirror),
                    coef(k as i64)
                )));
            }
        }
        for k in through + 1..=s + 2 {
            let b = measured(s + 3 - k) - coef(k as i64);
            if b < 0 {
                return Err(Error::Internal(format!("negative generator count {b} derived in degree {k}")));
            }
            profile.add(k, b as usize);
        }
    }

    Ok(LinkData { q, s, profile, ci_minimal, first_new_degree: i0, hilbert, measured_through: through })
}

/// Coefficients of `(1 − t)^n · Σ h_i t^i`.
pub fn hilbert_numerator(h: &[usize], n: usize) -> Vec<i64> {
    let mut out: Vec<i64> = h.iter().map(|&v| v as i64).collect();
    for _ in 0..n {
        let mut next = vec![0i64; out.len() + 1];
        for (k, &c) in out.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= c;
        }
        out = next;
    }
    out
}

/// Minimal generator degrees of `J_q`, measured.
pub fn measured_generator_profile(f: &HomogPoly, q: u32) -> Result<GeneratorProfile> {
    Ok(link_data(f, q, Scan::Auto)?.profile)
}

/// Predicted generator degrees of a relatively compressed link.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredictedProfile {
    pub profile: GeneratorProfile,
    /// Degrees whose count is an upper bound rather than exact.
    pub bound_degrees: Vec<u32>,
}

/// Generator counts forced by relative compression: `n` in degree `q` and,
/// for `s = 2a`, the count in degree `a + 1`; for `s = 2a + 1`, the exact
/// count in degree `a + 1` and a bound in degree `a + 2`.
pub fn predicted_generator_profile(n: usize, d: u32, q: u32) -> Result<PredictedProfile> {
    if n < 3 {
        return Err(Error::Precondition(format!("need n >= 3, got {n}")));
    }
    if (q as u64) * (n as u64 - 2) < n as u64 + d as u64 {
        return Err(Error::Precondition(format!("need q >= (n+d)/(n-2), got q={q}, n={n}, d={d}")));
    }
    let s = link_socle_degree(n, q, d)? as i64;
    let (n_, q_) = (n as i64, q as i64);
    let c = |a: i64| binom(a, n_ - 1);
    let mut profile = GeneratorProfile::default();
    profile.add(q, n);
    let mut bound_degrees = Vec::new();
    let count = |v: i128| -> Result<usize> {
        usize::try_from(v).map_err(|_| Error::Internal(format!("negative predicted count {v}")))
    };
    if s % 2 == 0 {
        let a = s / 2;
        let v = c(a + n_) - c(a + n_ - 2) + n_ as i128 * c(a - q_ + n_ - 2) - n_ as i128 * c(a - q_ + n_);
        profile.add((a + 1) as u32, count(v)?);
    } else {
        let a = (s - 1) / 2;
        let exact = c(a + n_) - c(a + n_ - 1) + n_ as i128 * c(a - q_ + n_ - 1) - n_ as i128 * c(a - q_ + n_);
        let bound = c(a + n_ + 1) - c(a + n_ - 2) + n_ as i128 * c(a - q_ + n_ - 2) - n_ as i128 * c(a - q_ + n_ + 1);
        profile.add((a + 1) as u32, count(exact)?);
        profile.add((a + 2) as u32, count(bound)?);
        bound_degrees.push((a + 2) as u32);
    }
    Ok(PredictedProfile { profile, bound_degrees })
}

/// Socle of `P/(x1^q..xn^q, f)` by direct kernel computation in every degree.
pub fn socle_direct(f: &HomogPoly, q: u32) -> Result<SocleReport> {
    check_link_degree(f, q)?;
    let model = QuotientModel::new(f.prime(), f.n(), q, Some(f))?;
    Ok(socle_of_model(&model))
}

/// Socle of the complete intersection `P/(x1^q..xn^q)`.
pub fn socle_direct_ci(p: crate::ffla::Prime, n: usize, q: u32) -> Result<SocleReport> {
    let model = QuotientModel::new(p, n, q, None)?;
    Ok(socle_of_model(&model))
}

fn socle_of_model(model: &QuotientModel) -> SocleReport {
    SocleReport::from_dims(model.socle_dims().into_iter().enumerate().map(|(j, c)| (j as u32, c)).collect())
}

/// Socle read off the link: a non-complete-intersection generator of `J_q`
/// in degree `e` contributes a socle element in degree `n(q−1) − e`.
pub fn socle_via_link(f: &HomogPoly, q: u32) -> Result<SocleReport> {
    let data = link_data(f, q, Scan::Auto)?;
    socle_from_link(f.n(), &data)
}

pub fn socle_from_link(n: usize, data: &LinkData) -> Result<SocleReport> {
    if !data.ci_minimal {
        return Err(Error::LinkDegeneracy(format!("x_i^{} are not minimal generators of the link", data.q)));
    }
    let top = n as u32 * (data.q - 1);
    let mut dims = BTreeMap::new();
    for (&e, &c) in &data.profile.0 {
        let c = if e == data.q { c - n } else { c };
        if c > 0 {
            *dims.entry(top - e).or_insert(0) += c;
        }
    }
    Ok(SocleReport::from_dims(dims))
}

/// Comparison of socles at two Frobenius powers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftReport {
    pub holds: bool,
    pub shift: i64,
    pub socle_q0: SocleReport,
    pub socle_q1: SocleReport,
}

/// Check that the socle at `q1` is the socle at `q0` moved up by
/// `n(q1 − q0)/2` (for three variables, `(3/2)(q1 − q0)`). Both links must
/// be relatively compressed.
pub fn ku_shift_check(f: &HomogPoly, q0: u32, q1: u32) -> Result<ShiftReport> {
    let n = f.n();
    let d = f.degree();
    if q1 < q0 {
        return Err(Error::Precondition(format!("need q1 >= q0, got q0={q0}, q1={q1}")));
    }
    if q0 < d + 3 {
        return Err(Error::Precondition(format!("need q0 >= d+3, got q0={q0}, d={d}")));
    }
    let twice = n as i64 * (q1 as i64 - q0 as i64);
    if twice % 2 != 0 {
        return Err(Error::Precondition("the socle shift n(q1-q0)/2 is not an integer".into()));
    }
    for q in [q0, q1] {
        if !is_relatively_compressed(f, q, Mode::Quick)?.verdict {
            return Err(Error::Precondition(format!("the link at q={q} is not relatively compressed")));
        }
    }
    let shift = twice / 2;
    let socle_q0 = socle_via_link(f, q0)?;
    let socle_q1 = if q1 == q0 { socle_q0.clone() } else { socle_via_link(f, q1)? };
    let holds = socle_q0.shifted(shift) == socle_q1;
    Ok(ShiftReport { holds, shift, socle_q0, socle_q1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffla::Prime;
    use crate::invsys::truncated_ideal_generators;
    use crate::polyring::parse_poly;

    fn poly(p: u64, s: &str) -> HomogPoly {
        parse_poly(s, Prime::new(p).unwrap(), 3).unwrap()
    }

    fn profile(pairs: &[(u32, usize)]) -> GeneratorProfile {
        GeneratorProfile(pairs.iter().copied().collect())
    }

    #[test]
    fn inverse_poly_examples() {
        let f = poly(7, "x*y");
        let phi = link_inverse_poly(&f, 3).unwrap();
        assert_eq!(phi.to_string(), "x^(1)*y^(1)*z^(2)");
        let g = poly(7, "x^4 + y^4 + z^4");
        let phi = link_inverse_poly(&g, 7).unwrap();
        assert_eq!(phi.to_string(), "x^(6)*y^(6)*z^(2) + x^(6)*y^(2)*z^(6) + x^(2)*y^(6)*z^(6)");
        assert!(matches!(link_inverse_poly(&g, 4), Err(Error::Precondition(_))));
    }

    #[test]
    fn measured_matches_inverse_system_route() {
        for (p, f, q) in [(7, "x^4 + y^4 + z^4", 7), (5, "x*y^2 + y*z^2 + z*x^2", 5), (7, "x*y^3 + y*z^3 + z*x^3", 7)] {
            let f = poly(p, f);
            let phi = link_inverse_poly(&f, q).unwrap();
            let oracle = GeneratorProfile::from(truncated_ideal_generators(&phi, 1));
            assert_eq!(link_data(&f, q, Scan::Direct).unwrap().profile, oracle);
            assert_eq!(link_data(&f, q, Scan::Auto).unwrap().profile, oracle);
        }
    }

    #[test]
    fn diagonal_quartic_q7() {
        let f = poly(7, "x^4 + y^4 + z^4");
        assert_eq!(measured_generator_profile(&f, 7).unwrap(), profile(&[(7, 6), (9, 1)]));
    }

    #[test]
    fn predicted_examples() {
        let p = predicted_generator_profile(3, 4, 7).unwrap();
        assert_eq!(p.profile, profile(&[(7, 3), (8, 8)]));
        assert!(p.bound_degrees.is_empty());
        let p = predicted_generator_profile(3, 3, 25).unwrap();
        assert_eq!(p.profile, profile(&[(25, 3), (35, 3), (36, 9)]));
        assert_eq!(p.bound_degrees, vec![36]);
        assert_eq!(predicted_generator_profile(4, 2, 8).unwrap().profile, profile(&[(8, 4), (14, 29)]));
        assert_eq!(predicted_generator_profile(4, 2, 16).unwrap().profile, profile(&[(16, 4), (30, 61)]));
        assert!(predicted_generator_profile(3, 4, 6).is_err());
    }

    #[test]
    fn socle_examples() {
        let f = poly(7, "x*y^3 + y*z^3 + z*x^3");
        let direct = socle_direct(&f, 7).unwrap();
        assert_eq!(direct.dims, [(10, 8)].into_iter().collect());
        assert_eq!(socle_via_link(&f, 7).unwrap(), direct);
        let ci = socle_direct_ci(Prime::new(5).unwrap(), 3, 5).unwrap();
        assert_eq!(ci.dims, [(12, 1)].into_iter().collect());
        let g = poly(5, "x*y^2 + y*z^2 + z*x^2");
        assert_eq!(socle_via_link(&g, 5).unwrap(), socle_direct(&g, 5).unwrap());
    }

    #[test]
    fn shift_examples() {
        let f = poly(7, "x*y^3 + y*z^3 + z*x^3");
        let r = ku_shift_check(&f, 7, 7).unwrap();
        assert!(r.holds);
        assert_eq!(r.shift, 0);
        let g = poly(5, "x^4 + y^4 + z^4");
        assert!(matches!(ku_shift_check(&g, 7, 25), Err(Error::Precondition(_))));
    }
}
