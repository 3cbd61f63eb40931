//! Hilbert-Kunz function `HK(q) = dim_k R/m^[q]` for `R = P/(f)`: direct
//! degreewise count, the closed form for compressed links, and the
//! Hilbert-series identity behind it.

use crate::artinian::{hilbert_ci, mult_rank};
use crate::error::{Error, Result};
use crate::invsys::{is_relatively_compressed, Mode};
use crate::polyring::HomogPoly;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

/// Exact rational `¾dq² − (d³−d)/12`.
pub fn hk_formula(d: u32, q: u32) -> Ratio<i128> {
    let (d, q) = (d as i128, q as i128);
    Ratio::new(3 * d * q * q, 4) - Ratio::new(d * d * d - d, 12)
}

fn ser_ratio<S: Serializer>(r: &Option<Ratio<i128>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_str("n/a"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HKReport {
    pub p: u64,
    pub q: u32,
    pub d: u32,
    pub direct: u64,
    /// Closed form, present when the instance meets its hypotheses.
    #[serde(serialize_with = "ser_ratio")]
    pub formula: Option<Ratio<i128>>,
    /// `dim (R/m^[q])_j` for `j = 0..=n(q−1)`.
    pub profile: Vec<usize>,
    /// `p` and `d` of opposite parity.
    pub opposite_parity: bool,
    pub compressed: bool,
}

impl HKReport {
    /// `Some(true)` when the closed form applies and agrees.
    pub fn agrees(&self) -> Option<bool> {
        self.formula.map(|r| r.is_integer() && r.to_integer() == self.direct as i128)
    }
}

/// `dim (P/(c, f))_j` for every degree of `P/c`.
pub fn quotient_profile(f: &HomogPoly, q: u32) -> Vec<usize> {
    let n = f.n();
    let d = f.degree();
    let top = n as u32 * q.saturating_sub(1);
    (0..=top)
        .into_par_iter()
        .map(|j| {
            let h = hilbert_ci(n, q, j as i64);
            if j >= d {
                h - mult_rank(f, q, j - d)
            } else {
                h
            }
        })
        .collect()
}

fn formula_applies(f: &HomogPoly, q: u32) -> Result<(bool, bool)> {
    let d = f.degree();
    let opposite = (f.prime().get() + d) % 2 == 1;
    let compressed = q > d && is_relatively_compressed(f, q, Mode::Quick)?.verdict;
    Ok((opposite, compressed))
}

pub fn hk_direct(f: &HomogPoly, q: u32) -> Result<HKReport> {
    if f.is_zero() || f.degree() == 0 {
        return Err(Error::Precondition("f must be a nonzero form of positive degree".into()));
    }
    let d = f.degree();
    let profile = quotient_profile(f, q);
    let direct = profile.iter().map(|&v| v as u64).sum();
    let (opposite_parity, compressed) = formula_applies(f, q)?;
    let formula = (f.n() == 3 && compressed && opposite_parity && q >= d + 3).then(|| hk_formula(d, q));
    Ok(HKReport { p: f.prime().get() as u64, q, d, direct, formula, profile, opposite_parity, compressed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum SeriesCheck {
    Holds,
    /// First degree where the profile and the series disagree.
    Fails(u32),
    Inapplicable(String),
}

/// Coefficients of `1 − 3t^q − t^d + 2d·t^b + 3t^a − 2d·t^{b+1}` with
/// `b = (3q+d−1)/2`, `a = q+d`.
pub fn numerator_series(d: u32, q: u32) -> Vec<i64> {
    let b = ((3 * q + d - 1) / 2) as usize;
    let a = (q + d) as usize;
    let mut c = vec![0i64; a.max(b + 1) + 1];
    c[0] += 1;
    c[q as usize] -= 3;
    c[d as usize] -= 1;
    c[b] += 2 * d as i64;
    c[a] += 3;
    c[b + 1] -= 2 * d as i64;
    c
}

/// Compare the profile of `P/(c, f)` with `numerator/(1−t)^3`.
pub fn hilbert_series_check(f: &HomogPoly, q: u32) -> Result<SeriesCheck> {
    let d = f.degree();
    if f.n() != 3 {
        return Ok(SeriesCheck::Inapplicable(format!("needs n=3, got n={}", f.n())));
    }
    if q < d + 3 {
        return Ok(SeriesCheck::Inapplicable(format!("needs q ≥ d+3, got q={q}, d={d}")));
    }
    let (opposite, compressed) = formula_applies(f, q)?;
    if !opposite {
        return Ok(SeriesCheck::Inapplicable("p and d have the same parity".into()));
    }
    if !compressed {
        return Ok(SeriesCheck::Inapplicable("link is not relatively compressed".into()));
    }
    let profile = quotient_profile(f, q);
    let num = numerator_series(d, q);
    let len = profile.len().max(num.len()) + 3;
    // Divide by (1−t)^3 through three running sums.
    let mut series: Vec<i64> = (0..len).map(|j| num.get(j).copied().unwrap_or(0)).collect();
    for _ in 0..3 {
        for j in 1..len {
            series[j] += series[j - 1];
        }
    }
    for (j, &v) in series.iter().enumerate() {
        if profile.get(j).copied().unwrap_or(0) as i64 != v {
            return Ok(SeriesCheck::Fails(j as u32));
        }
    }
    Ok(SeriesCheck::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffla::Prime;
    use crate::polyring::parse_poly;

    fn poly(p: u64, s: &str) -> HomogPoly {
        parse_poly(s, Prime::new(p).unwrap(), 3).unwrap()
    }

    #[test]
    fn formula_values() {
        assert_eq!(hk_formula(4, 7), Ratio::from_integer(142));
        assert_eq!(hk_formula(4, 49), Ratio::from_integer(7198));
        assert_eq!(hk_formula(4, 25), Ratio::from_integer(1870));
        assert!(!hk_formula(1, 5).is_integer());
        assert_eq!(hk_formula(1, 4), Ratio::from_integer(12));
    }

    #[test]
    fn direct_examples() {
        let r = hk_direct(&poly(7, "x*y^3 + y*z^3 + z*x^3"), 7).unwrap();
        assert_eq!(r.direct, 142);
        assert_eq!(r.agrees(), Some(true));
        let r = hk_direct(&poly(5, "x^3*y - x*y^3 + x^3*z - x*z^3 - y*z^3"), 25).unwrap();
        assert_eq!(r.direct, 1870);
        assert_eq!(r.agrees(), Some(true));
    }

    #[test]
    fn series_examples() {
        assert_eq!(hilbert_series_check(&poly(7, "x*y^3 + y*z^3 + z*x^3"), 7).unwrap(), SeriesCheck::Holds);
        assert!(matches!(hilbert_series_check(&poly(5, "x^4 + y^4 + z^4"), 25).unwrap(), SeriesCheck::Inapplicable(_)));
        assert!(matches!(
            hilbert_series_check(&poly(7, "x*y^3 + y*z^3 + z*x^3"), 5).unwrap(),
            SeriesCheck::Inapplicable(_)
        ));
    }
}
