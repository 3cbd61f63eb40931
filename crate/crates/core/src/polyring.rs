//! Homogeneous polynomials in S = k[x1..xn] and divided-power elements of D.
//!
//! Both live on the same ranked monomial bases. S acts on D by contraction:
//! `x^a` sends `x^(b)` to `x^(b-a)` with coefficient 1 when `b >= a`
//! componentwise and to zero otherwise. No binomial factors appear, so the
//! action is valid in every characteristic.

use crate::error::{Error, Result};
use crate::ffla::{Field, Prime};
use std::collections::BTreeMap;
use std::fmt;

/// Binomial coefficient with `C(a, b) = 0` whenever `b < 0` or `a < b`.
/// Negative `a` also yields zero (the inclusion–exclusion convention).
pub fn binom(a: i64, b: i64) -> i128 {
    if b < 0 || a < b || a < 0 {
        return 0;
    }
    let b = b.min(a - b);
    let mut r: i128 = 1;
    for k in 0..b {
        r = r * (a - k) as i128 / (k + 1) as i128;
    }
    r
}

/// Number of monomials of degree `deg` in `n` variables.
pub fn monomial_count(n: usize, deg: i64) -> usize {
    if deg < 0 || n == 0 {
        return usize::from(n == 0 && deg == 0);
    }
    binom(deg + n as i64 - 1, n as i64 - 1) as usize
}

/// An exponent vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Monomial {
        Monomial { exps }
    }

    pub fn one(n: usize) -> Monomial {
        Monomial { exps: vec![0; n] }
    }

    pub fn var(n: usize, k: usize) -> Monomial {
        let mut exps = vec![0; n];
        exps[k] = 1;
        Monomial { exps }
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect() }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }
}

/// Position of an exponent vector among all monomials of its degree in
/// graded-lex order with `x1 > x2 > ... > xn` (rank 0 is `x1^deg`).
pub fn rank_exps(exps: &[u32]) -> usize {
    let n = exps.len();
    if n <= 1 {
        return 0;
    }
    let mut rem: i64 = exps.iter().map(|&e| e as i64).sum();
    let mut r: i128 = 0;
    for (i, &e) in exps.iter().enumerate().take(n - 1) {
        let e = e as i64;
        let k = (n - 1 - i) as i64;
        if rem > e {
            r += binom(rem - e - 1 + k, k);
        }
        rem -= e;
    }
    r as usize
}

/// Inverse of [`rank_exps`]; writes the exponents into `out`.
pub fn unrank_into(n: usize, deg: u32, mut r: usize, out: &mut [u32]) {
    let mut rem = deg as i64;
    for i in 0..n {
        if i == n - 1 {
            out[i] = rem as u32;
            break;
        }
        let k = (n - 1 - i) as i64;
        // Candidates for exponent e run from rem down to 0; each block holds
        // the monomials of degree rem - e in the remaining k variables.
        let mut e = rem;
        loop {
            let block = binom(rem - e + k - 1, k - 1) as usize;
            if r < block {
                break;
            }
            r -= block;
            e -= 1;
        }
        out[i] = e as u32;
        rem -= e;
    }
}

/// The monomials of one degree, in graded-lex order, with rank and unrank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    n: usize,
    deg: u32,
    flat: Vec<u32>,
}

impl GradedBasis {
    pub fn new(n: usize, deg: u32) -> GradedBasis {
        let size = monomial_count(n, deg as i64);
        let mut flat = Vec::with_capacity(size * n);
        let mut cur = vec![0u32; n];
        fn rec(i: usize, rem: u32, cur: &mut [u32], flat: &mut Vec<u32>) {
            let n = cur.len();
            if i == n - 1 {
                cur[i] = rem;
                flat.extend_from_slice(cur);
                return;
            }
            for e in (0..=rem).rev() {
                cur[i] = e;
                rec(i + 1, rem - e, cur, flat);
            }
        }
        if n > 0 {
            rec(0, deg, &mut cur, &mut flat);
        }
        GradedBasis { n, deg, flat }
    }

    pub fn n(&self) -> usize {
        self.n
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

    /// Exponents of the monomial at position `r`.
    pub fn exps(&self, r: usize) -> &[u32] {
        &self.flat[r * self.n..(r + 1) * self.n]
    }

    pub fn monomial(&self, r: usize) -> Monomial {
        Monomial::new(self.exps(r).to_vec())
    }

    pub fn rank(&self, m: &[u32]) -> usize {
        debug_assert_eq!(m.iter().sum::<u32>(), self.deg);
        rank_exps(m)
    }

    pub fn unrank(&self, r: usize) -> Monomial {
        let mut out = vec![0; self.n];
        unrank_into(self.n, self.deg, r, &mut out);
        Monomial::new(out)
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.flat.chunks_exact(self.n.max(1))
    }
}

/// Shared layout of [`HomogPoly`] and [`DividedElem`]: a dense coefficient
/// vector over the graded-lex monomial basis of one degree.
macro_rules! graded_vector {
    ($name:ident) => {
        impl $name {
            pub fn zero(p: Prime, n: usize, deg: u32) -> $name {
                $name { p, n, deg, coeffs: vec![0; monomial_count(n, deg as i64)] }
            }

            /// Build from a coefficient vector; entries are reduced mod p.
            pub fn from_coeffs(p: Prime, n: usize, deg: u32, coeffs: Vec<u32>) -> Result<$name> {
                let expected = monomial_count(n, deg as i64);
                if coeffs.len() != expected {
                    return Err(Error::Dimension(format!(
                        "{} coefficients for {} monomials of degree {deg}",
                        coeffs.len(),
                        expected
                    )));
                }
                let pv = p.get();
                Ok($name { p, n, deg, coeffs: coeffs.into_iter().map(|c| c % pv).collect() })
            }

            /// Build from `(exponents, coefficient)` terms of one degree.
            pub fn from_terms(p: Prime, n: usize, deg: u32, terms: &[(Vec<u32>, i64)]) -> Result<$name> {
                let field = Field::new(p);
                let mut out = $name::zero(p, n, deg);
                for (exps, c) in terms {
                    if exps.len() != n || exps.iter().sum::<u32>() != deg {
                        return Err(Error::Dimension(format!("term {exps:?} is not of degree {deg} in {n} variables")));
                    }
                    let r = rank_exps(exps);
                    out.coeffs[r] = field.add(out.coeffs[r], field.from_i64(*c));
                }
                Ok(out)
            }

            pub fn monomial(p: Prime, exps: &[u32]) -> $name {
                let deg = exps.iter().sum();
                let mut out = $name::zero(p, exps.len(), deg);
                out.coeffs[rank_exps(exps)] = 1 % p.get();
                out
            }

            pub fn prime(&self) -> Prime {
                self.p
            }

            pub fn field(&self) -> Field {
                Field::new(self.p)
            }

            pub fn n(&self) -> usize {
                self.n
            }

            pub fn degree(&self) -> u32 {
                self.deg
            }

            pub fn coeffs(&self) -> &[u32] {
                &self.coeffs
            }

            pub fn is_zero(&self) -> bool {
                self.coeffs.iter().all(|&c| c == 0)
            }

            /// Nonzero terms in graded-lex order.
            pub fn terms(&self) -> Vec<(Vec<u32>, u32)> {
                let mut out = Vec::new();
                let mut buf = vec![0u32; self.n];
                for (r, &c) in self.coeffs.iter().enumerate() {
                    if c != 0 {
                        unrank_into(self.n, self.deg, r, &mut buf);
                        out.push((buf.clone(), c));
                    }
                }
                out
            }

            pub fn scale(&self, c: u32) -> $name {
                let f = self.field();
                $name {
                    p: self.p,
                    n: self.n,
                    deg: self.deg,
                    coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
                }
            }

            pub fn add(&self, other: &$name) -> Result<$name> {
                self.check_compatible(other)?;
                let f = self.field();
                let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.add(a, b)).collect();
                Ok($name { p: self.p, n: self.n, deg: self.deg, coeffs })
            }

            pub fn sub(&self, other: &$name) -> Result<$name> {
                self.check_compatible(other)?;
                let f = self.field();
                let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| f.sub(a, b)).collect();
                Ok($name { p: self.p, n: self.n, deg: self.deg, coeffs })
            }

            fn check_compatible(&self, other: &$name) -> Result<()> {
                if self.p != other.p || self.n != other.n || self.deg != other.deg {
                    return Err(Error::Dimension(format!(
                        "incompatible operands (p={}, n={}, deg={}) and (p={}, n={}, deg={})",
                        self.p, self.n, self.deg, other.p, other.n, other.deg
                    )));
                }
                Ok(())
            }
        }
    };
}

/// A homogeneous polynomial in `S_deg`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    p: Prime,
    n: usize,
    deg: u32,
    coeffs: Vec<u32>,
}

/// A homogeneous element of the divided-power module `D_deg`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DividedElem {
    p: Prime,
    n: usize,
    deg: u32,
    coeffs: Vec<u32>,
}

graded_vector!(HomogPoly);
graded_vector!(DividedElem);

impl HomogPoly {
    pub fn one(p: Prime, n: usize) -> HomogPoly {
        HomogPoly::monomial(p, &vec![0; n])
    }

    /// Leading term under graded-lex: the first nonzero coefficient.
    pub fn leading(&self) -> Option<(Vec<u32>, u32)> {
        let r = self.coeffs.iter().position(|&c| c != 0)?;
        let mut buf = vec![0; self.n];
        unrank_into(self.n, self.deg, r, &mut buf);
        Some((buf, self.coeffs[r]))
    }

    /// Evaluate at a point of `GF(p)^n`.
    pub fn eval(&self, point: &[u32]) -> u32 {
        let f = self.field();
        let mut acc = 0;
        for (exps, c) in self.terms() {
            let mut t = c;
            for (&x, &e) in point.iter().zip(&exps) {
                t = f.mul(t, f.pow(x, e as u64));
            }
            acc = f.add(acc, t);
        }
        acc
    }
}

/// `x^m` contracted into `g`: each divided monomial `x^(b)` with `b >= m`
/// moves to `x^(b-m)` with its coefficient unchanged.
pub fn contract(m: &Monomial, g: &DividedElem) -> Result<DividedElem> {
    let dm = m.degree();
    if dm > g.deg {
        return Err(Error::DegreeUnderflow { operator: dm, element: g.deg });
    }
    if m.n() != g.n {
        return Err(Error::Dimension(format!("monomial in {} variables on D in {}", m.n(), g.n)));
    }
    let mut out = DividedElem::zero(g.p, g.n, g.deg - dm);
    let mut buf = vec![0u32; g.n];
    for (r, &c) in g.coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        unrank_into(g.n, g.deg, r, &mut buf);
        if m.exps.iter().zip(&buf).all(|(a, b)| a <= b) {
            for (b, a) in buf.iter_mut().zip(&m.exps) {
                *b -= a;
            }
            out.coeffs[rank_exps(&buf)] = c;
        }
    }
    Ok(out)
}

/// Linear extension of [`contract`] over the terms of `pq`.
pub fn poly_apply(pq: &HomogPoly, g: &DividedElem) -> Result<DividedElem> {
    if pq.deg > g.deg {
        return Err(Error::DegreeUnderflow { operator: pq.deg, element: g.deg });
    }
    if pq.p != g.p || pq.n != g.n {
        return Err(Error::Dimension("polynomial and divided element disagree on p or n".into()));
    }
    let f = g.field();
    let mut out = DividedElem::zero(g.p, g.n, g.deg - pq.deg);
    let gterms = g.terms();
    for (a, c) in pq.terms() {
        for (b, v) in &gterms {
            if a.iter().zip(b).all(|(x, y)| x <= y) {
                let diff: Vec<u32> = b.iter().zip(&a).map(|(y, x)| y - x).collect();
                let r = rank_exps(&diff);
                out.coeffs[r] = f.mul_add(out.coeffs[r], c, *v);
            }
        }
    }
    Ok(out)
}

/// Product of two homogeneous polynomials.
pub fn poly_mul(a: &HomogPoly, b: &HomogPoly) -> Result<HomogPoly> {
    if a.p != b.p || a.n != b.n {
        return Err(Error::Dimension("factors disagree on p or n".into()));
    }
    let f = a.field();
    let mut out = HomogPoly::zero(a.p, a.n, a.deg + b.deg);
    let bt = b.terms();
    let mut buf = vec![0u32; a.n];
    for (ea, ca) in a.terms() {
        for (eb, cb) in &bt {
            for k in 0..a.n {
                buf[k] = ea[k] + eb[k];
            }
            let r = rank_exps(&buf);
            out.coeffs[r] = f.mul_add(out.coeffs[r], ca, *cb);
        }
    }
    Ok(out)
}

/// Variable names: `x, y, z` for up to three variables, else `x1..xn`.
pub fn var_name(n: usize, k: usize) -> String {
    if n <= 3 {
        ["x", "y", "z"][k].to_string()
    } else {
        format!("x{}", k + 1)
    }
}

fn write_terms(
    out: &mut fmt::Formatter<'_>,
    field: Field,
    n: usize,
    terms: &[(Vec<u32>, u32)],
    divided: bool,
) -> fmt::Result {
    if terms.is_empty() {
        return write!(out, "0");
    }
    for (t, (exps, c)) in terms.iter().enumerate() {
        let sc = field.to_signed(*c);
        let mag = sc.unsigned_abs();
        if t == 0 {
            if sc < 0 {
                write!(out, "-")?;
            }
        } else if sc < 0 {
            write!(out, " - ")?;
        } else {
            write!(out, " + ")?;
        }
        let factors: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(k, &e)| {
                let v = var_name(n, k);
                match (divided, e) {
                    (true, _) => format!("{v}^({e})"),
                    (false, 1) => v,
                    (false, _) => format!("{v}^{e}"),
                }
            })
            .collect();
        if factors.is_empty() {
            write!(out, "{mag}")?;
        } else if mag == 1 {
            write!(out, "{}", factors.join("*"))?;
        } else {
            write!(out, "{mag}*{}", factors.join("*"))?;
        }
    }
    Ok(())
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.field(), self.n, &self.terms(), false)
    }
}

impl fmt::Display for DividedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.field(), self.n, &self.terms(), true)
    }
}

/// Parse a homogeneous polynomial.
///
/// ```text
/// poly   := ['+'|'-'] term (('+'|'-') term)*
/// term   := factor ('*' factor)*
/// factor := integer | var ['^' integer]
/// var    := 'x' | 'y' | 'z'          (n <= 3)
///         | 'x' integer               (index 1..n, any n)
/// ```
///
/// Whitespace is ignored between tokens. Integer coefficients are reduced mod
/// p. Every term must have the same degree and the result must be nonzero.
pub fn parse_poly(text: &str, p: Prime, n: usize) -> Result<HomogPoly> {
    let field = Field::new(p);
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let err = |pos: usize, msg: &str| Error::Parse { pos, msg: msg.to_string() };
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let read_int = |pos: &mut usize| -> Option<u64> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if *pos == start {
            return None;
        }
        text[start..*pos].parse::<u64>().ok()
    };

    let mut terms: Vec<(Vec<u32>, i64, usize)> = Vec::new();
    let mut first = true;
    loop {
        skip_ws(&mut pos);
        let mut negative = false;
        if pos < bytes.len() && (bytes[pos] == b'+' || bytes[pos] == b'-') {
            negative = bytes[pos] == b'-';
            pos += 1;
            skip_ws(&mut pos);
        } else if !first {
            break;
        }
        first = false;
        let term_start = pos;
        let mut exps = vec![0u32; n];
        let mut coef: u64 = 1;
        loop {
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                return Err(err(pos, "expected a factor"));
            }
            let c = bytes[pos];
            if c.is_ascii_digit() {
                let v = read_int(&mut pos).ok_or_else(|| err(pos, "integer too large"))?;
                coef = ((coef as u128 * (v % field.p() as u64) as u128) % field.p() as u128) as u64;
            } else if c == b'x' || c == b'y' || c == b'z' {
                let name_pos = pos;
                pos += 1;
                let k = if c == b'x' && pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    let idx = read_int(&mut pos).ok_or_else(|| err(name_pos, "bad variable index"))? as usize;
                    if idx == 0 || idx > n {
                        return Err(err(name_pos, &format!("variable index {idx} outside 1..{n}")));
                    }
                    idx - 1
                } else {
                    if n > 3 {
                        return Err(err(name_pos, "use x1..xn for more than three variables"));
                    }
                    let k = (c - b'x') as usize;
                    if k >= n {
                        return Err(err(name_pos, &format!("variable {} not available with n={n}", c as char)));
                    }
                    k
                };
                skip_ws(&mut pos);
                let mut e = 1u32;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    skip_ws(&mut pos);
                    e = read_int(&mut pos)
                        .and_then(|v| u32::try_from(v).ok())
                        .ok_or_else(|| err(pos, "expected an exponent"))?;
                }
                exps[k] += e;
            } else {
                return Err(err(pos, &format!("unexpected character '{}'", c as char)));
            }
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                continue;
            }
            break;
        }
        let signed = if negative { -(coef as i64) } else { coef as i64 };
        terms.push((exps, signed, term_start));
    }
    skip_ws(&mut pos);
    if pos != bytes.len() {
        return Err(err(pos, &format!("unexpected character '{}'", bytes[pos] as char)));
    }
    let deg = terms[0].0.iter().sum::<u32>();
    for (exps, _, at) in &terms {
        if exps.iter().sum::<u32>() != deg {
            return Err(err(*at, "polynomial is not homogeneous"));
        }
    }
    let plain: Vec<(Vec<u32>, i64)> = terms.into_iter().map(|(e, c, _)| (e, c)).collect();
    let poly = HomogPoly::from_terms(p, n, deg, &plain)?;
    if poly.is_zero() {
        return Err(err(0, "polynomial is zero mod p"));
    }
    Ok(poly)
}

/// A polynomial stored as a sparse map from exponent vectors to nonzero
/// coefficients; homogeneity is not required. Used for matrix arithmetic
/// where entries of several degrees meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    field: Field,
    n: usize,
    terms: BTreeMap<Vec<u32>, u32>,
}

impl SparsePoly {
    pub fn zero(p: Prime, n: usize) -> SparsePoly {
        SparsePoly { field: Field::new(p), n, terms: BTreeMap::new() }
    }

    pub fn constant(p: Prime, n: usize, c: u32) -> SparsePoly {
        let mut out = SparsePoly::zero(p, n);
        out.add_term(vec![0; n], c);
        out
    }

    pub fn from_homog(h: &HomogPoly) -> SparsePoly {
        let mut out = SparsePoly::zero(h.p, h.n);
        for (e, c) in h.terms() {
            out.terms.insert(e, c);
        }
        out
    }

    pub fn prime(&self) -> Prime {
        self.field.prime()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, u32)> + '_ {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    /// Add `c·x^e` in place.
    pub fn add_term(&mut self, e: Vec<u32>, c: u32) {
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> SparsePoly {
        self.scale(self.field.neg(1))
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u32) -> SparsePoly {
        let mut out = SparsePoly::zero(self.prime(), self.n);
        for (e, v) in self.terms() {
            out.add_term(e.clone(), self.field.mul(v, c));
        }
        out
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero(self.prime(), self.n);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                let e: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, self.field.mul(ca, cb));
            }
        }
        out
    }

    /// Common degree of all terms, `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// The homogeneous polynomial of degree `deg` with these terms.
    pub fn to_homog(&self, deg: u32) -> Result<HomogPoly> {
        let mut out = HomogPoly::zero(self.prime(), self.n, deg);
        for (e, c) in self.terms() {
            if e.iter().sum::<u32>() != deg {
                return Err(Error::Dimension(format!(
                    "term of degree {} in a form of degree {deg}",
                    e.iter().sum::<u32>()
                )));
            }
            out.coeffs[rank_exps(e)] = c;
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[u32]) -> u32 {
        let f = self.field;
        let mut acc = 0;
        for (e, c) in self.terms() {
            let mut t = c;
            for (&x, &k) in point.iter().zip(e) {
                t = f.mul(t, f.pow(x, k as u64));
            }
            acc = f.add(acc, t);
        }
        acc
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Descending total degree, then graded-lex within a degree.
        let mut terms: Vec<(Vec<u32>, u32)> = self.terms().map(|(e, c)| (e.clone(), c)).collect();
        terms.sort_by(|a, b| {
            let (da, db) = (a.0.iter().sum::<u32>(), b.0.iter().sum::<u32>());
            db.cmp(&da).then_with(|| b.0.cmp(&a.0))
        });
        write_terms(f, self.field, self.n, &terms, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn divided(pr: Prime, terms: &[(&[u32], i64)]) -> DividedElem {
        let deg = terms[0].0.iter().sum();
        let t: Vec<(Vec<u32>, i64)> = terms.iter().map(|(e, c)| (e.to_vec(), *c)).collect();
        DividedElem::from_terms(pr, terms[0].0.len(), deg, &t).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(2, 5), 0);
        assert_eq!(binom(-1, 0), 0);
        assert_eq!(binom(4, -1), 0);
        assert_eq!(binom(0, 0), 1);
    }

    #[test]
    fn grlex_order() {
        let b = GradedBasis::new(3, 2);
        let listed: Vec<Vec<u32>> = b.iter().map(|e| e.to_vec()).collect();
        assert_eq!(
            listed,
            vec![vec![2, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 2, 0], vec![0, 1, 1], vec![0, 0, 2]]
        );
    }

    #[test]
    fn contract_examples() {
        let pr = p(5);
        let g = divided(pr, &[(&[3, 0, 0], 1)]);
        let r = contract(&Monomial::new(vec![1, 0, 0]), &g).unwrap();
        assert_eq!(r, divided(pr, &[(&[2, 0, 0], 1)]));

        let g = divided(pr, &[(&[1, 2, 0], 1)]);
        assert!(contract(&Monomial::new(vec![2, 0, 0]), &g).unwrap().is_zero());

        let g = divided(pr, &[(&[1, 1, 0], 1), (&[0, 0, 2], 1)]);
        let r = contract(&Monomial::new(vec![1, 0, 0]), &g).unwrap();
        assert_eq!(r, divided(pr, &[(&[0, 1, 0], 1)]));

        let e = contract(&Monomial::new(vec![2, 1, 0]), &divided(pr, &[(&[1, 1, 0], 1)])).unwrap_err();
        assert_eq!(e, Error::DegreeUnderflow { operator: 3, element: 2 });
    }

    #[test]
    fn poly_apply_examples() {
        let pr = p(7);
        let phi = divided(pr, &[(&[2, 0, 0], 1), (&[0, 2, 0], 1), (&[0, 0, 2], 1)]);
        assert_eq!(poly_apply(&HomogPoly::one(pr, 3), &phi).unwrap(), phi);
        let x2 = HomogPoly::monomial(pr, &[2, 0, 0]);
        assert_eq!(poly_apply(&x2, &phi).unwrap(), DividedElem::monomial(pr, &[0, 0, 0]));
        let xy = HomogPoly::monomial(pr, &[1, 1, 0]);
        assert!(poly_apply(&xy, &phi).unwrap().is_zero());
    }

    #[test]
    fn poly_mul_examples() {
        let pr = p(2);
        let f = parse_poly("x*y + z^2", pr, 3).unwrap();
        assert_eq!(poly_mul(&HomogPoly::one(pr, 3), &f).unwrap(), f);
        let x = parse_poly("x", pr, 3).unwrap();
        let y = parse_poly("y", pr, 3).unwrap();
        assert_eq!(poly_mul(&x, &y).unwrap(), parse_poly("x*y", pr, 3).unwrap());
        let s = parse_poly("x + y", pr, 2).unwrap();
        assert_eq!(poly_mul(&s, &s).unwrap(), parse_poly("x^2 + y^2", pr, 2).unwrap());
    }

    #[test]
    fn parser_round_trip_and_errors() {
        let pr = p(5);
        let f = parse_poly("x^3*y - x*y^3 + x^3*z - x*z^3 - y*z^3", pr, 3).unwrap();
        assert_eq!(f.degree(), 4);
        assert_eq!(f.to_string(), "x^3*y + x^3*z - x*y^3 - x*z^3 - y*z^3");
        assert_eq!(parse_poly(&f.to_string(), pr, 3).unwrap(), f);
        let g = parse_poly("2*x1*x4 + 3 * x2^2", pr, 4).unwrap();
        assert_eq!(g.to_string(), "2*x1*x4 - 2*x2^2");
        assert!(matches!(parse_poly("x + y^2", pr, 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("5*x", pr, 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("x*w", pr, 3), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("x5", pr, 4), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("", pr, 3), Err(Error::Parse { .. })));
    }

    proptest! {
        #[test]
        fn rank_round_trip(n in 1usize..=5, deg in 0u32..=40, seed in any::<u64>()) {
            let size = monomial_count(n, deg as i64);
            let r = (seed % size as u64) as usize;
            let mut buf = vec![0; n];
            unrank_into(n, deg, r, &mut buf);
            prop_assert_eq!(buf.iter().sum::<u32>(), deg);
            prop_assert_eq!(rank_exps(&buf), r);
        }

        #[test]
        fn basis_matches_rank(n in 1usize..=4, deg in 0u32..=12) {
            let b = GradedBasis::new(n, deg);
            prop_assert_eq!(b.len(), monomial_count(n, deg as i64));
            for (r, e) in b.iter().enumerate() {
                prop_assert_eq!(rank_exps(e), r);
            }
        }

        #[test]
        fn contraction_is_an_action(
            a in prop::collection::vec(0u32..3, 3),
            b in prop::collection::vec(0u32..3, 3),
            coeffs in prop::collection::vec(0u32..7, 45),
        ) {
            let pr = p(7);
            let g = DividedElem::from_coeffs(pr, 3, 8, coeffs).unwrap();
            let ma = Monomial::new(a);
            let mb = Monomial::new(b);
            prop_assume!(ma.degree() + mb.degree() <= 8);
            let lhs = contract(&ma.mul(&mb), &g).unwrap();
            let rhs = contract(&ma, &contract(&mb, &g).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn poly_apply_bilinear(
            c1 in prop::collection::vec(0u32..5, 6),
            c2 in prop::collection::vec(0u32..5, 6),
            g1 in prop::collection::vec(0u32..5, 15),
            g2 in prop::collection::vec(0u32..5, 15),
        ) {
            let pr = p(5);
            let a = HomogPoly::from_coeffs(pr, 3, 2, c1).unwrap();
            let b = HomogPoly::from_coeffs(pr, 3, 2, c2).unwrap();
            let g = DividedElem::from_coeffs(pr, 3, 4, g1).unwrap();
            let h = DividedElem::from_coeffs(pr, 3, 4, g2).unwrap();
            let left = poly_apply(&a.add(&b).unwrap(), &g).unwrap();
            prop_assert_eq!(left, poly_apply(&a, &g).unwrap().add(&poly_apply(&b, &g).unwrap()).unwrap());
            let right = poly_apply(&a, &g.add(&h).unwrap()).unwrap();
            prop_assert_eq!(right, poly_apply(&a, &g).unwrap().add(&poly_apply(&a, &h).unwrap()).unwrap());
        }
    }
}
