//! Shared inputs for the benchmarks.

use frobetti::{parse_poly, FMatrix, HomogPoly, Prime};

/// The Klein-type quartic over GF(7).
pub fn quartic_p7() -> HomogPoly {
    form(7, "x*y^3 + y*z^3 + z*x^3")
}

/// A cubic over GF(5) whose links are relatively compressed.
pub fn cubic_p5() -> HomogPoly {
    form(5, "x*y^2 + y*z^2 + z*x^2")
}

pub fn form(p: u64, f: &str) -> HomogPoly {
    parse_poly(f, Prime::new(p).expect("prime"), 3).expect("valid form")
}

/// A deterministic dense square matrix over GF(p).
pub fn dense_matrix(p: u64, size: usize) -> FMatrix {
    let prime = Prime::new(p).expect("prime");
    FMatrix::from_fn(prime, size, size, |i, j| ((i * 31 + j * 17 + i * j) % p as usize) as u32)
}
