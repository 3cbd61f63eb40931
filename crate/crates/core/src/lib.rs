//! Exact linear algebra over prime fields for Frobenius powers of the
//! maximal ideal in a hypersurface ring: inverse systems and links, socles,
//! Koszul-type strands, minimal graded resolutions, matrix factorizations,
//! Pfaffians and Hilbert-Kunz functions.

pub mod artinian;
pub mod error;
pub mod ffla;
pub mod hk;
pub mod invsys;
pub mod koszul;
pub mod linkage;
pub mod pfaffian;
pub mod polymat;
pub mod polyring;
pub mod resolution;

pub use error::{Error, Result};
pub use ffla::{FMatrix, Field, Prime};
pub use hk::HKReport;
pub use invsys::{CompressedReport, Mode};
pub use koszul::{CRank, StrandKind, StrandMatrix};
pub use linkage::{GeneratorProfile, SocleReport};
pub use pfaffian::{SkewMatrix, SkewPolyMatrix};
pub use polymat::PolyMatrix;
pub use polyring::{parse_poly, DividedElem, GradedBasis, HomogPoly, Monomial, SparsePoly};
pub use resolution::{BettiTable, GradedFreeMap, MatrixFactorization, RingTag};
