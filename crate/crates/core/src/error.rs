use alloc::string::String;

use crate::meta_group::Mat2;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix has determinant {0}; expected +1 or -1")]
    NotInvertible(i64),
    #[error("Hilbert symbol argument is zero")]
    ZeroArgument,
    #[error("matrix {matrix} has determinant {found}; expected {expected}")]
    WrongDeterminant { matrix: Mat2, expected: i64, found: i64 },
    #[error("point {re}{im:+}i is not in the {expected} half-plane")]
    WrongHalfPlane { re: f64, im: f64, expected: &'static str },
    #[error("point is too close to the real axis (|Im z| = {imag:e}, minimum {min:e})")]
    NearRealAxis { imag: f64, min: f64 },
    #[error("square root of zero")]
    ZeroSqrt,
    #[error("enumeration depth {requested} exceeds bound {bound}")]
    ResourceBound { requested: usize, bound: usize },
    #[error("q-series needs {needed} terms, more than the cap of {cap}")]
    MaxTermsExceeded { needed: u64, cap: u64 },
    #[error("unsupported weight {0}")]
    UnsupportedWeight(i64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("weight mismatch: {0} vs {1} (given as 2k)")]
    WeightMismatch(i64, i64),
    #[error("representation of the {found} cover used where the {expected} cover is required")]
    GroupMismatch { expected: &'static str, found: &'static str },
    #[error("matrix is singular")]
    Singular,
    #[error("modularity check failed for {generator}: residual {residual:e} exceeds {tolerance:e}")]
    NotModular { generator: String, residual: f64, tolerance: f64 },
    #[error("representation images do not match: residual {0:e}")]
    RepMismatch(f64),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
