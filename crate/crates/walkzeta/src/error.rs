//! Error type shared across the crate.

use num_complex::Complex64;

#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("graph is not connected")]
    NotConnected,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("dense eigensolver failed to converge")]
    NumericalFailure,

    #[error("series base must have constant term 1, got {0}")]
    BadSeriesBase(Complex64),

    #[error("matrix rows are not orthonormal (deviation {deviation:.3e})")]
    NotIsometry { deviation: f64 },

    #[error("coin parameter {0} is not unit modulus")]
    NonUnitModulus(Complex64),

    #[error("state vector is not normalized (norm {0})")]
    BadState(f64),

    #[error("cycle length {requested} exceeds the enumeration cap {cap}")]
    LimitExceeded { requested: usize, cap: usize },

    #[error("prime-cycle table is complete through length {have}, order {need} requested")]
    InsufficientEnumeration { have: usize, need: usize },

    #[error("polynomial division left a remainder of size {0:.3e}")]
    InexactDivision(f64),

    #[error(
        "fiber spectrum touches the logarithm branch cut at theta {theta:?}: \
         eigenvalue {eigenvalue}, distance {distance:.3e}"
    )]
    BranchCutViolation {
        theta: Vec<f64>,
        eigenvalue: Complex64,
        distance: f64,
    },

    #[error("quadrature estimate {estimate:.3e} above tolerance {tolerance:.3e} at grid {grid}")]
    QuadratureNotConverged {
        estimate: f64,
        tolerance: f64,
        grid: usize,
    },

    #[error("factored periodic zeta requires first-coin parameters (1, -1), got ({a1}, {b1})")]
    HypothesisViolation { a1: Complex64, b1: Complex64 },

    #[error("|u| = {0:.4} lies outside the certified disc of radius {1}")]
    OutsideCertifiedDisc(f64, f64),

    #[error("non-finite matrix entry at ({0}, {1})")]
    NonFiniteEntry(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
