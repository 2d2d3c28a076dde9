use thiserror::Error;

/// Crate-wide error type. Every fallible operation reports one of these
/// variants with enough context to diagnose the offending input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |A - A^dag| = {deviation:.3e} exceeds tol {tol:.3e}")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("trace deviates from one by {deviation:.3e} (tol {tol:.3e})")]
    NotUnitTrace { deviation: f64, tol: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix is not unitary: max |U^dag U - I| = {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("eigensolver failed to converge")]
    EigensolverFailure,

    #[error("subsystem dims {dims:?} are inconsistent with matrix size {size}")]
    BadShape { dims: Vec<usize>, size: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("subsystem keep set is empty")]
    EmptyKeepSet,

    #[error("subsystem index {index} out of range for {count} subsystems")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("probability at index {index} is negative: {value:.3e}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum} instead of one")]
    NotNormalized { sum: f64 },

    #[error("relative entropy is infinite where a finite value is required")]
    InfiniteEntropy,

    #[error("computed entropy {value:.3e} is negative beyond the rounding allowance")]
    NegativeEntropy { value: f64 },

    #[error("grids differ in shape or extent")]
    GridMismatch,

    #[error("conjugate symmetry broken: deviation {deviation:.3e} exceeds tol {tol:.3e}")]
    ConjugateSymmetryBroken { deviation: f64, tol: f64 },

    #[error("parameter vector has length {actual}, expected {expected}")]
    BadParamLength { expected: usize, actual: usize },

    #[error("invalid dimension: {reason}")]
    BadDimension { reason: String },

    #[error("mixture weight {lambda} is outside the open interval (0, 1)")]
    BadMixtureWeight { lambda: f64 },

    #[error("Fock truncation tail {tail:.3e} exceeds tolerance {tol:.3e} at dim {dim}")]
    TruncationInsufficient { tail: f64, tol: f64, dim: usize },

    #[error("quadrature trace drift {drift:.3e} exceeds the allowed {limit:.3e}")]
    GridTooCoarse { drift: f64, limit: f64 },

    #[error("moment order must be at least 2, got {n}")]
    BadMomentOrder { n: usize },

    #[error("hbar schedule must be positive and strictly decreasing")]
    BadSchedule,

    #[error("matrix family size must be at least 2, got {n}")]
    BadSize { n: usize },

    #[error("analytic eigensystem failed verification: residual {residual:.3e} (tol {tol:.3e})")]
    VerificationFailure { residual: f64, tol: f64 },

    #[error("evolution step {step} grew by factor {growth:.3e}; reduce dt")]
    UnstableStep { step: usize, growth: f64 },

    #[error("malformed matrix payload: {reason}")]
    BadPayload { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
