//! Numerical tolerances used across the crate.
//!
//! Every tolerance that a result depends on is named here, with the rationale
//! for its magnitude, so the numbers appear exactly once.

/// Default validation tolerance for state and operator constructors:
/// Hermiticity deviation, trace deviation from one, and the allowance for
/// slightly negative eigenvalues in positivity checks. Inputs produced by
/// double-precision arithmetic on well-conditioned data sit orders of
/// magnitude below this.
pub const VALIDATION: f64 = 1e-9;

/// Relative scale for the default support cutoff: eigenvalues below
/// `SUPPORT_CUTOFF_SCALE * lambda_max` are classified as kernel. Relative
/// rather than absolute so that uniformly scaled spectra classify the same
/// way.
pub const SUPPORT_CUTOFF_SCALE: f64 = 1e-10;

/// Relative-entropy values in `[-ENTROPY_NEG_CLAMP, 0)` are rounded to zero;
/// anything more negative indicates an internal inconsistency and is
/// reported as an error rather than silently clamped.
pub const ENTROPY_NEG_CLAMP: f64 = 1e-9;

/// Quadrature normalization defect allowed when accepting a phase-space
/// distribution: the trapezoid sum of the density must be within this of one.
pub const DENSITY_NORMALIZATION: f64 = 1e-6;

/// Fock-space truncation: the probability mass a coherent state may lose to
/// truncation before construction is rejected.
pub const TRUNCATION_TAIL: f64 = 1e-8;

/// Quadrature trace drift allowed when assembling a state from a phase-space
/// distribution; larger drift means the grid under-resolves the coherent
/// overlap structure and the construction is rejected rather than silently
/// renormalized.
pub const TRACE_DRIFT_MAX: f64 = 1e-4;

/// Hermiticity residual allowed for Fock-space operators assembled by double
/// quadrature before symmetrization.
pub const OPERATOR_HERMITICITY: f64 = 1e-8;

/// Conjugate-symmetry residual allowed for characteristic functions on
/// origin-symmetric grids.
pub const CONJUGATE_SYMMETRY: f64 = 1e-9;

/// Verification tolerance for the analytic eigensystem of the cyclic
/// block-banded moment matrix: `||V e - mu e||` per eigenpair.
pub const V_EIGEN_VERIFY: f64 = 1e-10;

/// Growth factor per evolution step beyond which the integrator reports a
/// stability failure instead of returning divergent data.
pub const STEP_GROWTH_LIMIT: f64 = 1e3;
