//! Numerical laboratory for entropic limits on quantum broadcasting and the
//! small-hbar classical limit.
//!
//! The crate is organized around five subject areas:
//!
//! * [`state`] — validated density matrices, tensor composition, partial
//!   trace, support decompositions, and operator logarithms on support.
//! * [`entropy`] — quantum relative entropy with extended (infinite) values,
//!   classical Kullback-Leibler divergences, and the invariance /
//!   monotonicity / equality-condition residuals built on them.
//! * [`broadcast`] — the two-source broadcast process (source, target,
//!   machine), classical copier unitaries, a derivative-free optimizer over
//!   process unitaries, and entropy-gap certificates.
//! * [`phase_space`] — coherent states on a truncated Fock space, states
//!   assembled from phase-space quasi-distributions, trace-moment versus
//!   grid-moment comparisons over an hbar schedule, and the cyclic
//!   block-banded matrix governing the Gaussian moment kernel.
//! * [`dynamics`] — classical and quantum evolution kernels for
//!   characteristic functions, grid evolution, Fock-space Hamiltonians, exact
//!   von Neumann steps, and quantum/classical correspondence reports.

pub mod broadcast;
pub mod dynamics;
pub mod entropy;
pub mod error;
pub mod linalg;
pub mod phase_space;
pub mod random;
pub mod serialize;
pub mod state;
pub mod tol;

pub use error::{Error, Result};
