//! Numerical workbench for constrained two-component equilibrium problems on
//! `R+ x R-` with an external field and an upper constraint, together with the
//! analytic spectral-curve solutions and the high-precision multiple orthogonal
//! polynomials whose rescaled zeros those equilibrium measures describe.
//!
//! Layering, bottom up:
//!
//! * [`hp`] - arbitrary-precision scalars (MPFR-backed), double-exponential
//!   quadrature, polynomial root isolation, and a complex cubic solver.
//! * [`measures`] - piecewise-uniform grid measures, discrete measures,
//!   logarithmic / modified potentials and energies, Cauchy transforms, and
//!   Kolmogorov (CDF) distances.
//! * [`equilibrium`] - the constrained vector equilibrium problem: convex
//!   minimization over discretized measure pairs, variational certification,
//!   constant conversions, and the line <-> half-line transform.
//! * [`curves`] - the built-in algebraic curves (cubics in `H` with
//!   z-dependent coefficients), branch labeling by continuation, branch
//!   points via discriminants, and equilibrium densities from boundary values.
//! * [`mop`] - Nikishin-system data, the multiple orthogonal polynomials
//!   `P_n` / `P_{n,2}` in high precision, rescaling, norm integrals, and the
//!   asymptotic-assumption validators.

pub mod equilibrium;
pub mod error;
pub mod hp;
pub mod measures;
pub mod curves;
pub mod mop;

pub use error::CoreError;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, CoreError>;
