//! Numerical tolerances, collected in one place.
//!
//! The structural tolerances (unitarity, projection identities) sit at the
//! float roundoff scale; the spectral exclusion distances are much coarser so
//! that branch logarithms and arc orderings stay well conditioned on sampled
//! input.

/// Max-norm tolerance for exact matrix identities (`U^*U = I`, `P^2 = P`, ...).
pub const STRUCT: f64 = 1e-12;

/// Rejection distance of `z` from the spectrum of a group element.
pub const SPEC: f64 = 1e-8;

/// Exclusion distance of a `Z`-point from `1` on the circle.
pub const ONE: f64 = 1e-10;

/// Rejection distance from the closed branch ray `R_z`.
pub const RAY: f64 = 1e-10;

/// Default clustering tolerance for eigenvalues on the circle.
pub const CLUSTER: f64 = 1e-8;

/// Tolerance for certifying an eigendecomposition against its input.
pub const EIGEN: f64 = 1e-10;

/// Residual allowed when rounding an analytically integral value.
pub const INTEGRAL: f64 = 1e-9;

/// Default step for central finite differences.
pub const FD_STEP: f64 = 1e-5;

/// Default node count for the numerical contour backend.
pub const CONTOUR_NODES: usize = 4096;
