//! Numerical tolerances shared by every module.

/// Maximum entrywise deviation `|M - M†|` accepted as Hermitian.
pub const HERMITICITY: f64 = 1e-10;

/// Target residual `‖Mv − λv‖` for the Hermitian eigensolver.
pub const EIGEN_RESIDUAL: f64 = 1e-10;

/// Generic floating-point equality (traces, norms, round trips).
pub const EQUALITY: f64 = 1e-12;

/// Radicands, inequality margins and eigenvalues closer than this to zero
/// are treated as exactly zero.
pub const BOUNDARY: f64 = 1e-12;

/// Smallest Choi eigenvalue still accepted as completely positive.
pub const CHOI_FLOOR: f64 = 1e-10;

/// Tolerance for Kraus completeness and action checks.
pub const KRAUS: f64 = 1e-10;

/// Tolerance on the composition law `Φ_t Φ_s = Φ_{t+s}`.
pub const SEMIGROUP: f64 = 1e-10;
