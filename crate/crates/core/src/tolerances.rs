//! Numerical thresholds shared across modules.

/// Turbulent kinetic energy below which the anisotropy is undefined and a
/// state is treated as isotropic (velocity² units of the problem).
pub const K_FLOOR: f64 = 1e-10;

/// Eigenvalues closer than this (after normalizing the tensor by its largest
/// entry) are treated as a repeated eigenvalue.
pub const EIGEN_TIE: f64 = 1e-12;

/// Strain eigenvalues spread less than this leave the eigenvector
/// permutation undefined.
pub const STRAIN_DEGENERACY: f64 = 1e-12;

/// Largest accepted entry of `|VᵀV − I|` for a caller-supplied frame.
pub const FRAME_TOL: f64 = 1e-8;

/// Barycentric weights down to `-INTERIOR_TOL` still count as inside.
pub const INTERIOR_TOL: f64 = 1e-10;

/// Accepted `|λ1 + λ2 + λ3|` for anisotropy eigenvalues.
pub const TRACE_TOL: f64 = 1e-10;

/// Relaxation factors below this may leave a perturbation incomplete at
/// convergence. Advisory only.
pub const URLX_ADVISORY_FLOOR: f64 = 0.05;
