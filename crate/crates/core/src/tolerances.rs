//! Numerical tolerances shared by every module.
//!
//! The hierarchy is construction < identity checks < reconstruction. Anything
//! that compares floating-point results against a contract reads from here.

/// Hermiticity check before symmetrizing.
pub const HERMITIAN: f64 = 1e-10;
/// Unit-norm check for state construction.
pub const NORM: f64 = 1e-10;
/// Unitarity check for local gates.
pub const UNITARY: f64 = 1e-10;
/// Tiny negatives at or above `-CLAMP` are rounded to zero before square roots.
pub const CLAMP: f64 = 1e-10;
/// Eigenvalues below `-NOT_PSD` are treated as logic faults, not rounding.
pub const NOT_PSD: f64 = 1e-8;
/// Definitional identities (C-Y identity, sharing margins, local invariance).
pub const IDENTITY: f64 = 1e-9;
/// Reconstruction residuals (Schmidt rebuild, eigen reconstruction).
pub const RECONSTRUCTION: f64 = 1e-8;
/// Sum-of-lambdas drift that is silently renormalized.
pub const RENORMALIZE: f64 = 1e-9;
/// Default Y-space membership tolerance.
pub const MEMBERSHIP: f64 = 1e-9;
/// Face classification of boundary (W-class) states absorbs eigensolver noise.
pub const FACE: f64 = 1e-7;
/// Pair-reduction eigenvalues below this are treated as exact zeros when
/// forming `sqrt(rho)` for the Wootters evaluation.
pub const RANK_CUTOFF: f64 = 1e-14;
/// Sum of squared pairwise concurrences allowed above one before erroring.
pub const MONOGAMY_FAULT: f64 = 1e-8;

/// Cyclic Jacobi sweep cap.
pub const MAX_JACOBI_SWEEPS: usize = 50;
/// Largest supported Hilbert-space dimension `M^N`.
pub const MAX_STATE_DIM: usize = 1 << 22;
/// Largest N for exact factorial arithmetic.
pub const MAX_EXACT_N: usize = 20;
