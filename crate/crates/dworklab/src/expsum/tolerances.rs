//! Numerical tolerances for exponential-sum checks.
//!
//! Sums accumulate q^m unit-modulus terms in f64; the per-entry error
//! budget is modeled as 10 * q^m * machine epsilon, and every tolerance
//! below stays far above that budget at desk scale (q <= 61, m <= 2 gives
//! a budget near 8e-12).

/// Relative tolerance for the mean-square identity sum |T|^2 = q^(2m+1).
pub const PARSEVAL_REL_TOL: f64 = 1e-6;

/// Absolute tolerance for entrywise agreement between the DFT-based scan
/// and naive enumeration (q <= 13, m <= 2).
pub const ENTRYWISE_ABS_TOL: f64 = 1e-9;

/// Relative slack allowed on the square-root cancellation upper bound
/// (k-1)^m q^(m/2); sums hitting the bound exactly (Gauss sums) must pass.
pub const WEIL_REL_SLACK: f64 = 1e-9;

/// Absolute tolerance for conjugate symmetry T(q-a, q-b) = conj T(a, b).
pub const CONJ_SYMMETRY_TOL: f64 = 1e-9;

/// Accumulation budget for a single table entry.
pub fn accumulation_tol(q: u64, m: usize) -> f64 {
    10.0 * (q as f64).powi(m as i32) * f64::EPSILON
}
