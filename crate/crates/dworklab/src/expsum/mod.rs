//! Exponential sums over prime fields: complete sums T(a,b;q) with their
//! all-pairs DFT scan and Weil–Deligne certification, good-pair extraction,
//! incomplete-sum ratio reports, and lattice sums with near-rational real
//! phases split into complete sums plus remainder.

mod phase;
mod sums;
mod table;
pub mod tolerances;

pub use phase::{cis, roots_of_unity, DoubleDouble};
pub use sums::{
    complete_sum, decompose_sum, default_alpha2, good_pairs, incomplete_sum_check, k2_threshold,
    real_sum, specialize_leading_form, CompleteSumSplit, GoodPairSet, IncompleteSumReport,
    RationalAngle,
};
pub use table::{
    check_table, load_or_scan, poly_hash, read_cache, scan_all_pairs, write_cache, SumTable,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExpSumError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("mixed moduli between polynomial and point")]
    ModulusMismatch,
    #[error("the zero polynomial has no modulus")]
    ZeroPolynomial,
    #[error("table of {needed} bytes exceeds the memory cap of {cap}")]
    MemoryCap { needed: u64, cap: u64 },
    #[error("mean-square identity violated: relative defect {defect:e}")]
    ParsevalViolated { defect: f64 },
    #[error("good-pair density failed at q={q}: {count} pairs, {required} required (non-Deligne input or q below threshold)")]
    GoodPairDensity { q: u64, count: u64, required: u64 },
    #[error("cutoff {cutoff} out of range at coordinate {index} (q={q})")]
    RangeViolation { index: usize, cutoff: u64, q: u64 },
    #[error("phase polynomial must have integer coefficients")]
    NonIntegerCoefficients,
    #[error("phase value overflowed the integer range")]
    CoefficientOverflow,
    #[error("combined angle denominator {denom} too large")]
    DenominatorTooLarge { denom: u64 },
    #[error("perturbation-range product VN = {vn} exceeds 1")]
    PerturbationTooLarge { vn: f64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
