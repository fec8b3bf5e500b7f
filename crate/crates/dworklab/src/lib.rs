//! dworklab: a workbench for the arithmetic of higher-degree forms and the
//! exponential-sum constructions built on them.
//!
//! The library covers four layers:
//! - exact polynomial arithmetic over Q and over prime fields ([`poly`],
//!   [`parse`]);
//! - Gröbner-based projective geometry: nonsingularity, Dwork regularity,
//!   bad-prime scans, Harrison centers ([`groebner`], [`analysis`],
//!   [`center`]);
//! - complete and incomplete exponential sums over F_q with Weil–Deligne
//!   certification ([`expsum`]);
//! - the counterexample pipeline for dispersive maximal operators:
//!   parameter optimization, test functions, box sets and certified lower
//!   bounds ([`counterexample`]).

pub mod analysis;
pub mod center;
pub mod counterexample;
pub mod expsum;
pub mod groebner;
pub mod parse;
pub mod poly;
