//! The counterexample pipeline: exponent optimization, test functions,
//! box sets in angle coordinates with measure accounting, the certified
//! lower-bound chain for the lattice sum, numerical evaluation of the
//! evolution operator, and the growth experiment over R = 2^j.

mod boxes;
mod config;
mod growth;
mod instance;
mod operator;
mod params;
mod profile;

pub use boxes::{build_boxes, omega_star, BoxGeometry, BoxSet, OmegaStar};
pub use config::{parse_config, prepare_form, ExperimentConfig, FormSpec};
pub use growth::{growth_experiment, growth_row, summarize_growth, GrowthReport, GrowthRow};
pub use instance::{
    feasible_instance, lower_bound_chain, ChainReport, Constants, Instance, InstanceSpec,
    TestFunction,
};
pub use operator::{evaluate_operator, test_function_magnitude};
pub use params::{solve_parameters, ParamPlan, RelationCheck};
pub use profile::{delta0, gauss_legendre, profile, Profile};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CxError {
    #[error("parameter out of range: {0}")]
    ParameterRange(String),
    #[error("j = {j} is not on the progression (must be divisible by {modulus})")]
    OffProgression { j: u64, modulus: u64 },
    #[error("R/L = {value} is not an integer")]
    NonIntegralRatio { value: f64 },
    #[error("instance violates constraint {name}: {detail}")]
    ConstraintViolated { name: &'static str, detail: String },
    #[error("no usable primes in [{lo}, {hi}]: {detail}")]
    NoPrimes { lo: u64, hi: u64, detail: String },
    #[error("time window is empty: {0}")]
    TimeWindowEmpty(String),
    #[error("quadrature did not converge within the node cap")]
    QuadratureDivergence,
    #[error("form rejected: {0}")]
    FormMismatch(String),
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Analysis(#[from] crate::analysis::AnalysisError),
    #[error(transparent)]
    ExpSum(#[from] crate::expsum::ExpSumError),
    #[error(transparent)]
    Poly(#[from] crate::poly::PolyError),
    #[error(transparent)]
    Parse(#[from] crate::parse::ParseError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
