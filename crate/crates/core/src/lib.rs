//! Classical simulation of Bernstein-Vazirani junta learning.
//!
//! A run of the circuit on a Boolean function `f` measures the string `y`
//! with probability `c_y^2`, where `c_y` is the normalized Walsh-Hadamard
//! coefficient of `(-1)^f`. Every 1 in `y` marks a variable `f` depends on.
//! This crate computes the spectrum exactly, samples runs by Monte Carlo,
//! amplifies high-weight outcomes with Grover iterations (both as a
//! two-dimensional rotation and as a full statevector simulation), and
//! provides closed-form predictions for the product family.

pub mod amplify;
pub mod analytics;
pub mod boolfn;
pub mod bv_sampler;
pub mod cli;
mod error;
pub mod exec;
pub mod spectrum;
pub mod wht;

pub use amplify::{
    amplified_learning_run, amplified_success_probability, grover_statevector,
    iteration_bound_check, make_plan, AmplifierPlan, Iterations, StateVector,
};
pub use analytics::{classical_probe, limit_checks, product_prediction, ProductFamilyPrediction};
pub use boolfn::{parse_anf, BooleanFunction, Provenance, VariableSet};
pub use bv_sampler::{
    learn_variables, query_count, run_bv_once, BvRunRecord, BvSampler, LearningResult,
};
pub use error::{Error, Result};
pub use exec::Exec;
pub use spectrum::{
    outcome_distribution, spectrum_fast, spectrum_naive, OutcomeDistribution, Spectrum,
};
