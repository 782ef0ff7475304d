//! Closed-form predictions for the `m`-fold product `x_1 x_2 ... x_m`, their
//! large-`m` limits, and the classical flip-probing baseline.

use std::f64::consts::PI;
use std::fmt::Write;

use serde::Serialize;

use crate::amplify::{amplified_success_probability, plan_from_gamma};
use crate::boolfn::{var_mask, BooleanFunction, VariableSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductFamilyPrediction {
    pub m: u32,
    /// Overlap with the all-zero outcome, `1 - 2^(1-m)`.
    pub c0: f64,
    /// Magnitude of every other overlap supported on the product's variables.
    pub c_supported_magnitude: f64,
    /// Chance that one plain run reveals nothing, `c0^2`.
    pub per_run_failure: f64,
    /// Good-state mass for `k = m`, `2^(2-2m)`.
    pub gamma_km: f64,
    /// Plain runs matched to the amplified query budget: nearest integer to `pi 2^(m-2)`.
    pub rounds_2r: u64,
    /// `(1 - 2^(1-m))^(pi 2^(m-1))`, the chance that every plain run fails.
    pub p_fail_all: f64,
    /// `(1 - 2^(1-m))^(pi 2^(m-2))`, the chance a given variable is never seen.
    pub p_not_learn_one: f64,
    /// Grover iterations at `k = m`, nearest integer to `R(gamma_km)`.
    pub amplified_iterations: u64,
    /// Chance that one amplified run reveals every variable.
    pub amplified_success: f64,
}

impl ProductFamilyPrediction {
    /// `c0^2 + (2^m - 1) magnitude^2`; equals 1.
    pub fn parseval_sum(&self) -> f64 {
        self.c0 * self.c0
            + ((1u64 << self.m) - 1) as f64
                * self.c_supported_magnitude
                * self.c_supported_magnitude
    }
}

pub fn product_prediction(m: u32) -> Result<ProductFamilyPrediction> {
    if !(1..=60).contains(&m) {
        return Err(Error::Domain {
            value: f64::from(m),
            domain: "1..=60",
        });
    }
    let magnitude = 2f64.powi(1 - m as i32);
    let c0 = 1.0 - magnitude;
    let gamma = 2f64.powi(2 - 2 * m as i32);
    let half_budget = PI * 2f64.powi(m as i32 - 2);
    let plan = plan_from_gamma(m as usize, gamma)?;
    Ok(ProductFamilyPrediction {
        m,
        c0,
        c_supported_magnitude: magnitude,
        per_run_failure: c0 * c0,
        gamma_km: gamma,
        rounds_2r: half_budget.round() as u64,
        p_fail_all: c0.powf(2.0 * half_budget),
        p_not_learn_one: c0.powf(half_budget),
        amplified_iterations: plan.optimal_iterations,
        amplified_success: amplified_success_probability(&plan, plan.optimal_iterations),
    })
}

/// Predictions for every `m` in `range`, as CSV.
pub fn prediction_table_csv(range: impl IntoIterator<Item = u32>) -> Result<String> {
    let mut out = String::from(
        "m,c0,c_supported_magnitude,per_run_failure,gamma_km,rounds_2r,p_fail_all,p_not_learn_one,amplified_iterations,amplified_success\n",
    );
    for m in range {
        let p = product_prediction(m)?;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            p.m,
            p.c0,
            p.c_supported_magnitude,
            p.per_run_failure,
            p.gamma_km,
            p.rounds_2r,
            p.p_fail_all,
            p.p_not_learn_one,
            p.amplified_iterations,
            p.amplified_success
        )
        .unwrap();
    }
    Ok(out)
}

pub const LIMIT_FAIL_ALL: f64 = 0.043_213_918_263_772_25; // e^-pi
pub const LIMIT_NOT_LEARN_ONE: f64 = 0.207_879_576_350_761_9; // e^-pi/2

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitRow {
    pub m: u32,
    pub p_fail_all: f64,
    pub p_not_learn_one: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitReport {
    pub rows: Vec<LimitRow>,
    /// `|p_fail_all(30) - e^-pi| < 0.01`.
    pub fail_all_converged: bool,
    /// `|p_not_learn_one(30) - e^(-pi/2)| < 0.01`.
    pub not_learn_one_converged: bool,
    /// Both sequences increase with `m`.
    pub monotone: bool,
}

/// Tabulates both failure probabilities for `m = 2..=30`.
pub fn limit_checks() -> LimitReport {
    let rows: Vec<LimitRow> = (2..=30)
        .map(|m| {
            let p = product_prediction(m).expect("m in range");
            LimitRow {
                m,
                p_fail_all: p.p_fail_all,
                p_not_learn_one: p.p_not_learn_one,
            }
        })
        .collect();
    let last = rows.last().unwrap();
    let monotone = rows
        .windows(2)
        .all(|w| w[0].p_fail_all < w[1].p_fail_all && w[0].p_not_learn_one < w[1].p_not_learn_one);
    LimitReport {
        fail_all_converged: (last.p_fail_all - LIMIT_FAIL_ALL).abs() < 1e-2,
        not_learn_one_converged: (last.p_not_learn_one - LIMIT_NOT_LEARN_ONE).abs() < 1e-2,
        monotone,
        rows,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProbeResult {
    pub found: VariableSet,
    pub queries: u64,
}

/// Classical baseline: evaluate at the all-ones input, then flip each
/// variable once and keep those whose flip changes the value. Sound, but it
/// can miss variables of functions that are not monotone.
pub fn classical_probe(f: &BooleanFunction) -> ProbeResult {
    let n = f.n();
    let all_ones = (1usize << n) - 1;
    let base = f.evaluate(all_ones);
    let found = (1..=n)
        .filter(|&j| f.evaluate(all_ones ^ var_mask(n, j)) != base)
        .collect();
    ProbeResult {
        found,
        queries: n as u64 + 1,
    }
}
