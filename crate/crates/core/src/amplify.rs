//! Grover amplification of outcomes with `k` or more ones.
//!
//! Two independent routes are provided. The rotation picture reduces the
//! dynamics to the plane spanned by the low-weight part `|alpha>` and the
//! high-weight part `|beta>` of the output state, with `sin(theta/2) = sqrt(gamma)`.
//! The statevector route applies the full operator
//! `G = H U_f H (2|0><0| - 1) H U_f H O` to a dense `2^n` register.

use std::f64::consts::PI;
use std::fmt::Write;

use serde::Serialize;

use crate::boolfn::{bit_string, BooleanFunction};
use crate::bv_sampler::{self, BvSampler, LearningResult};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::spectrum::{spectrum_fast, Spectrum};
use crate::wht;

/// Largest register simulated by [`grover_statevector`].
pub const GROVER_MAX_VARS: usize = 20;

/// Iteration count and rotation angle for amplifying weight `>= k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplifierPlan {
    pub k: usize,
    /// Probability mass on outcomes with `k` or more ones.
    pub gamma: f64,
    /// Rotation per application of `G`, in radians.
    pub theta: f64,
    /// `arccos(sqrt(gamma)) / (2 arcsin(sqrt(gamma)))` before rounding.
    pub real_iterations: f64,
    pub optimal_iterations: u64,
}

/// Real-valued optimal iteration count for a good-state mass of `gamma`.
pub fn optimal_iterations_real(gamma: f64) -> f64 {
    let root = gamma.sqrt();
    root.acos() / (2.0 * root.asin())
}

/// Plan for a known good-state mass. `gamma` must lie in `(0, 1]`.
pub fn plan_from_gamma(k: usize, gamma: f64) -> Result<AmplifierPlan> {
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::Domain {
            value: gamma,
            domain: "[0, 1]",
        });
    }
    let gamma = gamma.min(1.0);
    if gamma == 0.0 {
        return Err(Error::Unamplifiable { k });
    }
    let real_iterations = optimal_iterations_real(gamma);
    Ok(AmplifierPlan {
        k,
        gamma,
        theta: 2.0 * gamma.sqrt().asin(),
        real_iterations,
        // f64::round rounds half away from zero.
        optimal_iterations: real_iterations.round() as u64,
    })
}

pub fn make_plan(s: &Spectrum, k: usize) -> Result<AmplifierPlan> {
    if k > s.n() {
        return Err(Error::ThresholdOutOfRange { k, n: s.n() });
    }
    let gamma = s
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(y, _)| y.count_ones() as usize >= k)
        .map(|(_, c)| c * c)
        .sum();
    plan_from_gamma(k, gamma)
}

/// Amplitudes on `|alpha>` and `|beta>` after some number of iterations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoDState {
    pub cos_component: f64,
    pub sin_component: f64,
}

pub fn two_d_state(plan: &AmplifierPlan, l: u64) -> TwoDState {
    let angle = (2 * l + 1) as f64 * plan.theta / 2.0;
    TwoDState {
        cos_component: angle.cos(),
        sin_component: angle.sin(),
    }
}

/// Probability of measuring weight `>= k` after `l` iterations: `sin^2((2l+1) theta / 2)`.
pub fn amplified_success_probability(plan: &AmplifierPlan, l: u64) -> f64 {
    two_d_state(plan, l).sin_component.powi(2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationBound {
    pub exact: f64,
    /// Leading term of the expansion about `gamma = 0`.
    pub bound: f64,
}

impl IterationBound {
    pub fn relative_gap(&self) -> f64 {
        (self.bound - self.exact) / self.bound
    }
}

/// Exact `R(gamma)` next to its upper bound `pi / (4 sqrt(gamma))`.
pub fn iteration_bound_check(gamma: f64) -> Result<IterationBound> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Domain {
            value: gamma,
            domain: "(0, 1)",
        });
    }
    Ok(IterationBound {
        exact: optimal_iterations_real(gamma),
        bound: PI / (4.0 * gamma.sqrt()),
    })
}

/// Dense real amplitudes of an `n`-qubit register.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amplitudes: Vec<f64>,
}

impl StateVector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    /// Measurement probability of outcomes with `k` or more ones.
    pub fn weight_at_least(&self, k: usize) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(y, _)| y.count_ones() as usize >= k)
            .map(|(_, a)| a * a)
            .sum()
    }

    /// CSV with columns `y,amplitude,probability,popcount`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("y,amplitude,probability,popcount\n");
        for (y, a) in self.amplitudes.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{}",
                bit_string(y, self.n),
                a,
                a * a,
                y.count_ones()
            )
            .unwrap();
        }
        out
    }
}

/// Register operations used to build `G`.
struct Register<'a> {
    amplitudes: Vec<f64>,
    phases: &'a [f64],
    k: usize,
    exec: Exec,
}

impl Register<'_> {
    fn hadamard_all(&mut self) {
        wht::walsh_hadamard(&mut self.amplitudes, self.exec);
        let scale = (self.amplitudes.len() as f64).sqrt().recip();
        exec::for_each_indexed(self.exec, &mut self.amplitudes, |_, a| *a *= scale);
    }

    /// Phase oracle `(-1)^f(x)`; the `|->` ancilla of the controlled-NOT form is absorbed.
    fn oracle(&mut self) {
        let phases = self.phases;
        exec::for_each_indexed(self.exec, &mut self.amplitudes, |x, a| *a *= phases[x]);
    }

    /// `O`: phase -1 on every component with `k` or more ones.
    fn mark_heavy(&mut self) {
        let k = self.k;
        exec::for_each_indexed(self.exec, &mut self.amplitudes, |y, a| {
            if y.count_ones() as usize >= k {
                *a = -*a;
            }
        });
    }

    /// `2|0><0| - 1`.
    fn reflect_zero(&mut self) {
        exec::for_each_indexed(self.exec, &mut self.amplitudes, |y, a| {
            if y != 0 {
                *a = -*a;
            }
        });
    }

    /// `H U_f H`, which maps `|0>` to the Bernstein-Vazirani output state.
    fn bv_block(&mut self) {
        self.hadamard_all();
        self.oracle();
        self.hadamard_all();
    }

    fn grover_step(&mut self) {
        self.mark_heavy();
        self.bv_block();
        self.reflect_zero();
        self.bv_block();
    }
}

/// State after `l` applications of `G` to the output state of the circuit.
pub fn grover_statevector(f: &BooleanFunction, k: usize, l: u64) -> Result<StateVector> {
    grover_statevector_with(f, k, l, Exec::default())
}

pub fn grover_statevector_with(
    f: &BooleanFunction,
    k: usize,
    l: u64,
    exec: Exec,
) -> Result<StateVector> {
    let n = f.n();
    if n > GROVER_MAX_VARS {
        return Err(Error::SizeExceeded {
            n,
            limit: GROVER_MAX_VARS,
        });
    }
    if k > n {
        return Err(Error::ThresholdOutOfRange { k, n });
    }
    let table = f.table();
    let mut phases = vec![0.0; table.len()];
    exec::for_each_indexed(exec, &mut phases, |x, p| {
        *p = if table[x] { -1.0 } else { 1.0 }
    });

    let mut amplitudes = vec![0.0; table.len()];
    amplitudes[0] = 1.0;
    let mut reg = Register {
        amplitudes,
        phases: &phases,
        k,
        exec,
    };
    reg.bv_block();
    for _ in 0..l {
        reg.grover_step();
    }
    Ok(StateVector {
        n,
        amplitudes: reg.amplitudes,
    })
}

/// Weight-`>= k` probability of the simulated register after each of
/// `0..=l_max` iterations.
pub fn success_curve(f: &BooleanFunction, k: usize, l_max: u64, exec: Exec) -> Result<Vec<f64>> {
    let mut state = grover_statevector_with(f, k, 0, exec)?;
    let table = f.table();
    let phases: Vec<f64> = table.iter().map(|&b| if b { -1.0 } else { 1.0 }).collect();
    let mut curve = vec![state.weight_at_least(k)];
    let mut reg = Register {
        amplitudes: std::mem::take(&mut state.amplitudes),
        phases: &phases,
        k,
        exec,
    };
    for _ in 0..l_max {
        reg.grover_step();
        curve.push(
            reg.amplitudes
                .iter()
                .enumerate()
                .filter(|(y, _)| y.count_ones() as usize >= k)
                .map(|(_, a)| a * a)
                .sum(),
        );
    }
    Ok(curve)
}

/// Norm of the part of `state` outside the plane spanned by the low- and
/// high-weight components of the initial spectrum.
pub fn plane_residual(state: &StateVector, initial: &Spectrum, k: usize) -> f64 {
    assert_eq!(state.n, initial.n(), "state and spectrum sizes differ");
    let heavy = |y: usize| y.count_ones() as usize >= k;
    let c = initial.coeffs();
    let (mut low_norm, mut high_norm) = (0.0, 0.0);
    for (y, v) in c.iter().enumerate() {
        if heavy(y) {
            high_norm += v * v;
        } else {
            low_norm += v * v;
        }
    }
    let (low_norm, high_norm) = (f64::sqrt(low_norm), f64::sqrt(high_norm));
    let (mut low_dot, mut high_dot) = (0.0, 0.0);
    for (y, (s, v)) in state.amplitudes.iter().zip(c).enumerate() {
        if heavy(y) {
            high_dot += s * v;
        } else {
            low_dot += s * v;
        }
    }
    let low_coef = if low_norm > 0.0 {
        low_dot / low_norm
    } else {
        0.0
    };
    let high_coef = if high_norm > 0.0 {
        high_dot / high_norm
    } else {
        0.0
    };
    state
        .amplitudes
        .iter()
        .zip(c)
        .enumerate()
        .map(|(y, (s, v))| {
            let projected = if heavy(y) {
                if high_norm > 0.0 {
                    high_coef * v / high_norm
                } else {
                    0.0
                }
            } else if low_norm > 0.0 {
                low_coef * v / low_norm
            } else {
                0.0
            };
            (s - projected).powi(2)
        })
        .sum::<f64>()
        .sqrt()
}

/// How many Grover iterations to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Iterations {
    /// The integer closest to `R(gamma)`.
    Auto,
    Fixed(u64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmplifiedRun {
    pub plan: AmplifierPlan,
    pub iterations: u64,
    /// `sin^2((2l+1) theta / 2)` at the executed iteration count.
    pub predicted_success: f64,
    /// Weight-`>= k` mass of the simulated statevector.
    pub statevector_success: f64,
    pub result: LearningResult,
}

/// Amplified runs on `f`: each trial prepares the output state, applies `G`
/// `l` times and measures. A trial costs `1 + 2l` oracle queries.
pub fn amplified_learning_run(
    f: &BooleanFunction,
    k: usize,
    iterations: Iterations,
    trials: u64,
    seed: u64,
) -> Result<AmplifiedRun> {
    amplified_learning_run_with(f, k, iterations, trials, seed, Exec::default())
}

pub fn amplified_learning_run_with(
    f: &BooleanFunction,
    k: usize,
    iterations: Iterations,
    trials: u64,
    seed: u64,
    exec: Exec,
) -> Result<AmplifiedRun> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let plan = make_plan(&spectrum_fast(f)?, k)?;
    let l = match iterations {
        Iterations::Auto => plan.optimal_iterations,
        Iterations::Fixed(l) => l,
    };
    let state = grover_statevector_with(f, k, l, exec)?;
    let sampler = BvSampler::from_amplitudes(f.n(), state.amplitudes());
    let result = bv_sampler::run_trials(&sampler, trials, seed, 1 + 2 * l, exec)?;
    Ok(AmplifiedRun {
        plan,
        iterations: l,
        predicted_success: amplified_success_probability(&plan, l),
        statevector_success: state.weight_at_least(k),
        result,
    })
}

/// Naive estimate of `gamma` from unamplified runs, for functions of unknown form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaEstimate {
    pub k: usize,
    pub samples: u64,
    pub hits: u64,
    pub estimate: f64,
    /// One oracle query per sample.
    pub queries: u64,
}

pub fn estimate_gamma(
    f: &BooleanFunction,
    k: usize,
    samples: u64,
    seed: u64,
) -> Result<GammaEstimate> {
    if k > f.n() {
        return Err(Error::ThresholdOutOfRange { k, n: f.n() });
    }
    let result = BvSampler::new(f)?.learn(samples, seed, Exec::default())?;
    let hits = result.weight_at_least(k);
    Ok(GammaEstimate {
        k,
        samples,
        hits,
        estimate: hits as f64 / samples as f64,
        queries: bv_sampler::query_count(&result),
    })
}
