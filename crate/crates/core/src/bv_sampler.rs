//! Repeated Bernstein-Vazirani runs, simulated by sampling the output
//! distribution directly.
//!
//! Trials are grouped into blocks of [`TRIAL_BLOCK`]. Block `b` draws from a
//! ChaCha8 generator seeded with the experiment seed on stream `b`, so a
//! result depends only on `(seed, trials)` and never on the thread count.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::boolfn::{var_mask, BooleanFunction, VariableSet};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::spectrum::{outcome_distribution, spectrum_fast, OutcomeDistribution};

/// Trials drawn from one generator stream.
pub const TRIAL_BLOCK: u64 = 1024;

/// Identifier recorded in reports so runs can be reproduced elsewhere.
pub const RNG_ALGORITHM: &str = "chacha8 (rand_chacha 0.3, seed_from_u64, stream = trial / 1024)";

/// Generator for trial block `block` of an experiment seeded with `seed`.
pub fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

/// Inverse-CDF sampler over the `2^n` outcomes.
#[derive(Debug, Clone)]
pub struct BvSampler {
    n: usize,
    cdf: Vec<f64>,
    last_support: usize,
}

impl BvSampler {
    /// Sampler for the unamplified circuit on `f`.
    pub fn new(f: &BooleanFunction) -> Result<Self> {
        Ok(Self::from_distribution(&outcome_distribution(
            &spectrum_fast(f)?,
        )))
    }

    pub fn from_distribution(dist: &OutcomeDistribution) -> Self {
        Self::from_weights(dist.n(), dist.probs().iter().copied())
    }

    /// Sampler over `|amplitude|^2` of a state vector.
    pub fn from_amplitudes(n: usize, amplitudes: &[f64]) -> Self {
        Self::from_weights(n, amplitudes.iter().map(|a| a * a))
    }

    fn from_weights(n: usize, weights: impl Iterator<Item = f64>) -> Self {
        let mut acc = 0.0;
        let mut last_support = 0;
        let cdf: Vec<f64> = weights
            .enumerate()
            .map(|(y, w)| {
                if w > 0.0 {
                    last_support = y;
                }
                acc += w;
                acc
            })
            .collect();
        assert_eq!(cdf.len(), 1 << n, "weight vector has the wrong length");
        BvSampler {
            n,
            cdf,
            last_support,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Draws one outcome. Outcomes of probability zero are never returned.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cdf.last().unwrap();
        let u = rng.gen::<f64>() * total;
        self.cdf.partition_point(|&c| c <= u).min(self.last_support)
    }

    /// Runs `trials` independent measurements.
    pub fn learn(&self, trials: u64, seed: u64, exec: Exec) -> Result<LearningResult> {
        run_trials(self, trials, seed, 1, exec)
    }

    /// Visits every run record of an experiment in trial order.
    pub fn for_each_record(&self, trials: u64, seed: u64, mut visit: impl FnMut(&BvRunRecord)) {
        let blocks = trials.div_ceil(TRIAL_BLOCK);
        for block in 0..blocks {
            let mut rng = block_rng(seed, block);
            let end = ((block + 1) * TRIAL_BLOCK).min(trials);
            for trial in block * TRIAL_BLOCK..end {
                visit(&run_bv_once(self, trial, &mut rng));
            }
        }
    }
}

/// One measurement of the output register.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BvRunRecord {
    pub trial_index: u64,
    pub outcome: usize,
    /// Positions of the ones in `outcome`.
    pub learned: VariableSet,
}

/// One oracle query: draw `y` with probability `c_y^2`.
pub fn run_bv_once<R: Rng + ?Sized>(
    sampler: &BvSampler,
    trial_index: u64,
    rng: &mut R,
) -> BvRunRecord {
    let outcome = sampler.sample(rng);
    BvRunRecord {
        trial_index,
        outcome,
        learned: VariableSet::from_outcome(outcome, sampler.n),
    }
}

/// Aggregate of many runs. Merging is commutative and associative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearningResult {
    pub n: usize,
    pub trials: u64,
    /// Oracle queries spent per trial: 1 for a plain run, `1 + 2l` when amplified.
    pub queries_per_trial: u64,
    pub union_learned: VariableSet,
    /// Entry `j - 1` counts the runs whose outcome had a 1 at variable `j`.
    pub per_variable_hits: Vec<u64>,
    /// Runs that returned the all-zero string.
    pub failures: u64,
    pub outcome_counts: BTreeMap<usize, u64>,
}

impl LearningResult {
    pub fn empty(n: usize, queries_per_trial: u64) -> Self {
        LearningResult {
            n,
            trials: 0,
            queries_per_trial,
            union_learned: VariableSet::new(),
            per_variable_hits: vec![0; n],
            failures: 0,
            outcome_counts: BTreeMap::new(),
        }
    }

    pub fn record(&mut self, run: &BvRunRecord) {
        self.trials += 1;
        self.union_learned = self.union_learned.union(run.learned);
        for j in run.learned.iter() {
            self.per_variable_hits[j - 1] += 1;
        }
        if run.outcome == 0 {
            self.failures += 1;
        }
        *self.outcome_counts.entry(run.outcome).or_insert(0) += 1;
    }

    pub fn merge(mut self, other: LearningResult) -> LearningResult {
        assert_eq!(self.n, other.n, "merging results for different n");
        assert_eq!(self.queries_per_trial, other.queries_per_trial);
        self.trials += other.trials;
        self.union_learned = self.union_learned.union(other.union_learned);
        for (a, b) in self
            .per_variable_hits
            .iter_mut()
            .zip(&other.per_variable_hits)
        {
            *a += b;
        }
        self.failures += other.failures;
        for (y, c) in other.outcome_counts {
            *self.outcome_counts.entry(y).or_insert(0) += c;
        }
        self
    }

    /// Fraction of runs that revealed at least one variable.
    pub fn success_frequency(&self) -> f64 {
        1.0 - self.failures as f64 / self.trials as f64
    }

    /// Number of runs whose outcome had `k` or more ones.
    pub fn weight_at_least(&self, k: usize) -> u64 {
        self.outcome_counts
            .iter()
            .filter(|(y, _)| y.count_ones() as usize >= k)
            .map(|(_, c)| c)
            .sum()
    }

    /// Runs whose outcome contained every variable in `target`.
    pub fn covering(&self, target: VariableSet) -> u64 {
        let mask = target.to_mask(self.n);
        self.outcome_counts
            .iter()
            .filter(|(y, _)| *y & mask == mask)
            .map(|(_, c)| c)
            .sum()
    }

    pub fn hits(&self, j: usize) -> u64 {
        debug_assert!(var_mask(self.n, j) > 0);
        self.per_variable_hits[j - 1]
    }
}

/// Total oracle queries spent by an experiment.
pub fn query_count(result: &LearningResult) -> u64 {
    result.trials * result.queries_per_trial
}

/// `trials` unamplified runs on `f`, deterministic in `seed`.
pub fn learn_variables(f: &BooleanFunction, trials: u64, seed: u64) -> Result<LearningResult> {
    BvSampler::new(f)?.learn(trials, seed, Exec::default())
}

pub(crate) fn run_trials(
    sampler: &BvSampler,
    trials: u64,
    seed: u64,
    queries_per_trial: u64,
    exec: Exec,
) -> Result<LearningResult> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let n = sampler.n;
    let blocks = trials.div_ceil(TRIAL_BLOCK) as usize;
    let result = exec::map_reduce(
        exec,
        blocks,
        LearningResult::empty(n, queries_per_trial),
        |block| {
            let block = block as u64;
            let mut rng = block_rng(seed, block);
            let mut partial = LearningResult::empty(n, queries_per_trial);
            let end = ((block + 1) * TRIAL_BLOCK).min(trials);
            for trial in block * TRIAL_BLOCK..end {
                partial.record(&run_bv_once(sampler, trial, &mut rng));
            }
            partial
        },
        LearningResult::merge,
    );
    Ok(result)
}
