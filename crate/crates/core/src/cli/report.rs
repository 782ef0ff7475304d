//! JSON report types. Field order is fixed so identical runs serialize to
//! identical bytes.

use serde::Serialize;

use crate::amplify::{AmplifierPlan, GammaEstimate};
use crate::analytics::{LimitReport, ProductFamilyPrediction};
use crate::boolfn::{bit_string, VariableSet};
use crate::bv_sampler::{query_count, LearningResult};

pub const TOOL: &str = "bvjunta";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport<R, P> {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub rng: &'static str,
    pub seed: u64,
    pub function: FunctionSpec,
    pub parameters: Parameters,
    pub results: R,
    pub predictions: P,
    pub timestamps: Timestamps,
}

#[derive(Debug, Clone, Serialize)]
pub struct FunctionSpec {
    pub anf: Option<String>,
    pub table_file: Option<String>,
    pub n: usize,
    pub provenance: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Parameters {
    pub trials: u64,
    pub k: Option<usize>,
    pub iterations: Option<u64>,
    pub auto_iterations: bool,
    pub estimate_gamma_samples: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timestamps {
    pub started_unix_ms: u128,
    pub finished_unix_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct HistogramEntry {
    pub y: String,
    pub count: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VariableHits {
    pub variable: usize,
    pub hits: u64,
}

/// Counts shared by plain and amplified experiments.
#[derive(Debug, Clone, Serialize)]
pub struct Empirical {
    pub trials: u64,
    pub queries_per_trial: u64,
    pub query_count: u64,
    pub failures: u64,
    pub learn_at_least_one_frequency: f64,
    pub union_learned: VariableSet,
    pub per_variable_hits: Vec<VariableHits>,
    pub outcome_histogram: Vec<HistogramEntry>,
}

impl Empirical {
    pub fn from_result(r: &LearningResult) -> Self {
        Empirical {
            trials: r.trials,
            queries_per_trial: r.queries_per_trial,
            query_count: query_count(r),
            failures: r.failures,
            learn_at_least_one_frequency: r.success_frequency(),
            union_learned: r.union_learned,
            per_variable_hits: (1..=r.n)
                .map(|j| VariableHits {
                    variable: j,
                    hits: r.hits(j),
                })
                .collect(),
            outcome_histogram: r
                .outcome_counts
                .iter()
                .map(|(&y, &count)| HistogramEntry {
                    y: bit_string(y, r.n),
                    count,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VariableProbability {
    pub variable: usize,
    pub per_run: f64,
    pub within_trials: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BvPredictions {
    pub true_support: VariableSet,
    pub per_run_failure: f64,
    pub learn_at_least_one_probability: f64,
    pub all_trials_fail_probability: f64,
    pub per_variable: Vec<VariableProbability>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmplifyResults {
    #[serde(flatten)]
    pub empirical: Empirical,
    pub iterations: u64,
    pub success_frequency: f64,
    pub trials_covering_support: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvePoint {
    pub l: u64,
    pub rotation: f64,
    pub statevector: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AmplifyPredictions {
    pub true_support: VariableSet,
    pub plan: AmplifierPlan,
    pub predicted_success: f64,
    pub statevector_success: f64,
    pub curve: Vec<CurvePoint>,
    pub gamma_estimate: Option<GammaEstimate>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PredictTable {
    pub rows: Vec<ProductFamilyPrediction>,
    pub limits: LimitReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub command: &'static str,
    pub function: FunctionSpec,
    pub found: VariableSet,
    pub queries: u64,
    pub true_support: VariableSet,
    pub complete: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorReport {
    pub error: ErrorBody,
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
}
