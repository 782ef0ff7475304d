//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 for usage or parse errors, 2 for errors in the
//! computation's domain (unamplifiable threshold, size limits).

pub mod report;

use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::amplify::{self, Iterations};
use crate::analytics;
use crate::boolfn::{self, BooleanFunction, Provenance, DEFAULT_MAX_VARS};
use crate::bv_sampler::{BvSampler, RNG_ALGORITHM};
use crate::error::Error;
use crate::exec::Exec;
use crate::spectrum::{outcome_distribution, spectrum_fast};
use report::*;

/// Above this many variables a command needs `--force-large`.
pub const LARGE_N: usize = 20;

/// Environment variable read for the default worker thread count.
pub const THREADS_ENV: &str = "BVJUNTA_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "bvjunta",
    version,
    about = "Learn the relevant variables of a Boolean function with simulated Bernstein-Vazirani runs"
)]
pub struct Cli {
    /// Worker threads for the parallel kernels (0 = rayon default).
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact spectrum c_y and outcome probabilities.
    Spectrum(SpectrumArgs),
    /// Repeated unamplified runs.
    Bv(BvArgs),
    /// Grover-amplified runs for outcomes with k or more ones.
    Amplify(AmplifyArgs),
    /// Closed-form predictions for the product family x1*...*xm.
    Predict(PredictArgs),
    /// Classical flip-probing baseline.
    Probe(ProbeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct FunctionArgs {
    /// Algebraic normal form, e.g. "x1*x2 + x3".
    #[arg(long, required_unless_present = "table", conflicts_with = "table")]
    pub anf: Option<String>,
    /// Truth-table file: "n=<int>" then 2^n characters 0/1.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Variable count; required with --anf.
    #[arg(long)]
    pub n: Option<usize>,
    /// Allow more than 20 variables.
    #[arg(long)]
    pub force_large: bool,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BvArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// json: full report; csv: outcome histogram.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct AmplifyArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Amplify outcomes with at least this many ones.
    #[arg(long)]
    pub k: usize,
    #[arg(long, required_unless_present = "auto", conflicts_with = "auto")]
    pub iterations: Option<u64>,
    /// Use the integer closest to R(gamma).
    #[arg(long)]
    pub auto: bool,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also estimate gamma from this many unamplified runs (one query each).
    #[arg(long)]
    pub estimate_gamma: Option<u64>,
    /// json: full report; csv: final statevector dump.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    #[arg(long, default_value_t = 2)]
    pub m_min: u32,
    #[arg(long, default_value_t = 30)]
    pub m_max: u32,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[command(flatten)]
    pub function: FunctionArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
        }
    }

    /// Machine-readable form, printed on standard output for domain errors.
    pub fn to_json(&self) -> String {
        let (kind, message) = match self {
            CliError::Usage(m) => ("usage", m.clone()),
            CliError::Domain(e) => (
                match e {
                    Error::Unamplifiable { .. } => "unamplifiable",
                    Error::SizeExceeded { .. } => "size_exceeded",
                    _ => "domain",
                },
                e.to_string(),
            ),
        };
        serde_json::to_string_pretty(&ErrorReport {
            error: ErrorBody { kind, message },
        })
        .unwrap()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_domain() {
            CliError::Domain(e)
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

/// Rendered command output and where it goes.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub path: Option<PathBuf>,
}

fn now_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_millis())
        .unwrap_or(0)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

impl FunctionArgs {
    fn load(&self) -> Result<(BooleanFunction, FunctionSpec), CliError> {
        let f = match (&self.anf, &self.table) {
            (Some(text), None) => {
                let n = self
                    .n
                    .ok_or_else(|| CliError::Usage("--n is required with --anf".into()))?;
                self.guard(n)?;
                boolfn::parse_anf(text, n)?
            }
            (None, Some(path)) => {
                let f = boolfn::read_table_file(path, DEFAULT_MAX_VARS)?;
                if let Some(n) = self.n {
                    if n != f.n() {
                        return Err(CliError::Usage(format!(
                            "--n {n} does not match n={} in {}",
                            f.n(),
                            path.display()
                        )));
                    }
                }
                self.guard(f.n())?;
                f
            }
            _ => {
                return Err(CliError::Usage(
                    "give exactly one of --anf or --table".into(),
                ))
            }
        };
        let provenance = match f.provenance() {
            Provenance::Raw => "raw",
            Provenance::Linear(_) => "linear",
            Provenance::Product(_) => "product",
            Provenance::Anf(_) => "anf",
        };
        let spec = FunctionSpec {
            anf: self.anf.clone(),
            table_file: self.table.as_ref().map(|p| p.display().to_string()),
            n: f.n(),
            provenance: provenance.into(),
        };
        Ok((f, spec))
    }

    fn guard(&self, n: usize) -> Result<(), CliError> {
        if n > LARGE_N && !self.force_large {
            return Err(CliError::Domain(Error::SizeExceeded { n, limit: LARGE_N }));
        }
        Ok(())
    }
}

/// Runs one parsed command and renders its output.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Bv(a) => cmd_bv(a),
        Command::Amplify(a) => cmd_amplify(a),
        Command::Predict(a) => cmd_predict(a),
        Command::Probe(a) => cmd_probe(a),
    }
}

#[derive(Serialize)]
struct SpectrumRow {
    y: String,
    c_y: f64,
    p_y: f64,
}

#[derive(Serialize)]
struct SpectrumJson {
    function: FunctionSpec,
    parseval_sum: f64,
    rows: Vec<SpectrumRow>,
}

pub fn cmd_spectrum(a: &SpectrumArgs) -> Result<Output, CliError> {
    let (f, spec) = a.function.load()?;
    let s = spectrum_fast(&f)?;
    let text = match a.format {
        Format::Csv => s.to_csv(),
        Format::Json => to_json(&SpectrumJson {
            function: spec,
            parseval_sum: s.parseval_sum(),
            rows: s
                .coeffs()
                .iter()
                .enumerate()
                .map(|(y, &c)| SpectrumRow {
                    y: boolfn::bit_string(y, f.n()),
                    c_y: c,
                    p_y: c * c,
                })
                .collect(),
        }),
    };
    Ok(Output {
        text,
        path: a.output.out.clone(),
    })
}

pub fn cmd_bv(a: &BvArgs) -> Result<Output, CliError> {
    let started = now_ms();
    let (f, spec) = a.function.load()?;
    let dist = outcome_distribution(&spectrum_fast(&f)?);
    let result = BvSampler::from_distribution(&dist).learn(a.trials, a.seed, Exec::default())?;
    let n = f.n();

    let text = match a.format {
        Format::Csv => {
            let mut out = String::from("y,count,frequency,probability\n");
            for (&y, &count) in &result.outcome_counts {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    boolfn::bit_string(y, n),
                    count,
                    count as f64 / result.trials as f64,
                    dist.probability(y)
                ));
            }
            out
        }
        Format::Json => {
            let per_run_failure = dist.probability(0);
            let predictions = BvPredictions {
                true_support: f.relevant_variables_bruteforce(),
                per_run_failure,
                learn_at_least_one_probability: 1.0 - per_run_failure,
                all_trials_fail_probability: per_run_failure.powf(a.trials as f64),
                per_variable: (1..=n)
                    .map(|j| {
                        let q = dist.marginal(j);
                        VariableProbability {
                            variable: j,
                            per_run: q,
                            within_trials: 1.0 - (1.0 - q).powf(a.trials as f64),
                        }
                    })
                    .collect(),
            };
            to_json(&ExperimentReport {
                tool: TOOL,
                tool_version: TOOL_VERSION,
                command: "bv",
                rng: RNG_ALGORITHM,
                seed: a.seed,
                function: spec,
                parameters: Parameters {
                    trials: a.trials,
                    k: None,
                    iterations: None,
                    auto_iterations: false,
                    estimate_gamma_samples: None,
                },
                results: Empirical::from_result(&result),
                predictions,
                timestamps: Timestamps {
                    started_unix_ms: started,
                    finished_unix_ms: now_ms(),
                },
            })
        }
    };
    Ok(Output {
        text,
        path: a.output.out.clone(),
    })
}

pub fn cmd_amplify(a: &AmplifyArgs) -> Result<Output, CliError> {
    let started = now_ms();
    let (f, spec) = a.function.load()?;
    let iterations = match a.iterations {
        Some(l) => Iterations::Fixed(l),
        None => Iterations::Auto,
    };
    let run = amplify::amplified_learning_run(&f, a.k, iterations, a.trials, a.seed)?;

    let text = match a.format {
        Format::Csv => amplify::grover_statevector(&f, a.k, run.iterations)?.to_csv(),
        Format::Json => {
            let support = f.relevant_variables_bruteforce();
            let l_max = run.iterations.max(run.plan.optimal_iterations);
            let masses = amplify::success_curve(&f, a.k, l_max, Exec::default())?;
            let curve = masses
                .into_iter()
                .enumerate()
                .map(|(l, statevector)| CurvePoint {
                    l: l as u64,
                    rotation: amplify::amplified_success_probability(&run.plan, l as u64),
                    statevector,
                })
                .collect();
            // Separate stream family from the amplified trials.
            let gamma_estimate = a
                .estimate_gamma
                .map(|samples| amplify::estimate_gamma(&f, a.k, samples, a.seed ^ GAMMA_SEED_MIX))
                .transpose()?;
            to_json(&ExperimentReport {
                tool: TOOL,
                tool_version: TOOL_VERSION,
                command: "amplify",
                rng: RNG_ALGORITHM,
                seed: a.seed,
                function: spec,
                parameters: Parameters {
                    trials: a.trials,
                    k: Some(a.k),
                    iterations: a.iterations,
                    auto_iterations: a.auto,
                    estimate_gamma_samples: a.estimate_gamma,
                },
                results: AmplifyResults {
                    empirical: Empirical::from_result(&run.result),
                    iterations: run.iterations,
                    success_frequency: run.result.weight_at_least(a.k) as f64
                        / run.result.trials as f64,
                    trials_covering_support: run.result.covering(support),
                },
                predictions: AmplifyPredictions {
                    true_support: support,
                    plan: run.plan,
                    predicted_success: run.predicted_success,
                    statevector_success: run.statevector_success,
                    curve,
                    gamma_estimate,
                },
                timestamps: Timestamps {
                    started_unix_ms: started,
                    finished_unix_ms: now_ms(),
                },
            })
        }
    };
    Ok(Output {
        text,
        path: a.output.out.clone(),
    })
}

/// XORed into the seed for the optional gamma estimate.
pub const GAMMA_SEED_MIX: u64 = 0x9e37_79b9_7f4a_7c15;

pub fn cmd_predict(a: &PredictArgs) -> Result<Output, CliError> {
    let range = a.m_min..=a.m_max;
    let text = match a.format {
        Format::Csv => analytics::prediction_table_csv(range)?,
        Format::Json => to_json(&PredictTable {
            rows: range
                .map(analytics::product_prediction)
                .collect::<Result<_, _>>()?,
            limits: analytics::limit_checks(),
        }),
    };
    Ok(Output {
        text,
        path: a.output.out.clone(),
    })
}

pub fn cmd_probe(a: &ProbeArgs) -> Result<Output, CliError> {
    let (f, spec) = a.function.load()?;
    let probe = analytics::classical_probe(&f);
    let truth = f.relevant_variables_bruteforce();
    Ok(Output {
        text: to_json(&ProbeReport {
            tool: TOOL,
            tool_version: TOOL_VERSION,
            command: "probe",
            function: spec,
            found: probe.found,
            queries: probe.queries,
            true_support: truth,
            complete: probe.found == truth,
        }),
        path: a.output.out.clone(),
    })
}

/// Sizes the global rayon pool. A no-op without the `parallel` feature.
pub fn configure_threads(threads: Option<usize>) {
    #[cfg(feature = "parallel")]
    if let Some(t) = threads.filter(|&t| t > 0) {
        // Fails only if the pool was already built, in which case it is kept.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}

/// Parses `args`, runs the command and writes its output. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    configure_threads(cli.threads);
    match execute(&cli) {
        Ok(out) => match &out.path {
            Some(path) => match std::fs::write(path, &out.text) {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    1
                }
            },
            None => {
                print!("{}", out.text);
                0
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Domain(_) = e {
                println!("{}", e.to_json());
            }
            e.exit_code()
        }
    }
}
