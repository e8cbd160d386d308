//! `csbm` — batch experiment driver for the colored-SBM laboratory.
//!
//! Exit codes: 0 success, 1 validation error, 2 runtime error. Errors are
//! written to stderr as one JSON object `{"kind": …, "message": …}`.

use clap::{Parser, Subcommand, ValueEnum};
use csbm::decoder::{local_refine, ml_decode_exact, score_partition, DecodeResult};
use csbm::ldp::{
    delta_complement_bound, ml_failure_union_bound, pair_diff_distribution,
    pnk_theoretical_bound, rate_function, BoundReport,
};
use csbm::model::ModelParams;
use csbm::oracle::{exact_sum_distribution, monte_carlo_pnk};
use csbm::sampler::{parse_graph, parse_partition, sample_graph, serialize_graph, Partition};
use csbm_cli::sweep::{render_csv, run_sweep, SweepConfig};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "csbm", version, about = "Colored stochastic block model laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DecodeMode {
    Exact,
    Local,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a planted graph and write it as text.
    Sample {
        /// Parameter JSON file: {"n": …, "alphas": […], "betas": […]}.
        #[arg(long)]
        params: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Planted partition file (defaults to vertices 0..n/2 in A).
        #[arg(long)]
        partition: Option<PathBuf>,
        /// Output path (stdout when omitted).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decode a graph file; prints {"labels", "score", "tie", "explored"}.
    Decode {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        params: PathBuf,
        #[arg(long, value_enum, default_value_t = DecodeMode::Exact)]
        mode: DecodeMode,
        /// Initial partition for local mode (seeded random when omitted).
        #[arg(long)]
        init: Option<PathBuf>,
        /// Seed for the random initial partition in local mode.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        max_rounds: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Divergence functionals of a parameter set.
    Divergence {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Rate function I(a) of the pair-difference law.
    Rate {
        #[arg(long)]
        params: PathBuf,
        /// Evaluation point a.
        #[arg(long)]
        point: f64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Bound table: P_n^(k) per k, the union bound, and the Δ-complement
    /// bound.
    Bounds {
        #[arg(long)]
        params: PathBuf,
        /// Largest k listed individually (the union bound always sums the
        /// full range 1..=n/4).
        #[arg(long, default_value_t = 32)]
        max_k: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Monte Carlo P_n^(k) next to the closed-form bound and, when
    /// tractable, the exact tail.
    Pnk {
        #[arg(long)]
        params: PathBuf,
        #[arg(short, long)]
        k: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a sweep configuration; emits the fixed-schema CSV (or JSON).
    Sweep {
        /// Sweep configuration JSON.
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum CliError {
    Validation(String),
    Runtime(String),
}

impl CliError {
    fn validation(err: impl std::fmt::Display) -> Self {
        CliError::Validation(err.to_string())
    }

    fn runtime(err: impl std::fmt::Display) -> Self {
        CliError::Runtime(err.to_string())
    }
}

fn main() -> ExitCode {
    configure_thread_pool();
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (kind, message, code) = match err {
                CliError::Validation(m) => ("validation", m, 1),
                CliError::Runtime(m) => ("runtime", m, 2),
            };
            eprintln!(
                "{}",
                serde_json::json!({ "kind": kind, "message": message })
            );
            ExitCode::from(code)
        }
    }
}

/// CSBM_THREADS caps worker parallelism; unset or invalid leaves the rayon
/// default.
fn configure_thread_pool() {
    if let Ok(value) = std::env::var("CSBM_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            if threads > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Sample {
            params,
            seed,
            partition,
            output,
        } => {
            let params = load_params(&params)?;
            let planted = match partition {
                Some(path) => parse_partition(&read_text(&path)?).map_err(CliError::validation)?,
                None => Partition::planted(params.n()),
            };
            let graph = sample_graph(&params, &planted, seed).map_err(CliError::validation)?;
            emit(output.as_deref(), serialize_graph(&graph))
        }
        Command::Decode {
            graph,
            params,
            mode,
            init,
            seed,
            max_rounds,
            output,
        } => {
            let params = load_params(&params)?;
            let graph = parse_graph(&read_text(&graph)?).map_err(CliError::validation)?;
            let weights = params.weights();
            let result = match mode {
                DecodeMode::Exact => {
                    ml_decode_exact(&graph, &weights).map_err(CliError::validation)?
                }
                DecodeMode::Local => {
                    let init = match init {
                        Some(path) => {
                            parse_partition(&read_text(&path)?).map_err(CliError::validation)?
                        }
                        None => Partition::random_balanced(graph.n(), seed)
                            .map_err(CliError::validation)?,
                    };
                    let best = local_refine(&graph, &weights, &init, max_rounds)
                        .map_err(CliError::validation)?;
                    let best_score =
                        score_partition(&graph, &weights, &best).map_err(CliError::validation)?;
                    DecodeResult {
                        best,
                        best_score,
                        tie: false,
                        explored: 0,
                    }
                }
            };
            emit_json(output.as_deref(), &result)
        }
        Command::Divergence { params, output } => {
            let params = load_params(&params)?;
            emit_json(output.as_deref(), &params.divergence_report())
        }
        Command::Rate {
            params,
            point,
            output,
        } => {
            let params = load_params(&params)?;
            let law = pair_diff_distribution(&params);
            emit_json(output.as_deref(), &rate_function(&law, point))
        }
        Command::Bounds {
            params,
            max_k,
            format,
            output,
        } => {
            let params = load_params(&params)?;
            let mut rows: Vec<BoundReport> = Vec::new();
            let k_cap = (params.n() / 4).min(max_k);
            for k in 1..=k_cap {
                rows.push(pnk_theoretical_bound(&params, k).map_err(CliError::validation)?);
            }
            rows.push(ml_failure_union_bound(&params));
            if params.n() >= 16 {
                rows.push(
                    delta_complement_bound(params.n(), params.alphas())
                        .map_err(CliError::validation)?,
                );
            }
            match format {
                Format::Json => emit_json(output.as_deref(), &rows),
                Format::Csv => emit(output.as_deref(), bounds_csv(&rows)),
            }
        }
        Command::Pnk {
            params,
            k,
            trials,
            seed,
            output,
        } => {
            let params = load_params(&params)?;
            let (estimate, std_error) =
                monte_carlo_pnk(&params, k, trials, seed).map_err(CliError::validation)?;
            let bound = pnk_theoretical_bound(&params, k).map_err(CliError::validation)?;
            let n_terms = 2 * k * (params.n() / 2 - k);
            let law = pair_diff_distribution(&params);
            let dp_exact = exact_sum_distribution(&law, n_terms)
                .ok()
                .map(|law| law.tail_ge(0.0));
            let report = PnkReport {
                n: params.n(),
                k,
                n_terms,
                trials,
                seed,
                mc_estimate: estimate,
                mc_std_error: std_error,
                theoretical_bound: bound.value,
                dp_exact,
            };
            emit_json(output.as_deref(), &report)
        }
        Command::Sweep {
            config,
            format,
            output,
        } => {
            let config: SweepConfig = serde_json::from_str(&read_text(&config)?)
                .map_err(|e| CliError::Validation(format!("sweep config: {e}")))?;
            let result = run_sweep(&config).map_err(CliError::validation)?;
            match format {
                Format::Csv => emit(output.as_deref(), render_csv(&result)),
                Format::Json => emit_json(output.as_deref(), &result),
            }
        }
    }
}

#[derive(Serialize)]
struct PnkReport {
    n: usize,
    k: usize,
    n_terms: usize,
    trials: usize,
    seed: u64,
    mc_estimate: f64,
    mc_std_error: f64,
    theoretical_bound: f64,
    dp_exact: Option<f64>,
}

fn bounds_csv(rows: &[BoundReport]) -> String {
    let mut out = String::from("formula_id,k,value,vacuous\n");
    for row in rows {
        let (id, k) = match row.formula {
            csbm::ldp::BoundFormula::PnkChernoff { k, .. } => ("pnk_chernoff", Some(k)),
            csbm::ldp::BoundFormula::MlFailureUnion { .. } => ("ml_failure_union", None),
            csbm::ldp::BoundFormula::DeltaComplement { .. } => ("delta_complement", None),
            csbm::ldp::BoundFormula::CramerUpper { .. } => ("cramer_upper", None),
            csbm::ldp::BoundFormula::CramerLower { .. } => ("cramer_lower", None),
            csbm::ldp::BoundFormula::ChebyshevTail { .. } => ("chebyshev_tail", None),
        };
        let k = k.map(|k| k.to_string()).unwrap_or_default();
        out.push_str(&format!("{id},{k},{},{}\n", row.value, row.vacuous));
    }
    out
}

fn load_params(path: &Path) -> Result<ModelParams, CliError> {
    serde_json::from_str(&read_text(path)?)
        .map_err(|e| CliError::Validation(format!("params {}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Runtime(format!("reading {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: String) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(output: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(CliError::runtime)?;
    text.push('\n');
    emit(output, text)
}
