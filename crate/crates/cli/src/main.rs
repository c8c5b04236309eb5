//! `lvs` — leverage-score sampling toolkit.
//!
//! Exit codes: 0 success, 1 acceptance-criterion failure, 2 usage or input
//! error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use lvs_cli::acceptance::{run_acceptance_suite, AcceptanceConfig, Suite};
use lvs_cli::instance::{generate_instance, InstanceSpec};
use lvs_cli::{io, HarnessError};
use lvs_core::{
    algorithm1_ls, algorithm2_quantum_ls, algorithm4_classical, algorithm4_quantum_ridge,
    apply_svt, build_sign_polynomial, col_leverage_scores, dilate_block_encoding, estimate_rank,
    precision_budget, prepare_col_leverage_state, row_leverage_scores, stream_rng, svd, Distribution, QsimConfig, SamplingConfig, ScoreMode,
    DEFAULT_RANK_TOL,
};

#[derive(Parser)]
#[command(name = "lvs", version, about = "Leverage-score sampling for least squares and ridge regression, with simulated quantum sampling engines")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute or estimate leverage scores of a matrix.
    Scores(ScoresArgs),
    /// Draw indices from the leverage distribution of a matrix.
    Sample(SampleArgs),
    /// Solve a regression problem by leverage sampling.
    Solve {
        #[command(subcommand)]
        problem: SolveCommand,
    },
    /// Simulated quantum estimation routines.
    Qsim {
        #[command(subcommand)]
        what: QsimCommand,
    },
    /// Generate a named test instance and write it to disk.
    Gen(GenArgs),
    /// Benchmark suites.
    Bench {
        #[command(subcommand)]
        what: BenchCommand,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScoresModeArg {
    Exact,
    Sketched,
    Quantum,
}

#[derive(Args)]
struct ScoresArgs {
    /// Matrix Market file.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = ScoresModeArg::Exact)]
    mode: ScoresModeArg,
    /// Accuracy knob: relative error target (sketched) or distribution
    /// budget (quantum).
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Also write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SideArg {
    Row,
    Column,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = SideArg::Row)]
    side: SideArg,
    #[arg(long)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EngineArg {
    Classical,
    Quantum,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScoreSourceArg {
    Exact,
    Sketched,
}

#[derive(Subcommand)]
enum SolveCommand {
    /// min ‖Ax − b‖.
    Ls(SolveArgs),
    /// min ‖Ax − b‖² + λ²‖x‖².
    Ridge(RidgeArgs),
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = EngineArg::Classical)]
    engine: EngineArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Score source for the classical engine.
    #[arg(long, value_enum, default_value_t = ScoreSourceArg::Sketched)]
    scores: ScoreSourceArg,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct RidgeArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    #[arg(long)]
    lambda: f64,
    #[arg(long, default_value_t = 0.25)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = EngineArg::Classical)]
    engine: EngineArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ScoreSourceArg::Exact)]
    scores: ScoreSourceArg,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum QsimCommand {
    /// Estimate the numerical rank through the simulated pipeline.
    Rank {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    DiagSearch,
    Existence,
    Spike,
    RandomLowrank,
    Coherent,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: KindArg,
    #[arg(long, default_value_t = 64)]
    n: usize,
    #[arg(long, default_value_t = 8)]
    d: usize,
    /// Rank for low-rank kinds; support/marked count for the fixtures.
    #[arg(long, default_value_t = 3)]
    r: usize,
    #[arg(long, default_value_t = 0.9)]
    decay: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output prefix: writes `<prefix>_A.mtx` and `<prefix>_b.csv`.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum BenchCommand {
    /// Run the acceptance criteria and emit a JSON report.
    Acceptance {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Padded-dimension guard for simulated engines.
        #[arg(long, default_value_t = lvs_core::MAX_SIM_DIM)]
        max_sim_dim: usize,
    },
}

fn emit_json(value: &serde_json::Value, also: Option<&Path>) -> lvs_cli::Result<()> {
    let text = serde_json::to_string_pretty(value).expect("report serializes");
    println!("{text}");
    if let Some(path) = also {
        std::fs::write(path, text).map_err(|source| HarnessError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok(())
}

fn load_matrix_guarded(path: &Path) -> lvs_cli::Result<DMatrix<f64>> {
    let a = io::load_matrix(path)?;
    Ok(a)
}

fn run(cli: Cli) -> lvs_cli::Result<ExitCode> {
    match cli.command {
        Command::Scores(args) => {
            let a = load_matrix_guarded(&args.input)?;
            let value = match args.mode {
                ScoresModeArg::Exact => {
                    let f = svd(&a, DEFAULT_RANK_TOL)?;
                    let rows = row_leverage_scores(&f);
                    let cols = col_leverage_scores(&f);
                    json!({
                        "mode": "exact",
                        "rank": f.rank(),
                        "row_scores": rows.scores,
                        "row_total": rows.total,
                        "col_scores": cols.scores,
                        "col_total": cols.total,
                    })
                }
                ScoresModeArg::Sketched => {
                    let mut rng = stream_rng(args.seed, 0);
                    let scores = lvs_core::approx_leverage_scores_sketched(
                        &a,
                        args.eps.clamp(0.01, 0.9),
                        &mut rng,
                        &Default::default(),
                    )?;
                    json!({
                        "mode": "sketched",
                        "seed": args.seed,
                        "relerr_target": args.eps.clamp(0.01, 0.9),
                        "row_scores": scores.scores,
                        "row_total": scores.total,
                    })
                }
                ScoresModeArg::Quantum => {
                    let f = svd(&a, DEFAULT_RANK_TOL)?;
                    if f.is_degenerate() {
                        return Err(HarnessError::Invalid("zero matrix".into()));
                    }
                    let be = dilate_block_encoding(&a, None)?;
                    let delta = (f.sigma_min() / be.alpha / 3.0).min(1.0 / 6.0 - 1e-9);
                    let (eps_tilde, _) = precision_budget(
                        args.eps.clamp(0.001, 0.9),
                        delta,
                        be.alpha,
                        a.ncols(),
                        f.rank() as f64,
                    );
                    let poly = build_sign_polynomial(delta, (eps_tilde / 2.0).clamp(1e-8, 0.49))?;
                    let bw = apply_svt(&be, &poly)?;
                    let prep = prepare_col_leverage_state(&bw)?;
                    let mut rng = stream_rng(args.seed, 0);
                    let mut estimates = Vec::with_capacity(a.nrows());
                    for j in 0..a.nrows() {
                        let est = lvs_core::estimate_leverage_score(
                            &bw.transpose(),
                            j,
                            args.eps.clamp(0.001, 0.9),
                            15,
                            &mut rng,
                        )?;
                        estimates.push(est);
                    }
                    json!({
                        "mode": "quantum",
                        "seed": args.seed,
                        "eps": args.eps,
                        "row_scores": estimates,
                        "success_prob": prep.success_prob,
                        "svt_degree": poly.degree,
                        "theoretical_cost": prep.ledger.theoretical_cost_string,
                    })
                }
            };
            emit_json(&value, args.json.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sample(args) => {
            let a = load_matrix_guarded(&args.input)?;
            let f = svd(&a, DEFAULT_RANK_TOL)?;
            let scores = match args.side {
                SideArg::Row => row_leverage_scores(&f),
                SideArg::Column => col_leverage_scores(&f),
            };
            let dist = Distribution::from_scores(&scores)?;
            let mut rng = stream_rng(args.seed, 0);
            let sampler = match args.side {
                SideArg::Row => lvs_core::draw_row_sampler(&dist, args.count, &mut rng)?,
                SideArg::Column => lvs_core::draw_col_sampler(&dist, args.count, &mut rng)?,
            };
            let indices: Vec<usize> = sampler.draws.iter().map(|&(i, _)| i).collect();
            let weights: Vec<f64> = sampler.draws.iter().map(|&(_, w)| w).collect();
            emit_json(
                &json!({
                    "side": match args.side { SideArg::Row => "row", SideArg::Column => "column" },
                    "count": args.count,
                    "seed": args.seed,
                    "indices": indices,
                    "weights": weights,
                }),
                None,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Solve { problem } => {
            let (report, json_path) = match problem {
                SolveCommand::Ls(args) => {
                    let a = load_matrix_guarded(&args.a)?;
                    let b = io::load_vector(&args.b)?;
                    let report = match args.engine {
                        EngineArg::Classical => {
                            let mode = match args.scores {
                                ScoreSourceArg::Exact => ScoreMode::Exact,
                                ScoreSourceArg::Sketched => ScoreMode::Sketched,
                            };
                            algorithm1_ls(&a, &b, args.eps, args.seed, mode, &SamplingConfig::default())?
                        }
                        EngineArg::Quantum => {
                            algorithm2_quantum_ls(&a, &b, args.eps, args.seed, &QsimConfig::default())?
                        }
                    };
                    (report, args.json)
                }
                SolveCommand::Ridge(args) => {
                    let a = load_matrix_guarded(&args.a)?;
                    let b = io::load_vector(&args.b)?;
                    let report = match args.engine {
                        EngineArg::Classical => {
                            let mode = match args.scores {
                                ScoreSourceArg::Exact => ScoreMode::Exact,
                                ScoreSourceArg::Sketched => ScoreMode::Sketched,
                            };
                            algorithm4_classical(
                                &a,
                                &b,
                                args.lambda,
                                args.eps,
                                args.seed,
                                mode,
                                &SamplingConfig::default(),
                            )?
                        }
                        EngineArg::Quantum => algorithm4_quantum_ridge(
                            &a,
                            &b,
                            args.lambda,
                            args.eps,
                            args.seed,
                            &QsimConfig::default(),
                        )?,
                    };
                    (report, args.json)
                }
            };
            let value = serde_json::to_value(&report).expect("report serializes");
            emit_json(&value, json_path.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Qsim { what } => match what {
            QsimCommand::Rank { input, eps, seed } => {
                let a = load_matrix_guarded(&input)?;
                let f = svd(&a, DEFAULT_RANK_TOL)?;
                if f.is_degenerate() {
                    emit_json(
                        &json!({"rank_estimate": 0.0, "exact_rank": 0, "seed": seed}),
                        None,
                    )?;
                    return Ok(ExitCode::SUCCESS);
                }
                let be = dilate_block_encoding(&a, None)?;
                let delta = (f.sigma_min() / be.alpha / 3.0).min(1.0 / 6.0 - 1e-9);
                let poly = build_sign_polynomial(delta, 1e-3)?;
                let bw = apply_svt(&be, &poly)?;
                let mut rng = stream_rng(seed, 0);
                let estimate = estimate_rank(&bw, eps.clamp(0.001, 0.9), &mut rng)?;
                emit_json(
                    &json!({
                        "rank_estimate": estimate,
                        "exact_rank": f.rank(),
                        "eps": eps,
                        "seed": seed,
                        "svt_degree": poly.degree,
                    }),
                    None,
                )?;
                Ok(ExitCode::SUCCESS)
            }
        },
        Command::Gen(args) => {
            let spec = match args.kind {
                KindArg::DiagSearch => InstanceSpec::DiagSearch {
                    n: args.n,
                    weight: args.r,
                    support: None,
                },
                KindArg::Existence => InstanceSpec::Existence {
                    n: args.n,
                    weight: args.r,
                },
                KindArg::Spike => InstanceSpec::Spike {
                    n: args.n,
                    marked: args.r,
                },
                KindArg::RandomLowrank => InstanceSpec::RandomLowrank {
                    n: args.n,
                    d: args.d,
                    r: args.r,
                    decay: args.decay,
                },
                KindArg::Coherent => InstanceSpec::Coherent {
                    n: args.n,
                    d: args.d,
                },
            };
            let mut rng = stream_rng(args.seed, 0);
            let instance = generate_instance(&spec, &mut rng)?;
            let matrix_path = args.out.with_file_name(format!(
                "{}_A.mtx",
                args.out.file_name().map(|s| s.to_string_lossy()).unwrap_or_default()
            ));
            io::save_matrix(&matrix_path, &instance.matrix)?;
            let mut written = vec![matrix_path.display().to_string()];
            if let Some(b) = &instance.rhs {
                let vec_path = args.out.with_file_name(format!(
                    "{}_b.csv",
                    args.out.file_name().map(|s| s.to_string_lossy()).unwrap_or_default()
                ));
                io::save_vector(&vec_path, b)?;
                written.push(vec_path.display().to_string());
            }
            emit_json(
                &json!({
                    "spec": serde_json::to_value(&spec).expect("spec serializes"),
                    "seed": args.seed,
                    "rows": instance.matrix.nrows(),
                    "cols": instance.matrix.ncols(),
                    "files": written,
                }),
                None,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { what } => match what {
            BenchCommand::Acceptance {
                suite,
                seed,
                out,
                max_sim_dim,
            } => {
                let config = AcceptanceConfig {
                    suite,
                    seed,
                    max_sim_dim,
                };
                let report = run_acceptance_suite(&config);
                let value = serde_json::to_value(&report).expect("report serializes");
                emit_json(&value, out.as_deref())?;
                Ok(if report.all_passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(1)
                })
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
