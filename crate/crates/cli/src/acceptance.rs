//! The acceptance suite: every statistical and exactness guarantee the
//! toolkit promises, run end to end with fixed tolerances and seeds.
//!
//! Each criterion is a standalone function returning a [`CriterionResult`];
//! the driver assembles them into a [`RunReport`]. Stated runtime budgets are
//! sizing guidance and are reported, not asserted.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

use lvs_core::{
    algorithm1_ls, algorithm3_ridge, algorithm4_classical, algorithm4_quantum_ridge, apply_svt,
    build_sign_polynomial, col_leverage_scores, dilate_block_encoding, estimate_rank,
    extended_matrix, polar_factor, prepare_col_leverage_state, prepare_ridge_leverage_state,
    qsim::ae_simulate, row_leverage_scores, sample_leverage, score_tail_check,
    solve_ls_direct, statistical_dimension, stream_rng, svd, QsimConfig, Rng64, SamplingConfig,
    ScoreMode, Side, TailCheck, MAX_SIM_DIM,
};

use crate::instance::{generate_instance, InstanceSpec};
use crate::report::{CriterionResult, RunReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Classical,
    Quantum,
}

#[derive(Debug, Clone, Serialize)]
pub struct AcceptanceConfig {
    pub suite: Suite,
    pub seed: u64,
    /// Padded-dimension guard for the simulated engines; criteria that would
    /// exceed it report a skipped status instead of running.
    pub max_sim_dim: usize,
}

impl AcceptanceConfig {
    pub fn new(suite: Suite, seed: u64) -> Self {
        AcceptanceConfig {
            suite,
            seed,
            max_sim_dim: MAX_SIM_DIM,
        }
    }
}

fn orthonormal(n: usize, r: usize, rng: &mut Rng64) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, r, |_, _| rng.sample::<f64, _>(StandardNormal));
    g.qr().q()
}

/// Rank-r matrix with prescribed singular values.
fn with_spectrum(n: usize, d: usize, spectrum: &[f64], rng: &mut Rng64) -> DMatrix<f64> {
    let r = spectrum.len();
    let u = orthonormal(n, r, rng);
    let v = orthonormal(d, r, rng);
    let mut ud = u;
    for (j, s) in spectrum.iter().enumerate() {
        ud.column_mut(j).scale_mut(*s);
    }
    ud * v.transpose()
}

/// The shared random corpus for the exact-score criteria: 200 matrices with
/// n ≤ 500, d ≤ 50 and every rank in 1..=d represented.
fn score_corpus(seed: u64) -> Vec<(DMatrix<f64>, usize)> {
    (0..200u64)
        .map(|i| {
            let mut rng = stream_rng(seed ^ 0xC1, i);
            let d = 2 + rng.random_range(0..49);
            let n = d + rng.random_range(0..(500 - d + 1).min(451));
            let r = 1 + rng.random_range(0..d);
            let spectrum: Vec<f64> = (0..r)
                .map(|k| 1.0 * 0.9f64.powi(k as i32).max(1e-3))
                .collect();
            (with_spectrum(n, d, &spectrum, &mut rng), r)
        })
        .collect()
}

/// C1 — leverage scores of either side sum to the rank.
pub fn criterion_score_sum(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let corpus = score_corpus(seed);
    let worst = corpus
        .par_iter()
        .map(|(a, r)| {
            let f = svd(a, 1e-10).expect("corpus svd");
            let rows = row_leverage_scores(&f);
            let cols = col_leverage_scores(&f);
            let r = *r as f64;
            (rows.total - r).abs().max((cols.total - r).abs())
        })
        .reduce(|| 0.0, f64::max);
    CriterionResult::evaluate(
        "C1",
        "score totals equal the rank on both sides",
        worst,
        1e-8,
        "<=",
        "200 random matrices, n ≤ 500, d ≤ 50, all ranks".into(),
        start.elapsed().as_millis(),
    )
}

/// C2 — squared row norms of U agree with those of the polar factor UVᵀ.
pub fn criterion_polar_equality(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let corpus = score_corpus(seed);
    let worst = corpus
        .par_iter()
        .map(|(a, _)| {
            let f = svd(a, 1e-10).expect("corpus svd");
            let scores = row_leverage_scores(&f);
            let w = polar_factor(&f).expect("nonzero corpus");
            (0..a.nrows())
                .map(|i| (w.row(i).norm_squared() - scores.scores[i]).abs())
                .fold(0.0f64, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    CriterionResult::evaluate(
        "C2",
        "polar-factor row norms reproduce the scores",
        worst,
        1e-9,
        "<=",
        "entrywise over the same 200-matrix corpus".into(),
        start.elapsed().as_millis(),
    )
}

/// C3 — grid-certified sign polynomial for the four pinned parameter pairs.
pub fn criterion_sign_certificate(_seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut worst_margin = 0.0f64;
    let mut detail = String::new();
    for delta in [0.05, 0.1] {
        for eps in [1e-2, 1e-3] {
            match build_sign_polynomial(delta, eps) {
                Ok(q) => {
                    let grid = 10_000;
                    let mut sup_abs = 0.0f64;
                    let mut sup_out = 0.0f64;
                    for i in 0..=grid {
                        let x = -1.0 + 2.0 * i as f64 / grid as f64;
                        let v = q.eval(x);
                        sup_abs = sup_abs.max(v.abs());
                        if x.abs() >= 3.0 * delta {
                            sup_out = sup_out.max((v - x.signum()).abs());
                        }
                    }
                    worst_margin = worst_margin.max(sup_abs).max(sup_out / (2.0 * eps));
                    detail.push_str(&format!(
                        "(δ={delta}, ε={eps}): degree {}, sup|Q|={sup_abs:.6}, sup dev {:.2}·2ε; ",
                        q.degree,
                        sup_out / (2.0 * eps)
                    ));
                }
                Err(e) => {
                    return CriterionResult::evaluate(
                        "C3",
                        "sign-polynomial certificate",
                        f64::INFINITY,
                        1.0,
                        "<=",
                        format!("construction failed: {e}"),
                        start.elapsed().as_millis(),
                    )
                }
            }
        }
    }
    CriterionResult::evaluate(
        "C3",
        "sign-polynomial certificate",
        worst_margin,
        1.0,
        "<=",
        detail,
        start.elapsed().as_millis(),
    )
}

fn operator_norm(m: &DMatrix<f64>) -> f64 {
    svd(m, 1e-3).map(|f| f.sigma_max()).unwrap_or(0.0)
}

/// C4 — the transformed block is within 2ε of the exact polar factor.
pub fn criterion_svt_fidelity(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let eps = 0.01;
    let worst = (0..100u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed ^ 0xC4, i);
            let n = 4 + rng.random_range(0..21);
            let d = 4 + rng.random_range(0..21);
            let r = 1 + rng.random_range(0..n.min(d));
            let spectrum: Vec<f64> =
                (0..r).map(|_| 0.3 + 0.7 * rng.random::<f64>()).collect();
            let a = with_spectrum(n, d, &spectrum, &mut rng);
            let f = svd(&a, 1e-10).expect("svd");
            let be = dilate_block_encoding(&a, None).expect("dilation");
            let delta = (f.sigma_min() / be.alpha / 3.0).min(1.0 / 6.0 - 1e-9);
            let poly = build_sign_polynomial(delta, eps).expect("sign polynomial");
            let bw = apply_svt(&be, &poly).expect("svt");
            let polar = polar_factor(&f).expect("polar");
            operator_norm(&(bw.encoded() - polar))
        })
        .reduce(|| 0.0, f64::max);
    CriterionResult::evaluate(
        "C4",
        "singular-value sign transform tracks the polar factor",
        worst / (2.0 * eps),
        1.0,
        "<=",
        format!("100 encoded matrices with σ_r ≥ 3δα, ε = {eps}"),
        start.elapsed().as_millis(),
    )
}

/// C5 — measured sampling distributions stay within the ℓ₁ budget of the
/// exact leverage distributions.
pub fn criterion_distribution_fidelity(seed: u64, max_sim_dim: usize) -> CriterionResult {
    let start = Instant::now();
    let eps_hat = 0.05;
    if 32 > max_sim_dim {
        return CriterionResult::skipped(
            "C5",
            "sampling distribution fidelity",
            format!("needs dilations of size 32 > limit {max_sim_dim}"),
        );
    }
    let worst = (0..20u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed ^ 0xC5, i);
            // Instance 0 is the diagonal indicator fixture whose ideal
            // distribution is uniform on the support.
            let a = if i == 0 {
                let spec = InstanceSpec::DiagSearch {
                    n: 16,
                    weight: 5,
                    support: None,
                };
                generate_instance(&spec, &mut rng).expect("fixture").matrix
            } else {
                let d = 4 + rng.random_range(0..13);
                let n = d + rng.random_range(0..(33 - d));
                let r = 1 + rng.random_range(0..d.min(6));
                let spectrum: Vec<f64> =
                    (0..r).map(|_| 0.3 + 0.7 * rng.random::<f64>()).collect();
                with_spectrum(n, d, &spectrum, &mut rng)
            };
            let f = svd(&a, 1e-10).expect("svd");
            let d = a.ncols();
            let be = dilate_block_encoding(&a, None).expect("dilation");
            let delta = (f.sigma_min() / be.alpha / 3.0).min(1.0 / 6.0 - 1e-9);
            let (eps_tilde, _) = lvs_core::precision_budget(
                eps_hat,
                delta,
                be.alpha,
                d,
                f.rank() as f64,
            );
            let eps_q = (eps_tilde / 2.0).clamp(1e-8, 0.49);
            let poly = build_sign_polynomial(delta, eps_q).expect("sign polynomial");
            let bw = apply_svt(&be, &poly).expect("svt");
            let prep = prepare_col_leverage_state(&bw).expect("state");
            let draws = 10_000;
            let samples =
                sample_leverage(&prep.state, Side::Column, draws, &mut rng).expect("samples");
            let mut empirical = vec![0.0f64; d];
            for s in samples {
                empirical[s] += 1.0 / draws as f64;
            }
            let cols = col_leverage_scores(&f);
            let ideal: Vec<f64> = cols.scores.iter().map(|s| s / cols.total).collect();
            crate::l1_distance(&empirical, &ideal) / 2.0
        })
        .reduce(|| 0.0, f64::max);
    CriterionResult::evaluate(
        "C5",
        "sampling distribution fidelity",
        worst,
        eps_hat,
        "<=",
        "20 instances incl. the diagonal indicator fixture, 10⁴ draws each".into(),
        start.elapsed().as_millis(),
    )
}

/// C6 — the amplitude-estimation error bound holds at its stated rate.
pub fn criterion_ae_contract(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let rate = 8.0 / std::f64::consts::PI.powi(2) - 0.02;
    let cells: Vec<(usize, usize)> = (0..=20usize)
        .flat_map(|ai| [8usize, 32, 128].map(|m| (ai, m)))
        .collect();
    let min_freq = cells
        .par_iter()
        .map(|&(ai, m)| {
            let a = ai as f64 / 20.0;
            let bound = 2.0 * std::f64::consts::PI * (a * (1.0 - a)).max(0.0).sqrt() / m as f64
                + std::f64::consts::PI.powi(2) / ((m * m) as f64);
            let mut rng = stream_rng(seed ^ 0xC6, (ai * 1000 + m) as u64);
            let trials = 10_000;
            let hits = (0..trials)
                .filter(|_| (ae_simulate(a, m, &mut rng) - a).abs() <= bound)
                .count();
            hits as f64 / trials as f64
        })
        .reduce(|| 1.0, f64::min);
    CriterionResult::evaluate(
        "C6",
        "amplitude-estimation error bound rate",
        min_freq,
        rate,
        ">=",
        "grid a ∈ {0, 0.05, …, 1} × M ∈ {8, 32, 128}, 10⁴ runs per cell".into(),
        start.elapsed().as_millis(),
    )
}

/// C7 — simulated rank estimation meets its relative-error target.
pub fn criterion_rank_estimation(seed: u64, max_sim_dim: usize) -> CriterionResult {
    let start = Instant::now();
    if 16 > max_sim_dim {
        return CriterionResult::skipped(
            "C7",
            "rank estimation",
            format!("needs dilations of size 16 > limit {max_sim_dim}"),
        );
    }
    let mut min_successes = usize::MAX;
    let mut detail = String::new();
    for r in [1usize, 3, 8] {
        let mut rng = stream_rng(seed ^ 0xC7, r as u64);
        let spectrum: Vec<f64> = (0..r).map(|_| 0.4 + 0.6 * rng.random::<f64>()).collect();
        let a = with_spectrum(16, 16, &spectrum, &mut rng);
        let f = svd(&a, 1e-10).expect("svd");
        assert_eq!(f.rank(), r);
        let be = dilate_block_encoding(&a, None).expect("dilation");
        let delta = (f.sigma_min() / be.alpha / 3.0).min(1.0 / 6.0 - 1e-9);
        let poly = build_sign_polynomial(delta, 1e-3).expect("sign polynomial");
        let bw = apply_svt(&be, &poly).expect("svt");
        let successes = (0..100u64)
            .into_par_iter()
            .filter(|&i| {
                let mut trial = stream_rng(seed ^ 0xC7C7, r as u64 * 1000 + i);
                let est = estimate_rank(&bw, 0.1, &mut trial).expect("rank estimate");
                (est - r as f64).abs() <= 0.1 * r as f64
            })
            .count();
        min_successes = min_successes.min(successes);
        detail.push_str(&format!("rank {r}: {successes}/100; "));
    }
    CriterionResult::evaluate(
        "C7",
        "rank estimation within 10% relative error",
        min_successes as f64,
        90.0,
        ">=",
        detail,
        start.elapsed().as_millis(),
    )
}

/// C8 — leverage-sampled least squares meets its (1+ε) residual guarantee.
pub fn criterion_algorithm1(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let eps = 0.25;
    let cfg = SamplingConfig::default();
    let q = lvs_core::sampling::sample_count_ls(30, eps, cfg.c_q);
    let successes = (0..100u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = stream_rng(seed ^ 0xC8, i);
            let a = DMatrix::from_fn(4096, 30, |_, _| rng.sample::<f64, _>(StandardNormal));
            let x0 = DVector::from_fn(30, |_, _| rng.sample::<f64, _>(StandardNormal));
            let noise = DVector::from_fn(4096, |_, _| rng.sample::<f64, _>(StandardNormal));
            let b = &a * x0 + noise;
            let report = algorithm1_ls(&a, &b, eps, i, ScoreMode::Sketched, &cfg)
                .expect("least-squares pipeline");
            report.ratio.map(|r| r <= 1.0 + eps).unwrap_or(false)
        })
        .count();
    CriterionResult::evaluate(
        "C8",
        "sampled least-squares residual within (1+ε)",
        successes as f64,
        90.0,
        ">=",
        format!("100 seeds of 4096×30, ε = {eps}, q = {q}"),
        start.elapsed().as_millis(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum RidgeEngine {
    ColumnSampled,
    TwoStageClassical,
    TwoStageQuantum,
}

/// C9 — all ridge engines meet the (1+ε) objective guarantee.
pub fn criterion_ridge_engines(seed: u64, suite: Suite, max_sim_dim: usize) -> CriterionResult {
    let start = Instant::now();
    let eps = 0.25;
    let (n, d, r) = (2000usize, 40usize, 10usize);
    let mut engines = match suite {
        Suite::Classical => vec![RidgeEngine::ColumnSampled, RidgeEngine::TwoStageClassical],
        Suite::Quantum => vec![RidgeEngine::TwoStageQuantum],
        Suite::All => vec![
            RidgeEngine::ColumnSampled,
            RidgeEngine::TwoStageClassical,
            RidgeEngine::TwoStageQuantum,
        ],
    };
    let mut skipped_note = String::new();
    if n + d > max_sim_dim && engines.contains(&RidgeEngine::TwoStageQuantum) {
        engines.retain(|e| *e != RidgeEngine::TwoStageQuantum);
        skipped_note = format!(
            "simulated engine skipped: padded dimension {} exceeds limit {max_sim_dim}; ",
            n + d
        );
    }
    if engines.is_empty() {
        return CriterionResult::skipped(
            "C9",
            "ridge objective within (1+ε) for every engine",
            skipped_note,
        );
    }

    let mut min_successes = usize::MAX;
    let mut detail = skipped_note;
    for engine in engines {
        let successes = (0..100u64)
            .into_par_iter()
            .filter(|&i| {
                let mut rng = stream_rng(seed ^ 0xC9, i);
                let spectrum: Vec<f64> = (0..r).map(|k| 0.93f64.powi(k as i32)).collect();
                let a = with_spectrum(n, d, &spectrum, &mut rng);
                let sigma1 = spectrum[0];
                let lambda = 0.3 * sigma1;
                let x0 = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
                let noise = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
                let b = &a * x0 + noise;
                let ratio = match engine {
                    RidgeEngine::ColumnSampled => {
                        algorithm3_ridge(&a, &b, lambda, eps, i, ScoreMode::Sketched, &SamplingConfig::default())
                            .expect("column-sampled ridge")
                            .ratio
                    }
                    RidgeEngine::TwoStageClassical => {
                        algorithm4_classical(&a, &b, lambda, eps, i, ScoreMode::Exact, &SamplingConfig::default())
                            .expect("two-stage classical ridge")
                            .ratio
                    }
                    RidgeEngine::TwoStageQuantum => {
                        algorithm4_quantum_ridge(&a, &b, lambda, eps, i, &QsimConfig::default())
                            .expect("two-stage simulated ridge")
                            .ratio
                    }
                };
                ratio.map(|r| r <= 1.0 + eps).unwrap_or(false)
            })
            .count();
        min_successes = min_successes.min(successes);
        detail.push_str(&format!("{engine:?}: {successes}/100; "));
    }
    CriterionResult::evaluate(
        "C9",
        "ridge objective within (1+ε) for every engine",
        min_successes as f64,
        90.0,
        ">=",
        format!("2000×40 rank-10, λ = 0.3σ₁, ε = {eps}; {detail}"),
        start.elapsed().as_millis(),
    )
}

/// C10 — sorted-score tail bound inside the stated assumption range.
pub fn criterion_score_tail(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let holds = (0..100u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = stream_rng(seed ^ 0xCA, i);
            let d = 2 + rng.random_range(0..39);
            let n = (50 + rng.random_range(0..351)).max(d + 1);
            let r = 1 + rng.random_range(0..d.min(12));
            let spectrum: Vec<f64> = (0..r).map(|_| 0.3 + 0.7 * rng.random::<f64>()).collect();
            let a = with_spectrum(n, d, &spectrum, &mut rng);
            let lo = (2.0 * r as f64 / n as f64).max(0.05);
            let eps = lo + rng.random::<f64>() * (0.7 - lo).max(0.0);
            let scores = row_leverage_scores(&svd(&a, 1e-10).expect("svd"));
            matches!(
                score_tail_check(&scores, eps).expect("tail check"),
                TailCheck::Holds { .. }
            )
        })
        .count();
    CriterionResult::evaluate(
        "C10",
        "sorted-score tail bound under the stated assumption",
        holds as f64,
        100.0,
        ">=",
        "100 random instances with ε drawn inside the assumption range".into(),
        start.elapsed().as_millis(),
    )
}

/// C11 — statistical dimension identities plus the post-selection
/// probability of ridge state preparation.
pub fn criterion_statistical_dimension(seed: u64, max_sim_dim: usize) -> CriterionResult {
    let start = Instant::now();
    if 40 > max_sim_dim {
        return CriterionResult::skipped(
            "C11",
            "statistical dimension and ridge post-selection probability",
            format!("needs dilations of size 40 > limit {max_sim_dim}"),
        );
    }
    let eps_hat = 0.05;
    let worst = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed ^ 0xCB, i);
            let d = 3 + rng.random_range(0..10);
            let n = d + rng.random_range(0..13);
            let r = 1 + rng.random_range(0..d);
            let spectrum: Vec<f64> = (0..r).map(|_| 0.3 + 0.7 * rng.random::<f64>()).collect();
            let a = with_spectrum(n, d, &spectrum, &mut rng);
            let f = svd(&a, 1e-10).expect("svd");
            let lambda = 0.5 * f.sigma_max();

            // Route 1: the closed-form sum over the spectrum of A.
            let sd = statistical_dimension(&f.singulars, lambda).expect("sd");
            // Route 2: through the spectrum of the stacked matrix.
            let stack = extended_matrix(&a, lambda).expect("stack");
            let fs = svd(&stack, 1e-10).expect("stack svd");
            let sd_stack: f64 = fs
                .singulars
                .iter()
                .map(|s| (s * s - lambda * lambda).max(0.0) / (s * s))
                .sum();
            let formula_dev = (sd - sd_stack).abs() / 1e-10;

            // At λ = 0 the statistical dimension is exactly the rank.
            let at_zero = statistical_dimension(&f.singulars, 0.0).expect("sd0");
            let zero_dev = if at_zero == r as f64 { 0.0 } else { f64::INFINITY };

            // Post-selection probability within the ℓ₁ budget allowance.
            let prep = prepare_ridge_leverage_state(&a, lambda, eps_hat, &mut rng)
                .expect("ridge state");
            let tilde = eps_hat * (sd / d as f64).sqrt();
            let allowance =
                (2.0 * (d as f64 * sd).sqrt() + d as f64 * tilde) * tilde / d as f64;
            let success_dev = (prep.success_prob - sd / d as f64).abs() / allowance;

            formula_dev.max(zero_dev).max(success_dev)
        })
        .reduce(|| 0.0, f64::max);
    CriterionResult::evaluate(
        "C11",
        "statistical dimension and ridge post-selection probability",
        worst,
        1.0,
        "<=",
        "50 instances; spectrum-route identity (1e-10), exact rank at λ=0, \
         success probability within its ℓ₁-budget allowance"
            .into(),
        start.elapsed().as_millis(),
    )
}

/// C12 — closed-form hard instances solve to their exact optima.
pub fn criterion_hard_instances(seed: u64) -> CriterionResult {
    let start = Instant::now();
    let mut rng = stream_rng(seed ^ 0xCC, 0);
    let mut worst = 0.0f64;

    let empty = generate_instance(&InstanceSpec::Existence { n: 40, weight: 0 }, &mut rng)
        .expect("existence fixture");
    let x = solve_ls_direct(&empty.matrix, empty.rhs.as_ref().unwrap()).expect("solve");
    worst = worst.max((x[0] - 1.0).abs()).max(x[1].abs());

    let marked = generate_instance(&InstanceSpec::Existence { n: 40, weight: 3 }, &mut rng)
        .expect("existence fixture");
    let x = solve_ls_direct(&marked.matrix, marked.rhs.as_ref().unwrap()).expect("solve");
    worst = worst.max((x[0] - 1.0).abs()).max((x[1] - 1.0).abs());

    let spike = generate_instance(&InstanceSpec::Spike { n: 101, marked: 1 }, &mut rng)
        .expect("spike fixture");
    let (a, b) = (&spike.matrix, spike.rhs.as_ref().unwrap());
    let x = solve_ls_direct(a, b).expect("solve");
    let value = (a * &x - b).norm();
    worst = worst
        .max((x[0] - 2.0).abs())
        .max((value - (100.0f64).sqrt()).abs());

    CriterionResult::evaluate(
        "C12",
        "closed-form hard instances solve exactly",
        worst,
        1e-9,
        "<=",
        "membership instances (solutions (1,0) and (1,1)) and the planted \
         spike (optimal value √(n−1))"
            .into(),
        start.elapsed().as_millis(),
    )
}

fn in_suite(id: &str, suite: Suite) -> bool {
    match suite {
        Suite::All => true,
        Suite::Classical => matches!(id, "C1" | "C2" | "C8" | "C9" | "C10" | "C12"),
        Suite::Quantum => matches!(id, "C3" | "C4" | "C5" | "C6" | "C7" | "C9" | "C11"),
    }
}

/// Runs the selected suite, printing one summary line per criterion to
/// stderr as results land.
pub fn run_acceptance_suite(config: &AcceptanceConfig) -> RunReport {
    let start = Instant::now();
    let mut report = RunReport::new(
        "bench acceptance".into(),
        serde_json::to_value(config).expect("config serializes"),
        config.seed,
    );
    let seed = config.seed;
    let all: Vec<(&str, Box<dyn Fn() -> CriterionResult>)> = vec![
        ("C1", Box::new(move || criterion_score_sum(seed))),
        ("C2", Box::new(move || criterion_polar_equality(seed))),
        ("C3", Box::new(move || criterion_sign_certificate(seed))),
        ("C4", Box::new(move || criterion_svt_fidelity(seed))),
        (
            "C5",
            Box::new({
                let dim = config.max_sim_dim;
                move || criterion_distribution_fidelity(seed, dim)
            }),
        ),
        ("C6", Box::new(move || criterion_ae_contract(seed))),
        (
            "C7",
            Box::new({
                let dim = config.max_sim_dim;
                move || criterion_rank_estimation(seed, dim)
            }),
        ),
        ("C8", Box::new(move || criterion_algorithm1(seed))),
        (
            "C9",
            Box::new({
                let suite = config.suite;
                let dim = config.max_sim_dim;
                move || criterion_ridge_engines(seed, suite, dim)
            }),
        ),
        ("C10", Box::new(move || criterion_score_tail(seed))),
        (
            "C11",
            Box::new({
                let dim = config.max_sim_dim;
                move || criterion_statistical_dimension(seed, dim)
            }),
        ),
        ("C12", Box::new(move || criterion_hard_instances(seed))),
    ];
    for (id, run) in all {
        if !in_suite(id, config.suite) {
            continue;
        }
        let result = run();
        eprintln!("{}", result.summary_line());
        report.push(result);
    }
    report.wall_clock_ms = start.elapsed().as_millis();
    report
}
