//! Hybrid solve pipelines: leverage sampling runs through the simulated
//! quantum subroutines, the reduced problem through the classical solvers.

use nalgebra::{DMatrix, DVector};
use std::collections::BTreeMap;

use crate::error::{CoreError, Result};
use crate::linalg::{svd, validate_matrix, DEFAULT_RANK_TOL};
use crate::qsim::ae::{ae_adaptive_relative, AE_BOOST_DEFAULT, AE_MAX_M};
use crate::qsim::block::dilate_block_encoding;
use crate::qsim::poly::build_sign_polynomial;
use crate::qsim::state::{prepare_col_leverage_state, prepare_ridge_leverage_state, sample_leverage};
use crate::qsim::svt::{apply_svt, precision_budget};
use crate::rng::stream_rng;
use crate::sampling::{
    algorithm3_ridge, apply_sampler, apply_sampler_to_vector, exact_ridge_solution,
    objective_ridge, sample_count_ls, sample_count_ridge_rows, solve_ls_direct, solve_reduced_ls,
    SampleCounts, SamplingConfig, SamplingMatrix, ScoreMode, Side, SolveReport, PROB_FLOOR,
};

/// Tunables for the simulated pipelines.
#[derive(Debug, Clone)]
pub struct QsimConfig {
    pub sampling: SamplingConfig,
    /// ℓ₁ budget for the sampling distribution; drives the internal
    /// polynomial precision through the budget chain.
    pub eps_hat: f64,
    /// Relative error target for per-row amplitude estimates.
    pub score_relerr: f64,
    /// Median-boost repetitions for every amplitude estimate.
    pub boost: usize,
}

impl Default for QsimConfig {
    fn default() -> Self {
        QsimConfig {
            sampling: SamplingConfig::default(),
            eps_hat: 0.05,
            score_relerr: 0.25,
            boost: AE_BOOST_DEFAULT,
        }
    }
}

/// Amplitude-estimates one squared row norm of the transformed block to the
/// requested relative error. Physically this is the flagged-part amplitude
/// after applying the transposed encoding to `|0⟩|j⟩`.
fn adaptive_row_score(
    amplitude: f64,
    rel_err: f64,
    m_floor: usize,
    boost: usize,
    rng: &mut crate::rng::Rng64,
) -> (f64, u64) {
    let (est, _, iters) =
        ae_adaptive_relative(amplitude.clamp(0.0, 1.0), rel_err, m_floor, boost, AE_MAX_M, rng);
    (est, iters)
}

/// Least squares with simulated quantum leverage sampling.
///
/// Pipeline: block-encode `A`, sign-transform the singular values with
/// `δ = σ_r/(3α)`, prepare the leverage state, measure `q` row indices,
/// amplitude-estimate the scores of the sampled rows, and solve the
/// importance-weighted reduced problem classically.
pub fn algorithm2_quantum_ls(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    eps: f64,
    seed: u64,
    cfg: &QsimConfig,
) -> Result<SolveReport> {
    validate_matrix(a)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CoreError::param("eps", format!("{eps} outside (0, 1)")));
    }
    if a.nrows() != b.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "A is {}×{} but b has length {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    let (n, d) = a.shape();
    let mut rng = stream_rng(seed, 0);
    let mut counters = BTreeMap::new();
    let mut warnings = Vec::new();

    // Spectrum oracle: the proofs assume σ_r (hence δ) is known.
    let f = svd(a, DEFAULT_RANK_TOL)?;
    if f.is_degenerate() {
        return Err(CoreError::Degenerate("zero matrix".into()));
    }
    let r = f.rank();
    let alpha = f.sigma_max() * (1.0 + 1e-12);
    let delta = f.sigma_min() / (3.0 * alpha);
    let delta = delta.min(1.0 / 6.0 - 1e-12);
    let sup_dim = n.min(d);
    let (eps_tilde, _) = precision_budget(cfg.eps_hat, delta, alpha, sup_dim, r as f64);
    let eps_q = (eps_tilde / 2.0).clamp(1e-8, 0.49);

    let be = dilate_block_encoding(a, Some(alpha))?;
    let poly = build_sign_polynomial(delta, eps_q)?;
    let be_w = apply_svt(&be, &poly)?;
    let w = be_w.encoded();

    // The superposition register runs over the narrow side; row samples come
    // from the other register either way.
    let (prep, row_side) = if d <= n {
        (prepare_col_leverage_state(&be_w)?, Side::Row)
    } else {
        (prepare_col_leverage_state(&be_w.transpose())?, Side::Column)
    };

    let q = sample_count_ls(r, eps, cfg.sampling.c_q);
    let rows = sample_leverage(&prep.state, row_side, q, &mut rng)?;

    // Score estimates for the distinct sampled rows, shared by duplicates.
    let m_floor = ((2.0 * n as f64 / eps).sqrt()).ceil() as usize;
    let mut estimates: BTreeMap<usize, f64> = BTreeMap::new();
    let mut ae_total: u64 = 0;
    for &j in &rows {
        if !estimates.contains_key(&j) {
            let amplitude = w.row(j).norm_squared();
            let (est, iters) =
                adaptive_row_score(amplitude, cfg.score_relerr, m_floor, cfg.boost, &mut rng);
            ae_total += iters;
            estimates.insert(j, est);
        }
    }

    let draws: Vec<(usize, f64)> = rows
        .iter()
        .map(|&j| {
            let p = (estimates[&j] / r as f64).max(PROB_FLOOR);
            (j, 1.0 / (q as f64 * p).sqrt())
        })
        .collect();
    let sampler = SamplingMatrix {
        side: Side::Row,
        ambient: n,
        draws,
    };
    let sa = apply_sampler(&sampler, a)?;
    let sb = apply_sampler_to_vector(&sampler, b)?;
    let x = solve_reduced_ls(&sa, &sb, &cfg.sampling, &mut counters, &mut warnings)?;

    let objective = (a * &x - b).norm();
    let x_opt = solve_ls_direct(a, b)?;
    let reference = (a * &x_opt - b).norm();

    let kappa = f.sigma_max() / f.sigma_min();
    counters.insert("rows_sampled".into(), q as u64);
    counters.insert("distinct_rows_estimated".into(), estimates.len() as u64);
    counters.insert("svt_degree".into(), poly.degree as u64);
    counters.insert("amplification_rounds".into(), prep.ledger.amplification_rounds);
    counters.insert("ae_iterations".into(), ae_total);

    Ok(SolveReport {
        solution: x.as_slice().to_vec(),
        objective,
        reference_objective: Some(reference),
        ratio: SolveReport::ratio_of(objective, reference, b.norm()),
        samples_used: SampleCounts { q, c: 0 },
        score_mode: ScoreMode::QuantumSim,
        seed,
        cost_counters: counters,
        theoretical_cost: Some(format!(
            "(T*alpha/sigma_r)*r*sqrt(n)/eps^1.5 + min(r*d*kappa/eps, r*d^2/eps) ~= \
             T*{:.4} + {:.4}",
            (alpha / f.sigma_min()) * r as f64 * (n as f64).sqrt() / eps.powf(1.5),
            (r as f64 * d as f64 * kappa / eps).min(r as f64 * (d * d) as f64 / eps)
        )),
        warnings,
    })
}

/// Ridge regression with simulated quantum ridge-leverage sampling:
/// row-sample via the ridge leverage state, amplitude-estimate the sampled
/// scores, then run the classical column-sampled pipeline on the reduced
/// problem.
pub fn algorithm4_quantum_ridge(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    lambda: f64,
    eps: f64,
    seed: u64,
    cfg: &QsimConfig,
) -> Result<SolveReport> {
    validate_matrix(a)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(CoreError::param("lambda", format!("{lambda} must be > 0")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CoreError::param("eps", format!("{eps} outside (0, 1)")));
    }
    if a.nrows() != b.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "A is {}×{} but b has length {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    let n = a.nrows();
    let mut rng = stream_rng(seed, 0);

    let f = svd(a, DEFAULT_RANK_TOL)?;
    if f.is_degenerate() {
        return Err(CoreError::Degenerate("zero matrix".into()));
    }
    let r = f.rank();

    let prep = prepare_ridge_leverage_state(a, lambda, cfg.eps_hat, &mut rng)?;
    let mut warnings = prep.warnings.clone();
    let sd_estimate = prep.sd_estimate.max(PROB_FLOOR);

    let q = sample_count_ridge_rows(r, eps, cfg.sampling.c_q);
    let rows = sample_leverage(&prep.state, Side::Row, q, &mut rng)?;

    let w_full = prep.polar_encoding.encoded();
    let m_floor = ((2.0 * n as f64 / eps).sqrt()).ceil() as usize;
    let mut estimates: BTreeMap<usize, f64> = BTreeMap::new();
    let mut ae_total: u64 = prep.ledger.ae_iterations;
    for &j in &rows {
        if !estimates.contains_key(&j) {
            let amplitude = w_full.row(j).norm_squared();
            let (est, iters) =
                adaptive_row_score(amplitude, cfg.score_relerr, m_floor, cfg.boost, &mut rng);
            ae_total += iters;
            estimates.insert(j, est);
        }
    }

    let draws: Vec<(usize, f64)> = rows
        .iter()
        .map(|&j| {
            let p = (estimates[&j] / sd_estimate).max(PROB_FLOOR);
            (j, 1.0 / (q as f64 * p).sqrt())
        })
        .collect();
    let sampler = SamplingMatrix {
        side: Side::Row,
        ambient: n,
        draws,
    };
    let sa = apply_sampler(&sampler, a)?;
    let sb = apply_sampler_to_vector(&sampler, b)?;

    let inner = algorithm3_ridge(
        &sa,
        &sb,
        lambda,
        eps,
        seed.wrapping_add(1),
        ScoreMode::Sketched,
        &cfg.sampling,
    )?;
    let x = inner.solution_vector();

    let objective = objective_ridge(a, b, lambda, &x);
    let x_opt = exact_ridge_solution(a, b, lambda)?;
    let reference = objective_ridge(a, b, lambda, &x_opt);

    let mut counters = inner.cost_counters;
    counters.insert("rows_sampled".into(), q as u64);
    counters.insert("distinct_rows_estimated".into(), estimates.len() as u64);
    counters.insert("amplification_rounds".into(), prep.ledger.amplification_rounds);
    counters.insert("svt_block_applications".into(), prep.ledger.block_applications);
    counters.insert("ae_iterations".into(), ae_total);
    warnings.extend(inner.warnings);

    let alpha = f.sigma_max();
    Ok(SolveReport {
        solution: x.as_slice().to_vec(),
        objective,
        reference_objective: Some(reference),
        ratio: SolveReport::ratio_of(objective, reference, b.norm_squared()),
        samples_used: SampleCounts {
            q,
            c: inner.samples_used.c,
        },
        score_mode: ScoreMode::QuantumSim,
        seed,
        cost_counters: counters,
        theoretical_cost: Some(format!(
            "(r/eps)*((T*alpha/lambda)*sqrt((n+d)/eps) + d) + (r/eps)^w*(|A|/lambda)^2 + r^3 ~= \
             T*{:.4} + {:.4}",
            r as f64 / eps
                * (alpha / lambda)
                * ((n + a.ncols()) as f64 / eps).sqrt(),
            r as f64 / eps * a.ncols() as f64
                + (r as f64 / eps).powf(2.373) * (alpha / lambda).powi(2)
                + (r as f64).powi(3)
        )),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn gaussian(n: usize, d: usize, rng: &mut crate::rng::Rng64) -> DMatrix<f64> {
        DMatrix::from_fn(n, d, |_, _| {
            rng.sample::<f64, _>(rand_distr::StandardNormal)
        })
    }

    #[test]
    fn quantum_ls_identity_is_exact() {
        let a = DMatrix::identity(3, 3);
        let b = DVector::from_vec(vec![1.0, -0.5, 2.0]);
        let report = algorithm2_quantum_ls(&a, &b, 0.5, 1, &QsimConfig::default()).unwrap();
        assert!(report.objective < 1e-8, "residual {}", report.objective);
    }

    #[test]
    fn quantum_ls_consistent_system() {
        let mut rng = crate::rng::stream_rng(50, 0);
        let a = gaussian(200, 5, &mut rng);
        let x0 = DVector::from_fn(5, |_, _| rng.random::<f64>());
        let b = &a * x0;
        let report = algorithm2_quantum_ls(&a, &b, 0.25, 2, &QsimConfig::default()).unwrap();
        assert!(report.objective < 1e-6, "residual {}", report.objective);
    }

    #[test]
    fn quantum_ridge_identity() {
        let a = DMatrix::identity(4, 4);
        let b = DVector::from_vec(vec![1.0, 2.0, -1.0, 0.5]);
        let report =
            algorithm4_quantum_ridge(&a, &b, 1.0, 0.25, 3, &QsimConfig::default()).unwrap();
        assert!(report.ratio.unwrap() <= 1.25, "ratio {:?}", report.ratio);
    }
}
