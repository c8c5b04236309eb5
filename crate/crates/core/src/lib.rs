//! Leverage-score sampling for least squares and ridge regression.
//!
//! The crate has three layers:
//!
//! - [`linalg`]: exact dense linear algebra — rank-revealing SVD, row/column
//!   leverage scores, the extended matrix `(A; λI)` and its closed-form SVD,
//!   and the statistical dimension. This layer is the ground truth every
//!   randomized routine is measured against.
//! - [`sampling`]: importance samplers driven by the leverage distribution,
//!   a sketched score estimator, reduced-problem solvers (direct and CGNR),
//!   and the classical sampling pipelines for least squares and ridge
//!   regression.
//! - [`qsim`]: a matrix-level simulation of the quantum subroutines the
//!   sampling pipelines can be driven by — block-encodings as explicit
//!   unitary dilations, the singular-value sign transform, leverage-state
//!   preparation, and phase-estimation-based amplitude estimation.
//!
//! All randomness flows through explicit seeded generators (see [`rng`]), so
//! every pipeline is reproducible from its inputs and a seed.

pub mod error;
pub mod linalg;
pub mod qsim;
pub mod rng;
pub mod sampling;

pub use error::{CoreError, Result};
pub use linalg::{
    col_leverage_scores, extended_matrix, extended_svd, polar_factor, ridge_row_scores,
    row_leverage_scores, score_tail_check, statistical_dimension, svd, Distribution, ExtendedSvd,
    ScoreKind, ScoreVector, SvdFactors, TailCheck, DEFAULT_RANK_TOL,
};
pub use qsim::{
    ae_simulate, algorithm2_quantum_ls, algorithm4_quantum_ridge, apply_svt,
    build_sign_polynomial, dilate_block_encoding, estimate_leverage_score, estimate_rank,
    extend_block_encoding, precision_budget, prepare_col_leverage_state,
    prepare_ridge_leverage_state, sample_leverage, BlockEncoding, CostLedger, PureState,
    QsimConfig, QsvtPolynomial, RidgePrep, StatePrep, MAX_SIM_DIM,
};
pub use rng::{seed_rng, stream_rng, Rng64};
pub use sampling::{
    algorithm1_ls, algorithm3_ridge, algorithm4_classical, apply_sampler, apply_sampler_to_vector,
    approx_col_leverage_scores_sketched, approx_leverage_scores_sketched, draw_col_sampler,
    draw_row_sampler, objective_ridge, ridge_estimator, solve_ls_cgnr, solve_ls_direct,
    CgnrOutcome, SampleCounts, SamplingConfig, SamplingMatrix, ScoreMode, Side, SketchConfig,
    SolveReport,
};
