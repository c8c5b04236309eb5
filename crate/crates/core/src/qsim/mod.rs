//! Matrix-level simulation of the quantum subroutines behind leverage-score
//! sampling: block-encodings as explicit unitary dilations, the
//! singular-value sign transform, leverage-distribution state preparation,
//! phase-estimation-based amplitude estimation, and the hybrid solve
//! pipelines driven by them.
//!
//! Simulation contract: every object a circuit would manipulate implicitly is
//! materialized here — the dilation unitary, the transformed block, the
//! two-register pure state — so each bound the subroutines promise can be
//! checked against exact linear algebra. Costs that only exist on hardware
//! (block-encoding construction time `T`, amplification rounds) are tracked
//! in a [`CostLedger`], never timed.

mod ae;
mod algorithms;
mod block;
mod poly;
mod state;
mod svt;

pub use ae::{
    ae_adaptive_relative, ae_boosted, ae_simulate, estimate_leverage_score, estimate_rank,
    AE_BOOST_DEFAULT, AE_MAX_M,
};
pub use algorithms::{algorithm2_quantum_ls, algorithm4_quantum_ridge, QsimConfig};
pub use block::{dilate_block_encoding, extend_block_encoding, BlockEncoding, MAX_SIM_DIM};
pub use poly::{build_sign_polynomial, QsvtPolynomial, MAX_SIGN_DEGREE, SIGN_CERT_GRID};
pub use state::{
    prepare_col_leverage_state, prepare_ridge_leverage_state, sample_leverage, CostLedger,
    PureState, RidgePrep, StatePrep,
};
pub use svt::{apply_svt, precision_budget};
