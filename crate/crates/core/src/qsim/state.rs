//! Leverage-distribution state preparation and measurement.
//!
//! The column state of an encoded contraction `W` (n×d) is
//!
//! ```text
//! (1/‖W‖_F) Σ_j |j⟩ ⊗ W|j⟩
//! ```
//!
//! over registers of shape `[d, n]`. Measuring the first register samples the
//! column leverage distribution, measuring the second samples the row
//! distribution — one state serves both sides, which is the register-swap
//! identity the tests verify against the state built from `Wᵀ`.

use nalgebra::DMatrix;
use rand::distr::weighted::WeightedIndex;
use rand::prelude::Distribution as RandDistribution;
use rand::Rng;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::linalg::{kahan_sum, statistical_dimension, svd, validate_matrix, DEFAULT_RANK_TOL};
use crate::qsim::ae::{ae_adaptive_relative, AE_BOOST_DEFAULT, AE_MAX_M};
use crate::qsim::block::{dilate_block_encoding, extend_block_encoding, BlockEncoding};
use crate::qsim::poly::build_sign_polynomial;
use crate::qsim::svt::{apply_svt, precision_budget};
use crate::sampling::Side;

/// A normalized state over a tensor product of registers.
#[derive(Debug, Clone)]
pub struct PureState {
    /// Row-major over `register_shape`: for shape `[d, n]` the amplitude of
    /// `|j⟩|i⟩` sits at `j·n + i`.
    pub amplitudes: Vec<f64>,
    pub register_shape: Vec<usize>,
}

impl PureState {
    pub fn new(amplitudes: Vec<f64>, register_shape: Vec<usize>) -> Result<Self> {
        let len: usize = register_shape.iter().product();
        if len != amplitudes.len() {
            return Err(CoreError::DimensionMismatch(format!(
                "shape {register_shape:?} does not match {} amplitudes",
                amplitudes.len()
            )));
        }
        let norm2 = kahan_sum(amplitudes.iter().map(|a| a * a));
        if (norm2.sqrt() - 1.0).abs() > 1e-10 {
            return Err(CoreError::InvalidInput(format!(
                "state norm {} is not 1 within 1e-10",
                norm2.sqrt()
            )));
        }
        Ok(PureState {
            amplitudes,
            register_shape,
        })
    }

    /// Measurement distribution of one register of a two-register state.
    pub fn marginal(&self, register: usize) -> Result<Vec<f64>> {
        if self.register_shape.len() != 2 {
            return Err(CoreError::InvalidInput(
                "marginals are defined for two-register states".into(),
            ));
        }
        let (d0, d1) = (self.register_shape[0], self.register_shape[1]);
        match register {
            0 => Ok((0..d0)
                .map(|j| kahan_sum((0..d1).map(|i| self.amplitudes[j * d1 + i].powi(2))))
                .collect()),
            1 => Ok((0..d1)
                .map(|i| kahan_sum((0..d0).map(|j| self.amplitudes[j * d1 + i].powi(2))))
                .collect()),
            _ => Err(CoreError::InvalidInput(format!(
                "register {register} out of range"
            ))),
        }
    }
}

/// Simulated-cost bookkeeping. `theoretical_cost_string` carries the
/// instantiated asymptotic expression (the encoding cost `T` stays symbolic);
/// it is reported, never asserted against wall clock.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CostLedger {
    pub block_applications: u64,
    pub amplification_rounds: u64,
    pub ae_iterations: u64,
    pub theoretical_cost_string: String,
}

/// Output of leverage-state preparation.
#[derive(Debug, Clone)]
pub struct StatePrep {
    pub state: PureState,
    /// Post-selection probability of the flagged part, `‖W‖_F²/d`.
    pub success_prob: f64,
    pub ledger: CostLedger,
}

/// Prepares the column leverage state of the encoded contraction.
pub fn prepare_col_leverage_state(be_w: &BlockEncoding) -> Result<StatePrep> {
    let w = be_w.encoded();
    let (n, d) = w.shape();
    let frob2 = w.norm_squared();
    if frob2 <= 1e-24 {
        return Err(CoreError::Degenerate(
            "encoded block is zero; the leverage state has empty support".into(),
        ));
    }
    let frob = frob2.sqrt();
    let mut amplitudes = vec![0.0; d * n];
    for j in 0..d {
        for i in 0..n {
            amplitudes[j * n + i] = w[(i, j)] / frob;
        }
    }
    let state = PureState::new(amplitudes, vec![d, n])?;
    let success_prob = frob2 / d as f64;
    let rounds = (1.0 / success_prob).sqrt().ceil() as u64;
    let ledger = CostLedger {
        block_applications: rounds,
        amplification_rounds: rounds,
        ae_iterations: 0,
        theoretical_cost_string: format!(
            "(T*alpha/sigma_r)*sqrt(min(n,d)/r) ~= (T*alpha/sigma_r)*{:.4}",
            (n.min(d) as f64 / frob2).sqrt()
        ),
    };
    Ok(StatePrep {
        state,
        success_prob,
        ledger,
    })
}

/// Measures `count` i.i.d. samples from one register of a leverage state.
///
/// Convention: for states from [`prepare_col_leverage_state`] (and the ridge
/// variant) the first register is the column index and the second the row
/// index, so `Side::Column` measures register 0 and `Side::Row` register 1.
pub fn sample_leverage(
    state: &PureState,
    which: Side,
    count: usize,
    rng: &mut impl Rng,
) -> Result<Vec<usize>> {
    let register = match which {
        Side::Column => 0,
        Side::Row => 1,
    };
    let probs = state.marginal(register)?;
    let weighted = WeightedIndex::new(probs.iter().copied())
        .map_err(|e| CoreError::Degenerate(format!("empty marginal: {e}")))?;
    Ok((0..count).map(|_| weighted.sample(rng)).collect())
}

/// Output of ridge leverage-state preparation.
#[derive(Debug, Clone)]
pub struct RidgePrep {
    /// Registers `[d, n]`: second-register marginal is the ridge leverage
    /// distribution over rows.
    pub state: PureState,
    /// Post-selection probability, ideally `sd_λ(A)/d`.
    pub success_prob: f64,
    /// Amplitude-estimated statistical dimension (constant relative error).
    pub sd_estimate: f64,
    /// The sign-transformed encoding of the extended matrix the state was
    /// read from; its transposed block drives per-row score estimation.
    pub polar_encoding: BlockEncoding,
    pub ledger: CostLedger,
    pub warnings: Vec<String>,
}

/// Prepares the ridge leverage state of `A` for regularization `λ`:
/// block-encode, extend to `(A; λI)`, sign-transform the singular values with
/// `δ = λ/(3(α+λ))`, and post-select the row register on the first `n`
/// indices. `eps_hat` is the ℓ₁ distribution budget the internal precision
/// targets are derived from.
pub fn prepare_ridge_leverage_state(
    a: &DMatrix<f64>,
    lambda: f64,
    eps_hat: f64,
    rng: &mut impl Rng,
) -> Result<RidgePrep> {
    validate_matrix(a)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(CoreError::param("lambda", format!("{lambda} must be > 0")));
    }
    if !(eps_hat > 0.0 && eps_hat < 1.0) {
        return Err(CoreError::param(
            "eps_hat",
            format!("{eps_hat} outside (0, 1)"),
        ));
    }
    let (n, d) = a.shape();
    let f = svd(a, DEFAULT_RANK_TOL)?;
    if f.is_degenerate() {
        return Err(CoreError::Degenerate("zero matrix".into()));
    }
    let mut warnings = Vec::new();
    if lambda > f.sigma_max() {
        warnings.push(format!(
            "lambda {lambda:.3e} exceeds the spectral norm {:.3e}",
            f.sigma_max()
        ));
    }

    let alpha = f.sigma_max() * (1.0 + 1e-12);
    let alpha_ext = alpha + lambda;
    // λ lower-bounds the spectrum of (A; λI), so this δ always clears the
    // transform's precondition. The polynomial construction needs δ < 1/6;
    // capping only costs degree, never correctness.
    let delta = (lambda / (3.0 * alpha_ext)).min(1.0 / 6.0 - 1e-9);
    let sd = statistical_dimension(&f.singulars, lambda)?;
    let (eps_tilde, _eps_raw) = precision_budget(eps_hat, delta, alpha_ext, d, sd.max(1e-12));
    let eps_q = (eps_tilde / 2.0).clamp(1e-8, 0.49);

    let be = dilate_block_encoding(a, Some(alpha))?;
    let be_ext = extend_block_encoding(&be, lambda)?;
    let poly = build_sign_polynomial(delta, eps_q)?;
    let be_w = apply_svt(&be_ext, &poly)?;

    // Post-select the second register on the first n of n+d indices.
    let w = be_w.encoded();
    let top = w.view((0, 0), (n, d));
    let frob2 = top.norm_squared();
    if frob2 <= 1e-24 {
        return Err(CoreError::Degenerate(
            "post-selected block is zero; empty ridge support".into(),
        ));
    }
    let frob = frob2.sqrt();
    let mut amplitudes = vec![0.0; d * n];
    for j in 0..d {
        for i in 0..n {
            amplitudes[j * n + i] = top[(i, j)] / frob;
        }
    }
    let state = PureState::new(amplitudes, vec![d, n])?;
    let success_prob = frob2 / d as f64;
    if success_prob < 0.01 {
        warnings.push(format!(
            "low post-selection probability {success_prob:.3e}; amplification cost grows as its inverse square root"
        ));
    }

    let (sd_amp, m_used, ae_iters) =
        ae_adaptive_relative(success_prob, 0.25, 8, AE_BOOST_DEFAULT, AE_MAX_M, rng);
    let sd_estimate = sd_amp * d as f64;

    let rounds = (1.0 / success_prob).sqrt().ceil() as u64;
    let ledger = CostLedger {
        block_applications: poly.degree as u64 + rounds,
        amplification_rounds: rounds,
        ae_iterations: ae_iters,
        theoretical_cost_string: format!(
            "(T*(alpha+lambda)/lambda)*sqrt(d/sd) ~= (T*{:.4})*{:.4} [svt degree {}, ae grid {}]",
            alpha_ext / lambda,
            (d as f64 / sd).sqrt(),
            poly.degree,
            m_used
        ),
    };
    Ok(RidgePrep {
        state,
        success_prob,
        sd_estimate,
        polar_encoding: be_w,
        ledger,
        warnings,
    })
}
