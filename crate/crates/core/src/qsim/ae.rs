//! Canonical phase-estimation amplitude estimation, simulated through its
//! exact outcome distribution.
//!
//! For amplitude `a` set `θ = arcsin(√a)/π ∈ [0, 1/2]`. A grid size `M`
//! measurement returns `y ∈ {0, …, M−1}` with probability
//! `sin²(MπΔ)/(M²sin²(πΔ))`, `Δ = θ − y/M` (value 1 in the on-grid limit),
//! and the estimate is `ã = sin²(πy/M)`. The estimate satisfies
//! `|a − ã| ≤ 2π√(a(1−a))/M + π²/M²` with probability at least `8/π²`;
//! boosting takes the median of repeated draws.

use rand::Rng;

use crate::error::{CoreError, Result};
use crate::qsim::block::BlockEncoding;

/// Median-boost repetitions used by the estimators by default.
pub const AE_BOOST_DEFAULT: usize = 15;

/// Hard cap on the phase-estimation grid size.
pub const AE_MAX_M: usize = 1 << 18;

/// Exact outcome probability of grid offset `delta` (distance to the
/// measured grid point in phase units), reduced to the nearest integer.
fn outcome_probability(delta: f64, m: usize) -> f64 {
    let t = delta - delta.round();
    let s = (std::f64::consts::PI * t).sin();
    if s.abs() < 1e-12 {
        return 1.0;
    }
    let num = (m as f64 * std::f64::consts::PI * t).sin();
    (num * num) / (m as f64 * m as f64 * s * s)
}

/// One simulated amplitude-estimation measurement.
///
/// The outcome distribution is sampled exactly: candidates are visited in
/// order of distance from the ideal phase, so the expected work is O(log M)
/// even though the support has M points.
pub fn ae_simulate(a: f64, m: usize, rng: &mut impl Rng) -> f64 {
    assert!(m >= 1, "grid size must be at least 1");
    let a = a.clamp(0.0, 1.0);
    let theta = a.sqrt().asin() / std::f64::consts::PI;
    let ideal = theta * m as f64;
    let center = ideal.round() as i64;
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last_valid = center.clamp(0, m as i64 - 1);
    for offset in 0..(2 * m as i64) {
        // 0, +1, −1, +2, −2, …
        let step = (offset + 1) / 2;
        let y = if offset % 2 == 0 {
            center + step
        } else {
            center - step
        };
        if y < 0 || y >= m as i64 {
            continue;
        }
        last_valid = y;
        let delta = theta - y as f64 / m as f64;
        acc += outcome_probability(delta, m);
        if acc >= u {
            break;
        }
    }
    let y = last_valid as f64;
    let s = (std::f64::consts::PI * y / m as f64).sin();
    s * s
}

/// Median of `boost` independent measurements.
pub fn ae_boosted(a: f64, m: usize, boost: usize, rng: &mut impl Rng) -> f64 {
    assert!(boost >= 1);
    let mut draws: Vec<f64> = (0..boost).map(|_| ae_simulate(a, m, rng)).collect();
    draws.sort_by(|x, y| x.partial_cmp(y).unwrap());
    draws[draws.len() / 2]
}

/// Doubles the grid until the a-priori error bound implies the requested
/// relative error for the current estimate, starting from `m_floor` and
/// capping at `max_m`. Returns `(estimate, final_m, total_iterations)` where
/// iterations count simulated oracle uses (`m × boost` per stage).
pub fn ae_adaptive_relative(
    a: f64,
    rel_err: f64,
    m_floor: usize,
    boost: usize,
    max_m: usize,
    rng: &mut impl Rng,
) -> (f64, usize, u64) {
    let mut m = 8usize;
    while m < m_floor.max(1) && m < max_m {
        m <<= 1;
    }
    let mut total: u64 = 0;
    loop {
        let est = ae_boosted(a, m, boost, rng);
        total += (m as u64) * boost as u64;
        let bound = 2.0 * std::f64::consts::PI * (est * (1.0 - est)).max(0.0).sqrt() / m as f64
            + std::f64::consts::PI.powi(2) / (m as f64 * m as f64);
        if (est > 0.0 && bound <= rel_err * est) || m >= max_m {
            return (est, m, total);
        }
        m <<= 1;
    }
}

/// Estimates the squared norm of column `j` of the encoded block (the
/// amplitude of the flagged part after applying the encoding to `|0⟩|j⟩`)
/// with grid `M = ⌈π/eps⌉` and median boosting. Satisfies
/// `|ã − a| ≤ ε√a + ε²` with probability `1 − 2^{−Ω(boost)}`.
pub fn estimate_leverage_score(
    be_w: &BlockEncoding,
    j: usize,
    eps: f64,
    boost: usize,
    rng: &mut impl Rng,
) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CoreError::param("eps", format!("{eps} outside (0, 1)")));
    }
    if boost == 0 {
        return Err(CoreError::param("boost", "must be ≥ 1"));
    }
    if j >= be_w.block_cols {
        return Err(CoreError::InvalidInput(format!(
            "column {j} out of range for block with {} columns",
            be_w.block_cols
        )));
    }
    let block = be_w.block();
    let a: f64 = block.column(j).norm_squared().clamp(0.0, 1.0);
    let m = (std::f64::consts::PI / eps).ceil() as usize;
    Ok(ae_boosted(a, m, boost, rng))
}

/// Estimates the numerical rank as `d·ã` where `ã` estimates the success
/// amplitude `‖W‖_F²/d` of the leverage-state preparation to relative error
/// `eps` (adaptive grid with median boosting).
pub fn estimate_rank(be_w: &BlockEncoding, eps: f64, rng: &mut impl Rng) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(CoreError::param("eps", format!("{eps} outside (0, 1)")));
    }
    let block = be_w.block();
    let d = be_w.block_cols as f64;
    let a = (block.norm_squared() / d).clamp(0.0, 1.0);
    if a == 0.0 {
        return Ok(0.0);
    }
    let (est, _, _) = ae_adaptive_relative(a, eps, 8, AE_BOOST_DEFAULT, AE_MAX_M, rng);
    Ok(d * est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::block::dilate_block_encoding;
    use crate::rng::stream_rng;
    use nalgebra::DMatrix;

    #[test]
    fn zero_amplitude_is_exact() {
        let mut rng = stream_rng(30, 0);
        for m in [1usize, 4, 64] {
            for _ in 0..100 {
                assert_eq!(ae_simulate(0.0, m, &mut rng), 0.0);
            }
        }
    }

    #[test]
    fn on_grid_amplitude_is_exact() {
        // a = 1/2 has θ = 1/4, exactly on the M = 4 grid.
        let mut rng = stream_rng(30, 1);
        for _ in 0..100 {
            let est = ae_simulate(0.5, 4, &mut rng);
            assert!((est - 0.5).abs() < 1e-15, "estimate {est}");
        }
    }

    #[test]
    fn error_bound_frequency() {
        // a = 0.3, M = 100: the bound holds in at least 8/π² of draws.
        let mut rng = stream_rng(30, 2);
        let a = 0.3;
        let m = 100;
        let bound =
            2.0 * std::f64::consts::PI * (a * (1.0 - a) as f64).sqrt() / m as f64
                + std::f64::consts::PI.powi(2) / (m as f64 * m as f64);
        let trials = 10_000;
        let hits = (0..trials)
            .filter(|_| (ae_simulate(a, m, &mut rng) - a).abs() <= bound)
            .count();
        let freq = hits as f64 / trials as f64;
        assert!(freq >= 8.0 / std::f64::consts::PI.powi(2) - 0.02, "freq {freq}");
    }

    #[test]
    fn boosted_median_tightens() {
        let mut rng = stream_rng(30, 3);
        let a = 0.3;
        let m = 128;
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let est = ae_boosted(a, m, 15, &mut rng);
            worst = worst.max((est - a).abs());
        }
        // Median of 15 stays within the single-shot bound comfortably.
        let bound = 2.0 * std::f64::consts::PI * (a * (1.0 - a) as f64).sqrt() / m as f64
            + std::f64::consts::PI.powi(2) / (m as f64 * m as f64);
        assert!(worst <= bound, "worst {worst} vs bound {bound}");
    }

    #[test]
    fn adaptive_reaches_relative_error() {
        let mut rng = stream_rng(30, 4);
        for &a in &[0.9, 0.25, 0.02] {
            let (est, m, iters) = ae_adaptive_relative(a, 0.25, 8, 15, AE_MAX_M, &mut rng);
            assert!((est - a).abs() <= 0.25 * a, "a={a}, est={est}, m={m}");
            assert!(iters > 0);
        }
    }

    #[test]
    fn leverage_score_estimates() {
        let mut rng = stream_rng(30, 5);
        let be = dilate_block_encoding(&DMatrix::identity(2, 2), Some(1.0)).unwrap();
        let est = estimate_leverage_score(&be, 0, 0.1, 15, &mut rng).unwrap();
        assert!((est - 1.0).abs() <= 0.1 + 0.01);

        let diag = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let bd = dilate_block_encoding(&diag, Some(1.0)).unwrap();
        let zero = estimate_leverage_score(&bd, 1, 0.1, 15, &mut rng).unwrap();
        assert_eq!(zero, 0.0);

        assert!(estimate_leverage_score(&be, 5, 0.1, 15, &mut rng).is_err());
    }

    #[test]
    fn rank_estimates() {
        let mut rng = stream_rng(30, 6);
        // diag(1,1,0,0): success amplitude 1/2, rank 2.
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 1.0, 0.0, 0.0]));
        let be = dilate_block_encoding(&a, Some(1.0)).unwrap();
        let est = estimate_rank(&be, 0.1, &mut rng).unwrap();
        assert!((est - 2.0).abs() <= 0.2, "estimate {est}");

        // Identity: amplitude exactly 1, so the estimate is exactly d.
        let bi = dilate_block_encoding(&DMatrix::identity(3, 3), Some(1.0)).unwrap();
        let ei = estimate_rank(&bi, 0.1, &mut rng).unwrap();
        assert!((ei - 3.0).abs() < 1e-12);

        let bz = dilate_block_encoding(&DMatrix::zeros(2, 2), Some(1.0)).unwrap();
        assert_eq!(estimate_rank(&bz, 0.1, &mut rng).unwrap(), 0.0);
    }
}
