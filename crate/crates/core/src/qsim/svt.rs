//! Singular-value transformation at the matrix level, and the precision
//! budget that links block-encoding error to sampling-distribution error.

use crate::error::{CoreError, Result};
use crate::linalg::DEFAULT_RANK_TOL;
use crate::qsim::block::{dilate_block_encoding, BlockEncoding};
use crate::qsim::poly::QsvtPolynomial;

/// Applies the sign polynomial to the singular values of the encoded block:
/// the result encodes `W = U·Q(D/α)·Vᵀ ≈ UVᵀ` with normalization 1 and one
/// more ancilla.
///
/// Requires `poly.delta ≤ σ_r/(3α)` for the encoded matrix, so every nonzero
/// singular value of the block lies in the certified plateau and every
/// numerically-zero one in the suppressed transition strip. The recorded
/// error combines the propagated QSVT robustness term `4m√(ε/α)` with the
/// `2ε_Q` plateau deviation of the polynomial itself.
pub fn apply_svt(be: &BlockEncoding, poly: &QsvtPolynomial) -> Result<BlockEncoding> {
    let block = be.block();
    let (u, sv, v) = crate::linalg::jacobi_svd_full(&block);

    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let sigma_min_nz = sv
        .iter()
        .cloned()
        .filter(|s| *s > DEFAULT_RANK_TOL * sigma_max)
        .fold(f64::INFINITY, f64::min);
    if sigma_max == 0.0 || !sigma_min_nz.is_finite() {
        return Err(CoreError::Degenerate(
            "cannot transform a zero block".into(),
        ));
    }
    if poly.delta > sigma_min_nz / 3.0 * (1.0 + 1e-12) {
        return Err(CoreError::param(
            "poly.delta",
            format!(
                "{} exceeds σ_r/(3α) = {}; shrink delta or the spectrum gap",
                poly.delta,
                sigma_min_nz / 3.0
            ),
        ));
    }

    // W = U diag(Q(σ)) Vᵀ over the full spectrum; numerically-zero
    // directions pass through the suppressed strip of Q.
    let mut mapped = u;
    for (k, s) in sv.iter().enumerate() {
        let q = poly.eval(*s);
        debug_assert!(q.abs() <= 1.0);
        mapped.column_mut(k).scale_mut(q);
    }
    let w = mapped * v.transpose();

    let dilated = dilate_block_encoding(&w, Some(1.0))?;
    let m = poly.degree as f64;
    let err = if be.err > 0.0 {
        4.0 * m * (be.err / be.alpha).sqrt() + 2.0 * poly.eps
    } else {
        2.0 * poly.eps
    };
    Ok(BlockEncoding {
        unitary: dilated.unitary,
        alpha: 1.0,
        ancilla_count: be.ancilla_count + 1,
        err,
        block_rows: be.block_rows,
        block_cols: be.block_cols,
    })
}

/// Precision budget linking the distribution-level target `ε̂` to the
/// operator-norm accuracy the transformed block must meet, and further down
/// to the raw block-encoding precision.
///
/// Returns `(ε̃, ε_raw)` with `ε̃ = ε̂·√(k/d)` (k = squared Frobenius mass of
/// the ideal block, i.e. the rank or statistical dimension) and
///
/// ```text
/// ε_raw = (ε̃²δ²/α) / 256 · 1 / ln²(8√α/(ε̃δ)).
/// ```
///
/// The induced ℓ₁ distribution error is then at most
/// `2(2√(dk)+dε̃)ε̃ / (k − (2√(dk)+dε̃)ε̃)`; with this ε̃ the mass term
/// satisfies `(2√(dk)+dε̃)ε̃ = (2+ε̂)·k·ε̂` exactly.
pub fn precision_budget(eps_hat: f64, delta: f64, alpha: f64, d: usize, k: f64) -> (f64, f64) {
    assert!(eps_hat > 0.0 && delta > 0.0 && alpha > 0.0 && d > 0 && k > 0.0);
    let eps_tilde = eps_hat * (k / d as f64).sqrt();
    let log_term = (8.0 * alpha.sqrt() / (eps_tilde * delta)).ln();
    let eps_raw = (eps_tilde * eps_tilde * delta * delta / alpha) / 256.0 / (log_term * log_term);
    debug_assert!({
        let mass = (2.0 * (d as f64 * k).sqrt() + d as f64 * eps_tilde) * eps_tilde;
        (mass - (2.0 + eps_hat) * k * eps_hat).abs() <= 1e-9 * mass.max(1.0)
    });
    (eps_tilde, eps_raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{polar_factor, svd};
    use crate::qsim::poly::build_sign_polynomial;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;
    use rand::Rng;

    fn opnorm(m: &DMatrix<f64>) -> f64 {
        svd(m, 1e-3).map(|f| f.sigma_max()).unwrap_or(0.0)
    }

    #[test]
    fn svt_diagonal_two_by_two() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.5]);
        let be = dilate_block_encoding(&a, Some(1.0 + 1e-12)).unwrap();
        let poly = build_sign_polynomial(1.0 / 6.0 - 1e-9, 0.01).unwrap();
        let bw = apply_svt(&be, &poly).unwrap();
        let w = bw.encoded();
        assert!(opnorm(&(w - DMatrix::identity(2, 2))) <= 0.02);
    }

    #[test]
    fn svt_identity() {
        let be = dilate_block_encoding(&DMatrix::identity(2, 2), None).unwrap();
        let poly = build_sign_polynomial(0.1, 0.005).unwrap();
        let bw = apply_svt(&be, &poly).unwrap();
        assert!(opnorm(&(bw.encoded() - DMatrix::identity(2, 2))) <= 0.01);
        assert_relative_eq!(bw.alpha, 1.0);
        assert_eq!(bw.ancilla_count, be.ancilla_count + 1);
    }

    #[test]
    fn svt_rank_one_matches_polar_factor() {
        // (1/√2)(1,1)ᵀ as a 2×1 block: W approximates the rank-1 polar
        // factor and the orthogonal directions stay within 2ε.
        let a = DMatrix::from_row_slice(2, 1, &[std::f64::consts::FRAC_1_SQRT_2; 2]);
        let f = svd(&a, 1e-10).unwrap();
        let polar = polar_factor(&f).unwrap();
        let be = dilate_block_encoding(&a, None).unwrap();
        let poly = build_sign_polynomial(0.16, 0.01).unwrap();
        let bw = apply_svt(&be, &poly).unwrap();
        assert!(opnorm(&(bw.encoded() - polar)) <= 0.02);
    }

    #[test]
    fn svt_rejects_wide_transition() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.05]);
        let be = dilate_block_encoding(&a, Some(1.0)).unwrap();
        let poly = build_sign_polynomial(0.1, 0.01).unwrap();
        assert!(matches!(
            apply_svt(&be, &poly),
            Err(CoreError::InvalidParameter { .. })
        ));
    }

    #[test]
    fn svt_fidelity_random_spectra() {
        let mut rng = crate::rng::stream_rng(22, 0);
        for trial in 0..30 {
            let n = 2 + rng.random_range(0..5);
            let d = 2 + rng.random_range(0..5);
            let r = 1 + rng.random_range(0..n.min(d));
            let left = DMatrix::from_fn(n, r, |_, _| rng.random::<f64>() - 0.5);
            let right = DMatrix::from_fn(r, d, |_, _| rng.random::<f64>() - 0.5);
            let a = left * right;
            let f = svd(&a, 1e-10).unwrap();
            if f.is_degenerate() {
                continue;
            }
            let be = dilate_block_encoding(&a, None).unwrap();
            let delta = (f.sigma_min() / be.alpha / 3.0).min(1.0 / 6.0 - 1e-9);
            let poly = build_sign_polynomial(delta, 0.01).unwrap();
            let bw = apply_svt(&be, &poly).unwrap();
            let polar = polar_factor(&f).unwrap();
            let dev = opnorm(&(bw.encoded() - polar));
            assert!(dev <= 0.02, "trial {trial}: deviation {dev}");
        }
    }

    #[test]
    fn budget_examples() {
        let (tilde, raw) = precision_budget(0.1, 0.1, 1.0, 4, 4.0);
        assert_relative_eq!(tilde, 0.1, epsilon = 1e-15);
        assert!(raw > 0.0 && raw < tilde);

        let (tilde, _) = precision_budget(0.1, 0.1, 1.0, 100, 1.0);
        assert_relative_eq!(tilde, 0.01, epsilon = 1e-15);
    }

    #[test]
    fn budget_mass_identity_over_sweep() {
        // (2√(dk)+dε̃)ε̃ = (2+ε̂)kε̂ for ε̃ = ε̂√(k/d), over a parameter sweep.
        let mut checked = 0;
        for eh in [0.01, 0.05, 0.1, 0.3] {
            for d in [2usize, 10, 100, 1000] {
                for kf in [0.1, 0.5, 1.0] {
                    let k = kf * d as f64;
                    let (tilde, _) = precision_budget(eh, 0.05, 2.0, d, k);
                    let mass = (2.0 * (d as f64 * k).sqrt() + d as f64 * tilde) * tilde;
                    let expect = (2.0 + eh) * k * eh;
                    assert!((mass - expect).abs() <= 1e-9 * expect);
                    checked += 1;
                }
            }
        }
        assert!(checked >= 16);
    }
}
