//! Importance sampling driven by leverage-score distributions, and the
//! classical randomized pipelines built on it.
//!
//! A sampling matrix `S` (rows) or `R` (columns) holds i.i.d. draws from a
//! distribution `p` together with the importance weights `1/√(q·p_i)`; with
//! exact leverage probabilities, `E[SᵀS] = I`, which is what makes the
//! reduced problems unbiased sketches of the originals.

mod algorithms;
mod report;
mod sketch;
mod solvers;

pub use algorithms::{
    algorithm1_ls, algorithm3_ridge, algorithm4_classical, sample_count_ls,
    sample_count_ridge_cols, sample_count_ridge_rows, SamplingConfig,
};
pub(crate) use algorithms::{exact_ridge_solution, solve_reduced_ls};
pub use report::{SampleCounts, ScoreMode, SolveReport};
pub use sketch::{
    approx_col_leverage_scores_sketched, approx_leverage_scores_sketched, SketchConfig,
};
pub use solvers::{
    objective_ridge, ridge_estimator, solve_ls_cgnr, solve_ls_direct, spectral_norm_estimate,
    CgnrOutcome,
};

use nalgebra::{DMatrix, DVector};
use rand::distr::weighted::WeightedIndex;
use rand::prelude::Distribution as RandDistribution;
use rand::Rng;
use serde::Serialize;

use crate::error::{CoreError, Result};
use crate::linalg::Distribution;

/// Probabilities are floored at this value before weights are formed, so a
/// sketched underestimate can never produce an infinite weight.
pub const PROB_FLOOR: f64 = 1e-15;

/// Which side of the matrix a sampler selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Row,
    Column,
}

/// Sparse row/column selector with importance weights.
///
/// Each draw `(i, w)` stands for a row `w·e_iᵀ` of `S` (respectively a column
/// `w·e_i` of `R`). Duplicate indices are kept as distinct draws; collapsing
/// them would bias the estimator.
#[derive(Debug, Clone, Serialize)]
pub struct SamplingMatrix {
    pub side: Side,
    /// Dimension of the space being sampled (n for rows, d for columns).
    pub ambient: usize,
    /// `(index, weight)` pairs, weight = 1/√(q·p_index).
    pub draws: Vec<(usize, f64)>,
}

impl SamplingMatrix {
    pub fn num_draws(&self) -> usize {
        self.draws.len()
    }

    /// The selector that picks every index exactly once with weight 1, i.e.
    /// `S = I`. Useful as the exact reference in identities and tests.
    pub fn identity_selector(side: Side, ambient: usize) -> Self {
        SamplingMatrix {
            side,
            ambient,
            draws: (0..ambient).map(|i| (i, 1.0)).collect(),
        }
    }
}

fn draw_sampler(
    dist: &Distribution,
    side: Side,
    q: usize,
    rng: &mut impl Rng,
) -> Result<SamplingMatrix> {
    if q == 0 {
        return Err(CoreError::param("q", "sample count must be ≥ 1"));
    }
    let probs = dist.probs();
    let weighted = WeightedIndex::new(probs.iter().copied())
        .map_err(|e| CoreError::Degenerate(format!("empty sampling support: {e}")))?;
    let draws = (0..q)
        .map(|_| {
            let i = weighted.sample(rng);
            let p = probs[i].max(PROB_FLOOR);
            (i, 1.0 / (q as f64 * p).sqrt())
        })
        .collect();
    Ok(SamplingMatrix {
        side,
        ambient: probs.len(),
        draws,
    })
}

/// Draws `q` i.i.d. row indices from `dist` with weights `1/√(q·p_i)`.
pub fn draw_row_sampler(
    dist: &Distribution,
    q: usize,
    rng: &mut impl Rng,
) -> Result<SamplingMatrix> {
    draw_sampler(dist, Side::Row, q, rng)
}

/// Column-side analogue of [`draw_row_sampler`].
pub fn draw_col_sampler(
    dist: &Distribution,
    c: usize,
    rng: &mut impl Rng,
) -> Result<SamplingMatrix> {
    draw_sampler(dist, Side::Column, c, rng)
}

/// Materializes `S·A` (row side) or `A·R` (column side).
pub fn apply_sampler(s: &SamplingMatrix, a: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    match s.side {
        Side::Row => {
            if s.ambient != a.nrows() {
                return Err(CoreError::DimensionMismatch(format!(
                    "row sampler over {} rows applied to {}×{} matrix",
                    s.ambient,
                    a.nrows(),
                    a.ncols()
                )));
            }
            let mut out = DMatrix::zeros(s.num_draws(), a.ncols());
            for (t, &(i, w)) in s.draws.iter().enumerate() {
                for j in 0..a.ncols() {
                    out[(t, j)] = w * a[(i, j)];
                }
            }
            Ok(out)
        }
        Side::Column => {
            if s.ambient != a.ncols() {
                return Err(CoreError::DimensionMismatch(format!(
                    "column sampler over {} columns applied to {}×{} matrix",
                    s.ambient,
                    a.nrows(),
                    a.ncols()
                )));
            }
            let mut out = DMatrix::zeros(a.nrows(), s.num_draws());
            for (t, &(j, w)) in s.draws.iter().enumerate() {
                for i in 0..a.nrows() {
                    out[(i, t)] = w * a[(i, j)];
                }
            }
            Ok(out)
        }
    }
}

/// `S·b` for a row sampler.
pub fn apply_sampler_to_vector(s: &SamplingMatrix, b: &DVector<f64>) -> Result<DVector<f64>> {
    if s.side != Side::Row {
        return Err(CoreError::param("sampler", "expected a row sampler"));
    }
    if s.ambient != b.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "row sampler over {} rows applied to vector of length {}",
            s.ambient,
            b.len()
        )));
    }
    Ok(DVector::from_iterator(
        s.num_draws(),
        s.draws.iter().map(|&(i, w)| w * b[i]),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seed_rng;
    use approx::assert_relative_eq;

    #[test]
    fn sampler_weights_uniform_two() {
        let dist = Distribution::from_probs(vec![0.5, 0.5]).unwrap();
        let mut rng = seed_rng(1);
        let s = draw_row_sampler(&dist, 2, &mut rng).unwrap();
        for &(_, w) in &s.draws {
            assert_relative_eq!(w, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn sampler_degenerate_support() {
        let dist = Distribution::from_probs(vec![1.0, 0.0]).unwrap();
        let mut rng = seed_rng(2);
        let s = draw_row_sampler(&dist, 5, &mut rng).unwrap();
        assert!(s.draws.iter().all(|&(i, _)| i == 0));
    }

    #[test]
    fn sampler_rejects_zero_draws() {
        let dist = Distribution::from_probs(vec![1.0]).unwrap();
        let mut rng = seed_rng(3);
        assert!(draw_row_sampler(&dist, 0, &mut rng).is_err());
    }

    #[test]
    fn sampler_frequencies_concentrate() {
        let dist = Distribution::from_probs(vec![0.25; 4]).unwrap();
        let mut rng = seed_rng(4);
        let s = draw_row_sampler(&dist, 10_000, &mut rng).unwrap();
        let mut counts = [0usize; 4];
        for &(i, _) in &s.draws {
            counts[i] += 1;
        }
        for c in counts {
            assert!((c as f64 / 10_000.0 - 0.25).abs() < 0.02);
        }
    }

    #[test]
    fn apply_sampler_row_examples() {
        let a = DMatrix::from_row_slice(3, 2, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let single = SamplingMatrix {
            side: Side::Row,
            ambient: 3,
            draws: vec![(1, 2.0)],
        };
        let sa = apply_sampler(&single, &a).unwrap();
        assert_eq!(sa, DMatrix::from_row_slice(1, 2, &[6.0, 8.0]));

        // Uniform q = n sampler built by hand: each row scaled by √(n/q) = 1.
        let id = SamplingMatrix::identity_selector(Side::Row, 2);
        let eye = DMatrix::identity(2, 2);
        assert_eq!(apply_sampler(&id, &eye).unwrap(), eye);
    }

    #[test]
    fn apply_sampler_column_side() {
        let a = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let r = SamplingMatrix {
            side: Side::Column,
            ambient: 3,
            draws: vec![(2, 0.5), (0, 1.0)],
        };
        let ar = apply_sampler(&r, &a).unwrap();
        assert_eq!(
            ar,
            DMatrix::from_row_slice(2, 2, &[1.5, 1.0, 3.0, 4.0])
        );
        assert!(apply_sampler(
            &SamplingMatrix {
                side: Side::Column,
                ambient: 5,
                draws: vec![(0, 1.0)]
            },
            &a
        )
        .is_err());
    }

    #[test]
    fn importance_weighting_preserves_frobenius_mass() {
        // E‖SA‖_F² = ‖A‖_F²; empirical mean over 10⁴ seeded draws within 3%.
        let mut rng = seed_rng(5);
        let a = DMatrix::from_fn(6, 3, |_, _| rng.random::<f64>() - 0.5);
        let f = crate::linalg::svd(&a, 1e-10).unwrap();
        let scores = crate::linalg::row_leverage_scores(&f);
        let dist = Distribution::from_scores(&scores).unwrap();
        let target = a.norm_squared();
        let mut acc = 0.0;
        let trials = 10_000;
        for _ in 0..trials {
            let s = draw_row_sampler(&dist, 4, &mut rng).unwrap();
            acc += apply_sampler(&s, &a).unwrap().norm_squared();
        }
        let mean = acc / trials as f64;
        assert!(
            (mean - target).abs() / target < 0.03,
            "mean {mean} vs target {target}"
        );
    }
}
