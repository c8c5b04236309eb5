//! Test-instance generation, including the adversarial fixtures whose exact
//! solutions are known in closed form.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use lvs_core::{row_leverage_scores, svd, Rng64, DEFAULT_RANK_TOL};

use crate::{HarnessError, Result};

/// What to generate. `File` kinds are loaded through [`crate::io`] instead.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InstanceSpec {
    /// n×d of exact rank r with singular values `decay^i` and Gaussian
    /// singular-vector frames; `b = A·x₀ + noise`.
    RandomLowrank {
        n: usize,
        d: usize,
        r: usize,
        decay: f64,
    },
    /// Tall Gaussian matrix with one planted row carrying leverage ≥ 0.9.
    Coherent { n: usize, d: usize },
    /// Diagonal 0/1 indicator matrix: row scores are exactly the indicator.
    DiagSearch {
        n: usize,
        weight: usize,
        /// Explicit support; random when absent.
        #[serde(skip_serializing_if = "Option::is_none")]
        support: Option<Vec<usize>>,
    },
    /// (n+1)×2 membership instance: solution is (1,0) when the indicator is
    /// empty and (1,1) otherwise.
    Existence { n: usize, weight: usize },
    /// n×1 uniform column with a planted spike in b: the optimal value is
    /// exactly √(n−1) when one index is marked.
    Spike { n: usize, marked: usize },
}

pub struct Instance {
    pub matrix: DMatrix<f64>,
    pub rhs: Option<DVector<f64>>,
}

fn orthonormal(n: usize, r: usize, rng: &mut Rng64) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, r, |_, _| rng.sample::<f64, _>(StandardNormal));
    g.qr().q()
}

fn pick_support(n: usize, weight: usize, rng: &mut Rng64) -> Vec<usize> {
    let mut indices: Vec<usize> = (0..n).collect();
    for i in 0..weight.min(n) {
        let j = i + rng.random_range(0..(n - i));
        indices.swap(i, j);
    }
    let mut chosen = indices[..weight.min(n)].to_vec();
    chosen.sort_unstable();
    chosen
}

/// Generates the instance; the returned matrices satisfy the kind's declared
/// structure exactly (rank, scores, closed-form optima).
pub fn generate_instance(spec: &InstanceSpec, rng: &mut Rng64) -> Result<Instance> {
    match spec {
        InstanceSpec::RandomLowrank { n, d, r, decay } => {
            let (n, d, r) = (*n, *d, *r);
            if r == 0 || r > n.min(d) {
                return Err(HarnessError::Invalid(format!(
                    "rank {r} not in 1..=min({n}, {d})"
                )));
            }
            if !(*decay > 0.0 && *decay <= 1.0) {
                return Err(HarnessError::Invalid(format!(
                    "decay {decay} outside (0, 1]"
                )));
            }
            if decay.powi(r as i32 - 1) < 1e-8 {
                return Err(HarnessError::Invalid(
                    "spectrum decays below the rank tolerance; raise decay or lower r".into(),
                ));
            }
            let u = orthonormal(n, r, rng);
            let v = orthonormal(d, r, rng);
            let mut ud = u;
            for j in 0..r {
                ud.column_mut(j).scale_mut(decay.powi(j as i32));
            }
            let a = ud * v.transpose();
            let x0 = DVector::from_fn(d, |_, _| rng.sample::<f64, _>(StandardNormal));
            let noise = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
            let b = &a * x0 + noise;
            Ok(Instance {
                matrix: a,
                rhs: Some(b),
            })
        }
        InstanceSpec::Coherent { n, d } => {
            let (n, d) = (*n, *d);
            if n < d + 1 || d == 0 {
                return Err(HarnessError::Invalid(format!(
                    "coherent instances need n > d ≥ 1, got {n}×{d}"
                )));
            }
            let mut a = DMatrix::from_fn(n, d, |_, _| {
                rng.sample::<f64, _>(StandardNormal) / (n as f64).sqrt()
            });
            // Plant one dominant direction and grow it until it owns the
            // leverage mass.
            let mut scale = 10.0;
            loop {
                for j in 0..d {
                    a[(0, j)] = if j == 0 { scale } else { 0.0 };
                }
                let scores = row_leverage_scores(&svd(&a, DEFAULT_RANK_TOL)?);
                if scores.scores[0] >= 0.9 {
                    break;
                }
                scale *= 10.0;
            }
            Ok(Instance {
                matrix: a,
                rhs: None,
            })
        }
        InstanceSpec::DiagSearch { n, weight, support } => {
            let (n, weight) = (*n, *weight);
            if weight == 0 || weight > n {
                return Err(HarnessError::Invalid(format!(
                    "weight {weight} not in 1..={n}"
                )));
            }
            let support = match support {
                Some(s) => {
                    if s.len() != weight || s.iter().any(|&i| i >= n) {
                        return Err(HarnessError::Invalid(
                            "support must list `weight` indices below n".into(),
                        ));
                    }
                    s.clone()
                }
                None => pick_support(n, weight, rng),
            };
            let mut a = DMatrix::zeros(n, n);
            for &i in &support {
                a[(i, i)] = 1.0;
            }
            Ok(Instance {
                matrix: a,
                rhs: None,
            })
        }
        InstanceSpec::Existence { n, weight } => {
            let (n, weight) = (*n, *weight);
            if n == 0 || weight > n {
                return Err(HarnessError::Invalid(format!(
                    "need n ≥ 1 and weight ≤ n, got n={n}, weight={weight}"
                )));
            }
            let support = pick_support(n, weight, rng);
            let mut a = DMatrix::zeros(n + 1, 2);
            a[(0, 0)] = 1.0;
            for &i in &support {
                a[(i + 1, 1)] = 1.0;
            }
            let b = DVector::from_element(n + 1, 1.0);
            Ok(Instance {
                matrix: a,
                rhs: Some(b),
            })
        }
        InstanceSpec::Spike { n, marked } => {
            let (n, marked) = (*n, *marked);
            if n < 2 || marked == 0 || marked > n {
                return Err(HarnessError::Invalid(format!(
                    "need n ≥ 2 and 1 ≤ marked ≤ n, got n={n}, marked={marked}"
                )));
            }
            let support = pick_support(n, marked, rng);
            let inv_sqrt = 1.0 / (n as f64).sqrt();
            let a = DMatrix::from_element(n, 1, inv_sqrt);
            let mut b = DVector::from_element(n, inv_sqrt);
            for &i in &support {
                b[i] += (n as f64).sqrt();
            }
            Ok(Instance {
                matrix: a,
                rhs: Some(b),
            })
        }
    }
}
