//! Solver run reports.

use nalgebra::DVector;
use serde::Serialize;
use std::collections::BTreeMap;

/// Where the sampling probabilities came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScoreMode {
    Exact,
    Sketched,
    QuantumSim,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SampleCounts {
    /// Row draws.
    pub q: usize,
    /// Column draws (0 when the pipeline has no column stage).
    pub c: usize,
}

/// Outcome of one solver run.
///
/// `objective` is measured in the metric whose `(1+ε)` bound the algorithm
/// guarantees: the residual norm for least squares, the full regularized
/// objective `‖Ax−b‖² + λ²‖x‖²` for ridge. `ratio` divides it by the exact
/// optimum when that reference is computable and nonzero.
#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    pub objective: f64,
    pub reference_objective: Option<f64>,
    pub ratio: Option<f64>,
    pub samples_used: SampleCounts,
    pub score_mode: ScoreMode,
    pub seed: u64,
    pub cost_counters: BTreeMap<String, u64>,
    /// Instantiated asymptotic cost expression, reported only (never timed).
    pub theoretical_cost: Option<String>,
    pub warnings: Vec<String>,
}

impl SolveReport {
    pub fn solution_vector(&self) -> DVector<f64> {
        DVector::from_vec(self.solution.clone())
    }

    /// Ratio is `None` when the reference optimum is (numerically) zero.
    pub(crate) fn ratio_of(objective: f64, reference: f64, scale: f64) -> Option<f64> {
        if reference > 1e-12 * scale.max(1.0) {
            Some(objective / reference)
        } else {
            None
        }
    }
}
