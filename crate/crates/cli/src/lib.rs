//! Harness library behind the `lvs` binary: matrix/vector file I/O, instance
//! generation (including the adversarial fixtures), distribution metrics,
//! and the acceptance-suite driver.

pub mod acceptance;
pub mod instance;
pub mod io;
pub mod report;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] lvs_core::CoreError),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

/// Total-variation distance between two distributions on the same support:
/// half the ℓ₁ distance.
pub fn tv_distance(p: &lvs_core::Distribution, q: &lvs_core::Distribution) -> Result<f64> {
    if p.len() != q.len() {
        return Err(HarnessError::Invalid(format!(
            "support sizes differ: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    Ok(l1_distance(p.probs(), q.probs()) / 2.0)
}

/// ℓ₁ distance between probability vectors (twice the total variation).
pub fn l1_distance(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum()
}
