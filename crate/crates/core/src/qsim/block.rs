//! Block-encodings as explicit unitary dilations.
//!
//! A `(α, a, ε)` block-encoding of `A` is a unitary whose top-left corner is
//! `A/α` up to error `ε/α`. The simulator realizes one exactly through the
//! standard dilation
//!
//! ```text
//! U = ( A/α                (I − AAᵀ/α²)^{1/2} )
//!     ( (I − AᵀA/α²)^{1/2}      −Aᵀ/α        )
//! ```
//!
//! on the input zero-padded to the square size N = max(n, d). The square
//! roots are rank-r corrections of the identity, so building the 2N×2N
//! unitary costs O(N²r), not O(N³).

use nalgebra::DMatrix;

use crate::error::{CoreError, Result};
use crate::linalg::{extended_matrix, svd, validate_matrix, DEFAULT_RANK_TOL};

/// Explicit dilations refuse padded sizes beyond this; the 2N×2N unitary is
/// materialized in memory.
pub const MAX_SIM_DIM: usize = 4096;

/// A unitary whose rescaled top-left block encodes a matrix.
#[derive(Debug, Clone)]
pub struct BlockEncoding {
    /// The full dilation unitary (real orthogonal).
    pub unitary: DMatrix<f64>,
    /// Normalization: the encoded matrix is `alpha ×` the top-left block.
    pub alpha: f64,
    /// Ancilla count the circuit realization would use.
    pub ancilla_count: usize,
    /// Operator-norm error of the encoding.
    pub err: f64,
    /// Rows of the encoded block (before padding).
    pub block_rows: usize,
    /// Columns of the encoded block (before padding).
    pub block_cols: usize,
}

impl BlockEncoding {
    /// Side length of the unitary.
    pub fn dim(&self) -> usize {
        self.unitary.nrows()
    }

    /// The top-left `block_rows × block_cols` corner.
    pub fn block(&self) -> DMatrix<f64> {
        self.unitary
            .view((0, 0), (self.block_rows, self.block_cols))
            .into_owned()
    }

    /// `alpha ·` block: the matrix this unitary encodes.
    pub fn encoded(&self) -> DMatrix<f64> {
        self.block() * self.alpha
    }

    /// Encoding of the transposed matrix; the transpose of an orthogonal
    /// dilation is itself an orthogonal dilation with the corner transposed.
    pub fn transpose(&self) -> BlockEncoding {
        BlockEncoding {
            unitary: self.unitary.transpose(),
            alpha: self.alpha,
            ancilla_count: self.ancilla_count,
            err: self.err,
            block_rows: self.block_cols,
            block_cols: self.block_rows,
        }
    }

    /// Power-iteration estimate of ‖UᵀU − I‖ (operator norm). Uses matrix ×
    /// vector products only, so it is usable at full simulation size.
    pub fn unitarity_defect(&self, iters: usize) -> f64 {
        let n = self.dim();
        let mut v = nalgebra::DVector::from_fn(n, |i, _| ((i % 7) as f64 - 3.0) / 3.0 + 0.5);
        let mut norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        v /= norm;
        let mut estimate = 0.0;
        for _ in 0..iters {
            // w = (UᵀU − I) v, symmetric, so power iteration gives |λ|max.
            let w = self.unitary.transpose() * (&self.unitary * &v) - &v;
            norm = w.norm();
            if norm < 1e-300 {
                return 0.0;
            }
            estimate = norm;
            v = w / norm;
        }
        estimate
    }
}

/// Exact block-encoding of `A` by unitary dilation.
///
/// `alpha` defaults to `‖A‖(1 + 1e-12)` and must be at least `‖A‖`, otherwise
/// the dilation square roots do not exist. One ancilla (the dilation
/// doubling) over the padded square space.
pub fn dilate_block_encoding(a: &DMatrix<f64>, alpha: Option<f64>) -> Result<BlockEncoding> {
    validate_matrix(a)?;
    let (n, d) = a.shape();
    let size = n.max(d);
    if size > MAX_SIM_DIM {
        return Err(CoreError::SizeLimit(format!(
            "padded dimension {size} exceeds the {MAX_SIM_DIM} dilation guard"
        )));
    }
    let f = svd(a, DEFAULT_RANK_TOL)?;
    let sigma_max = f.sigma_max();
    let alpha = match alpha {
        Some(given) => {
            if !(given > 0.0 && given.is_finite()) {
                return Err(CoreError::param("alpha", format!("{given} must be > 0")));
            }
            if given < sigma_max * (1.0 - 1e-12) {
                return Err(CoreError::param(
                    "alpha",
                    format!("{given} below the spectral norm {sigma_max}"),
                ));
            }
            given
        }
        None => {
            if sigma_max == 0.0 {
                1.0
            } else {
                sigma_max * (1.0 + 1e-12)
            }
        }
    };

    let mut unitary = DMatrix::zeros(2 * size, 2 * size);

    // Top-left: padded A/α. Bottom-right: −(padded A)ᵀ/α.
    for i in 0..n {
        for j in 0..d {
            unitary[(i, j)] = a[(i, j)] / alpha;
            unitary[(size + j, size + i)] = -a[(i, j)] / alpha;
        }
    }

    // (I − Â Âᵀ/α²)^{1/2} = I − U diag(1 − √(1−(σ/α)²)) Uᵀ, and likewise on
    // the right side with V; only the r nonzero directions deviate from I.
    let gaps: Vec<f64> = f
        .singulars
        .iter()
        .map(|s| {
            let ratio = (s / alpha).min(1.0);
            1.0 - (1.0 - ratio * ratio).max(0.0).sqrt()
        })
        .collect();
    for i in 0..size {
        unitary[(i, size + i)] += 1.0;
        unitary[(size + i, i)] += 1.0;
    }
    for (k, gap) in gaps.iter().enumerate() {
        if *gap == 0.0 {
            continue;
        }
        for i in 0..n {
            let ui = f.u[(i, k)] * gap;
            for j in 0..n {
                unitary[(i, size + j)] -= ui * f.u[(j, k)];
            }
        }
        for i in 0..d {
            let vi = f.v[(i, k)] * gap;
            for j in 0..d {
                unitary[(size + i, j)] -= vi * f.v[(j, k)];
            }
        }
    }

    Ok(BlockEncoding {
        unitary,
        alpha,
        ancilla_count: 1,
        err: 0.0,
        block_rows: n,
        block_cols: d,
    })
}

/// Encoding of the stacked matrix `(A; λI)` from an encoding of `A`, with
/// normalization `α + λ`, two more ancillas, and unchanged error.
pub fn extend_block_encoding(be: &BlockEncoding, lambda: f64) -> Result<BlockEncoding> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(CoreError::param("lambda", format!("{lambda} must be > 0")));
    }
    let a = be.encoded();
    let ext = extended_matrix(&a, lambda)?;
    // ‖(A; λI)‖ = √(σ₁² + λ²) ≤ α + λ, so the dilation below always exists.
    let dilated = dilate_block_encoding(&ext, Some(be.alpha + lambda))?;
    Ok(BlockEncoding {
        unitary: dilated.unitary,
        alpha: be.alpha + lambda,
        ancilla_count: be.ancilla_count + 2,
        err: be.err,
        block_rows: ext.nrows(),
        block_cols: ext.ncols(),
    })
}
