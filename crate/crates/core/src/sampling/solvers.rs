//! Reduced-problem solvers: direct (pseudoinverse) and CGNR least squares,
//! the ridge objective, and the column-sampled ridge estimator.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{CoreError, Result};
use crate::linalg::{svd, validate_matrix, DEFAULT_RANK_TOL};
use crate::sampling::{SamplingMatrix, Side};

/// Minimum-norm least-squares solution via the SVD pseudoinverse.
pub fn solve_ls_direct(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    validate_matrix(a)?;
    if a.nrows() != b.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "A is {}×{} but b has length {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    let f = svd(a, DEFAULT_RANK_TOL)?;
    if f.is_degenerate() {
        return Ok(DVector::zeros(a.ncols()));
    }
    // x = V Σ⁻¹ Uᵀ b over the retained spectrum.
    let utb = f.u.transpose() * b;
    let mut scaled = utb;
    for (j, s) in f.singulars.iter().enumerate() {
        scaled[j] /= s;
    }
    Ok(&f.v * scaled)
}

/// Outcome of a CGNR run. Non-convergence is reported, not raised.
#[derive(Debug, Clone)]
pub struct CgnrOutcome {
    pub solution: DVector<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Final ‖Aᵀ(b − Ax)‖.
    pub normal_residual: f64,
}

/// Conjugate gradient on the normal residual equations `AᵀA x = Aᵀb`.
///
/// Stops when `‖Aᵀr‖ ≤ tol·‖Aᵀb‖` or after `maxit` iterations. Defaults used
/// by the pipelines: `tol = 1e-10`, `maxit = 10·d`.
pub fn solve_ls_cgnr(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    tol: f64,
    maxit: usize,
) -> Result<CgnrOutcome> {
    validate_matrix(a)?;
    if a.nrows() != b.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "A is {}×{} but b has length {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    if !(tol > 0.0) {
        return Err(CoreError::param("tol", format!("{tol} must be > 0")));
    }
    let d = a.ncols();
    let mut x = DVector::zeros(d);
    let mut residual = b.clone();
    let mut z = a.transpose() * &residual;
    let target = tol * z.norm();
    if z.norm() == 0.0 {
        return Ok(CgnrOutcome {
            solution: x,
            converged: true,
            iterations: 0,
            normal_residual: 0.0,
        });
    }
    let mut p = z.clone();
    let mut z_norm2 = z.norm_squared();
    let mut iterations = 0;
    while iterations < maxit && z_norm2.sqrt() > target {
        let w = a * &p;
        let denom = w.norm_squared();
        if denom == 0.0 {
            break;
        }
        let alpha = z_norm2 / denom;
        x.axpy(alpha, &p, 1.0);
        residual.axpy(-alpha, &w, 1.0);
        z = a.transpose() * &residual;
        let z_norm2_new = z.norm_squared();
        let beta = z_norm2_new / z_norm2;
        p = &z + beta * p;
        z_norm2 = z_norm2_new;
        iterations += 1;
    }
    let normal_residual = z_norm2.sqrt();
    Ok(CgnrOutcome {
        solution: x,
        converged: normal_residual <= target,
        iterations,
        normal_residual,
    })
}

/// The regularized objective `Z(x) = ‖Ax − b‖² + λ²‖x‖²`.
pub fn objective_ridge(a: &DMatrix<f64>, b: &DVector<f64>, lambda: f64, x: &DVector<f64>) -> f64 {
    assert_eq!(a.nrows(), b.len(), "objective: row count mismatch");
    assert_eq!(a.ncols(), x.len(), "objective: column count mismatch");
    let resid = a * x - b;
    resid.norm_squared() + lambda * lambda * x.norm_squared()
}

/// Power-iteration estimate of the spectral norm; deterministic start vector.
pub fn spectral_norm_estimate(a: &DMatrix<f64>, iters: usize) -> f64 {
    let d = a.ncols();
    // Slightly uneven start avoids landing exactly orthogonal to the top
    // singular direction for structured inputs.
    let mut v = DVector::from_fn(d, |i, _| 1.0 + (i as f64 + 1.0) * 1e-3);
    v /= v.norm();
    let mut estimate = 0.0;
    for _ in 0..iters {
        let w = a.transpose() * (a * &v);
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        estimate = norm.sqrt();
        v = w / norm;
    }
    estimate
}

/// The column-sampled ridge estimator `Aᵀ (A R Rᵀ Aᵀ + λ² I_n)⁻¹ b`.
///
/// `R Rᵀ` is diagonal for a column selector, so the Gram matrix is formed as
/// `A·diag·Aᵀ`. The system is solved by Cholesky — directly at size n when
/// n ≤ d, otherwise through the Woodbury identity via the d×d companion
/// system, which is algebraically the same vector.
pub fn ridge_estimator(
    a: &DMatrix<f64>,
    r: &SamplingMatrix,
    b: &DVector<f64>,
    lambda: f64,
) -> Result<DVector<f64>> {
    validate_matrix(a)?;
    if r.side != Side::Column {
        return Err(CoreError::param("sampler", "expected a column sampler"));
    }
    if r.ambient != a.ncols() {
        return Err(CoreError::DimensionMismatch(format!(
            "column sampler over {} columns applied to {}×{} matrix",
            r.ambient,
            a.nrows(),
            a.ncols()
        )));
    }
    if a.nrows() != b.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "A is {}×{} but b has length {}",
            a.nrows(),
            a.ncols(),
            b.len()
        )));
    }
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(CoreError::param("lambda", format!("{lambda} must be ≥ 0")));
    }
    let (n, d) = a.shape();
    let lam2 = lambda * lambda;

    // diag(R Rᵀ): summed squared weights per selected column.
    let mut diag = vec![0.0f64; d];
    for &(j, w) in &r.draws {
        diag[j] += w * w;
    }

    if n <= d || lambda == 0.0 {
        let mut ad = a.clone();
        for (j, &dj) in diag.iter().enumerate() {
            ad.column_mut(j).scale_mut(dj);
        }
        let mut gram = ad * a.transpose();
        for i in 0..n {
            gram[(i, i)] += lam2;
        }
        let chol = Cholesky::new(gram).ok_or_else(|| {
            CoreError::IllPosed(
                "A·RRᵀ·Aᵀ + λ²I is not positive definite (λ = 0 with rank-deficient sample?)"
                    .into(),
            )
        })?;
        let y = chol.solve(b);
        Ok(a.transpose() * y)
    } else {
        // Woodbury: (λ²I + BBᵀ)⁻¹ b = (b − B (λ²I + BᵀB)⁻¹ Bᵀ b) / λ²
        // with B = A·diag^{1/2}.
        let mut bmat = a.clone();
        for (j, &dj) in diag.iter().enumerate() {
            bmat.column_mut(j).scale_mut(dj.sqrt());
        }
        let mut small = bmat.transpose() * &bmat;
        for j in 0..d {
            small[(j, j)] += lam2;
        }
        let chol = Cholesky::new(small)
            .ok_or_else(|| CoreError::IllPosed("companion system not positive definite".into()))?;
        let btb = bmat.transpose() * b;
        let inner = chol.solve(&btb);
        let y = (b - &bmat * inner) / lam2;
        Ok(a.transpose() * y)
    }
}
