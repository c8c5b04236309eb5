//! Exact dense linear algebra: rank-revealing SVD, leverage scores, the
//! extended (regularized) matrix and its closed-form SVD, and the statistical
//! dimension.
//!
//! Everything here is deterministic and pure; the randomized pipelines in the
//! other modules are tested against these routines as oracles.
//!
//! Conventions: for a rank-`r` matrix `A = U D Vᵀ` the row leverage scores
//! are the squared row norms of `U`, the column scores the squared row norms
//! of `V`; both sum to `r`. The matrix `U Vᵀ` (the closest isometry to `A` in
//! the polar decomposition) reproduces both score families through its row
//! and column norms, which is what the simulator in [`crate::qsim`] exploits.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{CoreError, Result};

/// Relative threshold under which singular values are treated as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

/// Compensated (Neumaier) summation. Score totals and probability masses are
/// checked against tight tolerances, so plain left-to-right summation is not
/// good enough.
pub(crate) fn kahan_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub(crate) fn validate_matrix(a: &DMatrix<f64>) -> Result<()> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(CoreError::InvalidInput("empty matrix".into()));
    }
    if !a.iter().all(|x| x.is_finite()) {
        return Err(CoreError::InvalidInput(
            "matrix contains non-finite entries".into(),
        ));
    }
    Ok(())
}

/// Rank-revealing singular value decomposition `A = U diag(σ) Vᵀ`.
///
/// `u` is n×r and `v` is d×r with orthonormal columns; `singulars` is sorted
/// descending and contains only values above `rank_tol · σ₁`. A zero matrix
/// yields `r = 0` (empty factors), the degenerate case downstream code must
/// handle explicitly.
#[derive(Debug, Clone)]
pub struct SvdFactors {
    pub u: DMatrix<f64>,
    pub singulars: Vec<f64>,
    pub v: DMatrix<f64>,
    pub rank_tol: f64,
}

impl SvdFactors {
    pub fn rank(&self) -> usize {
        self.singulars.len()
    }

    pub fn is_degenerate(&self) -> bool {
        self.singulars.is_empty()
    }

    /// Largest singular value (the spectral norm), 0 for the zero matrix.
    pub fn sigma_max(&self) -> f64 {
        self.singulars.first().copied().unwrap_or(0.0)
    }

    /// Smallest retained singular value, 0 for the zero matrix.
    pub fn sigma_min(&self) -> f64 {
        self.singulars.last().copied().unwrap_or(0.0)
    }

    /// `U diag(σ) Vᵀ`.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut ud = self.u.clone();
        for (j, s) in self.singulars.iter().enumerate() {
            ud.column_mut(j).scale_mut(*s);
        }
        ud * self.v.transpose()
    }
}

/// Which family a [`ScoreVector`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScoreKind {
    Row,
    Column,
    RidgeRow,
}

/// Leverage scores of one family, together with their compensated total.
///
/// For exact row/column scores the total equals the numerical rank; for
/// ridge-row scores it equals the statistical dimension. `degenerate` marks
/// the all-zero vector produced by a rank-zero input.
#[derive(Debug, Clone, Serialize)]
pub struct ScoreVector {
    pub scores: Vec<f64>,
    pub total: f64,
    pub kind: ScoreKind,
    pub degenerate: bool,
}

impl ScoreVector {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

/// A normalized sampling distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    /// Validates non-negativity and normalization to 1 within 1e-12.
    pub fn from_probs(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(CoreError::InvalidInput("empty distribution".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(CoreError::InvalidInput(
                "distribution entries must be finite and non-negative".into(),
            ));
        }
        let total = kahan_sum(probs.iter().copied());
        if (total - 1.0).abs() > 1e-12 {
            return Err(CoreError::InvalidInput(format!(
                "distribution sums to {total}, expected 1 within 1e-12"
            )));
        }
        Ok(Distribution { probs })
    }

    /// Normalizes a score vector into the distribution `p_i = score_i / total`.
    pub fn from_scores(scores: &ScoreVector) -> Result<Self> {
        if scores.degenerate || scores.total <= 0.0 {
            return Err(CoreError::Degenerate(
                "cannot normalize scores with zero total".into(),
            ));
        }
        let probs: Vec<f64> = scores.scores.iter().map(|s| s / scores.total).collect();
        Self::from_probs(probs)
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Full (untruncated) SVD by one-sided Jacobi rotations: `a = U Σ Vᵀ` with
/// `U` n×m, `Σ` length m = min(n, d), `V` d×m, singular values descending.
/// Columns of `U` belonging to (numerically) zero singular values are zero.
///
/// One-sided Jacobi keeps full relative accuracy on rank-deficient input,
/// which the general bidiagonalization path does not guarantee — mis-paired
/// factors on matrices with zero singular values are exactly the failure this
/// replaces.
pub(crate) fn jacobi_svd_full(a: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>, DMatrix<f64>) {
    let (n, d) = a.shape();
    if n < d {
        let (u, sigma, v) = jacobi_svd_full(&a.transpose());
        return (v, sigma, u);
    }
    // n ≥ d: rotate columns of W = A·V until pairwise orthogonal, so W = UΣ.
    let mut w = a.clone();
    let mut v = DMatrix::<f64>::identity(d, d);
    let frob2 = w.norm_squared().max(f64::MIN_POSITIVE);
    let tol = 1e-15;
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..d {
            for q in (p + 1)..d {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..n {
                    let (wp, wq) = (w[(i, p)], w[(i, q)]);
                    alpha += wp * wp;
                    beta += wq * wq;
                    gamma += wp * wq;
                }
                if gamma.abs() <= tol * (alpha * beta).sqrt().max(tol * frob2) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..n {
                    let (wp, wq) = (w[(i, p)], w[(i, q)]);
                    w[(i, p)] = c * wp - s * wq;
                    w[(i, q)] = s * wp + c * wq;
                }
                for i in 0..d {
                    let (vp, vq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    // Extract norms, sort descending (ties by index), normalize.
    let mut order: Vec<(f64, usize)> = (0..d).map(|j| (w.column(j).norm(), j)).collect();
    order.sort_by(|(s1, i1), (s2, i2)| s2.partial_cmp(s1).unwrap().then(i1.cmp(i2)));
    let sigma_max = order.first().map(|(s, _)| *s).unwrap_or(0.0);
    let mut u = DMatrix::zeros(n, d);
    let mut v_sorted = DMatrix::zeros(d, d);
    let mut sigma = Vec::with_capacity(d);
    for (out, (s, src)) in order.into_iter().enumerate() {
        sigma.push(s);
        v_sorted.column_mut(out).copy_from(&v.column(src));
        // Directions with negligible mass carry no reliable sign; leave the
        // corresponding U column zero instead of normalizing noise.
        if s > sigma_max * 1e-30 {
            let col = w.column(src) / s;
            u.column_mut(out).copy_from(&col);
        }
    }
    (u, sigma, v_sorted)
}

/// Rank-revealing SVD with singular values sorted descending and truncated at
/// `rank_tol · σ₁`.
///
/// `rank_tol` must lie in `(0, 1e-3]`; use [`DEFAULT_RANK_TOL`] unless the
/// spectrum is known to need something looser.
pub fn svd(a: &DMatrix<f64>, rank_tol: f64) -> Result<SvdFactors> {
    validate_matrix(a)?;
    if !(rank_tol > 0.0 && rank_tol <= 1e-3) {
        return Err(CoreError::param(
            "rank_tol",
            format!("{rank_tol} outside (0, 1e-3]"),
        ));
    }
    let (n, d) = a.shape();
    let (u_full, sv, v_full) = jacobi_svd_full(a);

    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let cutoff = rank_tol * sigma_max;
    let r = sv.iter().take_while(|s| **s > cutoff && **s > 0.0).count();

    let mut u = DMatrix::zeros(n, r);
    let mut v = DMatrix::zeros(d, r);
    for j in 0..r {
        u.column_mut(j).copy_from(&u_full.column(j));
        v.column_mut(j).copy_from(&v_full.column(j));
    }
    Ok(SvdFactors {
        u,
        singulars: sv[..r].to_vec(),
        v,
        rank_tol,
    })
}

/// The closest isometry `U Vᵀ` to the decomposed matrix.
pub fn polar_factor(f: &SvdFactors) -> Result<DMatrix<f64>> {
    if f.is_degenerate() {
        return Err(CoreError::Degenerate(
            "polar factor of a rank-zero matrix is undefined".into(),
        ));
    }
    Ok(&f.u * f.v.transpose())
}

fn squared_row_norms(m: &DMatrix<f64>) -> Vec<f64> {
    (0..m.nrows())
        .map(|i| kahan_sum(m.row(i).iter().map(|x| x * x)))
        .collect()
}

/// Row leverage scores: squared row norms of `U`. Sum to the numerical rank.
pub fn row_leverage_scores(f: &SvdFactors) -> ScoreVector {
    let scores = squared_row_norms(&f.u);
    let total = kahan_sum(scores.iter().copied());
    ScoreVector {
        scores,
        total,
        kind: ScoreKind::Row,
        degenerate: f.is_degenerate(),
    }
}

/// Column leverage scores: squared row norms of `V`. Sum to the numerical rank.
pub fn col_leverage_scores(f: &SvdFactors) -> ScoreVector {
    let scores = squared_row_norms(&f.v);
    let total = kahan_sum(scores.iter().copied());
    ScoreVector {
        scores,
        total,
        kind: ScoreKind::Column,
        degenerate: f.is_degenerate(),
    }
}

/// The stacked matrix `(A; λ I_d)`, which is full column rank for any λ > 0.
pub fn extended_matrix(a: &DMatrix<f64>, lambda: f64) -> Result<DMatrix<f64>> {
    validate_matrix(a)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(CoreError::param("lambda", format!("{lambda} must be > 0")));
    }
    let (n, d) = a.shape();
    let mut out = DMatrix::zeros(n + d, d);
    out.view_mut((0, 0), (n, d)).copy_from(a);
    for j in 0..d {
        out[(n + j, j)] = lambda;
    }
    Ok(out)
}

/// Closed-form SVD of the stacked matrix `(A; λI)`.
///
/// With `A = U D Vᵀ` (compact factors completed to a full right basis when
/// `r < d`), the stack factors as `Ũ Σ⁻¹ Vᵀ` where `Σ = (DᵀD + λ²I)^{-1/2}`
/// and
///
/// ```text
/// Ũ = ( U D Σ )
///     ( λ V Σ )
/// ```
///
/// `sigma` holds the diagonal of `Σ`; the singular values of the stack are
/// the reciprocals `√(σᵢ² + λ²)`.
#[derive(Debug, Clone)]
pub struct ExtendedSvd {
    /// (n+d)×d, orthonormal columns.
    pub u_tilde: DMatrix<f64>,
    /// Diagonal of `Σ = (DᵀD + λ²I)^{-1/2}`, length d.
    pub sigma: Vec<f64>,
    /// d×d orthogonal right factor (completed basis).
    pub v: DMatrix<f64>,
}

impl ExtendedSvd {
    /// Singular values of the stacked matrix, descending.
    pub fn stack_singulars(&self) -> Vec<f64> {
        self.sigma.iter().map(|s| 1.0 / s).collect()
    }

    /// `Ũ Σ⁻¹ Vᵀ`, which must reproduce the stack.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let mut us = self.u_tilde.clone();
        for (j, s) in self.sigma.iter().enumerate() {
            us.column_mut(j).scale_mut(1.0 / s);
        }
        us * self.v.transpose()
    }
}

/// Completes the orthonormal columns of `v` (d×r) to a full d×d orthogonal
/// basis by Gram-Schmidt over the standard basis, deterministically.
fn complete_orthonormal_basis(v: &DMatrix<f64>) -> DMatrix<f64> {
    let d = v.nrows();
    let r = v.ncols();
    let mut basis: Vec<DVector<f64>> = (0..r).map(|j| v.column(j).into_owned()).collect();
    let mut cand = 0;
    while basis.len() < d {
        assert!(cand < d, "basis completion ran out of candidates");
        let mut w = DVector::zeros(d);
        w[cand] = 1.0;
        // Two Gram-Schmidt passes keep orthogonality near machine precision.
        for _ in 0..2 {
            for b in &basis {
                let coeff = b.dot(&w);
                w.axpy(-coeff, b, 1.0);
            }
        }
        let norm = w.norm();
        if norm > 1e-8 {
            basis.push(w / norm);
        }
        cand += 1;
    }
    DMatrix::from_columns(&basis)
}

/// SVD of `(A; λI)` from the factors of `A`; see [`ExtendedSvd`].
///
/// The compact factors are extended internally: `V` is completed to a square
/// basis and the spectrum padded with zeros, so the formula is well defined
/// for rank-deficient `A`.
pub fn extended_svd(f: &SvdFactors, lambda: f64) -> Result<ExtendedSvd> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(CoreError::param("lambda", format!("{lambda} must be > 0")));
    }
    let n = f.u.nrows();
    let d = f.v.nrows();
    let r = f.rank();
    let v_full = if r == d {
        f.v.clone()
    } else {
        complete_orthonormal_basis(&f.v)
    };
    let mut sigma = Vec::with_capacity(d);
    let mut u_tilde = DMatrix::zeros(n + d, d);
    for j in 0..d {
        let s = if j < r { f.singulars[j] } else { 0.0 };
        let scale = 1.0 / (s * s + lambda * lambda).sqrt();
        sigma.push(scale);
        if j < r {
            // Top block column: σ_j Σ_j · u_j.
            let coeff = s * scale;
            for i in 0..n {
                u_tilde[(i, j)] = coeff * f.u[(i, j)];
            }
        }
        // Bottom block column: λ Σ_j · v_j.
        let coeff = lambda * scale;
        for i in 0..d {
            u_tilde[(n + i, j)] = coeff * v_full[(i, j)];
        }
    }
    Ok(ExtendedSvd {
        u_tilde,
        sigma,
        v: v_full,
    })
}

/// Statistical dimension `sd_λ = Σ σᵢ²/(σᵢ² + λ²)`.
///
/// Equals the rank at λ = 0 and decreases monotonically in λ.
pub fn statistical_dimension(singulars: &[f64], lambda: f64) -> Result<f64> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(CoreError::param("lambda", format!("{lambda} must be ≥ 0")));
    }
    if lambda == 0.0 {
        return Ok(singulars.len() as f64);
    }
    Ok(kahan_sum(singulars.iter().map(|s| {
        let s2 = s * s;
        s2 / (s2 + lambda * lambda)
    })))
}

/// Ridge leverage scores: squared row norms of `Û = U D (DᵀD + λ²I)^{-1/2}`,
/// the top block of the extended matrix's left factor. Sum to `sd_λ(A)` and
/// recover the plain row scores as λ → 0 on full-column-rank input.
pub fn ridge_row_scores(a: &DMatrix<f64>, lambda: f64) -> Result<ScoreVector> {
    validate_matrix(a)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(CoreError::param("lambda", format!("{lambda} must be > 0")));
    }
    let f = svd(a, DEFAULT_RANK_TOL)?;
    let weights: Vec<f64> = f
        .singulars
        .iter()
        .map(|s| {
            let s2 = s * s;
            s2 / (s2 + lambda * lambda)
        })
        .collect();
    let scores: Vec<f64> = (0..a.nrows())
        .map(|i| {
            kahan_sum(
                weights
                    .iter()
                    .enumerate()
                    .map(|(j, w)| w * f.u[(i, j)] * f.u[(i, j)]),
            )
        })
        .collect();
    let total = kahan_sum(scores.iter().copied());
    Ok(ScoreVector {
        scores,
        total,
        kind: ScoreKind::RidgeRow,
        degenerate: f.is_degenerate(),
    })
}

/// Outcome of the sorted-score tail check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailCheck {
    /// The sorted score at index ⌈r/ε⌉ is at least ε/2n.
    Holds { score_at_index: f64, bound: f64 },
    /// The bound fails at that index.
    Fails { score_at_index: f64, bound: f64 },
    /// ε lies outside `[r/n − ε/2n, 1 − ε/2n]`, or ⌈r/ε⌉ exceeds n.
    AssumptionViolated,
}

impl TailCheck {
    pub fn holds(&self) -> bool {
        matches!(self, TailCheck::Holds { .. })
    }
}

/// Checks the tail lower bound on sorted row leverage scores: under the
/// assumption `r/n − ε/2n ≤ ε ≤ 1 − ε/2n`, the ⌈r/ε⌉-th largest score is at
/// least `ε/2n`.
///
/// Requires exact row scores. The assumption range is checked first and an
/// index past `n` also reports [`TailCheck::AssumptionViolated`] rather than
/// an error. Sorting is descending with ties broken by original index.
pub fn score_tail_check(scores: &ScoreVector, eps: f64) -> Result<TailCheck> {
    if scores.kind != ScoreKind::Row {
        return Err(CoreError::param("scores", "expected row leverage scores"));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(CoreError::param("eps", format!("{eps} outside (0, 1]")));
    }
    if scores.degenerate {
        return Err(CoreError::Degenerate("rank-zero score vector".into()));
    }
    let n = scores.len() as f64;
    let r = scores.total.round();
    let half = eps / (2.0 * n);
    if !(r / n - half <= eps && eps <= 1.0 - half) {
        return Ok(TailCheck::AssumptionViolated);
    }
    let index = (r / eps).ceil() as usize; // 1-based
    if index == 0 || index > scores.len() {
        return Ok(TailCheck::AssumptionViolated);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&i, &j| {
        scores.scores[j]
            .partial_cmp(&scores.scores[i])
            .unwrap()
            .then(i.cmp(&j))
    });
    let score_at_index = scores.scores[order[index - 1]];
    if score_at_index >= half {
        Ok(TailCheck::Holds {
            score_at_index,
            bound: half,
        })
    } else {
        Ok(TailCheck::Fails {
            score_at_index,
            bound: half,
        })
    }
}
