//! ERFS: joint ℓ2,1 regression `min_W ‖XW − Y‖₂,₁ + α‖W‖₂,₁` solved by
//! iteratively reweighted least squares.

use crate::error::{dim, Error, Result};
use crate::ldr::{rank_features, RankedFeatures};
use crate::numerics::{pinv, DenseMatrix};

/// Smoothing inside both row-norm reweightings.
pub const IRLS_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErfsConfig {
    pub alpha: f64,
    pub max_iters: usize,
    pub tol: f64,
}

impl Default for ErfsConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            max_iters: 200,
            tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct ErfsModel {
    /// m×c regression matrix.
    pub w: DenseMatrix,
    pub alpha: f64,
    /// Smoothed objective after each IRLS step.
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

fn smoothed_row_norms(m: &DenseMatrix) -> Vec<f64> {
    (0..m.rows())
        .map(|i| (m.row(i).iter().map(|v| v * v).sum::<f64>() + IRLS_EPS).sqrt())
        .collect()
}

/// Exact objective `‖XW − Y‖₂,₁ + α‖W‖₂,₁`.
pub fn erfs_objective(
    x: &DenseMatrix,
    y: &DenseMatrix,
    w: &DenseMatrix,
    alpha: f64,
) -> Result<f64> {
    Ok(x.matmul(w)?.sub(y)?.l21_norm() + alpha * w.l21_norm())
}

/// The quantity IRLS decreases monotonically: both row norms smoothed by
/// [`IRLS_EPS`].
pub fn erfs_smoothed_objective(
    x: &DenseMatrix,
    y: &DenseMatrix,
    w: &DenseMatrix,
    alpha: f64,
) -> Result<f64> {
    let resid = x.matmul(w)?.sub(y)?;
    Ok(smoothed_row_norms(&resid).iter().sum::<f64>()
        + alpha * smoothed_row_norms(w).iter().sum::<f64>())
}

/// One reweighted solve `W = (XᵀD₁X + αD₂)† XᵀD₁Y` with diagonal weights
/// `d1` (per sample) and `d2` (per feature).
fn irls_solve(
    x: &DenseMatrix,
    y: &DenseMatrix,
    d1: &[f64],
    d2: &[f64],
    alpha: f64,
) -> Result<DenseMatrix> {
    let dx = DenseMatrix::from_fn(x.rows(), x.cols(), |i, j| d1[i] * x[(i, j)]);
    let dy = DenseMatrix::from_fn(y.rows(), y.cols(), |i, j| d1[i] * y[(i, j)]);
    let mut lhs = x.t_matmul(&dx)?;
    for (j, w) in d2.iter().enumerate() {
        lhs[(j, j)] += alpha * w;
    }
    // symmetrize away rounding before the pseudoinverse
    let lhs = DenseMatrix::from_fn(lhs.rows(), lhs.cols(), |i, j| {
        0.5 * (lhs[(i, j)] + lhs[(j, i)])
    });
    pinv(&lhs)?.matmul(&x.t_matmul(&dy)?)
}

/// One IRLS step from `w`.
pub fn erfs_step(
    x: &DenseMatrix,
    y: &DenseMatrix,
    w: &DenseMatrix,
    alpha: f64,
) -> Result<DenseMatrix> {
    let resid = x.matmul(w)?.sub(y)?;
    let d1: Vec<f64> = smoothed_row_norms(&resid).iter().map(|r| 0.5 / r).collect();
    let d2: Vec<f64> = smoothed_row_norms(w).iter().map(|r| 0.5 / r).collect();
    irls_solve(x, y, &d1, &d2, alpha)
}

/// Fits ERFS on sample-major `x` (n×m) and one-hot `y` (n×c).
///
/// Starts from unit weights (a ridge solve) and iterates until both the
/// relative objective change and `‖ΔW‖_F` fall below `tol`.
pub fn erfs_fit(x: &DenseMatrix, y: &DenseMatrix, cfg: &ErfsConfig) -> Result<ErfsModel> {
    if !(cfg.alpha >= 0.0) || !cfg.alpha.is_finite() {
        return Err(Error::Domain(format!(
            "alpha must be nonnegative, got {}",
            cfg.alpha
        )));
    }
    if x.rows() != y.rows() {
        return Err(dim(
            "erfs_fit",
            format!("X {:?}, Y {:?}", x.shape(), y.shape()),
        ));
    }
    let mut w = irls_solve(x, y, &vec![1.0; x.rows()], &vec![1.0; x.cols()], cfg.alpha)?;
    let mut prev = erfs_smoothed_objective(x, y, &w, cfg.alpha)?;
    let mut trace = vec![prev];
    let mut converged = false;
    let mut iterations = 0;
    for it in 0..cfg.max_iters {
        let next = erfs_step(x, y, &w, cfg.alpha)?;
        if !next.is_finite() {
            return Err(Error::Divergence {
                stage: "ERFS",
                iteration: it,
            });
        }
        let obj = erfs_smoothed_objective(x, y, &next, cfg.alpha)?;
        if !obj.is_finite() {
            return Err(Error::Divergence {
                stage: "ERFS",
                iteration: it,
            });
        }
        let moved = next.sub(&w)?.frobenius_norm();
        let rel = (prev - obj).abs() / prev.abs().max(f64::MIN_POSITIVE);
        w = next;
        trace.push(obj);
        prev = obj;
        iterations = it + 1;
        if rel <= cfg.tol && moved <= cfg.tol {
            converged = true;
            break;
        }
    }
    Ok(ErfsModel {
        w,
        alpha: cfg.alpha,
        objective_trace: trace,
        iterations,
        converged,
    })
}

/// Ranks features by the row norms of `W`.
pub fn erfs_rank(model: &ErfsModel) -> RankedFeatures {
    rank_features(&model.w)
}
