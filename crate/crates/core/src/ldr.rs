//! Feature selection driven by a low-dimensional TSK representation.
//!
//! The optimizer alternates over five blocks of
//!
//! ```text
//! ‖(X̂P)⊙F·1 + F·p₀ − y‖² + γ‖P‖²_F + α‖XQ − X̂‖²_F + β‖Q‖₂,₁
//!     s.t. F > 0, QᵀQ = I
//! ```
//!
//! * `Q`: Lagrangian with diagonal multipliers `Λ`, reweighted `ℓ2,1` term
//!   `βZ`, solved as a Sylvester equation diagonalized by the eigenvectors of
//!   `αXᵀX + βZ` (see [`update_q`]);
//! * `F`: Adam on the barrier-augmented objective, `μ` decays by 0.99 per
//!   outer iteration;
//! * `P`, `X̂`: Adam;
//! * `p₀`: closed-form least squares through the pseudoinverse of `F`.
//!
//! Features are ranked by the row norms of the final `Q`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{dim, Error, Result};
use crate::numerics::{pinv, sym_eig, DenseMatrix};

/// Smallest admissible `σ₁ᵢ + σ₂ⱼ` in the diagonal Sylvester solve.
pub const DENOM_FLOOR: f64 = 1e-10;
/// Added under the square root of `Zᵢᵢ` so all-zero rows stay finite.
pub const Z_EPS: f64 = 1e-12;
/// Entries of `F` are clamped to at least this after every Adam step.
pub const F_FLOOR: f64 = 1e-8;
pub const MU_DECAY: f64 = 0.99;
/// Outer iterations spanned by the relative-change convergence test.
pub const CONVERGENCE_WINDOW: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct LdrConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Number of rules; `None` means one per distinct label.
    pub rules: Option<usize>,
    /// Latent dimension; `None` means ⌊m/3⌋ (at least 1).
    pub latent_dim: Option<usize>,
    pub lr_xhat: f64,
    pub lr_p: f64,
    pub lr_f: f64,
    pub lr_lambda: f64,
    pub mu0: f64,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub max_outer: usize,
    pub inner_q_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for LdrConfig {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.1,
            gamma: 1.0,
            rules: None,
            latent_dim: None,
            lr_xhat: 0.01,
            lr_p: 0.01,
            lr_f: 1e-4,
            lr_lambda: 0.1,
            mu0: 0.5,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            max_outer: 500,
            inner_q_iters: 2,
            tol: 1e-5,
            seed: 0,
        }
    }
}

/// Hyperparameter grid used by the evaluation harness.
pub const PARAM_GRID: [f64; 5] = [0.01, 0.1, 1.0, 10.0, 100.0];

impl LdrConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        if !(self.mu0 > 0.0 && self.mu0 < 1.0) {
            return Err(Error::Domain(format!(
                "mu0 must lie in (0, 1), got {}",
                self.mu0
            )));
        }
        for (name, v) in [
            ("lr_xhat", self.lr_xhat),
            ("lr_p", self.lr_p),
            ("lr_f", self.lr_f),
            ("lr_lambda", self.lr_lambda),
            ("adam_eps", self.adam_eps),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(0.0..1.0).contains(&self.adam_beta1) || !(0.0..1.0).contains(&self.adam_beta2) {
            return Err(Error::Domain("Adam decay rates must lie in [0, 1)".into()));
        }
        if self.rules == Some(0) || self.latent_dim == Some(0) {
            return Err(Error::Size("rules and latent_dim must be positive".into()));
        }
        Ok(())
    }

    /// True when α, β and γ all sit on [`PARAM_GRID`].
    pub fn on_grid(&self) -> bool {
        [self.alpha, self.beta, self.gamma]
            .iter()
            .all(|v| PARAM_GRID.contains(v))
    }

    pub fn resolved_dim(&self, features: usize) -> usize {
        self.latent_dim.unwrap_or_else(|| default_dim(features))
    }

    pub fn resolved_rules(&self, y: &[f64]) -> usize {
        self.rules.unwrap_or_else(|| distinct_labels(y).max(1))
    }

    pub fn adam(&self) -> Adam {
        Adam {
            beta1: self.adam_beta1,
            beta2: self.adam_beta2,
            eps: self.adam_eps,
        }
    }
}

/// ⌊m/3⌋, but never zero.
pub fn default_dim(features: usize) -> usize {
    (features / 3).max(1)
}

fn distinct_labels(y: &[f64]) -> usize {
    let mut seen: Vec<f64> = Vec::new();
    for &v in y {
        if !seen.contains(&v) {
            seen.push(v);
        }
    }
    seen.len()
}

/// First and second moment estimates for one Adam-driven parameter block.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamMoments {
    pub m: DenseMatrix,
    pub v: DenseMatrix,
    pub t: u32,
}

impl AdamMoments {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            m: DenseMatrix::zeros(rows, cols),
            v: DenseMatrix::zeros(rows, cols),
            t: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adam {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for Adam {
    fn default() -> Self {
        Self {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }
}

impl Adam {
    /// One bias-corrected Adam update of `param` in place.
    pub fn step(
        &self,
        param: &mut DenseMatrix,
        grad: &DenseMatrix,
        moments: &mut AdamMoments,
        lr: f64,
    ) -> Result<()> {
        if param.shape() != grad.shape() || param.shape() != moments.m.shape() {
            return Err(dim(
                "adam_step",
                format!(
                    "param {:?}, grad {:?}, moments {:?}",
                    param.shape(),
                    grad.shape(),
                    moments.m.shape()
                ),
            ));
        }
        moments.t += 1;
        let c1 = 1.0 - self.beta1.powi(moments.t as i32);
        let c2 = 1.0 - self.beta2.powi(moments.t as i32);
        let p = param.as_mut_slice();
        let m = moments.m.as_mut_slice();
        let v = moments.v.as_mut_slice();
        for (((p, &g), m), v) in p.iter_mut().zip(grad.as_slice()).zip(m).zip(v) {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            let m_hat = *m / c1;
            let v_hat = *v / c2;
            *p -= lr * m_hat / (v_hat.sqrt() + self.eps);
        }
        Ok(())
    }
}

/// Raises every entry below `floor` to `floor`.
pub fn clamp_f_positive(f: &mut DenseMatrix, floor: f64) {
    for v in f.as_mut_slice() {
        if *v < floor {
            *v = floor;
        }
    }
}

/// Full optimization state.
#[derive(Debug, Clone)]
pub struct LdrState {
    /// n×d latent representation.
    pub xhat: DenseMatrix,
    /// n×k slack firing strengths, strictly positive.
    pub f: DenseMatrix,
    /// d×k consequent slopes.
    pub p: DenseMatrix,
    /// k bias consequents.
    pub p0: Vec<f64>,
    /// m×d projection.
    pub q: DenseMatrix,
    /// Diagonal of the orthogonality multipliers Λ (length d).
    pub lambda: Vec<f64>,
    /// Diagonal of the ℓ2,1 reweighting matrix Z (length m).
    pub z: Vec<f64>,
    pub adam_xhat: AdamMoments,
    pub adam_p: AdamMoments,
    pub adam_f: AdamMoments,
    /// Current barrier weight.
    pub mu: f64,
}

impl LdrState {
    /// Deterministic data-aware start: `Q` spans the top-`d` eigenvectors of
    /// `XᵀX`, `X̂ = XQ`, `F = 1/k`, small uniform `P`, `p₀ = 0`, `Z = I`,
    /// `Λ = I`.
    pub fn initialize(
        x: &DenseMatrix,
        rules: usize,
        latent_dim: usize,
        mu0: f64,
        seed: u64,
    ) -> Result<Self> {
        let m = x.cols();
        if rules == 0 || latent_dim == 0 {
            return Err(Error::Size(
                "rules and latent dimension must be positive".into(),
            ));
        }
        if latent_dim > m {
            return Err(Error::Size(format!(
                "latent dimension {latent_dim} exceeds {m} features"
            )));
        }
        let eig = sym_eig(&x.t_matmul(x)?)?;
        let q = DenseMatrix::from_fn(m, latent_dim, |r, c| eig.eigenvectors[(r, c)]);
        Self::with_projection(x, q, rules, mu0, seed)
    }

    /// Same as [`LdrState::initialize`] but with a caller-supplied `Q`.
    pub fn with_projection(
        x: &DenseMatrix,
        q: DenseMatrix,
        rules: usize,
        mu0: f64,
        seed: u64,
    ) -> Result<Self> {
        let (n, m) = x.shape();
        if q.rows() != m {
            return Err(dim(
                "LdrState",
                format!("Q has {} rows for {m} features", q.rows()),
            ));
        }
        let d = q.cols();
        let xhat = x.matmul(&q)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = DenseMatrix::from_fn(d, rules, |_, _| rng.gen_range(-0.01..0.01));
        Ok(Self {
            xhat,
            f: DenseMatrix::filled(n, rules, 1.0 / rules as f64),
            p,
            p0: vec![0.0; rules],
            q,
            lambda: vec![1.0; d],
            z: vec![1.0; m],
            adam_xhat: AdamMoments::zeros(n, d),
            adam_p: AdamMoments::zeros(d, rules),
            adam_f: AdamMoments::zeros(n, rules),
            mu: mu0,
        })
    }

    pub fn samples(&self) -> usize {
        self.xhat.rows()
    }

    pub fn rules(&self) -> usize {
        self.f.cols()
    }

    pub fn latent_dim(&self) -> usize {
        self.xhat.cols()
    }

    pub fn features(&self) -> usize {
        self.q.rows()
    }

    pub fn is_finite(&self) -> bool {
        self.xhat.is_finite()
            && self.f.is_finite()
            && self.p.is_finite()
            && self.q.is_finite()
            && self
                .p0
                .iter()
                .chain(&self.lambda)
                .chain(&self.z)
                .all(|v| v.is_finite())
            && self.mu.is_finite()
    }

    fn check(&self, x: &DenseMatrix, y: &[f64]) -> Result<()> {
        let (n, m) = x.shape();
        let (d, k) = (self.latent_dim(), self.rules());
        let ok = y.len() == n
            && self.xhat.shape() == (n, d)
            && self.f.shape() == (n, k)
            && self.p.shape() == (d, k)
            && self.p0.len() == k
            && self.q.shape() == (m, d);
        if ok {
            Ok(())
        } else {
            Err(dim(
                "ldr",
                format!(
                    "X {:?}, y {}, X̂ {:?}, F {:?}, P {:?}, p0 {}, Q {:?}",
                    x.shape(),
                    y.len(),
                    self.xhat.shape(),
                    self.f.shape(),
                    self.p.shape(),
                    self.p0.len(),
                    self.q.shape()
                ),
            ))
        }
    }

    /// Per-sample TSK output `Σ_r F_ir((X̂P)_ir + p₀_r)`.
    pub fn fitted(&self) -> Result<Vec<f64>> {
        let xp = self.xhat.matmul(&self.p)?;
        Ok((0..self.samples())
            .map(|i| {
                xp.row(i)
                    .iter()
                    .zip(self.f.row(i))
                    .zip(&self.p0)
                    .map(|((a, f), b)| f * (a + b))
                    .sum()
            })
            .collect())
    }

    pub fn residuals(&self, y: &[f64]) -> Result<Vec<f64>> {
        Ok(self.fitted()?.iter().zip(y).map(|(a, b)| a - b).collect())
    }
}

/// The constrained objective (without barrier).
pub fn objective(state: &LdrState, x: &DenseMatrix, y: &[f64], cfg: &LdrConfig) -> Result<f64> {
    state.check(x, y)?;
    let fit: f64 = state.residuals(y)?.iter().map(|r| r * r).sum();
    let p_reg = state.p.frobenius_norm().powi(2);
    let proj = x
        .matmul(&state.q)?
        .sub(&state.xhat)?
        .frobenius_norm()
        .powi(2);
    Ok(fit + cfg.gamma * p_reg + cfg.alpha * proj + cfg.beta * state.q.l21_norm())
}

/// Objective plus the interior-point term `μ Σ 1/F_ij`.
pub fn barrier_objective(
    state: &LdrState,
    x: &DenseMatrix,
    y: &[f64],
    cfg: &LdrConfig,
) -> Result<f64> {
    let barrier: f64 = state.f.as_slice().iter().map(|v| 1.0 / v).sum();
    Ok(objective(state, x, y, cfg)? + state.mu * barrier)
}

#[derive(Debug, Clone)]
pub struct FitGradients {
    pub xhat: DenseMatrix,
    pub p: DenseMatrix,
    /// Includes the barrier term `−μ/F²`.
    pub f: DenseMatrix,
}

/// Chain-rule gradients of [`barrier_objective`] with respect to `X̂`, `P`
/// and `F`.
///
/// With residual `r_i`:
/// `∇X̂_ij = 2 r_i Σ_r P_jr F_ir + 2α(X̂ − XQ)_ij`,
/// `∇P_jr = 2 Σ_i r_i X̂_ij F_ir + 2γ P_jr`,
/// `∇F_ir = 2 r_i ((X̂P)_ir + p₀_r) − μ/F_ir²`.
pub fn grad_fit(
    state: &LdrState,
    x: &DenseMatrix,
    y: &[f64],
    cfg: &LdrConfig,
) -> Result<FitGradients> {
    state.check(x, y)?;
    Ok(FitGradients {
        xhat: grad_xhat(state, x, y, cfg)?,
        p: grad_p(state, y, cfg)?,
        f: grad_f(state, y)?,
    })
}

fn grad_xhat(state: &LdrState, x: &DenseMatrix, y: &[f64], cfg: &LdrConfig) -> Result<DenseMatrix> {
    let r = state.residuals(y)?;
    // (F Pᵀ)_ij = Σ_r F_ir P_jr
    let fpt = state.f.matmul(&state.p.transpose())?;
    let xq = x.matmul(&state.q)?;
    let (n, d) = state.xhat.shape();
    Ok(DenseMatrix::from_fn(n, d, |i, j| {
        2.0 * r[i] * fpt[(i, j)] + 2.0 * cfg.alpha * (state.xhat[(i, j)] - xq[(i, j)])
    }))
}

fn grad_p(state: &LdrState, y: &[f64], cfg: &LdrConfig) -> Result<DenseMatrix> {
    let r = state.residuals(y)?;
    // (R ⊙ F) with R the residual broadcast across rules
    let rf = DenseMatrix::from_fn(state.samples(), state.rules(), |i, k| {
        r[i] * state.f[(i, k)]
    });
    let g = state.xhat.t_matmul(&rf)?;
    Ok(DenseMatrix::from_fn(g.rows(), g.cols(), |j, k| {
        2.0 * g[(j, k)] + 2.0 * cfg.gamma * state.p[(j, k)]
    }))
}

fn grad_f(state: &LdrState, y: &[f64]) -> Result<DenseMatrix> {
    let r = state.residuals(y)?;
    let xp = state.xhat.matmul(&state.p)?;
    Ok(DenseMatrix::from_fn(
        state.samples(),
        state.rules(),
        |i, k| {
            let fv = state.f[(i, k)];
            2.0 * r[i] * (xp[(i, k)] + state.p0[k]) - state.mu / (fv * fv)
        },
    ))
}

/// Closed-form `p₀ = F†(y − (X̂P)⊙F·1)`.
pub fn update_p0(state: &LdrState, y: &[f64]) -> Result<Vec<f64>> {
    if y.len() != state.samples() {
        return Err(dim(
            "update_p0",
            format!("{} targets for {} samples", y.len(), state.samples()),
        ));
    }
    let xp = state.xhat.matmul(&state.p)?;
    let target: Vec<f64> = (0..state.samples())
        .map(|i| {
            y[i] - xp
                .row(i)
                .iter()
                .zip(state.f.row(i))
                .map(|(a, f)| a * f)
                .sum::<f64>()
        })
        .collect();
    pinv(&state.f)?.matvec(&target)
}

/// Solves `diag(σ₁) Q̂ + Q̂ diag(σ₂) = C` entrywise.
pub fn sylvester_diag_solve(
    sigma1: &[f64],
    sigma2: &[f64],
    c: &DenseMatrix,
) -> Result<DenseMatrix> {
    if c.shape() != (sigma1.len(), sigma2.len()) {
        return Err(dim(
            "sylvester_diag_solve",
            format!(
                "C {:?} with σ₁ of {} and σ₂ of {}",
                c.shape(),
                sigma1.len(),
                sigma2.len()
            ),
        ));
    }
    let mut out = DenseMatrix::zeros(c.rows(), c.cols());
    for (i, &s1) in sigma1.iter().enumerate() {
        for (j, &s2) in sigma2.iter().enumerate() {
            let denom = s1 + s2;
            if !(denom > DENOM_FLOOR) {
                return Err(Error::SingularPencil {
                    row: i,
                    col: j,
                    denom,
                });
            }
            out[(i, j)] = c[(i, j)] / denom;
        }
    }
    Ok(out)
}

/// Diagnostics from one call to [`update_q`].
#[derive(Debug, Clone, Default)]
pub struct QUpdateReport {
    pub iterations: usize,
    pub converged: bool,
    /// ‖QᵀQ − I‖_F after each inner iterate.
    pub orthogonality: Vec<f64>,
}

/// `‖(αXᵀX + βZ)Q + QΛ − αXᵀX̂‖_F` for the state's current `Q`, `Z`, `Λ`.
pub fn q_stationarity_residual(state: &LdrState, x: &DenseMatrix, cfg: &LdrConfig) -> Result<f64> {
    let xtx = x.t_matmul(x)?;
    let lhs = xtx.scale(cfg.alpha).matmul(&state.q)?;
    let rhs = x.t_matmul(&state.xhat)?.scale(cfg.alpha);
    let (m, d) = state.q.shape();
    let res = DenseMatrix::from_fn(m, d, |i, j| {
        lhs[(i, j)] + cfg.beta * state.z[i] * state.q[(i, j)] + state.q[(i, j)] * state.lambda[j]
            - rhs[(i, j)]
    });
    Ok(res.frobenius_norm())
}

pub fn orthogonality_gap(q: &DenseMatrix) -> Result<f64> {
    let qtq = q.t_matmul(q)?;
    Ok(qtq.sub(&DenseMatrix::identity(q.cols()))?.frobenius_norm())
}

/// The Q block: alternate a diagonalized Sylvester solve for `Q`, a refresh
/// of `Z`, and projected gradient ascent on `Λ`.
///
/// Runs at most `cfg.inner_q_iters` iterates, stopping early once
/// `‖Q − Q_prev‖_F ≤ cfg.tol`. `Z` and `Λ` carry over between calls.
pub fn update_q(state: &mut LdrState, x: &DenseMatrix, cfg: &LdrConfig) -> Result<QUpdateReport> {
    let xtx = x.t_matmul(x)?;
    update_q_with_gram(state, x, &xtx, cfg)
}

pub(crate) fn update_q_with_gram(
    state: &mut LdrState,
    x: &DenseMatrix,
    xtx: &DenseMatrix,
    cfg: &LdrConfig,
) -> Result<QUpdateReport> {
    let m = state.q.rows();
    if x.cols() != m || state.xhat.rows() != x.rows() {
        return Err(dim(
            "update_q",
            format!(
                "X {:?}, Q {:?}, X̂ {:?}",
                x.shape(),
                state.q.shape(),
                state.xhat.shape()
            ),
        ));
    }
    let target = x.t_matmul(&state.xhat)?.scale(cfg.alpha);
    let mut report = QUpdateReport::default();
    for _ in 0..cfg.inner_q_iters {
        let mut a = xtx.scale(cfg.alpha);
        for (i, zi) in state.z.iter().enumerate() {
            a[(i, i)] += cfg.beta * zi;
        }
        let eig = sym_eig(&a)?;
        let u = &eig.eigenvectors;
        let c = u.t_matmul(&target)?;
        let q_hat = sylvester_diag_solve(&eig.eigenvalues, &state.lambda, &c)?;
        let q = u.matmul(&q_hat)?;

        for i in 0..m {
            let sq: f64 = q.row(i).iter().map(|v| v * v).sum();
            let zi = 1.0 / (2.0 * (sq + Z_EPS).sqrt());
            if !zi.is_finite() {
                return Err(Error::DegenerateRow(i));
            }
            state.z[i] = zi;
        }
        let qtq = q.t_matmul(&q)?;
        for (j, l) in state.lambda.iter_mut().enumerate() {
            *l = (*l + cfg.lr_lambda * (qtq[(j, j)] - 1.0)).max(0.0);
        }

        let change = q.sub(&state.q)?.frobenius_norm();
        state.q = q;
        report.iterations += 1;
        report.orthogonality.push(orthogonality_gap(&state.q)?);
        if change <= cfg.tol {
            report.converged = true;
            break;
        }
    }
    Ok(report)
}

/// Feature indices ordered by descending score; `scores[i]` belongs to
/// feature `order[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedFeatures {
    pub order: Vec<usize>,
    pub scores: Vec<f64>,
}

impl RankedFeatures {
    pub fn from_scores(raw: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&a, &b| raw[b].total_cmp(&raw[a]).then(a.cmp(&b)));
        let scores = order.iter().map(|&i| raw[i]).collect();
        Self { order, scores }
    }

    /// Identity ranking with zero scores, used when no selector runs.
    pub fn identity(features: usize) -> Self {
        Self {
            order: (0..features).collect(),
            scores: vec![0.0; features],
        }
    }

    pub fn top(&self, count: usize) -> &[usize] {
        &self.order[..count.min(self.order.len())]
    }

    /// Score of `feature`, if it is ranked.
    pub fn score_of(&self, feature: usize) -> Option<f64> {
        self.order
            .iter()
            .position(|&f| f == feature)
            .map(|i| self.scores[i])
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }
}

/// Ranks features by the ℓ2 norm of the matching row of `q`.
pub fn rank_features(q: &DenseMatrix) -> RankedFeatures {
    RankedFeatures::from_scores(&q.row_l2_norms())
}

/// Per-outer-iteration diagnostics.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SelectionTrace {
    /// Objective after each outer iteration.
    pub objective: Vec<f64>,
    /// Barrier weight used during each outer iteration.
    pub mu: Vec<f64>,
    /// Smallest entry of `F` after each outer iteration.
    pub min_f: Vec<f64>,
    pub converged: bool,
}

#[derive(Debug, Clone)]
pub struct SelectionOutcome {
    pub ranking: RankedFeatures,
    pub state: LdrState,
    pub trace: SelectionTrace,
}

/// Runs the full alternating optimization from the default initialization.
pub fn run_feature_selection(
    x: &DenseMatrix,
    y: &[f64],
    cfg: &LdrConfig,
) -> Result<SelectionOutcome> {
    cfg.validate()?;
    if x.rows() != y.len() {
        return Err(dim(
            "run_feature_selection",
            format!("{} samples, {} labels", x.rows(), y.len()),
        ));
    }
    if x.rows() == 0 || x.cols() == 0 {
        return Err(Error::Size("empty data matrix".into()));
    }
    let d = cfg.resolved_dim(x.cols()).min(x.cols());
    let k = cfg.resolved_rules(y);
    let state = LdrState::initialize(x, k, d, cfg.mu0, cfg.seed)?;
    run_from_state(x, y, cfg, state)
}

/// Runs the alternating optimization from a prepared state.
pub fn run_from_state(
    x: &DenseMatrix,
    y: &[f64],
    cfg: &LdrConfig,
    mut state: LdrState,
) -> Result<SelectionOutcome> {
    cfg.validate()?;
    state.check(x, y)?;
    let xtx = x.t_matmul(x)?;
    let adam = cfg.adam();
    let mut trace = SelectionTrace::default();

    for t in 0..cfg.max_outer {
        state.mu = cfg.mu0 * MU_DECAY.powi(t as i32);
        trace.mu.push(state.mu);

        update_q_with_gram(&mut state, x, &xtx, cfg)?;

        let g_f = grad_f(&state, y)?;
        adam.step(&mut state.f, &g_f, &mut state.adam_f, cfg.lr_f)?;
        clamp_f_positive(&mut state.f, F_FLOOR);

        let g_p = grad_p(&state, y, cfg)?;
        adam.step(&mut state.p, &g_p, &mut state.adam_p, cfg.lr_p)?;

        state.p0 = update_p0(&state, y)?;

        let g_x = grad_xhat(&state, x, y, cfg)?;
        adam.step(&mut state.xhat, &g_x, &mut state.adam_xhat, cfg.lr_xhat)?;

        let obj = objective(&state, x, y, cfg)?;
        if !obj.is_finite() || !state.is_finite() {
            return Err(Error::Divergence {
                stage: "feature selection",
                iteration: t,
            });
        }
        trace.objective.push(obj);
        trace.min_f.push(
            state
                .f
                .as_slice()
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min),
        );

        if t >= CONVERGENCE_WINDOW {
            let past = trace.objective[t - CONVERGENCE_WINDOW];
            let rel = (obj - past).abs() / past.abs().max(f64::MIN_POSITIVE);
            if rel <= cfg.tol {
                trace.converged = true;
                break;
            }
        }
    }
    // barrier weight that the next iteration would use
    state.mu = cfg.mu0 * MU_DECAY.powi(trace.mu.len() as i32);

    Ok(SelectionOutcome {
        ranking: rank_features(&state.q),
        state,
        trace,
    })
}
