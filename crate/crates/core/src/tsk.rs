//! Classic TSK fuzzy system: Gaussian memberships, t-norm firing strengths,
//! normalized weighted output and full-batch gradient-descent training with
//! fuzzy c-means initialization of the antecedents.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{dim, Error, Result};
use crate::numerics::DenseMatrix;

/// Lower bound for Gaussian spreads produced by initialization and training.
pub const SPREAD_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TNorm {
    #[default]
    Product,
    Minimum,
}

impl TNorm {
    pub fn apply(self, a: f64, b: f64) -> f64 {
        match self {
            TNorm::Product => a * b,
            TNorm::Minimum => a.min(b),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Order {
    Zero,
    #[default]
    First,
}

/// A TSK model with `k` rules over `d` inputs.
///
/// `consequents` is `k×(d+1)`: column 0 holds the bias `p_{r,0}`, column
/// `i+1` the slope for input `i`.
#[derive(Debug, Clone)]
pub struct TskModel {
    centers: DenseMatrix,
    spreads: DenseMatrix,
    consequents: DenseMatrix,
    tnorm: TNorm,
    order: Order,
}

impl TskModel {
    pub fn new(
        centers: DenseMatrix,
        spreads: DenseMatrix,
        mut consequents: DenseMatrix,
        tnorm: TNorm,
        order: Order,
    ) -> Result<Self> {
        let (k, d) = centers.shape();
        if spreads.shape() != (k, d) {
            return Err(dim("TskModel::new", "spreads shape differs from centers"));
        }
        if consequents.shape() != (k, d + 1) {
            return Err(dim(
                "TskModel::new",
                format!("consequents must be {k}x{}", d + 1),
            ));
        }
        if let Some(bad) = spreads.as_slice().iter().find(|&&s| !(s > 0.0)) {
            return Err(Error::Domain(format!("spread must be positive, got {bad}")));
        }
        if order == Order::Zero {
            for r in 0..k {
                consequents.row_mut(r)[1..].fill(0.0);
            }
        }
        Ok(Self {
            centers,
            spreads,
            consequents,
            tnorm,
            order,
        })
    }

    /// Antecedents from fuzzy c-means, consequents zero.
    pub fn from_fcm(
        x: &DenseMatrix,
        rules: usize,
        tnorm: TNorm,
        order: Order,
        seed: u64,
    ) -> Result<Self> {
        let init = fcm_init(x, rules, FCM_DEFAULT_FUZZIFIER, seed)?;
        let consequents = DenseMatrix::zeros(rules, x.cols() + 1);
        Self::new(init.centers, init.spreads, consequents, tnorm, order)
    }

    pub fn rules(&self) -> usize {
        self.centers.rows()
    }

    pub fn dims(&self) -> usize {
        self.centers.cols()
    }

    pub fn centers(&self) -> &DenseMatrix {
        &self.centers
    }

    pub fn spreads(&self) -> &DenseMatrix {
        &self.spreads
    }

    pub fn consequents(&self) -> &DenseMatrix {
        &self.consequents
    }

    pub fn consequents_mut(&mut self) -> &mut DenseMatrix {
        &mut self.consequents
    }

    pub fn tnorm(&self) -> TNorm {
        self.tnorm
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// Output of rule `r`'s THEN clause.
    pub fn rule_output(&self, x: &[f64], r: usize) -> f64 {
        let p = self.consequents.row(r);
        match self.order {
            Order::Zero => p[0],
            Order::First => p[0] + p[1..].iter().zip(x).map(|(a, b)| a * b).sum::<f64>(),
        }
    }

    /// Log firing strength of every rule. Product mode sums log memberships,
    /// minimum mode takes the smallest one.
    fn log_firing(&self, x: &[f64]) -> Vec<f64> {
        (0..self.rules())
            .map(|r| {
                let logs = self
                    .centers
                    .row(r)
                    .iter()
                    .zip(self.spreads.row(r))
                    .zip(x)
                    .map(|((m, s), xi)| -(xi - m).powi(2) / (2.0 * s * s));
                match self.tnorm {
                    TNorm::Product => logs.sum(),
                    TNorm::Minimum => logs.fold(0.0, f64::min),
                }
            })
            .collect()
    }

    /// Normalized firing strengths, evaluated in log space with max
    /// subtraction so that product-mode underflow cannot zero every rule.
    pub fn normalized_firing(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dims() {
            return Err(dim(
                "normalized_firing",
                format!("x has {} dims, model {}", x.len(), self.dims()),
            ));
        }
        let logs = self.log_firing(x);
        let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() {
            return Err(Error::DegenerateFiring);
        }
        normalize_firing(&logs.iter().map(|l| (l - top).exp()).collect::<Vec<_>>())
    }
}

/// Per-dimension Gaussian memberships of `x` under rule `rule`.
pub fn gaussian_membership(x: &[f64], rule: usize, model: &TskModel) -> Result<Vec<f64>> {
    if x.len() != model.dims() {
        return Err(dim(
            "gaussian_membership",
            format!("x has {} dims", x.len()),
        ));
    }
    if rule >= model.rules() {
        return Err(Error::Size(format!("rule {rule} out of {}", model.rules())));
    }
    model
        .centers
        .row(rule)
        .iter()
        .zip(model.spreads.row(rule))
        .zip(x)
        .map(|((&m, &s), &xi)| gaussian(xi, m, s))
        .collect()
}

/// exp(−(x − m)² / (2δ²)).
pub fn gaussian(x: f64, center: f64, spread: f64) -> Result<f64> {
    if !(spread > 0.0) {
        return Err(Error::Domain(format!(
            "spread must be positive, got {spread}"
        )));
    }
    Ok((-(x - center).powi(2) / (2.0 * spread * spread)).exp())
}

/// Aggregates memberships with a t-norm.
pub fn firing_strength(memberships: &[f64], mode: TNorm) -> Result<f64> {
    if let Some(bad) = memberships.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(Error::Domain(format!("membership {bad} outside [0, 1]")));
    }
    Ok(memberships.iter().fold(1.0, |acc, &m| mode.apply(acc, m)))
}

/// Scales nonnegative strengths onto the simplex.
pub fn normalize_firing(strengths: &[f64]) -> Result<Vec<f64>> {
    if strengths.iter().any(|s| !(*s >= 0.0) || !s.is_finite()) {
        return Err(Error::Domain(
            "firing strengths must be finite and nonnegative".into(),
        ));
    }
    let total: f64 = strengths.iter().sum();
    if total <= 0.0 {
        return Err(Error::DegenerateFiring);
    }
    Ok(strengths.iter().map(|s| s / total).collect())
}

pub fn tsk_predict(x: &[f64], model: &TskModel) -> Result<f64> {
    let weights = model.normalized_firing(x)?;
    Ok(weights
        .iter()
        .enumerate()
        .map(|(r, w)| w * model.rule_output(x, r))
        .sum())
}

pub fn tsk_predict_batch(x: &DenseMatrix, model: &TskModel) -> Result<Vec<f64>> {
    (0..x.rows())
        .map(|i| tsk_predict(x.row(i), model))
        .collect()
}

pub const FCM_DEFAULT_FUZZIFIER: f64 = 2.0;
pub const FCM_MAX_ITERS: usize = 100;
pub const FCM_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct FcmInit {
    pub centers: DenseMatrix,
    pub spreads: DenseMatrix,
    /// n×k membership matrix.
    pub memberships: DenseMatrix,
    pub iterations: usize,
}

/// Fuzzy c-means clustering of the rows of `x` into `k` clusters.
///
/// Spreads are the membership-weighted (weights `u^fuzzifier`) standard
/// deviation of each dimension under each cluster, floored at
/// [`SPREAD_FLOOR`].
pub fn fcm_init(x: &DenseMatrix, k: usize, fuzzifier: f64, seed: u64) -> Result<FcmInit> {
    let (n, d) = x.shape();
    if k == 0 || n < k {
        return Err(Error::Size(format!(
            "fuzzy c-means needs 1 <= k <= n, got k={k}, n={n}"
        )));
    }
    if !(fuzzifier > 1.0) {
        return Err(Error::Domain(format!(
            "fuzzifier must exceed 1, got {fuzzifier}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = DenseMatrix::from_fn(n, k, |_, _| rng.gen_range(0.01..1.0));
    for i in 0..n {
        let s: f64 = u.row(i).iter().sum();
        u.row_mut(i).iter_mut().for_each(|v| *v /= s);
    }

    let exponent = 2.0 / (fuzzifier - 1.0);
    let mut centers = DenseMatrix::zeros(k, d);
    let mut iterations = 0;
    for it in 1..=FCM_MAX_ITERS {
        iterations = it;
        weighted_centers(x, &u, fuzzifier, &mut centers);

        let mut next = DenseMatrix::zeros(n, k);
        for i in 0..n {
            let dist: Vec<f64> = (0..k)
                .map(|r| sq_dist(x.row(i), centers.row(r)).sqrt())
                .collect();
            if let Some(hit) = dist.iter().position(|&v| v == 0.0) {
                next[(i, hit)] = 1.0;
                continue;
            }
            for r in 0..k {
                let denom: f64 = dist.iter().map(|&dj| (dist[r] / dj).powf(exponent)).sum();
                next[(i, r)] = 1.0 / denom;
            }
        }
        let change = next.sub(&u)?.max_abs();
        u = next;
        if change <= FCM_TOL {
            break;
        }
    }
    weighted_centers(x, &u, fuzzifier, &mut centers);

    let mut spreads = DenseMatrix::zeros(k, d);
    for r in 0..k {
        let mut wsum = 0.0;
        let mut acc = vec![0.0; d];
        for i in 0..n {
            let w = u[(i, r)].powf(fuzzifier);
            wsum += w;
            for (j, a) in acc.iter_mut().enumerate() {
                *a += w * (x[(i, j)] - centers[(r, j)]).powi(2);
            }
        }
        for j in 0..d {
            let sd = if wsum > 0.0 {
                (acc[j] / wsum).sqrt()
            } else {
                0.0
            };
            spreads[(r, j)] = if sd.is_finite() {
                sd.max(SPREAD_FLOOR)
            } else {
                SPREAD_FLOOR
            };
        }
    }
    Ok(FcmInit {
        centers,
        spreads,
        memberships: u,
        iterations,
    })
}

fn weighted_centers(x: &DenseMatrix, u: &DenseMatrix, fuzzifier: f64, centers: &mut DenseMatrix) {
    let (n, d) = x.shape();
    for r in 0..centers.rows() {
        let mut wsum = 0.0;
        let mut acc = vec![0.0; d];
        for i in 0..n {
            let w = u[(i, r)].powf(fuzzifier);
            wsum += w;
            for (a, xv) in acc.iter_mut().zip(x.row(i)) {
                *a += w * xv;
            }
        }
        if wsum > 0.0 {
            for (c, a) in centers.row_mut(r).iter_mut().zip(acc) {
                *c = a / wsum;
            }
        }
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

/// Gradients of the squared-error loss with respect to every model parameter.
#[derive(Debug, Clone)]
pub struct TskGradients {
    pub centers: DenseMatrix,
    pub spreads: DenseMatrix,
    pub consequents: DenseMatrix,
}

/// Σ_i (ŷ(x_i) − y_i)².
pub fn tsk_loss(x: &DenseMatrix, y: &[f64], model: &TskModel) -> Result<f64> {
    check_xy(x, y, model)?;
    let preds = tsk_predict_batch(x, model)?;
    Ok(preds.iter().zip(y).map(|(p, t)| (p - t).powi(2)).sum())
}

fn check_xy(x: &DenseMatrix, y: &[f64], model: &TskModel) -> Result<()> {
    if x.rows() != y.len() {
        return Err(dim(
            "tsk",
            format!("{} samples but {} targets", x.rows(), y.len()),
        ));
    }
    if x.cols() != model.dims() {
        return Err(dim(
            "tsk",
            format!("data has {} dims, model {}", x.cols(), model.dims()),
        ));
    }
    Ok(())
}

/// Chain-rule gradients of the squared-error loss.
///
/// With normalized weights w_r and rule outputs o_r, ∂ŷ/∂θ = w_r (o_r − ŷ)
/// ∂log f_r/∂θ for antecedent θ of rule r. In minimum mode only the arg-min
/// dimension carries a (sub)gradient. Zero-order models get zero slope
/// gradients.
pub fn tsk_gradients(x: &DenseMatrix, y: &[f64], model: &TskModel) -> Result<TskGradients> {
    check_xy(x, y, model)?;
    let (k, d) = (model.rules(), model.dims());
    let mut g_c = DenseMatrix::zeros(k, d);
    let mut g_s = DenseMatrix::zeros(k, d);
    let mut g_p = DenseMatrix::zeros(k, d + 1);

    for (i, &target) in y.iter().enumerate() {
        let xi = x.row(i);
        let w = model.normalized_firing(xi)?;
        let outs: Vec<f64> = (0..k).map(|r| model.rule_output(xi, r)).collect();
        let yhat: f64 = w.iter().zip(&outs).map(|(a, b)| a * b).sum();
        let resid2 = 2.0 * (yhat - target);

        for r in 0..k {
            g_p[(r, 0)] += resid2 * w[r];
            if model.order == Order::First {
                for j in 0..d {
                    g_p[(r, j + 1)] += resid2 * w[r] * xi[j];
                }
            }

            let lead = resid2 * w[r] * (outs[r] - yhat);
            let centers = model.centers.row(r);
            let spreads = model.spreads.row(r);
            let dims: Box<dyn Iterator<Item = usize>> = match model.tnorm {
                TNorm::Product => Box::new(0..d),
                TNorm::Minimum => {
                    let argmin = (0..d)
                        .map(|j| {
                            (
                                j,
                                -(xi[j] - centers[j]).powi(2) / (2.0 * spreads[j].powi(2)),
                            )
                        })
                        .min_by(|a, b| a.1.total_cmp(&b.1))
                        .map(|(j, _)| j);
                    Box::new(argmin.into_iter())
                }
            };
            for j in dims {
                let diff = xi[j] - centers[j];
                let s = spreads[j];
                g_c[(r, j)] += lead * diff / (s * s);
                g_s[(r, j)] += lead * diff * diff / (s * s * s);
            }
        }
    }
    Ok(TskGradients {
        centers: g_c,
        spreads: g_s,
        consequents: g_p,
    })
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: TskModel,
    /// Loss before each epoch's update, then the final loss.
    pub losses: Vec<f64>,
}

/// Full-batch gradient descent on the squared-error loss.
///
/// Steps use the gradient averaged over samples, so `lr` does not need to
/// shrink as the training set grows. The minimizer is that of the summed loss.
pub fn train_tsk(
    x: &DenseMatrix,
    y: &[f64],
    model: TskModel,
    lr: f64,
    epochs: usize,
) -> Result<TrainOutcome> {
    if !(lr >= 0.0) || !lr.is_finite() {
        return Err(Error::Domain(format!(
            "learning rate must be nonnegative, got {lr}"
        )));
    }
    let mut model = model;
    let mut losses = Vec::with_capacity(epochs + 1);
    for epoch in 0..epochs {
        let loss = tsk_loss(x, y, &model)?;
        if !loss.is_finite() {
            return Err(Error::Divergence {
                stage: "TSK training",
                iteration: epoch,
            });
        }
        losses.push(loss);
        if lr == 0.0 {
            continue;
        }
        let g = tsk_gradients(x, y, &model)?;
        let eta = lr / y.len().max(1) as f64;
        step(&mut model.centers, &g.centers, eta);
        step(&mut model.spreads, &g.spreads, eta);
        step(&mut model.consequents, &g.consequents, eta);
        model.spreads.as_mut_slice().iter_mut().for_each(|s| {
            *s = if s.is_finite() {
                s.max(SPREAD_FLOOR)
            } else {
                *s
            }
        });
        if !(model.centers.is_finite()
            && model.spreads.is_finite()
            && model.consequents.is_finite())
        {
            return Err(Error::Divergence {
                stage: "TSK training",
                iteration: epoch,
            });
        }
    }
    let last = tsk_loss(x, y, &model)?;
    if !last.is_finite() {
        return Err(Error::Divergence {
            stage: "TSK training",
            iteration: epochs,
        });
    }
    losses.push(last);
    Ok(TrainOutcome { model, losses })
}

fn step(param: &mut DenseMatrix, grad: &DenseMatrix, lr: f64) {
    for (p, g) in param.as_mut_slice().iter_mut().zip(grad.as_slice()) {
        *p -= lr * g;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_rule_model(center: f64, spread: f64, p: [f64; 2]) -> TskModel {
        TskModel::new(
            DenseMatrix::filled(1, 1, center),
            DenseMatrix::filled(1, 1, spread),
            DenseMatrix::from_vec(1, 2, p.to_vec()).unwrap(),
            TNorm::Product,
            Order::First,
        )
        .unwrap()
    }

    #[test]
    fn membership_values() {
        let m = one_rule_model(0.3, 0.2, [0.0, 0.0]);
        assert_eq!(gaussian_membership(&[0.3], 0, &m).unwrap(), vec![1.0]);
        let one_sd = gaussian_membership(&[0.5], 0, &m).unwrap()[0];
        assert!((one_sd - (-0.5f64).exp()).abs() < 1e-12);
        assert!((one_sd - 0.606531).abs() < 1e-6);
        let wider = one_rule_model(0.3, 0.4, [0.0, 0.0]);
        assert!(gaussian_membership(&[0.5], 0, &wider).unwrap()[0] > one_sd);
    }

    #[test]
    fn bad_spread_rejected() {
        assert!(matches!(gaussian(0.0, 0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(gaussian(0.0, 0.0, -1.0), Err(Error::Domain(_))));
        let bad = TskModel::new(
            DenseMatrix::zeros(1, 1),
            DenseMatrix::zeros(1, 1),
            DenseMatrix::zeros(1, 2),
            TNorm::Product,
            Order::First,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn firing_examples() {
        for mode in [TNorm::Product, TNorm::Minimum] {
            assert_eq!(firing_strength(&[0.37, 1.0], mode).unwrap(), 0.37);
            assert_eq!(firing_strength(&[0.37, 0.0], mode).unwrap(), 0.0);
        }
        assert_eq!(firing_strength(&[0.5, 0.5], TNorm::Product).unwrap(), 0.25);
        assert_eq!(firing_strength(&[0.3, 0.7], TNorm::Minimum).unwrap(), 0.3);
        assert!(firing_strength(&[1.2], TNorm::Product).is_err());
        assert!(firing_strength(&[-0.1], TNorm::Minimum).is_err());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_firing(&[2.0, 2.0]).unwrap(), vec![0.5, 0.5]);
        assert_eq!(
            normalize_firing(&[1.0, 0.0, 0.0]).unwrap(),
            vec![1.0, 0.0, 0.0]
        );
        assert!(matches!(
            normalize_firing(&[0.0, 0.0]),
            Err(Error::DegenerateFiring)
        ));
    }

    #[test]
    fn predict_single_rule_is_its_output() {
        let m = one_rule_model(100.0, 0.01, [1.5, 2.0]);
        // the only rule fires at ~exp(-5e7) yet still receives full weight
        let y = tsk_predict(&[0.25], &m).unwrap();
        assert!((y - 2.0).abs() < 1e-12);
    }

    #[test]
    fn predict_identical_rules() {
        let m = TskModel::new(
            DenseMatrix::filled(2, 1, 0.4),
            DenseMatrix::filled(2, 1, 0.3),
            DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap(),
            TNorm::Minimum,
            Order::First,
        )
        .unwrap();
        assert!((tsk_predict(&[0.9], &m).unwrap() - 2.8).abs() < 1e-12);
    }

    #[test]
    fn predict_zero_order_hand_example() {
        // choose centers so that f̄ = (0.25, 0.75) at x = 0: f1/f2 = 1/3
        // with unit spreads, log f1 − log f2 = −c1²/2 = −ln 3
        let c1 = (2.0 * 3f64.ln()).sqrt();
        let m = TskModel::new(
            DenseMatrix::from_vec(2, 1, vec![c1, 0.0]).unwrap(),
            DenseMatrix::filled(2, 1, 1.0),
            DenseMatrix::from_rows(&[vec![0.0, 9.0], vec![4.0, 9.0]]).unwrap(),
            TNorm::Product,
            Order::Zero,
        )
        .unwrap();
        assert_eq!(m.consequents()[(1, 1)], 0.0, "zero order clears slopes");
        let w = m.normalized_firing(&[0.0]).unwrap();
        assert!((w[0] - 0.25).abs() < 1e-12);
        assert!((tsk_predict(&[0.0], &m).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn product_mode_survives_underflow() {
        // 400 dims, each membership ~exp(-2): the raw product underflows to 0
        let d = 400;
        let m = TskModel::new(
            DenseMatrix::from_fn(2, d, |r, _| r as f64),
            DenseMatrix::filled(2, d, 0.5),
            DenseMatrix::from_fn(2, d + 1, |r, c| if c == 0 { r as f64 } else { 0.0 }),
            TNorm::Product,
            Order::First,
        )
        .unwrap();
        let x = vec![2.0; d];
        let raw: f64 = gaussian_membership(&x, 1, &m).unwrap().iter().product();
        assert_eq!(raw, 0.0);
        let y = tsk_predict(&x, &m).unwrap();
        assert!((y - 1.0).abs() < 1e-12);
    }

    fn two_clouds() -> DenseMatrix {
        let mut rows = Vec::new();
        for i in 0..20 {
            let t = i as f64 * 0.01;
            rows.push(vec![0.0 + t, 0.0 - t]);
            rows.push(vec![10.0 - t, 10.0 + t]);
        }
        DenseMatrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn fcm_separated_clouds() {
        let x = two_clouds();
        let init = fcm_init(&x, 2, 2.0, 3).unwrap();
        let mut found = [false, false];
        for r in 0..2 {
            let c = init.centers.row(r);
            let cloud = if c[0] < 5.0 { 0 } else { 1 };
            // exact cloud means: (0.095, -0.095) and (9.905, 10.095)
            let mean = if cloud == 0 {
                [0.095, -0.095]
            } else {
                [9.905, 10.095]
            };
            assert!(
                (c[0] - mean[0]).abs() < 0.1 && (c[1] - mean[1]).abs() < 0.1,
                "{c:?}"
            );
            found[cloud] = true;
        }
        assert_eq!(found, [true, true]);
    }

    #[test]
    fn fcm_single_cluster_is_mean() {
        let x = two_clouds();
        let init = fcm_init(&x, 1, 2.0, 0).unwrap();
        assert!((init.centers[(0, 0)] - 5.0).abs() < 1e-12);
        assert!((init.centers[(0, 1)] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn fcm_duplicates_hit_floor() {
        let x = DenseMatrix::filled(6, 3, 0.7);
        let init = fcm_init(&x, 2, 2.0, 1).unwrap();
        assert!(init.centers.is_finite() && init.spreads.is_finite());
        assert!(init.spreads.as_slice().iter().all(|&s| s == SPREAD_FLOOR));
    }

    #[test]
    fn fcm_size_error() {
        let x = DenseMatrix::zeros(2, 2);
        assert!(matches!(fcm_init(&x, 3, 2.0, 0), Err(Error::Size(_))));
    }

    fn linear_problem() -> (DenseMatrix, Vec<f64>) {
        let xs: Vec<f64> = (0..21).map(|i| i as f64 / 20.0).collect();
        let x = DenseMatrix::column_vector(&xs);
        let y = xs.iter().map(|v| 2.0 * v).collect();
        (x, y)
    }

    #[test]
    fn zero_lr_leaves_model() {
        let (x, y) = linear_problem();
        let m = TskModel::from_fcm(&x, 2, TNorm::Product, Order::First, 4).unwrap();
        let out = train_tsk(&x, &y, m.clone(), 0.0, 5).unwrap();
        assert_eq!(out.model.centers(), m.centers());
        assert_eq!(out.model.spreads(), m.spreads());
        assert_eq!(out.model.consequents(), m.consequents());
    }

    #[test]
    fn training_reduces_loss() {
        let (x, y) = linear_problem();
        let m = TskModel::from_fcm(&x, 2, TNorm::Product, Order::First, 4).unwrap();
        let out = train_tsk(&x, &y, m, 0.05, 500).unwrap();
        let n = y.len() as f64;
        let first = out.losses[0] / n;
        let last = *out.losses.last().unwrap() / n;
        assert!(last < first, "{first} -> {last}");
        assert!(last < 1e-2);
    }

    #[test]
    fn divergence_reports_epoch() {
        let (x, y) = linear_problem();
        let m = TskModel::from_fcm(&x, 2, TNorm::Product, Order::First, 4).unwrap();
        let err = train_tsk(&x, &y, m, 1e200, 3).unwrap_err();
        assert!(matches!(err, Error::Divergence { .. }), "{err}");
    }
}
