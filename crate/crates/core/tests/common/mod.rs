#![allow(dead_code)]

use ldr_fs::ldr::{LdrConfig, LdrState};
use ldr_fs::DenseMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform(rows: usize, cols: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(lo..hi))
}

/// A state with every block randomized, F kept well inside the feasible set.
pub fn random_state(x: &DenseMatrix, d: usize, k: usize, seed: u64) -> LdrState {
    let mut r = rng(seed);
    let n = x.rows();
    let q = uniform(x.cols(), d, -1.0, 1.0, &mut r);
    let mut s = LdrState::with_projection(x, q, k, 0.5, seed).unwrap();
    s.xhat = uniform(n, d, -1.0, 1.0, &mut r);
    s.p = uniform(d, k, -1.0, 1.0, &mut r);
    s.f = uniform(n, k, 0.2, 1.0, &mut r);
    s.p0 = (0..k).map(|_| r.gen_range(-1.0..1.0)).collect();
    s
}

pub fn small_problem(n: usize, m: usize, seed: u64) -> (DenseMatrix, Vec<f64>) {
    let mut r = rng(seed);
    let x = uniform(n, m, 0.0, 1.0, &mut r);
    let y = (0..n).map(|_| r.gen_range(0..3) as f64).collect();
    (x, y)
}

pub fn grid_config() -> LdrConfig {
    LdrConfig {
        alpha: 1.0,
        beta: 0.1,
        gamma: 1.0,
        ..LdrConfig::default()
    }
}

fn rel_err(analytic: &DenseMatrix, numeric: &DenseMatrix) -> f64 {
    let diff = analytic.sub(numeric).unwrap().frobenius_norm();
    diff / analytic
        .frobenius_norm()
        .max(numeric.frobenius_norm())
        .max(1e-12)
}

/// Central differences of `f` over every entry of the matrix picked by `slot`.
fn central_diff<S>(
    state: &S,
    slot: impl Fn(&mut S) -> &mut DenseMatrix,
    f: impl Fn(&S) -> f64,
) -> DenseMatrix
where
    S: Clone,
{
    const H: f64 = 1e-6;
    let mut probe = state.clone();
    let (rows, cols) = slot(&mut probe).shape();
    DenseMatrix::from_fn(rows, cols, |i, j| {
        let mut plus = state.clone();
        let mut minus = state.clone();
        let idx = i * cols + j;
        slot(&mut plus).as_mut_slice()[idx] += H;
        slot(&mut minus).as_mut_slice()[idx] -= H;
        (f(&plus) - f(&minus)) / (2.0 * H)
    })
}

/// Relative errors of the analytic X̂, P and F gradients against central
/// differences of the barrier objective at a random state.
pub fn fit_gradient_errors(seed: u64) -> [f64; 3] {
    let (x, y) = small_problem(9, 5, seed);
    let cfg = LdrConfig {
        alpha: 0.7,
        beta: 0.3,
        gamma: 0.4,
        ..LdrConfig::default()
    };
    let mut state = random_state(&x, 2, 3, seed + 1000);
    state.mu = 0.37;
    let g = ldr_fs::ldr::grad_fit(&state, &x, &y, &cfg).unwrap();
    let obj = |s: &LdrState| ldr_fs::ldr::barrier_objective(s, &x, &y, &cfg).unwrap();
    [
        rel_err(&g.xhat, &central_diff(&state, |s| &mut s.xhat, obj)),
        rel_err(&g.p, &central_diff(&state, |s| &mut s.p, obj)),
        rel_err(&g.f, &central_diff(&state, |s| &mut s.f, obj)),
    ]
}

/// Relative error of the TSK consequent gradient against central
/// differences of the squared-error loss.
pub fn tsk_consequent_error(seed: u64) -> f64 {
    use ldr_fs::tsk::{tsk_gradients, tsk_loss, Order, TNorm, TskModel};
    let mut r = rng(seed);
    let (n, d, k) = (12, 3, 3);
    let x = uniform(n, d, 0.0, 1.0, &mut r);
    let y: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
    let model = TskModel::new(
        uniform(k, d, 0.0, 1.0, &mut r),
        uniform(k, d, 0.3, 1.0, &mut r),
        uniform(k, d + 1, -1.0, 1.0, &mut r),
        TNorm::Product,
        Order::First,
    )
    .unwrap();
    let g = tsk_gradients(&x, &y, &model).unwrap();
    let numeric = central_diff(
        &model,
        |m| m.consequents_mut(),
        |m| tsk_loss(&x, &y, m).unwrap(),
    );
    rel_err(&g.consequents, &numeric)
}

pub struct QCheck {
    pub residual: f64,
    pub first_gap: f64,
    pub last_gap: f64,
    pub converged: bool,
}

/// Runs the Q block to convergence on a seeded 20×6 instance with d=2.
pub fn q_update_check(seed: u64) -> QCheck {
    use ldr_fs::ldr::{q_stationarity_residual, update_q};
    let (x, _) = small_problem(20, 6, seed);
    let mut state = LdrState::initialize(&x, 2, 2, 0.5, seed).unwrap();
    let mut r = rng(seed + 100);
    state.xhat = state.xhat.add(&uniform(20, 2, -0.3, 0.3, &mut r)).unwrap();
    let cfg = LdrConfig {
        inner_q_iters: 10_000,
        tol: 1e-13,
        ..grid_config()
    };
    let report = update_q(&mut state, &x, &cfg).unwrap();
    QCheck {
        residual: q_stationarity_residual(&state, &x, &cfg).unwrap(),
        first_gap: report.orthogonality[0],
        last_gap: *report.orthogonality.last().unwrap(),
        converged: report.converged,
    }
}

/// Largest objective increase caused by `update_p0` over `count` random states.
pub fn worst_p0_increase(count: u64) -> f64 {
    use ldr_fs::ldr::{objective, update_p0};
    let mut worst = f64::NEG_INFINITY;
    for seed in 0..count {
        let (x, y) = small_problem(15, 6, seed);
        let cfg = LdrConfig {
            alpha: 0.5,
            beta: 0.2,
            gamma: 0.3,
            ..LdrConfig::default()
        };
        let mut state = random_state(&x, 2, 3, seed + 7);
        let before = objective(&state, &x, &y, &cfg).unwrap();
        state.p0 = update_p0(&state, &y).unwrap();
        let after = objective(&state, &x, &y, &cfg).unwrap();
        worst = worst.max((after - before) / before.abs().max(1.0));
    }
    worst
}

/// Values on a 2⁻¹⁰ grid in [0, 1]; products of three of them are exact in
/// f64, so associativity can be checked with `==`.
pub fn dyadic_unit(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0..=1024) as f64 / 1024.0
}

/// Counts t-norm axiom violations for `mode` over `samples` random triples.
pub fn tnorm_violations(mode: ldr_fs::tsk::TNorm, samples: usize, seed: u64) -> usize {
    use ldr_fs::tsk::firing_strength;
    let t = |a: f64, b: f64| firing_strength(&[a, b], mode).unwrap();
    let mut r = rng(seed);
    let mut bad = 0;
    for _ in 0..samples {
        let (a, b, c) = (
            dyadic_unit(&mut r),
            dyadic_unit(&mut r),
            dyadic_unit(&mut r),
        );
        let (lo, hi) = if b <= c { (b, c) } else { (c, b) };
        let checks = [
            t(a, b) == t(b, a),
            t(a, t(b, c)) == t(t(a, b), c),
            t(a, lo) <= t(a, hi),
            t(a, 1.0) == a,
            t(a, 0.0) == 0.0,
            t(a, b) == mode.apply(a, b),
        ];
        bad += checks.iter().filter(|ok| !**ok).count();
    }
    bad
}

/// Largest `|Σ w − 1|` of normalized firing over random strength vectors.
pub fn worst_normalization_error(samples: usize, seed: u64) -> f64 {
    let mut r = rng(seed);
    (0..samples)
        .map(|_| {
            let len = r.gen_range(1..12);
            let strengths: Vec<f64> = (0..len).map(|_| r.gen_range(1e-6..1.0)).collect();
            let w = ldr_fs::tsk::normalize_firing(&strengths).unwrap();
            (w.iter().sum::<f64>() - 1.0).abs()
        })
        .fold(0.0, f64::max)
}
