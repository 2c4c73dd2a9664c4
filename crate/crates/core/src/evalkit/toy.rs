use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::evalkit::data::Dataset;
use crate::numerics::DenseMatrix;

/// Radial jitter as a fraction of each circle's radius.
pub const RADIAL_JITTER: f64 = 0.05;

/// Parameters of the two-concentric-circles problem with appended noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleCircle {
    pub n_per_class: usize,
    pub r_inner: f64,
    pub r_outer: f64,
    pub noise_dims: usize,
    /// Noise features are i.i.d. uniform on `[-noise_amplitude, noise_amplitude]`.
    pub noise_amplitude: f64,
    pub seed: u64,
}

impl Default for DoubleCircle {
    fn default() -> Self {
        Self {
            n_per_class: 100,
            r_inner: 1.0,
            r_outer: 2.0,
            noise_dims: 8,
            noise_amplitude: 1.0,
            seed: 0,
        }
    }
}

impl DoubleCircle {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn generate(&self) -> Result<Dataset> {
        gen_double_circle(
            self.n_per_class,
            self.r_inner,
            self.r_outer,
            self.noise_dims,
            self.noise_amplitude,
            self.seed,
        )
    }
}

/// Class 0 on the inner circle, class 1 on the outer one (uniform angles,
/// radius jittered by ±5%), followed by `noise_dims` uniform noise columns.
/// Features 0 and 1 carry the signal.
pub fn gen_double_circle(
    n_per_class: usize,
    r_inner: f64,
    r_outer: f64,
    noise_dims: usize,
    noise_amplitude: f64,
    seed: u64,
) -> Result<Dataset> {
    if !(r_inner > 0.0) || !(r_inner < r_outer) {
        return Err(Error::Domain(format!(
            "need 0 < r_inner < r_outer, got {r_inner} and {r_outer}"
        )));
    }
    if !(noise_amplitude >= 0.0) || !noise_amplitude.is_finite() {
        return Err(Error::Domain(format!(
            "noise amplitude must be nonnegative, got {noise_amplitude}"
        )));
    }
    if n_per_class == 0 {
        return Err(Error::Size("need at least one sample per class".into()));
    }
    let m = 2 + noise_dims;
    let n = 2 * n_per_class;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = Vec::with_capacity(n * m);
    let mut y = Vec::with_capacity(n);
    for (class, radius) in [(0, r_inner), (1, r_outer)] {
        for _ in 0..n_per_class {
            let angle = rng.gen_range(0.0..TAU);
            let r = radius * (1.0 + rng.gen_range(-RADIAL_JITTER..=RADIAL_JITTER));
            data.push(r * angle.cos());
            data.push(r * angle.sin());
            for _ in 0..noise_dims {
                let v = if noise_amplitude > 0.0 {
                    rng.gen_range(-noise_amplitude..=noise_amplitude)
                } else {
                    0.0
                };
                data.push(v);
            }
            y.push(class);
        }
    }
    let x = DenseMatrix::from_vec(n, m, data)?;
    let mut names = vec!["x".to_owned(), "y".to_owned()];
    names.extend((0..noise_dims).map(|i| format!("noise{i}")));
    Dataset::new(
        format!("double-circle-{seed}"),
        x,
        y,
        names,
        vec!["inner".into(), "outer".into()],
    )
}
