use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

fn check(yhat: &[usize], y: &[usize]) -> Result<()> {
    if yhat.len() != y.len() {
        return Err(Error::Size(format!(
            "{} predictions for {} labels",
            yhat.len(),
            y.len()
        )));
    }
    if y.is_empty() {
        return Err(Error::Size("no labels to score".into()));
    }
    Ok(())
}

pub fn accuracy(yhat: &[usize], y: &[usize]) -> Result<f64> {
    check(yhat, y)?;
    let hits = yhat.iter().zip(y).filter(|(a, b)| a == b).count();
    Ok(hits as f64 / y.len() as f64)
}

/// Unweighted mean over `classes` of 2TP/(2TP + FP + FN); a class with a
/// zero denominator scores 0.
pub fn macro_f1(yhat: &[usize], y: &[usize], classes: usize) -> Result<f64> {
    check(yhat, y)?;
    if classes == 0 {
        return Err(Error::Size("macro-F1 needs at least one class".into()));
    }
    let mut tp = vec![0usize; classes];
    let mut fp = vec![0usize; classes];
    let mut fne = vec![0usize; classes];
    for (&p, &t) in yhat.iter().zip(y) {
        if p >= classes || t >= classes {
            return Err(Error::Size(format!("label outside 0..{classes}")));
        }
        if p == t {
            tp[t] += 1;
        } else {
            fp[p] += 1;
            fne[t] += 1;
        }
    }
    // sum the per-class fractions exactly so the mean is correctly rounded
    let total: BigRational = (0..classes)
        .filter_map(|c| {
            let denom = 2 * tp[c] + fp[c] + fne[c];
            (denom > 0).then(|| BigRational::new(BigInt::from(2 * tp[c]), BigInt::from(denom)))
        })
        .sum();
    let mean = total / BigInt::from(classes);
    mean.to_f64().ok_or(Error::NonFinite("macro-F1"))
}

/// Mean and sample standard deviation (zero for fewer than two values).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
