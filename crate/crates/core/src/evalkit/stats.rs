//! Friedman test and Bonferroni–Dunn critical difference over a
//! methods × datasets score table.

use crate::error::{Error, Result};

/// Two-tailed Bonferroni–Dunn critical value for seven methods at α = 0.05.
pub const Q_ALPHA_7_METHODS: f64 = 2.638;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FriedmanStats {
    pub chi2: f64,
    /// Iman–Davenport F; infinite when every dataset ranks methods identically.
    pub f: f64,
    pub methods: usize,
    pub datasets: usize,
}

/// Ranks methods within each dataset (column); rank 1 is the best score.
/// Ties share the mean of the ranks they span.
///
/// `scores[method][dataset]`.
pub fn rank_table(scores: &[Vec<f64>], higher_is_better: bool) -> Result<Vec<Vec<f64>>> {
    let methods = scores.len();
    let datasets = scores.first().map_or(0, Vec::len);
    if scores.iter().any(|row| row.len() != datasets) {
        return Err(Error::Size("score table rows differ in length".into()));
    }
    if scores.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("score table"));
    }
    let mut ranks = vec![vec![0.0; datasets]; methods];
    for d in 0..datasets {
        let mut idx: Vec<usize> = (0..methods).collect();
        idx.sort_by(|&a, &b| {
            let ord = scores[a][d].total_cmp(&scores[b][d]);
            if higher_is_better {
                ord.reverse()
            } else {
                ord
            }
        });
        let mut start = 0;
        while start < methods {
            let mut end = start + 1;
            while end < methods && scores[idx[end]][d] == scores[idx[start]][d] {
                end += 1;
            }
            // positions start..end hold ranks start+1..=end
            let mid = (start + 1 + end) as f64 / 2.0;
            for &m in &idx[start..end] {
                ranks[m][d] = mid;
            }
            start = end;
        }
    }
    Ok(ranks)
}

/// Friedman χ² and F from each method's average rank over `datasets`.
///
/// χ² = 12D/(M(M+1)) · (ΣR² − M(M+1)²/4), F = (D−1)χ² / (D(M−1) − χ²).
pub fn friedman_from_average_ranks(avg_ranks: &[f64], datasets: usize) -> Result<FriedmanStats> {
    let methods = avg_ranks.len();
    if methods < 2 || datasets < 2 {
        return Err(Error::Size(format!(
            "Friedman test needs at least 2 methods and 2 datasets, got {methods} and {datasets}"
        )));
    }
    let m = methods as f64;
    let d = datasets as f64;
    let sum_sq: f64 = avg_ranks.iter().map(|r| r * r).sum();
    let chi2 = 12.0 * d / (m * (m + 1.0)) * (sum_sq - m * (m + 1.0).powi(2) / 4.0);
    let denom = d * (m - 1.0) - chi2;
    let f = if denom > 0.0 {
        (d - 1.0) * chi2 / denom
    } else {
        f64::INFINITY
    };
    Ok(FriedmanStats {
        chi2,
        f,
        methods,
        datasets,
    })
}

/// Friedman statistics from a raw `scores[method][dataset]` table.
pub fn friedman_stats(scores: &[Vec<f64>], higher_is_better: bool) -> Result<FriedmanStats> {
    let ranks = rank_table(scores, higher_is_better)?;
    let datasets = ranks.first().map_or(0, Vec::len);
    let avg = average_ranks(&ranks);
    friedman_from_average_ranks(&avg, datasets)
}

pub fn average_ranks(ranks: &[Vec<f64>]) -> Vec<f64> {
    ranks
        .iter()
        .map(|row| row.iter().sum::<f64>() / row.len().max(1) as f64)
        .collect()
}

/// F statistic for a given χ².
pub fn f_from_chi2(chi2: f64, methods: usize, datasets: usize) -> f64 {
    let (m, d) = (methods as f64, datasets as f64);
    let denom = d * (m - 1.0) - chi2;
    if denom > 0.0 {
        (d - 1.0) * chi2 / denom
    } else {
        f64::INFINITY
    }
}

/// Inverse of [`f_from_chi2`]: χ² = F·D(M−1) / (D − 1 + F).
pub fn chi2_from_f(f: f64, methods: usize, datasets: usize) -> f64 {
    let (m, d) = (methods as f64, datasets as f64);
    f * d * (m - 1.0) / (d - 1.0 + f)
}

/// CD = q_α √(M(M+1) / (6D)).
pub fn bonferroni_dunn_cd(methods: usize, datasets: usize, q_alpha: f64) -> f64 {
    let (m, d) = (methods as f64, datasets as f64);
    q_alpha * (m * (m + 1.0) / (6.0 * d)).sqrt()
}
