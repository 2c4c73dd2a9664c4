use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;

pub const DEFAULT_FOLDS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CvSplit {
    pub folds: Vec<Fold>,
}

/// Stratified, shuffled k-fold split.
///
/// Each class is shuffled and dealt round-robin across folds, continuing the
/// deal where the previous class stopped so fold sizes differ by at most one.
pub fn kfold_split(n: usize, folds: usize, seed: u64, y: &[usize]) -> Result<CvSplit> {
    if y.len() != n {
        return Err(Error::Size(format!("{} labels for {n} samples", y.len())));
    }
    if folds < 2 {
        return Err(Error::Size(format!("need at least 2 folds, got {folds}")));
    }
    if folds > n {
        return Err(Error::Size(format!("{folds} folds for {n} samples")));
    }
    let classes = y.iter().max().map_or(0, |c| c + 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tests: Vec<Vec<usize>> = vec![Vec::new(); folds];
    let mut next = 0;
    for class in 0..classes {
        let mut members: Vec<usize> = (0..n).filter(|&i| y[i] == class).collect();
        members.shuffle(&mut rng);
        for idx in members {
            tests[next].push(idx);
            next = (next + 1) % folds;
        }
    }
    let folds = tests
        .into_iter()
        .map(|mut test| {
            test.sort_unstable();
            let mut in_test = vec![false; n];
            test.iter().for_each(|&i| in_test[i] = true);
            let train = (0..n).filter(|&i| !in_test[i]).collect();
            Fold { train, test }
        })
        .collect();
    Ok(CvSplit { folds })
}

/// Majority vote over the `k` Euclidean nearest training rows.
///
/// Equidistant neighbours are ordered by training index; vote ties go to the
/// smallest class index.
pub fn knn_predict(
    train_x: &DenseMatrix,
    train_y: &[usize],
    test_x: &DenseMatrix,
    k: usize,
) -> Result<Vec<usize>> {
    if train_x.rows() == 0 {
        return Err(Error::Size("k-NN needs a non-empty training set".into()));
    }
    if train_x.rows() != train_y.len() {
        return Err(Error::Size(format!(
            "{} training rows, {} labels",
            train_x.rows(),
            train_y.len()
        )));
    }
    if k == 0 || k > train_x.rows() {
        return Err(Error::Size(format!(
            "k = {k} with {} training rows",
            train_x.rows()
        )));
    }
    if train_x.cols() != test_x.cols() {
        return Err(crate::error::dim(
            "knn_predict",
            format!("train {} vs test {} columns", train_x.cols(), test_x.cols()),
        ));
    }
    let classes = train_y.iter().max().map_or(0, |c| c + 1);
    let mut dist: Vec<(f64, usize)> = Vec::with_capacity(train_x.rows());
    let mut out = Vec::with_capacity(test_x.rows());
    for t in 0..test_x.rows() {
        let q = test_x.row(t);
        dist.clear();
        dist.extend((0..train_x.rows()).map(|i| {
            let d: f64 = train_x
                .row(i)
                .iter()
                .zip(q)
                .map(|(a, b)| (a - b).powi(2))
                .sum();
            (d, i)
        }));
        dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut votes = vec![0usize; classes];
        for &(_, i) in &dist[..k] {
            votes[train_y[i]] += 1;
        }
        let best = votes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map(|(c, _)| c)
            .unwrap_or(0);
        out.push(best);
    }
    Ok(out)
}
