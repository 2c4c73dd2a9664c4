//! Data handling, cross-validation, downstream k-NN scoring and
//! rank-based statistics.

pub mod cv;
pub mod data;
pub mod metrics;
pub mod stats;
pub mod toy;

use serde::Serialize;

use crate::baselines::{erfs_fit, erfs_rank, ErfsConfig};
use crate::error::{Error, Result};
use crate::ldr::{run_feature_selection, LdrConfig, RankedFeatures};
use crate::numerics::DenseMatrix;

pub use cv::{kfold_split, knn_predict, CvSplit, Fold, DEFAULT_FOLDS};
pub use data::{load_csv, minmax_normalize, one_hot, parse_csv, Dataset, MinMax};
pub use metrics::{accuracy, macro_f1, mean_std};
pub use stats::{bonferroni_dunn_cd, friedman_stats, FriedmanStats};
pub use toy::{gen_double_circle, DoubleCircle};

pub const DEFAULT_KNN_K: usize = 5;

/// Anything that ranks features from (normalized) training data.
pub trait Selector: Sync {
    fn name(&self) -> &str;
    fn rank(&self, x: &DenseMatrix, y: &[usize], classes: usize) -> Result<RankedFeatures>;
}

/// The low-dimensional TSK selector.
#[derive(Debug, Clone, Default)]
pub struct LdrSelector {
    pub config: LdrConfig,
}

impl Selector for LdrSelector {
    fn name(&self) -> &str {
        "ldr"
    }

    fn rank(&self, x: &DenseMatrix, y: &[usize], _classes: usize) -> Result<RankedFeatures> {
        let labels: Vec<f64> = y.iter().map(|&v| v as f64).collect();
        Ok(run_feature_selection(x, &labels, &self.config)?.ranking)
    }
}

#[derive(Debug, Clone, Default)]
pub struct ErfsSelector {
    pub config: ErfsConfig,
}

impl Selector for ErfsSelector {
    fn name(&self) -> &str {
        "erfs"
    }

    fn rank(&self, x: &DenseMatrix, y: &[usize], classes: usize) -> Result<RankedFeatures> {
        let model = erfs_fit(x, &one_hot(y, classes), &self.config)?;
        Ok(erfs_rank(&model))
    }
}

/// Keeps features in their original order.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoSelection;

impl Selector for NoSelection {
    fn name(&self) -> &str {
        "none"
    }

    fn rank(&self, x: &DenseMatrix, _y: &[usize], _classes: usize) -> Result<RankedFeatures> {
        Ok(RankedFeatures::identity(x.cols()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalSettings {
    pub select_count: usize,
    pub folds: usize,
    pub seed: u64,
    pub knn_k: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct EvalReport {
    pub dataset: String,
    pub selector: String,
    pub select_count: usize,
    pub folds: usize,
    pub seed: u64,
    pub knn_k: usize,
    pub fold_accuracy: Vec<f64>,
    pub fold_macro_f1: Vec<f64>,
    /// Features kept in each fold, best first.
    pub fold_selected: Vec<Vec<usize>>,
    pub mean_accuracy: f64,
    pub std_accuracy: f64,
    pub mean_macro_f1: f64,
    pub std_macro_f1: f64,
}

/// Per fold: fit min–max ranges on the training rows, rank features on the
/// training rows only, keep the top `select_count`, then score a k-NN
/// classifier on the held-out rows.
pub fn evaluate_selection(
    dataset: &Dataset,
    selector: &dyn Selector,
    settings: &EvalSettings,
) -> Result<EvalReport> {
    let m = dataset.features();
    if settings.select_count == 0 || settings.select_count > m {
        return Err(Error::Size(format!(
            "select_count {} must lie in 1..={m}",
            settings.select_count
        )));
    }
    let split = kfold_split(dataset.samples(), settings.folds, settings.seed, &dataset.y)?;
    let mut report = EvalReport {
        dataset: dataset.name.clone(),
        selector: selector.name().to_owned(),
        select_count: settings.select_count,
        folds: settings.folds,
        seed: settings.seed,
        knn_k: settings.knn_k,
        fold_accuracy: Vec::new(),
        fold_macro_f1: Vec::new(),
        fold_selected: Vec::new(),
        mean_accuracy: 0.0,
        std_accuracy: 0.0,
        mean_macro_f1: 0.0,
        std_macro_f1: 0.0,
    };
    for (i, fold) in split.folds.iter().enumerate() {
        let (acc, f1, kept) =
            evaluate_fold(dataset, selector, settings, fold).map_err(|e| Error::Fold {
                fold: i,
                source: Box::new(e),
            })?;
        report.fold_accuracy.push(acc);
        report.fold_macro_f1.push(f1);
        report.fold_selected.push(kept);
    }
    (report.mean_accuracy, report.std_accuracy) = mean_std(&report.fold_accuracy);
    (report.mean_macro_f1, report.std_macro_f1) = mean_std(&report.fold_macro_f1);
    Ok(report)
}

fn evaluate_fold(
    dataset: &Dataset,
    selector: &dyn Selector,
    settings: &EvalSettings,
    fold: &Fold,
) -> Result<(f64, f64, Vec<usize>)> {
    let (normalized, _) = minmax_normalize(&dataset.x, &fold.train)?;
    let train_x = normalized.select_rows(&fold.train);
    let test_x = normalized.select_rows(&fold.test);
    let train_y: Vec<usize> = fold.train.iter().map(|&i| dataset.y[i]).collect();
    let test_y: Vec<usize> = fold.test.iter().map(|&i| dataset.y[i]).collect();

    let ranking = selector.rank(&train_x, &train_y, dataset.classes())?;
    let kept = ranking.top(settings.select_count).to_vec();
    let k = settings.knn_k.min(train_x.rows());
    let pred = knn_predict(
        &train_x.select_columns(&kept),
        &train_y,
        &test_x.select_columns(&kept),
        k,
    )?;
    Ok((
        accuracy(&pred, &test_y)?,
        macro_f1(&pred, &test_y, dataset.classes())?,
        kept,
    ))
}
