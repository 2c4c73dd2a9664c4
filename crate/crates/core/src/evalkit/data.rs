use std::path::Path;

use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;

/// Labelled samples: `x` is n×m, `y` holds dense class indices `0..c`.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub name: String,
    pub x: DenseMatrix,
    pub y: Vec<usize>,
    pub feature_names: Vec<String>,
    /// Original label text, indexed by class.
    pub class_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        name: impl Into<String>,
        x: DenseMatrix,
        y: Vec<usize>,
        feature_names: Vec<String>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        if x.rows() != y.len() {
            return Err(Error::Size(format!(
                "{} rows but {} labels",
                x.rows(),
                y.len()
            )));
        }
        if x.rows() < 2 {
            return Err(Error::Size(format!(
                "need at least 2 samples, got {}",
                x.rows()
            )));
        }
        if feature_names.len() != x.cols() {
            return Err(Error::Size(format!(
                "{} feature names for {} columns",
                feature_names.len(),
                x.cols()
            )));
        }
        if !x.is_finite() {
            return Err(Error::NonFinite("dataset features"));
        }
        let classes = class_names.len();
        let mut present = vec![false; classes];
        for &label in &y {
            if label >= classes {
                return Err(Error::Size(format!("label {label} outside 0..{classes}")));
            }
            present[label] = true;
        }
        if let Some(missing) = present.iter().position(|p| !p) {
            return Err(Error::Size(format!("class {missing} has no samples")));
        }
        Ok(Self {
            name: name.into(),
            x,
            y,
            feature_names,
            class_names,
        })
    }

    pub fn samples(&self) -> usize {
        self.x.rows()
    }

    pub fn features(&self) -> usize {
        self.x.cols()
    }

    pub fn classes(&self) -> usize {
        self.class_names.len()
    }

    /// Labels as reals, as consumed by the selector's regression target.
    pub fn labels_f64(&self) -> Vec<f64> {
        self.y.iter().map(|&v| v as f64).collect()
    }
}

/// One-hot encoding of dense labels into an n×c matrix.
pub fn one_hot(y: &[usize], classes: usize) -> DenseMatrix {
    DenseMatrix::from_fn(y.len(), classes, |i, c| if y[i] == c { 1.0 } else { 0.0 })
}

/// Reads a comma-separated file whose first row is a header, last column is
/// the label and remaining columns are numeric features.
///
/// Labels are mapped to `0..c` in order of first appearance.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into());
    parse_csv(&text, name)
}

pub fn parse_csv(text: &str, name: impl Into<String>) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header = reader.headers().map_err(csv_err)?.clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Err(Error::Parse {
            line: 1,
            msg: "empty file".into(),
        });
    }
    if header.len() < 2 {
        return Err(Error::Parse {
            line: 1,
            msg: "need at least one feature column and a label column".into(),
        });
    }
    let m = header.len() - 1;
    let feature_names: Vec<String> = header.iter().take(m).map(str::to_owned).collect();

    let mut data = Vec::new();
    let mut class_names: Vec<String> = Vec::new();
    let mut y = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        for (col, cell) in record.iter().take(m).enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Parse {
                line,
                msg: format!(
                    "column {} ({}): '{}' is not a number",
                    col + 1,
                    feature_names[col],
                    cell
                ),
            })?;
            if !v.is_finite() {
                return Err(Error::Parse {
                    line,
                    msg: format!(
                        "column {} ({}): non-finite value '{}'",
                        col + 1,
                        feature_names[col],
                        cell
                    ),
                });
            }
            data.push(v);
        }
        let label = &record[m];
        let class = match class_names.iter().position(|c| c == label) {
            Some(c) => c,
            None => {
                class_names.push(label.to_owned());
                class_names.len() - 1
            }
        };
        y.push(class);
    }
    if y.is_empty() {
        return Err(Error::Parse {
            line: 1,
            msg: "header without data rows".into(),
        });
    }
    if y.len() < 2 {
        return Err(Error::Parse {
            line: 2,
            msg: "need at least 2 data rows".into(),
        });
    }
    let x = DenseMatrix::from_vec(y.len(), m, data)?;
    Dataset::new(name, x, y, feature_names, class_names)
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line() as usize);
    let msg = match e.kind() {
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => {
            format!("ragged row: expected {expected_len} fields, found {len}")
        }
        _ => e.to_string(),
    };
    Error::Parse { line, msg }
}

/// Per-feature ranges learned on training rows.
#[derive(Debug, Clone, PartialEq)]
pub struct MinMax {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl MinMax {
    pub fn fit(x: &DenseMatrix, fit_rows: &[usize]) -> Result<Self> {
        if fit_rows.is_empty() {
            return Err(Error::Size(
                "min-max normalization needs at least one fit row".into(),
            ));
        }
        let m = x.cols();
        let mut min = vec![f64::INFINITY; m];
        let mut max = vec![f64::NEG_INFINITY; m];
        for &r in fit_rows {
            for (j, &v) in x.row(r).iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        Ok(Self { min, max })
    }

    /// Maps each feature onto [0, 1], clipping values outside the fitted
    /// range. Constant features map to 0.
    pub fn apply(&self, x: &DenseMatrix) -> Result<DenseMatrix> {
        if x.cols() != self.min.len() {
            return Err(crate::error::dim(
                "MinMax::apply",
                format!("{} columns, fitted {}", x.cols(), self.min.len()),
            ));
        }
        Ok(DenseMatrix::from_fn(x.rows(), x.cols(), |i, j| {
            let range = self.max[j] - self.min[j];
            if range > 0.0 {
                ((x[(i, j)] - self.min[j]) / range).clamp(0.0, 1.0)
            } else {
                0.0
            }
        }))
    }
}

/// Fits ranges on `fit_rows` and rescales every row of `x`.
pub fn minmax_normalize(x: &DenseMatrix, fit_rows: &[usize]) -> Result<(DenseMatrix, MinMax)> {
    let mm = MinMax::fit(x, fit_rows)?;
    Ok((mm.apply(x)?, mm))
}
