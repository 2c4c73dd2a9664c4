use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("matrix is not symmetric (max |a_ij - a_ji| = {0:e})")]
    Asymmetric(f64),

    #[error("{what} did not converge within {iters} iterations")]
    NoConvergence { what: &'static str, iters: usize },

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("all firing strengths are zero")]
    DegenerateFiring,

    #[error("size error: {0}")]
    Size(String),

    #[error("{stage} diverged at iteration {iteration}")]
    Divergence {
        stage: &'static str,
        iteration: usize,
    },

    #[error("singular Sylvester pencil at ({row}, {col}): denominator {denom:e}")]
    SingularPencil { row: usize, col: usize, denom: f64 },

    #[error("row {0} of Q produced a non-finite reweighting entry")]
    DegenerateRow(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("fold {fold}: {source}")]
    Fold {
        fold: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim(op: &'static str, detail: impl Into<String>) -> Error {
    Error::Dimension {
        op,
        detail: detail.into(),
    }
}
