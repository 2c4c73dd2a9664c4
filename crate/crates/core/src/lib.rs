//! Feature selection with a low-dimensional-representation TSK fuzzy system.
//!
//! * [`numerics`] has dense matrices, Jacobi eigendecomposition and the pseudoinverse.
//! * [`tsk`] has the classic TSK fuzzy system and its gradient-descent trainer.
//! * [`ldr`] has the alternating optimizer whose projection ranks features.
//! * [`baselines`] has ERFS.
//! * [`evalkit`] has data loading, cross-validation, metrics and statistics.

pub mod baselines;
pub mod error;
pub mod evalkit;
pub mod ldr;
pub mod numerics;
pub mod tsk;

pub use error::{Error, Result};
pub use ldr::{rank_features, run_feature_selection, LdrConfig, LdrState, RankedFeatures};
pub use numerics::DenseMatrix;
