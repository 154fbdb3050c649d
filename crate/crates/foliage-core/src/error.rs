//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by model construction, operator assembly and the solvers.
#[derive(Debug, Error)]
pub enum FoliageError {
    /// A name passed on the command line or in a config file does not match
    /// any built-in model.
    #[error("unknown model `{0}` (expected one of: carriere, product_j1, product_j2, taut_torus)")]
    UnknownModel(String),

    /// A holonomy matrix that is not integral, not unimodular or not hyperbolic.
    #[error("invalid holonomy matrix {0}")]
    InvalidMatrix(String),

    /// An operator name that does not parse.
    #[error("unknown operator kind `{0}`")]
    UnknownOperator(String),

    /// A degree or bidegree outside the range supported by the model.
    #[error("component {0} out of range for transverse dimension 2n = {1}")]
    ComponentOutOfRange(String, usize),

    /// A request that only makes sense on some class of models.
    #[error("operation requires {required} model, `{model}` is not")]
    Capability { required: &'static str, model: String },

    /// Deformation data that is not a real-valued function.
    #[error("deformation potential must be real valued: {0}")]
    NotReal(String),

    /// Malformed inline or file input.
    #[error("parse error: {0}")]
    Parse(String),

    /// A truncation-sensitive computation whose answer still depends on K.
    #[error("not converged at K = {k}: {what}")]
    NotConverged { what: String, k: i32 },

    /// Anything surfaced by the filesystem.
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, FoliageError>;
