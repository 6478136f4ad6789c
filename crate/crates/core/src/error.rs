//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong across the crate, from linear algebra up to
/// suite execution. Numerical non-convergence is deliberately *not* an error:
/// solvers report it through their result types instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("coordinate {index} is not finite")]
    NonFiniteCoordinate { index: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric (max asymmetry {max_asymmetry:.3e})")]
    NotSymmetric { max_asymmetry: f64 },

    #[error("matrix is not positive definite (pivot {pivot} failed)")]
    NotPositiveDefinite { pivot: usize },

    #[error("invalid parameter {name} = {value}: requires {requirement}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    #[error("resolvent scaling is singular: 1 + gamma*sigma = {denom:.3e}")]
    SingularScaling { denom: f64 },

    #[error("resolvent ill-posed: 1 + gamma*modulus <= 0 (gamma = {gamma}, modulus = {modulus})")]
    IllPosedResolvent { gamma: f64, modulus: f64 },

    #[error("prox ill-posed: 1 + gamma*modulus <= 0 (gamma = {gamma}, modulus = {modulus})")]
    IllPosedProx { gamma: f64, modulus: f64 },

    #[error("infeasible moduli: alpha + beta = {sum} must exceed -1/omega = {bound}")]
    InfeasibleModuli { sum: f64, bound: f64 },

    #[error("gamma = {gamma} incompatible with this sigma/tau split; any gamma in (0, {bound}) works")]
    GammaIncompatible { gamma: f64, bound: f64 },

    #[error("invalid configuration:\n{0}")]
    InvalidConfig(crate::splitting::Violations),

    #[error("unsupported omega = {omega}: this path requires omega > 1/2")]
    UnsupportedOmega { omega: f64 },

    #[error("operator declares modulus {modulus}; this path requires plain maximal monotone operators (modulus 0)")]
    NonZeroModulus { modulus: f64 },

    #[error("operator must be flagged maximal for this path")]
    NotMaximal,

    #[error("parameter constraint violated: {constraint} (residual {residual:.3e})")]
    ConstraintViolated { constraint: String, residual: f64 },

    #[error("degenerate set: {reason}")]
    DegenerateSet { reason: String },

    #[error("grid oracle supports dimension <= 3, got {dim}")]
    GridDimension { dim: usize },

    #[error("function does not expose values; grid search needs value evaluation")]
    MissingValue,

    #[error("unknown suite {name:?}; valid suites: {valid}")]
    UnknownSuite { name: String, valid: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
