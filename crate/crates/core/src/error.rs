use thiserror::Error;

/// Errors raised by the estimation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no data")]
    NoData,

    #[error("negative value {value} at index {index}")]
    NegativeValue { index: usize, value: i64 },

    #[error("target outside family range: {target} not in [{lower}, {upper}]")]
    TargetOutsideRange { target: f64, lower: f64, upper: f64 },

    #[error("estimating equation has no root in range [{lower}, {upper}]")]
    NoRootInRange { lower: f64, upper: f64 },

    #[error("score not strictly monotone at k = {k}")]
    ScoreNotMonotone { k: u64 },

    #[error("use boundary law: F(k0) = 0.5 at k0 = {k0}")]
    BoundaryCase { k0: u64 },

    #[error("use lateral derivatives: F(k0) = 0.5 at k0 = {k0}")]
    NotDifferentiable { k0: u64 },

    #[error("interior case: F(k0) > 0.5 at k0 = {k0}, lateral derivatives do not apply")]
    InteriorCase { k0: u64 },

    #[error("degenerate right tail: p(k0 + 1) = 0 at k0 = {k0}")]
    DegenerateRightTail { k0: u64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cell {cell}: {failed} of {replications} replications failed")]
    CellFailed {
        cell: String,
        failed: usize,
        replications: usize,
    },

    #[error("missing cells: {}", .0.join(", "))]
    MissingCells(Vec<String>),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// True for errors raised by a numerical solver rather than bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::TargetOutsideRange { .. } | Error::NoRootInRange { .. } | Error::CellFailed { .. }
        )
    }

    /// True when a library invariant was breached.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Internal(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
