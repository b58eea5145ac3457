//! Execution failures.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("unknown table {0:?}")]
    UnknownTable(String),

    #[error("unknown column {0:?}")]
    UnknownColumn(String),

    #[error("column {0:?} is ambiguous across joined tables")]
    AmbiguousColumn(String),

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    /// The query nests sub-selects deeper than two levels.
    #[error("sub-selects nested {depth} levels deep; at most 2 are supported")]
    DivergentSubquery { depth: usize },
}
