//! Parse failures, each anchored to a byte offset in the input.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    /// The input deviated from the grammar at `offset`.
    #[error("syntax error at byte {offset}: expected {expected}, found {found}")]
    Syntax {
        offset: usize,
        expected: String,
        found: String,
    },

    /// `VISUALIZE` named something outside bar, pie, line, scatter.
    #[error("unsupported chart type {found:?} at byte {offset}: expected bar, pie, line, or scatter")]
    UnsupportedChartType { offset: usize, found: String },
}

impl ParseError {
    /// Byte position the error points at.
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } => *offset,
            ParseError::UnsupportedChartType { offset, .. } => *offset,
        }
    }
}
