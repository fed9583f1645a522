use thiserror::Error;

/// Errors reported by parsing and by operations with checked preconditions.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A closing parenthesis without a matching opening one, or an opening
    /// parenthesis that is never closed.
    #[error("unbalanced parentheses at position {pos}")]
    Unbalanced { pos: usize },
    /// A closing parenthesis whose label differs from its opening parenthesis.
    #[error("label mismatch at position {pos}: opened with `{open}`, closed with `{close}`")]
    LabelMismatch {
        pos: usize,
        open: String,
        close: String,
    },
    /// Input that does not follow the parenthesized grammar.
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    /// Malformed JSON forest document.
    #[error("invalid JSON forest: {0}")]
    Json(String),
    /// A node-pair set that is not a non-crossing matching.
    #[error("node pairs ({0}, {1}) and ({2}, {3}) cross")]
    Crossing(usize, usize, usize, usize),
    /// A node pair whose labels differ.
    #[error("matched nodes {0} and {1} carry different labels")]
    UnmatchedLabels(usize, usize),
    /// An alignment violating the step rule.
    #[error("malformed alignment: {0}")]
    Malformed(String),
    /// No alignment exists within the requested cost and width.
    #[error("no alignment within the cost and width budget")]
    NoAlignment,
    /// An argument outside the documented domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
