use thiserror::Error;

use crate::term::Sort;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("symbol `{symbol}` expects {expected} arguments, got {found}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("argument {index} of `{symbol}` has sort {found}, expected {expected}")]
    SortMismatch {
        symbol: String,
        index: usize,
        expected: Sort,
        found: Sort,
    },
    #[error("positions {0} and {1} are not parallel")]
    OverlappingPositions(String, String),
    #[error("position {0} does not exist")]
    InvalidPosition(String),
    #[error("replacement at {position} has sort {found}, expected {expected}")]
    ReplacementSort {
        position: String,
        expected: Sort,
        found: Sort,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("cannot interpret non-ground term `{0}`")]
    NotGround(String),
    #[error("cannot interpret non-theory symbol `{0}`")]
    NotTheory(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("left- and right-hand side sorts differ: {0} vs {1}")]
    SortMismatch(Sort, Sort),
    #[error("root of left-hand side `{0}` must be a term symbol outside the theory signature")]
    TheoryRoot(String),
    #[error("guard `{0}` is not a constraint of sort Bool")]
    BadGuard(String),
    #[error(transparent)]
    Term(#[from] TermError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PcpError {
    #[error("index {0} is outside 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("an instance needs at least one pair")]
    Empty,
    #[error("pair {0} has an empty component")]
    EmptyWord(usize),
    #[error("word `{0}` is not over the alphabet {{0,1}}")]
    BadAlphabet(String),
    #[error("every pair has equal components, the instance is trivially solvable")]
    Trivial,
    #[error("malformed instance text: {0}")]
    Syntax(String),
}
