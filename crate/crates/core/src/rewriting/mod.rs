//! Constrained rules, the systems built from them and every rewrite
//! relation used by the analyses.

pub mod constrained;
pub mod lctrs;
pub mod plain;
pub mod rule;

use std::fmt;

use crate::subst::Substitution;
use crate::term::Position;

pub use constrained::{equiv, equiv_extensions, CRewriter, CTerm};
pub use lctrs::{calc_rules, Lctrs, Signature, ValueDomain};
pub use plain::{multi_successors, parallel_successors, plain_successors, PlainRewriter, RootRewrite};
pub use rule::{respects, Rule};

/// Three-valued answer of the semi-decision procedures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    Unknown(String),
}

impl Answer {
    pub fn is_yes(&self) -> bool {
        matches!(self, Answer::Yes)
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Answer::No)
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Yes => f.write_str("yes"),
            Answer::No => f.write_str("no"),
            Answer::Unknown(why) => write!(f, "unknown ({why})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    Plain,
    Constrained,
    Parallel,
    Multi,
}

/// How a result was obtained: enough to replay the step.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StepRecord {
    pub position: Position,
    pub rule: Rule,
    pub subst: Substitution,
    pub flavor: Flavor,
    /// Redex positions of parallel and multi-steps.
    pub positions: Vec<Position>,
}

impl StepRecord {
    pub fn single(position: Position, rule: Rule, subst: Substitution, flavor: Flavor) -> Self {
        StepRecord {
            positions: vec![position.clone()],
            position,
            rule,
            subst,
            flavor,
        }
    }
}
