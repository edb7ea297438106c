//! Confluence analysis for logically constrained term rewriting systems.

pub mod analysis;
pub mod error;
pub mod grounding;
pub mod logic;
pub mod pcp;
pub mod rewriting;
pub mod sexp;
pub mod subst;
pub mod term;
