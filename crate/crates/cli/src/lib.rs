//! Input format, printing and reports for the `lctrs` command.

pub mod parse;
pub mod print;
pub mod report;

pub use parse::{parse, ParseError};
pub use print::print;
