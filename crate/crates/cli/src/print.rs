//! Writes systems back in the input format.

use std::fmt::Write;

use lctrs::logic::tt;
use lctrs::rewriting::{Lctrs, Rule};

/// Canonical document for `r`: theory, sorts, symbols (by name), rules.
pub fn print(r: &Lctrs) -> String {
    let mut out = String::new();
    if r.signature.has_theory() {
        out.push_str("(theory Ints)\n");
    }
    for s in r.signature.sorts.iter().filter(|s| !s.is_theory()) {
        writeln!(out, "(sort {s})").expect("write to string");
    }
    for f in r.signature.funs.values() {
        let args: Vec<String> = f.args.iter().map(ToString::to_string).collect();
        writeln!(out, "(fun {} ({}) {})", f.name, args.join(" "), f.result).expect("write to string");
    }
    for rule in &r.rules {
        out.push_str(&print_rule(rule));
        out.push('\n');
    }
    out
}

pub fn print_rule(rule: &Rule) -> String {
    if rule.guard == tt() {
        format!("(rule {} {})", rule.lhs, rule.rhs)
    } else {
        format!("(rule {} {} :guard {})", rule.lhs, rule.rhs, rule.guard)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse;

    #[test]
    fn printing_is_a_fixpoint_of_parsing() {
        let text = "(theory Ints)\n(sort S)\n(fun a () S)\n(fun f (Int S) S)\n(rule (f x a) a :guard (and (> x -1) (<= x 3)))\n(rule (f x y) y)\n";
        let r = parse(text).unwrap();
        assert_eq!(print(&r), text);
    }
}
