//! Reader for the s-expression input format.
//!
//! ```text
//! (theory Ints)
//! (sort S)
//! (fun f (Int Int) S)
//! (rule (f x y) (g y) :guard (<= x y))
//! ```
//!
//! Identifiers that are not declared function symbols are variables; their
//! sorts are inferred per rule.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use lctrs::error::RuleError;
use lctrs::logic::tt;
use lctrs::rewriting::{Lctrs, Rule, Signature};
use lctrs::sexp::{parse_all, Loc, Sexp, SexpError};
use lctrs::term::{FunSym, Sort, Sym, Term, TheoryOp, Value, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error(transparent)]
    Sexp(#[from] SexpError),
    #[error("{0}: {1}")]
    Syntax(Loc, String),
    #[error("{0}: unknown function symbol `{1}`")]
    UnknownSymbol(Loc, String),
    #[error("{0}: unknown sort `{1}`")]
    UnknownSort(Loc, String),
    #[error("{0}: `{1}` is declared twice")]
    Duplicate(Loc, String),
    #[error("{loc}: `{symbol}` expects {expected} arguments, got {found}")]
    Arity {
        loc: Loc,
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("{0}: expected sort {1}, found {2}")]
    SortMismatch(Loc, String, String),
    #[error("{0}: cannot infer the sort of variable `{1}`")]
    Ambiguous(Loc, String),
    #[error("{0}: guard must have sort Bool")]
    GuardNotBool(Loc),
    #[error("{0}: guard may only use theory symbols, values and variables")]
    GuardNotLogical(Loc),
    #[error("{0}: integer literals and theory symbols need `(theory Ints)`")]
    NoTheory(Loc),
    #[error("{0}: {1}")]
    Rule(Loc, RuleError),
}

/// Sort variables for inference; concrete sorts are leaves.
#[derive(Clone, Debug)]
enum Ty {
    Known(Sort),
    Link(usize),
    Free,
}

#[derive(Default)]
struct Unifier {
    slots: Vec<Ty>,
}

impl Unifier {
    fn fresh(&mut self) -> usize {
        self.slots.push(Ty::Free);
        self.slots.len() - 1
    }

    fn known(&mut self, s: Sort) -> usize {
        self.slots.push(Ty::Known(s));
        self.slots.len() - 1
    }

    fn find(&mut self, i: usize) -> usize {
        match self.slots[i] {
            Ty::Link(j) => {
                let r = self.find(j);
                self.slots[i] = Ty::Link(r);
                r
            }
            _ => i,
        }
    }

    fn sort(&mut self, i: usize) -> Option<Sort> {
        let r = self.find(i);
        match &self.slots[r] {
            Ty::Known(s) => Some(s.clone()),
            _ => None,
        }
    }

    /// Merges two classes; `Err` carries the conflicting sorts.
    fn unify(&mut self, a: usize, b: usize) -> Result<(), (Sort, Sort)> {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return Ok(());
        }
        match (self.slots[ra].clone(), self.slots[rb].clone()) {
            (Ty::Known(x), Ty::Known(y)) if x != y => Err((x, y)),
            (Ty::Known(_), _) => {
                self.slots[rb] = Ty::Link(ra);
                Ok(())
            }
            _ => {
                self.slots[ra] = Ty::Link(rb);
                Ok(())
            }
        }
    }
}

/// Annotated expression tree produced by the first pass.
enum Node {
    Var(String, usize, Loc),
    Val(Value),
    Fun(Sym, Vec<Node>),
    /// Theory operator whose instance is chosen after inference.
    Op(TheoryOp, Vec<Node>, usize, Loc),
}

struct Reader<'a> {
    sig: &'a Signature,
    theory: bool,
    uf: Unifier,
    vars: BTreeMap<String, (usize, Loc)>,
}

fn theory_op(name: &str, arity: usize) -> Option<TheoryOp> {
    Some(match (name, arity) {
        ("+", _) => TheoryOp::Add,
        ("-", 1) => TheoryOp::Neg,
        ("-", _) => TheoryOp::Sub,
        ("*", _) => TheoryOp::Mul,
        ("=", _) => TheoryOp::Eq,
        ("!=", _) => TheoryOp::Ne,
        ("<", _) => TheoryOp::Lt,
        ("<=", _) => TheoryOp::Le,
        (">", _) => TheoryOp::Gt,
        (">=", _) => TheoryOp::Ge,
        ("and", _) => TheoryOp::And,
        ("or", _) => TheoryOp::Or,
        ("not", _) => TheoryOp::Not,
        ("=>", _) => TheoryOp::Implies,
        _ => return None,
    })
}

fn is_identifier(s: &str) -> bool {
    !s.is_empty() && !s.starts_with(':') && !s.starts_with('"') && s.chars().all(|c| !c.is_whitespace())
}

impl Reader<'_> {
    fn unify_at(&mut self, loc: Loc, a: usize, b: usize) -> Result<(), ParseError> {
        self.uf
            .unify(a, b)
            .map_err(|(x, y)| ParseError::SortMismatch(loc, x.to_string(), y.to_string()))
    }

    /// Reads `e` and returns its node and sort slot.
    fn read(&mut self, e: &Sexp) -> Result<(Node, usize), ParseError> {
        match e {
            Sexp::Atom(s, loc) => self.read_atom(s, *loc),
            Sexp::List(xs, loc) => {
                let Some((head, args)) = xs.split_first() else {
                    return Err(ParseError::Syntax(*loc, "empty application".into()));
                };
                let Some(name) = head.as_atom() else {
                    return Err(ParseError::Syntax(*loc, "application head must be a symbol".into()));
                };
                if let Some(f) = self.sig.get(name) {
                    let f = f.clone();
                    return self.read_fun(f, args, *loc);
                }
                if let Some(op) = theory_op(name, args.len()) {
                    return self.read_op(op, name, args, *loc);
                }
                Err(ParseError::UnknownSymbol(head.loc(), name.to_string()))
            }
        }
    }

    fn read_atom(&mut self, s: &str, loc: Loc) -> Result<(Node, usize), ParseError> {
        if let Ok(n) = s.parse::<BigInt>() {
            if !self.theory {
                return Err(ParseError::NoTheory(loc));
            }
            return Ok((Node::Val(Value::Int(n)), self.uf.known(Sort::int())));
        }
        if s == "true" || s == "false" {
            if !self.theory {
                return Err(ParseError::NoTheory(loc));
            }
            return Ok((Node::Val(Value::Bool(s == "true")), self.uf.known(Sort::bool())));
        }
        if let Some(f) = self.sig.get(s) {
            let f = f.clone();
            return self.read_fun(f, &[], loc);
        }
        if theory_op(s, 0).is_some() || !is_identifier(s) {
            return Err(ParseError::Syntax(loc, format!("`{s}` cannot be used as a variable")));
        }
        let slot = match self.vars.get(s) {
            Some(&(slot, _)) => slot,
            None => {
                let slot = self.uf.fresh();
                self.vars.insert(s.to_string(), (slot, loc));
                slot
            }
        };
        Ok((Node::Var(s.to_string(), slot, loc), slot))
    }

    fn read_fun(&mut self, f: Sym, args: &[Sexp], loc: Loc) -> Result<(Node, usize), ParseError> {
        if f.arity() != args.len() {
            return Err(ParseError::Arity {
                loc,
                symbol: f.name.to_string(),
                expected: f.arity(),
                found: args.len(),
            });
        }
        let mut nodes = Vec::new();
        for (a, want) in args.iter().zip(f.args.clone()) {
            let (n, slot) = self.read(a)?;
            let w = self.uf.known(want);
            self.unify_at(a.loc(), w, slot)?;
            nodes.push(n);
        }
        let result = self.uf.known(f.result.clone());
        Ok((Node::Fun(f, nodes), result))
    }

    fn read_op(&mut self, op: TheoryOp, name: &str, args: &[Sexp], loc: Loc) -> Result<(Node, usize), ParseError> {
        if !self.theory {
            return Err(ParseError::NoTheory(loc));
        }
        let arity = match op {
            TheoryOp::Neg | TheoryOp::Not => 1,
            _ => 2,
        };
        let variadic = matches!(op, TheoryOp::Add | TheoryOp::Mul | TheoryOp::And | TheoryOp::Or);
        if args.len() != arity && !(variadic && args.len() > 2) {
            return Err(ParseError::Arity {
                loc,
                symbol: name.to_string(),
                expected: arity,
                found: args.len(),
            });
        }
        if args.len() > 2 {
            // right-associated chain
            let (first, rest) = args.split_first().expect("non-empty");
            let (a, sa) = self.read(first)?;
            let (b, sb) = self.read_op(op, name, rest, loc)?;
            return self.finish_op(op, vec![(a, sa, first.loc()), (b, sb, loc)], loc);
        }
        let mut parts = Vec::new();
        for a in args {
            let (n, s) = self.read(a)?;
            parts.push((n, s, a.loc()));
        }
        self.finish_op(op, parts, loc)
    }

    fn finish_op(&mut self, op: TheoryOp, parts: Vec<(Node, usize, Loc)>, loc: Loc) -> Result<(Node, usize), ParseError> {
        let (int, boolean) = (Sort::int(), Sort::bool());
        let (arg, result) = match op {
            TheoryOp::Add | TheoryOp::Sub | TheoryOp::Mul | TheoryOp::Neg => (Some(int.clone()), int),
            TheoryOp::Lt | TheoryOp::Le | TheoryOp::Gt | TheoryOp::Ge => (Some(int), boolean),
            TheoryOp::And | TheoryOp::Or | TheoryOp::Not | TheoryOp::Implies => (Some(boolean.clone()), boolean),
            TheoryOp::Eq | TheoryOp::Ne => (None, boolean),
        };
        let shared = match arg.clone() {
            Some(s) => self.uf.known(s),
            None => self.uf.fresh(),
        };
        let mut nodes = Vec::new();
        for (n, s, at) in parts {
            self.unify_at(at, shared, s)?;
            nodes.push(n);
        }
        if arg.is_none() {
            if let Some(s) = self.uf.sort(shared) {
                if !s.is_theory() {
                    return Err(ParseError::SortMismatch(loc, "Int or Bool".into(), s.to_string()));
                }
            }
        }
        Ok((Node::Op(op, nodes, shared, loc), self.uf.known(result)))
    }

    fn build(&mut self, n: &Node) -> Result<Term, ParseError> {
        Ok(match n {
            Node::Var(name, slot, loc) => {
                let sort = self
                    .uf
                    .sort(*slot)
                    .ok_or_else(|| ParseError::Ambiguous(*loc, name.clone()))?;
                Term::Var(Var::new(name, sort))
            }
            Node::Val(v) => Term::Val(v.clone()),
            Node::Fun(f, args) => Term::app(f.clone(), args.iter().map(|a| self.build(a)).collect::<Result<_, _>>()?),
            Node::Op(op, args, shared, loc) => {
                let args: Vec<Term> = args.iter().map(|a| self.build(a)).collect::<Result<_, _>>()?;
                let sorts: Vec<Sort> = args.iter().map(Term::sort).collect();
                let sym = FunSym::theory_at(*op, &sorts).ok_or_else(|| {
                    let s = self.uf.sort(*shared).map_or("?".into(), |s| s.to_string());
                    ParseError::SortMismatch(*loc, "Int or Bool".into(), s)
                })?;
                Term::app(sym, args)
            }
        })
    }
}

fn atom<'s>(e: &'s Sexp, what: &str) -> Result<&'s str, ParseError> {
    e.as_atom()
        .ok_or_else(|| ParseError::Syntax(e.loc(), format!("expected {what}")))
}

fn sort_named(sig: &Signature, e: &Sexp) -> Result<Sort, ParseError> {
    let name = atom(e, "a sort name")?;
    let s = Sort::new(name);
    if sig.sorts.contains(&s) {
        Ok(s)
    } else {
        Err(ParseError::UnknownSort(e.loc(), name.to_string()))
    }
}

/// Parses a complete document into a system.
pub fn parse(text: &str) -> Result<Lctrs, ParseError> {
    let items = parse_all(text)?;
    let mut sig = Signature::new();
    let mut rules = Vec::new();
    for item in &items {
        let Some(xs) = item.as_list() else {
            return Err(ParseError::Syntax(item.loc(), "expected a declaration".into()));
        };
        let Some(kw) = xs.first().and_then(Sexp::as_atom) else {
            return Err(ParseError::Syntax(item.loc(), "expected a declaration".into()));
        };
        match kw {
            "theory" => {
                let name = xs.get(1).map(|e| atom(e, "a theory name")).transpose()?;
                if name != Some("Ints") || xs.len() != 2 {
                    return Err(ParseError::Syntax(item.loc(), "only `(theory Ints)` is supported".into()));
                }
                sig.declare_theory();
            }
            "sort" => {
                if xs.len() != 2 {
                    return Err(ParseError::Syntax(item.loc(), "expected `(sort NAME)`".into()));
                }
                let name = atom(&xs[1], "a sort name")?;
                let s = Sort::new(name);
                if sig.sorts.contains(&s) || s.is_theory() {
                    return Err(ParseError::Duplicate(xs[1].loc(), name.to_string()));
                }
                sig.declare_sort(s);
            }
            "fun" => {
                if xs.len() != 4 {
                    return Err(ParseError::Syntax(item.loc(), "expected `(fun NAME (SORTS...) SORT)`".into()));
                }
                let name = atom(&xs[1], "a function name")?;
                if sig.get(name).is_some() || theory_op(name, 2).is_some() || name.parse::<BigInt>().is_ok() {
                    return Err(ParseError::Duplicate(xs[1].loc(), name.to_string()));
                }
                let args = xs[2]
                    .as_list()
                    .ok_or_else(|| ParseError::Syntax(xs[2].loc(), "expected a list of argument sorts".into()))?
                    .iter()
                    .map(|e| sort_named(&sig, e))
                    .collect::<Result<Vec<_>, _>>()?;
                let result = sort_named(&sig, &xs[3])?;
                sig.declare(name, args, result);
            }
            "rule" => rules.push(read_rule(&sig, item, xs)?),
            other => {
                return Err(ParseError::Syntax(xs[0].loc(), format!("unknown declaration `{other}`")));
            }
        }
    }
    Ok(Lctrs::new(sig, rules))
}

fn read_rule(sig: &Signature, item: &Sexp, xs: &[Sexp]) -> Result<Rule, ParseError> {
    let guard = match xs.len() {
        3 => None,
        5 if xs[3].as_atom() == Some(":guard") => Some(&xs[4]),
        _ => {
            return Err(ParseError::Syntax(item.loc(), "expected `(rule LHS RHS)` or `(rule LHS RHS :guard C)`".into()));
        }
    };
    let mut r = Reader {
        sig,
        theory: sig.has_theory(),
        uf: Unifier::default(),
        vars: BTreeMap::new(),
    };
    let (lhs, ls) = r.read(&xs[1])?;
    let (rhs, rs) = r.read(&xs[2])?;
    r.unify_at(xs[2].loc(), ls, rs)?;
    let g = match guard {
        Some(g) => {
            let (n, s) = r.read(g)?;
            let b = r.uf.known(Sort::bool());
            r.uf.unify(b, s).map_err(|_| ParseError::GuardNotBool(g.loc()))?;
            Some((n, g.loc()))
        }
        None => None,
    };
    let lhs = r.build(&lhs)?;
    let rhs = r.build(&rhs)?;
    let guard = match g {
        Some((n, loc)) => {
            let t = r.build(&n)?;
            if !t.is_logical() {
                return Err(ParseError::GuardNotLogical(loc));
            }
            t
        }
        None => tt(),
    };
    Rule::new(lhs, rhs, guard).map_err(|e| ParseError::Rule(item.loc(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn guarded_rule_with_inferred_sorts() {
        let r = parse(
            "(theory Ints)\n(fun f (Int Int) Int)\n(fun c (Int Int) Int)\n(rule (f x y) (c 4 x) :guard (<= y x))",
        )
        .unwrap();
        assert_eq!(r.rules.len(), 1);
        assert_eq!(r.rules[0].to_string(), "(f x y) → (c 4 x) [(<= y x)]");
    }

    #[test]
    fn constants_may_be_written_bare() {
        let r = parse("(theory Ints)\n(fun a () Int)\n(rule a x :guard (= x 0))").unwrap();
        assert_eq!(r.rules[0].lhs.to_string(), "a");
        assert_eq!(r.rules[0].rhs.sort(), Sort::int());
    }

    #[test]
    fn value_rooted_lhs_is_rejected() {
        let err = parse("(theory Ints)\n(rule 0 1)").unwrap_err();
        assert!(matches!(err, ParseError::Rule(Loc { line: 2, col: 1 }, RuleError::TheoryRoot(_))), "{err}");
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("(theory Ints)\n(fun f (Int) Int)\n(rule (f x y) x)").unwrap_err();
        assert!(matches!(err, ParseError::Arity { loc: Loc { line: 3, col: 7 }, .. }), "{err}");
        let err = parse("(theory Ints)\n(fun f (Int) Int)\n(rule (f x) (g x))").unwrap_err();
        assert_eq!(err.to_string(), "3:14: unknown function symbol `g`");
        let err = parse("(theory Ints)\n(sort S)\n(fun a () S)\n(rule a a :guard (= x y))").unwrap_err();
        assert!(matches!(err, ParseError::Ambiguous(..)), "{err}");
        let err = parse("(theory Ints)\n(fun f (Int) Int)\n(rule (f x) x :guard (+ x 1))").unwrap_err();
        assert!(matches!(err, ParseError::GuardNotBool(..)), "{err}");
    }

    #[test]
    fn overloaded_equality_follows_argument_sorts() {
        let r = parse("(theory Ints)\n(fun f (Bool) Int)\n(rule (f b) 1 :guard (= b (> 2 1)))").unwrap();
        assert_eq!(r.rules[0].guard.args()[0].sort(), Sort::bool());
    }
}
