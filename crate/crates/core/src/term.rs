//! Many-sorted first-order terms over a split term/theory signature.
//!
//! Values (integer and boolean literals) are represented directly by
//! [`Term::Val`]; they are the constants shared between the term and the
//! theory signature. Every other function symbol carries its declaration so a
//! term can report its own sort without a signature at hand.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::TermError;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sort(Arc<str>);

impl Sort {
    pub fn new(name: &str) -> Self {
        Sort(Arc::from(name))
    }

    pub fn int() -> Self {
        Sort::new("Int")
    }

    pub fn bool() -> Self {
        Sort::new("Bool")
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Int and Bool are the theory sorts; everything else is a term sort.
    pub fn is_theory(&self) -> bool {
        matches!(&*self.0, "Int" | "Bool")
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Interpreted symbols of the integer/boolean theory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TheoryOp {
    Add,
    Sub,
    Mul,
    Neg,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    Not,
    Implies,
}

impl TheoryOp {
    pub const ALL: [TheoryOp; 14] = [
        TheoryOp::Add,
        TheoryOp::Sub,
        TheoryOp::Mul,
        TheoryOp::Neg,
        TheoryOp::Eq,
        TheoryOp::Ne,
        TheoryOp::Lt,
        TheoryOp::Le,
        TheoryOp::Gt,
        TheoryOp::Ge,
        TheoryOp::And,
        TheoryOp::Or,
        TheoryOp::Not,
        TheoryOp::Implies,
    ];

    /// Surface spelling, shared by the input format and SMT-LIB output.
    pub fn name(self) -> &'static str {
        match self {
            TheoryOp::Add => "+",
            TheoryOp::Sub | TheoryOp::Neg => "-",
            TheoryOp::Mul => "*",
            TheoryOp::Eq => "=",
            TheoryOp::Ne => "!=",
            TheoryOp::Lt => "<",
            TheoryOp::Le => "<=",
            TheoryOp::Gt => ">",
            TheoryOp::Ge => ">=",
            TheoryOp::And => "and",
            TheoryOp::Or => "or",
            TheoryOp::Not => "not",
            TheoryOp::Implies => "=>",
        }
    }

    /// Argument sort lists this operator is declared at. Equality and
    /// disequality are overloaded on both theory sorts.
    pub fn instances(self) -> Vec<(Vec<Sort>, Sort)> {
        let (i, b) = (Sort::int(), Sort::bool());
        match self {
            TheoryOp::Add | TheoryOp::Sub | TheoryOp::Mul => {
                vec![(vec![i.clone(), i.clone()], i)]
            }
            TheoryOp::Neg => vec![(vec![i.clone()], i)],
            TheoryOp::Lt | TheoryOp::Le | TheoryOp::Gt | TheoryOp::Ge => {
                vec![(vec![i.clone(), i], b)]
            }
            TheoryOp::Eq | TheoryOp::Ne => vec![
                (vec![i.clone(), i], b.clone()),
                (vec![b.clone(), b.clone()], b),
            ],
            TheoryOp::And | TheoryOp::Or | TheoryOp::Implies => {
                vec![(vec![b.clone(), b.clone()], b)]
            }
            TheoryOp::Not => vec![(vec![b.clone()], b)],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymKind {
    Term,
    Theory(TheoryOp),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FunSym {
    pub name: Arc<str>,
    pub args: Vec<Sort>,
    pub result: Sort,
    pub kind: SymKind,
}

pub type Sym = Arc<FunSym>;

impl FunSym {
    pub fn term(name: &str, args: Vec<Sort>, result: Sort) -> Sym {
        Arc::new(FunSym {
            name: Arc::from(name),
            args,
            result,
            kind: SymKind::Term,
        })
    }

    pub fn theory(op: TheoryOp, args: Vec<Sort>, result: Sort) -> Sym {
        Arc::new(FunSym {
            name: Arc::from(op.name()),
            args,
            result,
            kind: SymKind::Theory(op),
        })
    }

    /// Theory symbol for `op` at the given argument sorts, if declared there.
    pub fn theory_at(op: TheoryOp, args: &[Sort]) -> Option<Sym> {
        op.instances()
            .into_iter()
            .find(|(a, _)| a.as_slice() == args)
            .map(|(a, r)| FunSym::theory(op, a, r))
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    pub fn theory_op(&self) -> Option<TheoryOp> {
        match self.kind {
            SymKind::Theory(op) => Some(op),
            SymKind::Term => None,
        }
    }

    pub fn is_theory(&self) -> bool {
        self.theory_op().is_some()
    }
}

/// The binary constructor used to treat a pair `s ≈ t` as a single term, so
/// that "below position 1 / 2" restrictions become subterm restrictions.
pub const PAIR_SYMBOL: &str = "≈";

pub fn pair_symbol(sort: &Sort) -> Sym {
    FunSym::term(PAIR_SYMBOL, vec![sort.clone(), sort.clone()], Sort::new(PAIR_SYMBOL))
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Int(BigInt),
    Bool(bool),
}

impl Value {
    pub fn int(n: i64) -> Self {
        Value::Int(BigInt::from(n))
    }

    pub fn sort(&self) -> Sort {
        match self {
            Value::Int(_) => Sort::int(),
            Value::Bool(_) => Sort::bool(),
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(n) => Some(n),
            Value::Bool(_) => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            Value::Int(_) => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// A sorted variable. `idx` is zero for variables written by the user and
/// positive for renamed copies, so generated names never collide with input.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub name: Arc<str>,
    pub idx: u32,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: &str, sort: Sort) -> Self {
        Var {
            name: Arc::from(name),
            idx: 0,
            sort,
        }
    }

    pub fn with_index(&self, idx: u32) -> Self {
        Var {
            name: self.name.clone(),
            idx,
            sort: self.sort.clone(),
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.idx == 0 {
            f.write_str(&self.name)
        } else {
            write!(f, "{}_{}", self.name, self.idx)
        }
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}:{}", self.sort)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    Val(Value),
    App(Sym, Arc<[Term]>),
}

/// Position filter for [`Term::positions`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PosFilter {
    All,
    /// Only positions whose subterm is headed by a function symbol.
    Function,
}

impl Term {
    pub fn var(v: Var) -> Self {
        Term::Var(v)
    }

    pub fn int(n: i64) -> Self {
        Term::Val(Value::int(n))
    }

    pub fn bool(b: bool) -> Self {
        Term::Val(Value::Bool(b))
    }

    /// Builds an application without checking argument sorts.
    pub fn app(sym: Sym, args: Vec<Term>) -> Self {
        Term::App(sym, Arc::from(args))
    }

    pub fn constant(sym: Sym) -> Self {
        Term::app(sym, Vec::new())
    }

    /// Builds an application, checking arity and argument sorts.
    pub fn try_app(sym: Sym, args: Vec<Term>) -> Result<Self, TermError> {
        if sym.arity() != args.len() {
            return Err(TermError::Arity {
                symbol: sym.name.to_string(),
                expected: sym.arity(),
                found: args.len(),
            });
        }
        for (i, (arg, want)) in args.iter().zip(&sym.args).enumerate() {
            let got = arg.sort_of()?;
            if &got != want {
                return Err(TermError::SortMismatch {
                    symbol: sym.name.to_string(),
                    index: i + 1,
                    expected: want.clone(),
                    found: got,
                });
            }
        }
        Ok(Term::app(sym, args))
    }

    pub fn theory(op: TheoryOp, args: Vec<Term>) -> Self {
        let sorts: Vec<Sort> = args.iter().map(Term::sort).collect();
        let sym = FunSym::theory_at(op, &sorts)
            .unwrap_or_else(|| panic!("theory symbol {} not declared at {:?}", op.name(), sorts));
        Term::app(sym, args)
    }

    pub fn pair(left: Term, right: Term) -> Self {
        let sort = left.sort();
        Term::app(pair_symbol(&sort), vec![left, right])
    }

    /// Splits a pair term built by [`Term::pair`].
    pub fn as_pair(&self) -> Option<(&Term, &Term)> {
        match self {
            Term::App(f, args) if &*f.name == PAIR_SYMBOL && args.len() == 2 => {
                Some((&args[0], &args[1]))
            }
            _ => None,
        }
    }

    /// Sort of a term assumed to be well formed.
    pub fn sort(&self) -> Sort {
        match self {
            Term::Var(v) => v.sort.clone(),
            Term::Val(v) => v.sort(),
            Term::App(f, _) => f.result.clone(),
        }
    }

    /// Sort of the term after checking arity and argument sorts throughout.
    pub fn sort_of(&self) -> Result<Sort, TermError> {
        match self {
            Term::Var(v) => Ok(v.sort.clone()),
            Term::Val(v) => Ok(v.sort()),
            Term::App(f, args) => {
                if f.arity() != args.len() {
                    return Err(TermError::Arity {
                        symbol: f.name.to_string(),
                        expected: f.arity(),
                        found: args.len(),
                    });
                }
                for (i, (arg, want)) in args.iter().zip(&f.args).enumerate() {
                    let got = arg.sort_of()?;
                    if &got != want {
                        return Err(TermError::SortMismatch {
                            symbol: f.name.to_string(),
                            index: i + 1,
                            expected: want.clone(),
                            found: got,
                        });
                    }
                }
                Ok(f.result.clone())
            }
        }
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_value(&self) -> Option<&Value> {
        match self {
            Term::Val(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_value(&self) -> bool {
        matches!(self, Term::Val(_))
    }

    pub fn root(&self) -> Option<&Sym> {
        match self {
            Term::App(f, _) => Some(f),
            _ => None,
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::App(_, args) => args,
            _ => &[],
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Val(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// True if the term is built from theory symbols, values and variables only.
    pub fn is_logical(&self) -> bool {
        match self {
            Term::Var(_) | Term::Val(_) => true,
            Term::App(f, args) => f.is_theory() && args.iter().all(Term::is_logical),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Val(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Variables in left-to-right order of first occurrence.
    pub fn vars_ordered(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Val(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.vars_ordered(out)),
        }
    }

    /// Occurrence counts of each variable.
    pub fn var_occurrences(&self, out: &mut BTreeMap<Var, usize>) {
        match self {
            Term::Var(v) => *out.entry(v.clone()).or_default() += 1,
            Term::Val(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.var_occurrences(out)),
        }
    }

    pub fn values(&self, out: &mut BTreeSet<Value>) {
        match self {
            Term::Var(_) => {}
            Term::Val(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.values(out)),
        }
    }

    pub fn symbols(&self, out: &mut BTreeSet<Sym>) {
        if let Term::App(f, args) = self {
            out.insert(f.clone());
            args.iter().for_each(|a| a.symbols(out));
        }
    }

    pub fn occurs(&self, x: &Var) -> bool {
        match self {
            Term::Var(v) => v == x,
            Term::Val(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.occurs(x)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            _ => 1,
        }
    }

    pub fn positions(&self, filter: PosFilter) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.walk_positions(filter, &mut path, &mut out);
        out
    }

    fn walk_positions(&self, filter: PosFilter, path: &mut Vec<usize>, out: &mut Vec<Position>) {
        match self {
            Term::Var(_) => {
                if filter == PosFilter::All {
                    out.push(Position(path.clone()));
                }
            }
            // values are constants of the signature, so their positions are
            // function positions
            Term::Val(_) => out.push(Position(path.clone())),
            Term::App(_, args) => {
                out.push(Position(path.clone()));
                for (i, a) in args.iter().enumerate() {
                    path.push(i + 1);
                    a.walk_positions(filter, path, out);
                    path.pop();
                }
            }
        }
    }

    pub fn subterm_at(&self, pos: &Position) -> Option<&Term> {
        let mut cur = self;
        for &i in &pos.0 {
            cur = cur.args().get(i.checked_sub(1)?)?;
        }
        Some(cur)
    }

    /// Replaces the subterm at a single position.
    pub fn replace(&self, pos: &Position, with: Term) -> Option<Term> {
        self.replace_path(&pos.0, with)
    }

    fn replace_path(&self, path: &[usize], with: Term) -> Option<Term> {
        match path.split_first() {
            None => Some(with),
            Some((&i, rest)) => match self {
                Term::App(f, args) if i >= 1 && i <= args.len() => {
                    let mut new_args = args.to_vec();
                    new_args[i - 1] = args[i - 1].replace_path(rest, with)?;
                    Some(Term::app(f.clone(), new_args))
                }
                _ => None,
            },
        }
    }

    /// Simultaneous replacement at pairwise parallel positions.
    pub fn replace_at(&self, assignments: &BTreeMap<Position, Term>) -> Result<Term, TermError> {
        let positions: Vec<&Position> = assignments.keys().collect();
        for (i, p) in positions.iter().enumerate() {
            for q in &positions[i + 1..] {
                if !p.is_parallel_to(q) {
                    return Err(TermError::OverlappingPositions(
                        p.to_string(),
                        q.to_string(),
                    ));
                }
            }
        }
        let mut out = self.clone();
        for (p, t) in assignments {
            let old = self
                .subterm_at(p)
                .ok_or_else(|| TermError::InvalidPosition(p.to_string()))?;
            if old.sort() != t.sort() {
                return Err(TermError::ReplacementSort {
                    position: p.to_string(),
                    expected: old.sort(),
                    found: t.sort(),
                });
            }
            out = out.replace(p, t.clone()).expect("position checked above");
        }
        Ok(out)
    }

    /// Applies `f` to every variable, rebuilding the term.
    pub fn map_vars(&self, f: &mut impl FnMut(&Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(v),
            Term::Val(_) => self.clone(),
            Term::App(sym, args) => {
                Term::app(sym.clone(), args.iter().map(|a| a.map_vars(f)).collect())
            }
        }
    }
}

impl From<Var> for Term {
    fn from(v: Var) -> Self {
        Term::Var(v)
    }
}

impl From<Value> for Term {
    fn from(v: Value) -> Self {
        Term::Val(v)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Val(v) => write!(f, "{v}"),
            Term::App(sym, args) if args.is_empty() => f.write_str(&sym.name),
            Term::App(sym, args) => {
                write!(f, "({}", sym.name)?;
                for a in args.iter() {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A position in a term: a path of 1-based argument indices. The empty path
/// is the root.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn from_slice(p: &[usize]) -> Self {
        Position(p.to_vec())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Self {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    /// `prefix · self`
    pub fn under(&self, prefix: &Position) -> Self {
        let mut p = prefix.0.clone();
        p.extend_from_slice(&self.0);
        Position(p)
    }

    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    /// Strips `prefix`, if it is one.
    pub fn strip(&self, prefix: &Position) -> Option<Position> {
        self.0
            .strip_prefix(prefix.0.as_slice())
            .map(|rest| Position(rest.to_vec()))
    }

    pub fn is_parallel_to(&self, other: &Position) -> bool {
        !self.is_prefix_of(other) && !other.is_prefix_of(self)
    }
}

/// True if the positions are pairwise incomparable under the prefix order.
pub fn pairwise_parallel<'a>(positions: impl IntoIterator<Item = &'a Position>) -> bool {
    let ps: Vec<&Position> = positions.into_iter().collect();
    ps.iter()
        .enumerate()
        .all(|(i, p)| ps[i + 1..].iter().all(|q| p.is_parallel_to(q)))
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join("."))
    }
}

impl fmt::Debug for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> (Sym, Sym, Sym, Sym, Sort) {
        let s = Sort::new("S");
        let f = FunSym::term("f", vec![s.clone(), s.clone()], s.clone());
        let g = FunSym::term("g", vec![s.clone()], s.clone());
        let a = FunSym::term("a", vec![], s.clone());
        let b = FunSym::term("b", vec![], s.clone());
        (f, g, a, b, s)
    }

    #[test]
    fn sort_of_variable_and_application() {
        let x = Var::new("x", Sort::int());
        assert_eq!(Term::var(x).sort_of().unwrap(), Sort::int());
        let string = Sort::new("String");
        let pcp = Sort::new("PCP");
        let test = FunSym::term("test", vec![string.clone(), string.clone(), Sort::int()], pcp.clone());
        let e = FunSym::term("e", vec![], string);
        let t = Term::app(test, vec![Term::constant(e.clone()), Term::constant(e), Term::int(0)]);
        assert_eq!(t.sort_of().unwrap(), pcp);
    }

    #[test]
    fn sort_clash_is_an_error() {
        let plus = FunSym::theory_at(TheoryOp::Add, &[Sort::int(), Sort::int()]).unwrap();
        let bad = Term::app(plus.clone(), vec![Term::int(1), Term::bool(true)]);
        assert!(matches!(bad.sort_of(), Err(TermError::SortMismatch { index: 2, .. })));
        assert!(Term::try_app(plus, vec![Term::int(1), Term::bool(true)]).is_err());
    }

    #[test]
    fn function_positions() {
        let (f, g, a, _, s) = sig();
        let x = Term::var(Var::new("x", s.clone()));
        let y = Term::var(Var::new("y", s));
        assert!(x.positions(PosFilter::Function).is_empty());
        let t = Term::app(f.clone(), vec![Term::constant(a), y.clone()]);
        assert_eq!(t.positions(PosFilter::Function), vec![Position::root(), Position(vec![1])]);
        let t = Term::app(f, vec![Term::app(g, vec![x]), y]);
        assert_eq!(t.positions(PosFilter::Function), vec![Position::root(), Position(vec![1])]);
        assert_eq!(t.positions(PosFilter::All).len(), 4);
    }

    #[test]
    fn parallel_replacement() {
        let (f, _, a, b, s) = sig();
        let c = FunSym::term("c", vec![], s.clone());
        let d = FunSym::term("d", vec![], s);
        let t = Term::app(f.clone(), vec![Term::constant(a.clone()), Term::constant(b.clone())]);
        let mut m = BTreeMap::new();
        assert_eq!(t.replace_at(&m).unwrap(), t);
        m.insert(Position(vec![1]), Term::constant(c.clone()));
        assert_eq!(
            t.replace_at(&m).unwrap(),
            Term::app(f.clone(), vec![Term::constant(c.clone()), Term::constant(b)])
        );
        m.insert(Position(vec![2]), Term::constant(d.clone()));
        assert_eq!(
            t.replace_at(&m).unwrap(),
            Term::app(f, vec![Term::constant(c), Term::constant(d)])
        );
        m.insert(Position::root(), Term::constant(a));
        assert!(matches!(t.replace_at(&m), Err(TermError::OverlappingPositions(..))));
    }

    #[test]
    fn replacement_sort_checked() {
        let (f, _, a, b, _) = sig();
        let t = Term::app(f, vec![Term::constant(a), Term::constant(b)]);
        let mut m = BTreeMap::new();
        m.insert(Position(vec![1]), Term::int(3));
        assert!(matches!(t.replace_at(&m), Err(TermError::ReplacementSort { .. })));
    }

    #[test]
    fn position_order_helpers() {
        let p = Position(vec![1]);
        let q = Position(vec![1, 2]);
        let r = Position(vec![2]);
        assert!(p.is_prefix_of(&q));
        assert!(!p.is_parallel_to(&q));
        assert!(p.is_parallel_to(&r));
        assert!(pairwise_parallel([&q, &r]));
        assert_eq!(q.strip(&p), Some(Position(vec![2])));
        assert_eq!(Position::root().to_string(), "ε");
        assert_eq!(q.to_string(), "1.2");
    }
}
