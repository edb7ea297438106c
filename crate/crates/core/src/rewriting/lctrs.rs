use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::rule::Rule;
use crate::term::{FunSym, Sort, Sym, Term, TheoryOp, Value};

/// Declared sorts and function symbols. Theory symbols are listed
/// separately since they are shared by every system over the same theory.
#[derive(Clone, Debug, Default)]
pub struct Signature {
    pub sorts: BTreeSet<Sort>,
    pub funs: BTreeMap<String, Sym>,
    pub theory: Vec<Sym>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    /// Signature with the integer/boolean theory declared.
    pub fn ints() -> Self {
        let mut s = Signature::new();
        s.declare_theory();
        s
    }

    pub fn declare_theory(&mut self) {
        self.sorts.insert(Sort::int());
        self.sorts.insert(Sort::bool());
        if !self.theory.is_empty() {
            return;
        }
        for op in TheoryOp::ALL {
            for (args, result) in op.instances() {
                self.theory.push(FunSym::theory(op, args, result));
            }
        }
    }

    pub fn declare_sort(&mut self, sort: Sort) {
        self.sorts.insert(sort);
    }

    pub fn declare(&mut self, name: &str, args: Vec<Sort>, result: Sort) -> Sym {
        let f = FunSym::term(name, args, result);
        self.funs.insert(name.to_string(), f.clone());
        f
    }

    pub fn get(&self, name: &str) -> Option<&Sym> {
        self.funs.get(name)
    }

    pub fn has_theory(&self) -> bool {
        !self.theory.is_empty()
    }
}

/// A logically constrained rewrite system: user rules plus the calculation
/// rules of every declared theory symbol.
#[derive(Clone, Debug)]
pub struct Lctrs {
    pub signature: Signature,
    pub rules: Vec<Rule>,
    calc: Vec<Rule>,
}

impl Lctrs {
    pub fn new(signature: Signature, rules: Vec<Rule>) -> Self {
        let calc = calc_rules(&signature);
        Lctrs {
            signature,
            rules,
            calc,
        }
    }

    pub fn calc_rules(&self) -> &[Rule] {
        &self.calc
    }

    /// `R_rc = R ∪ R_ca`, user rules first.
    pub fn rc(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().chain(self.calc.iter())
    }

    /// Calculation rule for a theory symbol.
    pub fn calc_rule_for(&self, f: &Sym) -> Option<&Rule> {
        self.calc.iter().find(|r| r.lhs.root() == Some(f))
    }

    /// Values written anywhere in the rules.
    pub fn literals(&self) -> BTreeSet<Value> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            r.lhs.values(&mut out);
            r.rhs.values(&mut out);
            r.guard.values(&mut out);
        }
        out
    }

    /// Theory symbols occurring in left- or right-hand sides (not guards).
    pub fn term_theory_symbols(&self) -> BTreeSet<Sym> {
        let mut syms = BTreeSet::new();
        for r in &self.rules {
            r.lhs.symbols(&mut syms);
            r.rhs.symbols(&mut syms);
        }
        syms.retain(|f| f.is_theory());
        syms
    }

    pub fn is_left_linear(&self) -> bool {
        self.rules.iter().all(Rule::is_left_linear)
    }
}

/// Calculation rules for all declared theory symbols.
pub fn calc_rules(signature: &Signature) -> Vec<Rule> {
    signature.theory.iter().map(Rule::calculation).collect()
}

/// A finite set of values per theory sort, used wherever a value has to be
/// guessed rather than computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueDomain {
    ints: BTreeSet<BigInt>,
}

impl ValueDomain {
    pub fn interval(lo: i64, hi: i64) -> Self {
        ValueDomain {
            ints: (lo..=hi).map(BigInt::from).collect(),
        }
    }

    /// The interval together with every integer literal of the system.
    pub fn for_system(lo: i64, hi: i64, r: &Lctrs) -> Self {
        let mut d = ValueDomain::interval(lo, hi);
        d.ints
            .extend(r.literals().into_iter().filter_map(|v| v.as_int().cloned()));
        d
    }

    pub fn insert_int(&mut self, n: BigInt) {
        self.ints.insert(n);
    }

    pub fn ints(&self) -> impl Iterator<Item = &BigInt> {
        self.ints.iter()
    }

    /// Values of a sort; empty for term sorts.
    pub fn values(&self, sort: &Sort) -> Vec<Value> {
        if *sort == Sort::int() {
            self.ints.iter().cloned().map(Value::Int).collect()
        } else if *sort == Sort::bool() {
            vec![Value::Bool(false), Value::Bool(true)]
        } else {
            Vec::new()
        }
    }

    pub fn contains(&self, v: &Value) -> bool {
        match v {
            Value::Int(n) => self.ints.contains(n),
            Value::Bool(_) => true,
        }
    }

    pub fn contains_term(&self, t: &Term) -> bool {
        t.as_value().is_some_and(|v| self.contains(v))
    }
}

impl Default for ValueDomain {
    fn default() -> Self {
        ValueDomain::interval(-4, 4)
    }
}
