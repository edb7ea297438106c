//! The theory side: interpretation of ground logical terms and
//! satisfiability/validity of constraints over integers and booleans.
//!
//! Linear constraints are decided internally by quantifier elimination.
//! Anything nonlinear goes to an external SMT-LIB solver when one is
//! configured and comes back as `Unknown` otherwise.

pub mod presburger;
pub mod smtlib;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;

use crate::error::EvalError;
use crate::subst::Substitution;
use crate::term::{Sort, Term, TheoryOp, Value, Var};

use presburger::{NonLinear, VarKind, VarTable};
pub use smtlib::SmtBackend;

pub type Model = BTreeMap<Var, Value>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverVerdict {
    Valid,
    /// Counter-valuation of the outermost universally quantified variables.
    Invalid(Model),
    Sat(Model),
    Unsat,
    Unknown(String),
}

impl SolverVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, SolverVerdict::Valid)
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, SolverVerdict::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolverVerdict::Unsat)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, SolverVerdict::Unknown(_))
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            SolverVerdict::Sat(m) | SolverVerdict::Invalid(m) => Some(m),
            _ => None,
        }
    }
}

impl fmt::Display for SolverVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |f: &mut fmt::Formatter<'_>, m: &Model| -> fmt::Result {
            let parts: Vec<String> = m.iter().map(|(x, v)| format!("{x} ↦ {v}")).collect();
            write!(f, "{{{}}}", parts.join(", "))
        };
        match self {
            SolverVerdict::Valid => f.write_str("valid"),
            SolverVerdict::Invalid(m) => {
                f.write_str("invalid, counterexample ")?;
                show(f, m)
            }
            SolverVerdict::Sat(m) => {
                f.write_str("sat ")?;
                show(f, m)
            }
            SolverVerdict::Unsat => f.write_str("unsat"),
            SolverVerdict::Unknown(why) => write!(f, "unknown ({why})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

/// Applies a theory operator to values. Division-free, so total.
pub fn eval_op(op: TheoryOp, args: &[Value]) -> Option<Value> {
    use TheoryOp::*;
    let int = |i: usize| args.get(i).and_then(Value::as_int);
    let boolean = |i: usize| args.get(i).and_then(Value::as_bool);
    Some(match op {
        Add => Value::Int(int(0)? + int(1)?),
        Sub => Value::Int(int(0)? - int(1)?),
        Mul => Value::Int(int(0)? * int(1)?),
        Neg => Value::Int(-int(0)?.clone()),
        Eq => Value::Bool(args.first()? == args.get(1)?),
        Ne => Value::Bool(args.first()? != args.get(1)?),
        Lt => Value::Bool(int(0)? < int(1)?),
        Le => Value::Bool(int(0)? <= int(1)?),
        Gt => Value::Bool(int(0)? > int(1)?),
        Ge => Value::Bool(int(0)? >= int(1)?),
        And => Value::Bool(boolean(0)? && boolean(1)?),
        Or => Value::Bool(boolean(0)? || boolean(1)?),
        Not => Value::Bool(!boolean(0)?),
        Implies => Value::Bool(!boolean(0)? || boolean(1)?),
    })
}

/// The value of a ground logical term.
pub fn interpret(t: &Term) -> Result<Value, EvalError> {
    match t {
        Term::Val(v) => Ok(v.clone()),
        Term::Var(_) => Err(EvalError::NotGround(t.to_string())),
        Term::App(f, args) => {
            let op = f
                .theory_op()
                .ok_or_else(|| EvalError::NotTheory(f.name.to_string()))?;
            let vals = args.iter().map(interpret).collect::<Result<Vec<_>, _>>()?;
            Ok(eval_op(op, &vals).expect("well-sorted theory application"))
        }
    }
}

/// True if `model` assigns values making `phi` true.
pub fn satisfies(model: &Model, phi: &Term) -> bool {
    let s: Substitution = model.iter().map(|(x, v)| (x.clone(), Term::Val(v.clone()))).collect();
    interpret(&s.apply(phi)) == Ok(Value::Bool(true))
}

pub fn tt() -> Term {
    Term::bool(true)
}

/// Right-associated conjunction, dropping literal `true` conjuncts.
pub fn and_all(parts: impl IntoIterator<Item = Term>) -> Term {
    let mut parts: Vec<Term> = parts.into_iter().filter(|p| *p != tt()).collect();
    let Some(mut acc) = parts.pop() else {
        return tt();
    };
    while let Some(p) = parts.pop() {
        acc = Term::theory(TheoryOp::And, vec![p, acc]);
    }
    acc
}

/// Splits a conjunction into its conjuncts.
pub fn conjuncts(phi: &Term) -> Vec<Term> {
    match phi {
        Term::App(f, args) if f.theory_op() == Some(TheoryOp::And) => {
            let mut out = conjuncts(&args[0]);
            out.extend(conjuncts(&args[1]));
            out
        }
        _ if *phi == tt() => Vec::new(),
        _ => vec![phi.clone()],
    }
}

pub fn eq(a: Term, b: Term) -> Term {
    Term::theory(TheoryOp::Eq, vec![a, b])
}

pub fn implies(a: Term, b: Term) -> Term {
    Term::theory(TheoryOp::Implies, vec![a, b])
}

pub fn not(a: Term) -> Term {
    Term::theory(TheoryOp::Not, vec![a])
}

fn values_model(vars: &BTreeSet<Var>, table: &VarTable, a: &presburger::Assignment) -> Model {
    let mut m = table.to_values(a);
    // variables the formula lost during normalisation get a default value
    for v in vars {
        m.entry(v.clone()).or_insert_with(|| {
            if v.sort == Sort::bool() {
                Value::Bool(false)
            } else {
                Value::Int(BigInt::from(0))
            }
        });
    }
    m.retain(|k, _| vars.contains(k));
    m
}

/// Constraint solver front end. Results are cached per query text.
#[derive(Default)]
pub struct Solver {
    backend: Option<SmtBackend>,
    cache: Mutex<HashMap<String, SolverVerdict>>,
}

impl fmt::Debug for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Solver").field("backend", &self.backend).finish()
    }
}

impl Solver {
    /// Solver using only the internal decision procedure.
    pub fn internal() -> Self {
        Solver::default()
    }

    pub fn with_backend(backend: SmtBackend) -> Self {
        Solver {
            backend: Some(backend),
            cache: Mutex::default(),
        }
    }

    pub fn backend(&self) -> Option<&SmtBackend> {
        self.backend.as_ref()
    }

    fn cached(&self, key: String, compute: impl FnOnce() -> SolverVerdict) -> SolverVerdict {
        if let Some(v) = self.cache.lock().expect("solver cache poisoned").get(&key) {
            return v.clone();
        }
        let v = compute();
        self.cache
            .lock()
            .expect("solver cache poisoned")
            .insert(key, v.clone());
        v
    }

    pub fn is_satisfiable(&self, phi: &Term) -> SolverVerdict {
        let key = format!("sat|{:?}|{phi}", phi.vars());
        self.cached(key, || self.satisfiable_uncached(phi))
    }

    fn satisfiable_uncached(&self, phi: &Term) -> SolverVerdict {
        let vars = phi.vars();
        if vars.is_empty() {
            return match interpret(phi) {
                Ok(Value::Bool(true)) => SolverVerdict::Sat(Model::new()),
                Ok(_) => SolverVerdict::Unsat,
                Err(e) => SolverVerdict::Unknown(e.to_string()),
            };
        }
        let mut table = VarTable::default();
        match presburger::translate(phi, true, &mut table) {
            Ok(f) => {
                let order: Vec<Var> = vars.iter().cloned().collect();
                let kinds = table.with_kinds(&order);
                match presburger::model(&f, &kinds) {
                    Some(a) => {
                        let m = values_model(&vars, &table, &a);
                        debug_assert!(satisfies(&m, phi), "model {m:?} does not satisfy {phi}");
                        SolverVerdict::Sat(m)
                    }
                    None => SolverVerdict::Unsat,
                }
            }
            Err(NonLinear(why)) => match &self.backend {
                Some(b) => b.check(&[], phi, false),
                None => SolverVerdict::Unknown(why),
            },
        }
    }

    /// Validity of a quantifier-free constraint; `Invalid` carries a model
    /// of its negation.
    pub fn is_valid(&self, phi: &Term) -> SolverVerdict {
        match self.is_satisfiable(&not(phi.clone())) {
            SolverVerdict::Sat(m) => SolverVerdict::Invalid(m),
            SolverVerdict::Unsat => SolverVerdict::Valid,
            other => other,
        }
    }

    /// Validity of `Q₁ x̄₁ … Qₙ x̄ₙ. φ`. Free variables of `φ` not bound by
    /// the prefix are universally quantified outermost.
    pub fn is_valid_quantified(&self, prefix: &[(Quantifier, Vec<Var>)], phi: &Term) -> SolverVerdict {
        let key = format!("q|{prefix:?}|{:?}|{phi}", phi.vars());
        self.cached(key, || self.quantified_uncached(prefix, phi))
    }

    fn quantified_uncached(&self, prefix: &[(Quantifier, Vec<Var>)], phi: &Term) -> SolverVerdict {
        let bound: BTreeSet<Var> = prefix.iter().flat_map(|(_, xs)| xs.iter().cloned()).collect();
        let mut outer: Vec<Var> = phi.vars().into_iter().filter(|v| !bound.contains(v)).collect();
        let mut blocks: Vec<(Quantifier, Vec<Var>)> = prefix.iter().filter(|(_, xs)| !xs.is_empty()).cloned().collect();
        if let Some((Quantifier::Forall, xs)) = blocks.first() {
            outer.extend(xs.iter().cloned());
            blocks.remove(0);
        }
        let mut table = VarTable::default();
        let f = match presburger::translate(phi, true, &mut table) {
            Ok(f) => f,
            Err(NonLinear(why)) => {
                return match &self.backend {
                    Some(b) => b.check_quantified(&outer, &blocks, phi),
                    None => SolverVerdict::Unknown(why),
                }
            }
        };
        let mut g = f;
        for (q, xs) in blocks.iter().rev() {
            for x in xs.iter().rev() {
                let Some(id) = table.lookup(x) else { continue };
                let kind = table.kind(id);
                g = match q {
                    Quantifier::Exists => presburger::exists(id, kind, &g),
                    Quantifier::Forall => presburger::forall(id, kind, &g),
                };
            }
        }
        let neg = g.negate();
        let ids: Vec<(usize, VarKind)> = outer
            .iter()
            .filter_map(|x| table.lookup(x).map(|id| (id, table.kind(id))))
            .collect();
        match presburger::model(&neg, &ids) {
            None => SolverVerdict::Valid,
            Some(a) => {
                let outer_set: BTreeSet<Var> = outer.into_iter().collect();
                SolverVerdict::Invalid(values_model(&outer_set, &table, &a))
            }
        }
    }

    /// The value `x` takes in every model of `phi`, if that value is fixed.
    pub fn unique_value(&self, phi: &Term, x: &Var) -> Option<Value> {
        let SolverVerdict::Sat(m) = self.is_satisfiable(phi) else {
            return None;
        };
        let v = m.get(x)?.clone();
        let other = and_all([phi.clone(), not(eq(Term::Var(x.clone()), Term::Val(v.clone())))]);
        self.is_satisfiable(&other).is_unsat().then_some(v)
    }
}

/// Bounded exhaustive check of a constraint over integer vectors in
/// `[-bound, bound]` and both booleans. Used as a differential oracle.
pub fn enumerate_valid(phi: &Term, bound: i64) -> bool {
    let vars: Vec<Var> = phi.vars().into_iter().collect();
    let mut m = Model::new();
    fn go(i: usize, vars: &[Var], m: &mut Model, phi: &Term, bound: i64) -> bool {
        if i == vars.len() {
            return satisfies(m, phi);
        }
        let choices: Vec<Value> = if vars[i].sort == Sort::bool() {
            vec![Value::Bool(false), Value::Bool(true)]
        } else {
            (-bound..=bound).map(Value::int).collect()
        };
        choices.into_iter().all(|v| {
            m.insert(vars[i].clone(), v);
            go(i + 1, vars, m, phi, bound)
        })
    }
    go(0, &vars, &mut m, phi, bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::Var(Var::new("x", Sort::int()))
    }

    fn v(name: &str) -> Term {
        Term::Var(Var::new(name, Sort::int()))
    }

    fn op(o: TheoryOp, a: Term, b: Term) -> Term {
        Term::theory(o, vec![a, b])
    }

    #[test]
    fn interpretation_examples() {
        assert_eq!(interpret(&op(TheoryOp::Mul, Term::int(2), Term::int(2))), Ok(Value::int(4)));
        assert_eq!(interpret(&op(TheoryOp::Add, Term::int(1), Term::int(1))), Ok(Value::int(2)));
        assert_eq!(
            interpret(&op(TheoryOp::And, Term::bool(true), Term::bool(false))),
            Ok(Value::Bool(false))
        );
        assert!(matches!(interpret(&x()), Err(EvalError::NotGround(_))));
    }

    #[test]
    fn satisfiability_examples() {
        let s = Solver::internal();
        let contradiction = and_all([op(TheoryOp::Gt, x(), Term::int(0)), op(TheoryOp::Lt, x(), Term::int(0))]);
        assert_eq!(s.is_satisfiable(&contradiction), SolverVerdict::Unsat);

        // 3·m + 1 = n ∧ n > 0
        let (m, n) = (v("m"), v("n"));
        let phi = and_all([
            eq(op(TheoryOp::Add, op(TheoryOp::Mul, Term::int(3), m), Term::int(1)), n.clone()),
            op(TheoryOp::Gt, n, Term::int(0)),
        ]);
        match s.is_satisfiable(&phi) {
            SolverVerdict::Sat(model) => assert!(satisfies(&model, &phi)),
            other => panic!("expected sat, got {other}"),
        }

        // x = 2z ∧ x = 2z + 1
        let z = v("z");
        let two_z = op(TheoryOp::Mul, Term::int(2), z);
        let parity = and_all([
            eq(x(), two_z.clone()),
            eq(x(), op(TheoryOp::Add, two_z, Term::int(1))),
        ]);
        assert_eq!(s.is_satisfiable(&parity), SolverVerdict::Unsat);
        assert!(enumerate_valid(&not(parity), 8));
    }

    #[test]
    fn validity_examples() {
        let s = Solver::internal();
        assert_eq!(s.is_valid(&eq(x(), x())), SolverVerdict::Valid);
        let imp = implies(op(TheoryOp::Gt, x(), Term::int(3)), op(TheoryOp::Gt, x(), Term::int(0)));
        assert_eq!(s.is_valid(&imp), SolverVerdict::Valid);
        let pos = op(TheoryOp::Gt, x(), Term::int(0));
        let mut expected = Model::new();
        expected.insert(Var::new("x", Sort::int()), Value::int(0));
        assert_eq!(s.is_valid(&pos), SolverVerdict::Invalid(expected));
    }

    #[test]
    fn quantified_examples() {
        let s = Solver::internal();
        let xv = Var::new("x", Sort::int());
        let zv = Var::new("z", Sort::int());
        let yv = Var::new("y", Sort::int());
        let gt3 = op(TheoryOp::Gt, x(), Term::int(3));
        let body = implies(
            gt3.clone(),
            and_all([eq(v("z"), op(TheoryOp::Add, x(), Term::int(1))), gt3.clone()]),
        );
        let prefix = [(Quantifier::Forall, vec![xv.clone()]), (Quantifier::Exists, vec![zv])];
        assert_eq!(s.is_valid_quantified(&prefix, &body), SolverVerdict::Valid);

        let body = implies(gt3, op(TheoryOp::Gt, x(), Term::int(1)));
        assert_eq!(
            s.is_valid_quantified(&[(Quantifier::Forall, vec![xv.clone()])], &body),
            SolverVerdict::Valid
        );

        let body = and_all([op(TheoryOp::Gt, v("y"), x()), op(TheoryOp::Lt, v("y"), x())]);
        let prefix = [(Quantifier::Forall, vec![xv]), (Quantifier::Exists, vec![yv])];
        assert!(matches!(s.is_valid_quantified(&prefix, &body), SolverVerdict::Invalid(_)));
    }

    #[test]
    fn nonlinear_without_backend_is_unknown() {
        let s = Solver::internal();
        let phi = eq(op(TheoryOp::Mul, x(), v("y")), Term::int(7));
        assert!(s.is_satisfiable(&phi).is_unknown());
    }

    #[test]
    fn unique_values() {
        let s = Solver::internal();
        let xv = Var::new("x", Sort::int());
        assert_eq!(s.unique_value(&eq(x(), Term::int(4)), &xv), Some(Value::int(4)));
        assert_eq!(s.unique_value(&op(TheoryOp::Gt, x(), Term::int(4)), &xv), None);
    }

    #[test]
    fn conjunction_normal_form() {
        let a = op(TheoryOp::Gt, x(), Term::int(0));
        let b = op(TheoryOp::Lt, x(), Term::int(5));
        let c = eq(x(), Term::int(2));
        let all = and_all([a.clone(), tt(), b.clone(), c.clone()]);
        assert_eq!(all.to_string(), "(and (> x 0) (and (< x 5) (= x 2)))");
        assert_eq!(conjuncts(&all), vec![a, b, c]);
        assert_eq!(and_all([]), tt());
    }
}
