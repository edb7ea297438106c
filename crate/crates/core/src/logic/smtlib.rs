//! External solver backend speaking SMT-LIB 2 over stdin/stdout.
//!
//! Each query spawns a fresh solver process, so concurrent callers never
//! share a session. Models are re-checked with the internal interpreter
//! before they are accepted.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

use num_bigint::BigInt;

use super::{satisfies, Model, Quantifier, SolverVerdict};
use crate::sexp::{self, Sexp};
use crate::term::{Sort, Term, TheoryOp, Value, Var};

#[derive(Clone, Debug)]
pub struct SmtBackend {
    program: String,
    args: Vec<String>,
    timeout: Duration,
}

impl SmtBackend {
    /// Parses a command line such as `z3 -in` (split on whitespace).
    pub fn new(command: &str, timeout: Duration) -> Option<Self> {
        let mut parts = command.split_whitespace().map(str::to_string);
        let program = parts.next()?;
        Some(SmtBackend {
            program,
            args: parts.collect(),
            timeout,
        })
    }

    pub fn command(&self) -> String {
        std::iter::once(self.program.as_str())
            .chain(self.args.iter().map(String::as_str))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Satisfiability of `phi`, or with `negate` the satisfiability of `¬phi`.
    /// `declared` lists extra variables to include in the model.
    pub fn check(&self, declared: &[Var], phi: &Term, negate: bool) -> SolverVerdict {
        let mut names = Names::default();
        for v in declared.iter().cloned().chain(phi.vars()) {
            names.name(&v);
        }
        let body = to_smt(phi, &mut names);
        let body = if negate { format!("(not {body})") } else { body };
        let logic = if is_linear(phi) { "QF_LIA" } else { "QF_NIA" };
        let script = names.script(logic, &body);
        match self.run(&script, &names) {
            Ok(Answer::Sat(m)) => {
                let ok = if negate {
                    satisfies(&m, &super::not(phi.clone()))
                } else {
                    satisfies(&m, phi)
                };
                if ok {
                    SolverVerdict::Sat(m)
                } else {
                    SolverVerdict::Unknown("solver model failed re-validation".into())
                }
            }
            Ok(Answer::Unsat) => SolverVerdict::Unsat,
            Ok(Answer::Unknown(why)) | Err(why) => SolverVerdict::Unknown(why),
        }
    }

    /// Validity of `∀ outer. Q₁ x̄₁ … φ`, decided by asking for a model of the
    /// negation over the outer variables.
    pub fn check_quantified(
        &self,
        outer: &[Var],
        blocks: &[(Quantifier, Vec<Var>)],
        phi: &Term,
    ) -> SolverVerdict {
        let mut names = Names::default();
        for v in outer {
            names.name(v);
        }
        let mut binders = Vec::new();
        for (q, xs) in blocks {
            let mut decls = String::new();
            for x in xs {
                let n = names.bound(x);
                let _ = write!(decls, "({n} {})", smt_sort(&x.sort));
            }
            binders.push((*q, decls));
        }
        let mut body = to_smt(phi, &mut names);
        for (q, decls) in binders.iter().rev() {
            let kw = match q {
                Quantifier::Forall => "forall",
                Quantifier::Exists => "exists",
            };
            body = format!("({kw} ({decls}) {body})");
        }
        let logic = if is_linear(phi) { "LIA" } else { "NIA" };
        let script = names.script(logic, &format!("(not {body})"));
        match self.run(&script, &names) {
            Ok(Answer::Sat(m)) => SolverVerdict::Invalid(m),
            Ok(Answer::Unsat) => SolverVerdict::Valid,
            Ok(Answer::Unknown(why)) | Err(why) => SolverVerdict::Unknown(why),
        }
    }

    fn run(&self, script: &str, names: &Names) -> Result<Answer, String> {
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
            .map_err(|e| format!("cannot start `{}`: {e}", self.command()))?;
        let mut stdin = child.stdin.take().expect("piped stdin");
        let mut stdout = child.stdout.take().expect("piped stdout");
        let (tx, rx) = mpsc::channel();
        let text = script.to_string();
        thread::spawn(move || {
            let _ = stdin.write_all(text.as_bytes());
            drop(stdin);
            let mut out = String::new();
            let _ = stdout.read_to_string(&mut out);
            let _ = tx.send(out);
        });
        let out = match rx.recv_timeout(self.timeout) {
            Ok(out) => out,
            Err(_) => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(format!("solver timed out after {} ms", self.timeout.as_millis()));
            }
        };
        let _ = child.wait();
        parse_answer(&out, names)
    }
}

enum Answer {
    Sat(Model),
    Unsat,
    Unknown(String),
}

/// Maps variables to solver-safe identifiers `v0, v1, …`.
#[derive(Default)]
struct Names {
    by_var: BTreeMap<Var, String>,
    free: Vec<Var>,
    next: usize,
}

impl Names {
    fn name(&mut self, v: &Var) -> String {
        if let Some(n) = self.by_var.get(v) {
            return n.clone();
        }
        let n = format!("v{}", self.next);
        self.next += 1;
        self.by_var.insert(v.clone(), n.clone());
        self.free.push(v.clone());
        n
    }

    fn bound(&mut self, v: &Var) -> String {
        let n = format!("v{}", self.next);
        self.next += 1;
        self.by_var.insert(v.clone(), n.clone());
        n
    }

    fn script(&self, logic: &str, assertion: &str) -> String {
        let mut s = format!("(set-logic {logic})\n");
        for v in &self.free {
            let _ = writeln!(s, "(declare-const {} {})", self.by_var[v], smt_sort(&v.sort));
        }
        let _ = writeln!(s, "(assert {assertion})");
        s.push_str("(check-sat)\n(get-model)\n(exit)\n");
        s
    }
}

fn smt_sort(s: &Sort) -> &'static str {
    if *s == Sort::bool() {
        "Bool"
    } else {
        "Int"
    }
}

fn is_linear(t: &Term) -> bool {
    match t {
        Term::App(f, args) => {
            let ok = f.theory_op() != Some(TheoryOp::Mul)
                || args.iter().filter(|a| !a.is_ground()).count() <= 1;
            ok && args.iter().all(is_linear)
        }
        _ => true,
    }
}

fn smt_int(n: &BigInt) -> String {
    if n.sign() == num_bigint::Sign::Minus {
        format!("(- {})", -n)
    } else {
        n.to_string()
    }
}

/// SMT-LIB rendering of a constraint.
pub fn to_smt_text(t: &Term) -> String {
    let mut names = Names::default();
    to_smt(t, &mut names)
}

fn to_smt(t: &Term, names: &mut Names) -> String {
    match t {
        Term::Var(v) => names.name(v),
        Term::Val(Value::Int(n)) => smt_int(n),
        Term::Val(Value::Bool(b)) => b.to_string(),
        Term::App(f, args) => {
            let parts: Vec<String> = args.iter().map(|a| to_smt(a, names)).collect();
            let head = match f.theory_op() {
                Some(TheoryOp::Ne) => "distinct",
                Some(op) => op.name(),
                None => &f.name,
            };
            format!("({head} {})", parts.join(" "))
        }
    }
}

fn parse_answer(out: &str, names: &Names) -> Result<Answer, String> {
    let items = sexp::parse_all(out).map_err(|e| format!("unreadable solver output: {e}"))?;
    let mut it = items.iter();
    let first = it.next().ok_or("empty solver output")?;
    match first.as_atom() {
        Some("unsat") => Ok(Answer::Unsat),
        Some("unknown") => Ok(Answer::Unknown("solver answered unknown".into())),
        Some("sat") => {
            let model = it.next().ok_or("missing model")?;
            let mut values = Model::new();
            let by_name: BTreeMap<&str, &Var> = names.by_var.iter().map(|(v, n)| (n.as_str(), v)).collect();
            for def in model.as_list().unwrap_or(&[]) {
                let Some(parts) = def.as_list() else { continue };
                if parts.len() != 5 || parts[0].as_atom() != Some("define-fun") {
                    continue;
                }
                let Some(var) = parts[1].as_atom().and_then(|n| by_name.get(n)) else {
                    continue;
                };
                let v = read_value(&parts[4]).ok_or_else(|| format!("unreadable model value `{}`", parts[4]))?;
                values.insert((*var).clone(), v);
            }
            for v in &names.free {
                values.entry(v.clone()).or_insert_with(|| {
                    if v.sort == Sort::bool() {
                        Value::Bool(false)
                    } else {
                        Value::int(0)
                    }
                });
            }
            Ok(Answer::Sat(values))
        }
        _ => Err(format!("unexpected solver output `{first}`")),
    }
}

fn read_value(s: &Sexp) -> Option<Value> {
    match s {
        Sexp::Atom(a, _) => match a.as_str() {
            "true" => Some(Value::Bool(true)),
            "false" => Some(Value::Bool(false)),
            n => n.parse::<BigInt>().ok().map(Value::Int),
        },
        Sexp::List(xs, _) if xs.len() == 2 && xs[0].as_atom() == Some("-") => match read_value(&xs[1])? {
            Value::Int(n) => Some(Value::Int(-n)),
            Value::Bool(_) => None,
        },
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_negative_literals_and_disequality() {
        let x = Term::Var(Var::new("x", Sort::int()));
        let t = Term::theory(TheoryOp::Ne, vec![x, Term::int(-3)]);
        assert_eq!(to_smt_text(&t), "(distinct v0 (- 3))");
    }

    #[test]
    fn reads_models() {
        let mut names = Names::default();
        let x = Var::new("x", Sort::int());
        let b = Var::new("b", Sort::bool());
        names.name(&x);
        names.name(&b);
        let out = "sat\n(\n  (define-fun v0 () Int\n    (- 2))\n  (define-fun v1 () Bool true)\n)\n";
        match parse_answer(out, &names).unwrap() {
            Answer::Sat(m) => {
                assert_eq!(m[&x], Value::int(-2));
                assert_eq!(m[&b], Value::Bool(true));
            }
            _ => panic!("expected a model"),
        }
        assert!(matches!(parse_answer("unsat\n(error \"no model\")\n", &names), Ok(Answer::Unsat)));
    }

    #[test]
    fn missing_solver_is_unknown() {
        let b = SmtBackend::new("definitely-not-a-solver-binary", Duration::from_millis(500)).unwrap();
        let x = Term::Var(Var::new("x", Sort::int()));
        let phi = Term::theory(TheoryOp::Gt, vec![x, Term::int(0)]);
        assert!(b.check(&[], &phi, false).is_unknown());
    }
}
