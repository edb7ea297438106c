//! End-to-end acceptance checks, one line per criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::Command;
use std::time::Duration;

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use lctrs::analysis::{
    analyze, ccps, cpcps, dev_closed_check, is_trivial, parallel_closed_2, tvar, AnalysisConfig, Closure,
    Criterion, CriticalPair, SearchConfig, Verdict,
};
use lctrs::grounding::{
    check_cp_correspondence, check_step_equivalence, ground_fragment, joinable, trs_closedness_check, Joinability,
};
use lctrs::logic::{and_all, eq, eval_op, implies, interpret, SmtBackend, Solver, SolverVerdict};
use lctrs::pcp::{check_candidate, decode, default_fuel, encode, Candidate, PcpInstance};
use lctrs::rewriting::{equiv, Answer, CRewriter, CTerm, Lctrs, ValueDomain};
use lctrs::subst::{match_term, unify_pair};
use lctrs::term::{FunSym, Position, Sort, Sym, Term, TheoryOp, Value, Var};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    })
}

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn load(name: &str) -> Lctrs {
    let path = corpus_dir().join(format!("{name}.lctrs"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    lctrs_cli::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lctrs"))
        .args(args)
        .current_dir(corpus_dir())
        .output()
        .expect("run lctrs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn find<'a>(pairs: &'a [CriticalPair], left: &str, right: &str) -> Option<&'a CriticalPair> {
    pairs
        .iter()
        .find(|p| p.left.to_string() == left && p.right.to_string() == right)
}

fn var_named(phi: &Term, name: &str) -> Option<Var> {
    phi.vars().into_iter().find(|v| v.to_string() == name)
}

fn equivalent(a: &Term, b: &Term, solver: &Solver) -> bool {
    solver.is_valid(&implies(a.clone(), b.clone())).is_valid() && solver.is_valid(&implies(b.clone(), a.clone())).is_valid()
}

fn search(depth: usize) -> SearchConfig {
    SearchConfig {
        depth,
        ..SearchConfig::default()
    }
}

fn verdict(r: &Lctrs, solver: &Solver) -> Verdict {
    let config = AnalysisConfig {
        domain: ValueDomain::for_system(-4, 4, r),
        ..AnalysisConfig::default()
    };
    analyze(r, &config, solver).verdict
}

fn criterion_1() -> Outcome {
    let solver = Solver::internal();
    let r = load("ex4");
    let pairs = ccps(&r, &solver);
    ensure(pairs.len() == 1, format!("expected one CCP, got {pairs:?}"))?;
    let cp = &pairs[0];
    ensure(
        cp.to_string() == "x ≈ x' [(and (= x 0) (= x' 0))]",
        format!("unexpected pair {cp}"),
    )?;
    ensure(is_trivial(&cp.as_cterm(), &solver).is_yes(), "pair is not trivial")?;
    let (code, out) = cli(&["ccp", "ex4.lctrs"]);
    ensure(code == 0 && out.lines().count() == 1, format!("ccp printed {out:?}"))?;
    ensure(out.starts_with("x ≈ x' [(and (= x 0) (= x' 0))]"), format!("ccp printed {out:?}"))?;
    for (lo, hi) in [(0, 0), (-3, 3), (-1, 5)] {
        let f = ground_fragment(&r, &ValueDomain::for_system(lo, hi, &r));
        ensure(f.rules.len() == 1, format!("fragment over {lo}..{hi} has {} rules", f.rules.len()))?;
        ensure(f.rules[0].lhs.to_string() == "a" && f.rules[0].rhs == Term::int(0), "fragment rule is not a → 0")?;
        ensure(f.critical_pairs(&solver).is_empty(), "fragment has critical pairs")?;
    }
    ensure(
        verdict(&r, &solver) == Verdict::Yes(Criterion::WeakOrthogonality),
        "analysis is not YES by weak orthogonality",
    )?;
    Ok("ex4: one trivial CCP, fragment {a → 0} without CPs, YES (weakly orthogonal)".into())
}

fn criterion_2() -> Outcome {
    let solver = Solver::internal();
    let r = load("ex5");
    let pairs = ccps(&r, &solver);
    ensure(pairs.len() == 2, format!("expected two CCPs, got {pairs:?}"))?;
    let rw = CRewriter::new(&r, &solver);
    for cp in &pairs {
        let (Some(x), Some(y)) = (var_named(&cp.constraint, "x"), var_named(&cp.constraint, "y")) else {
            return Err(format!("{cp} does not constrain x and y"));
        };
        let target = and_all([eq(Term::Var(x), Term::Var(y.clone())), eq(Term::Var(y), Term::int(2))]);
        ensure(equivalent(&cp.constraint, &target, &solver), format!("{cp}: constraint is not x = y ∧ y = 2"))?;
        let closure = dev_closed_check(cp, &rw, &search(3));
        ensure(closure.is_closed(), format!("{cp}: {closure}"))?;
    }
    ensure(
        verdict(&r, &solver) == Verdict::Yes(Criterion::AlmostDevelopmentClosed),
        "analysis is not YES by almost development closedness",
    )?;
    let (code, out) = cli(&["analyze", "ex5.lctrs"]);
    let head: Vec<&str> = out.lines().take(2).collect();
    ensure(
        code == 0 && head == ["YES", "criterion: almost-development-closed"],
        format!("analyze printed {head:?}"),
    )?;
    Ok("ex5: two CCPs with constraint x = y ∧ y = 2, closed within depth 3, YES".into())
}

fn criterion_3() -> Outcome {
    let solver = Solver::internal();
    let r = load("ex53");
    let pairs = ccps(&r, &solver);
    let cp = find(&pairs, "(g x)", "(h x)").ok_or_else(|| format!("no CCP g(x) ≈ h(x) in {pairs:?}"))?;
    let x = var_named(&cp.constraint, "x").ok_or("constraint does not mention x")?;
    let range = and_all([
        Term::theory(TheoryOp::Le, vec![Term::int(1), Term::Var(x.clone())]),
        Term::theory(TheoryOp::Le, vec![Term::Var(x), Term::int(2)]),
    ]);
    ensure(equivalent(&cp.constraint, &range, &solver), format!("{cp}: constraint is not 1 ≤ x ≤ 2"))?;
    let rw = CRewriter::new(&r, &solver);
    ensure(rw.cstep_tilde(&cp.as_cterm()).is_empty(), "the pair has a constrained step")?;
    let closure = dev_closed_check(cp, &rw, &SearchConfig::default());
    ensure(closure == Closure::NotClosed, format!("constrained check says {closure}"))?;
    let f = ground_fragment(&r, &ValueDomain::for_system(-3, 3, &r));
    let report = trs_closedness_check(&f, 4, 3, &solver);
    ensure(report.almost_development_closed, format!("fragment check failed: {:?}", report.failures))?;
    Ok(format!(
        "ex53: g(x) ≈ h(x) [1 ≤ x ≤ 2] not closed, fragment over -3..3 almost development closed ({} CPs)",
        report.critical_pairs
    ))
}

fn criterion_4() -> Outcome {
    let solver = Solver::internal();
    let r = load("ex6");
    let pairs = cpcps(&r, &solver);
    let cp = find(&pairs, "(f (g (+ 1 1) (+ 3 1)))", "(g 4 4)")
        .ok_or_else(|| format!("no CPCP f(g(1+1,3+1)) ≈ g(4,4) in {pairs:?}"))?;
    ensure(cp.constraint == Term::bool(true), format!("constraint of {cp}"))?;
    let rw = CRewriter::new(&r, &solver);
    let closure = parallel_closed_2(cp, &rw, &SearchConfig::default());
    let Closure::Closed { q: Some(q), .. } = &closure else {
        return Err(format!("not 2-parallel closed: {closure}"));
    };
    ensure(*q == BTreeSet::from([Position::from_slice(&[2])]), format!("Q = {q:?}"))?;
    ensure(
        tvar(&cp.as_cterm().term, &cp.constraint, q.iter()).is_empty(),
        "TVar(t, true, Q) is not empty",
    )?;
    ensure(
        verdict(&r, &solver) == Verdict::Yes(Criterion::ParallelClosed),
        "analysis is not YES by parallel closedness",
    )?;
    Ok("ex6: CPCP f(g(1+1,3+1)) ≈ g(4,4) [true] closed with Q = {2}, YES".into())
}

fn criterion_5() -> Outcome {
    let solver = Solver::internal();
    let s = Sort::new("S");
    let v = |n: &str| Term::Var(Var::new(n, s.clone()));
    let yy = CTerm::new(Term::pair(v("y"), v("y")), Term::bool(true));
    let xx = CTerm::new(Term::pair(v("x"), v("x")), Term::bool(true));
    let e = equiv(&yy, &xx, &solver);
    ensure(e == Answer::No, format!("equiv(y ≈ y, x ≈ x) = {e:?}"))?;
    let r = load("ex6var");
    let pairs = cpcps(&r, &solver);
    let cp = find(&pairs, "(f b y)", "(f a y)")
        .or_else(|| find(&pairs, "(f a y)", "(f b y)"))
        .ok_or_else(|| format!("no CPCP f(a,y) ≈ f(b,y) in {pairs:?}"))?;
    ensure(cp.constraint == Term::bool(true), format!("constraint of {cp}"))?;
    let rw = CRewriter::new(&r, &solver);
    let closure = parallel_closed_2(cp, &rw, &SearchConfig::default());
    ensure(closure == Closure::NotClosed, format!("{cp}: {closure}"))?;
    let f = ground_fragment(&r, &ValueDomain::for_system(-4, 4, &r));
    let trs = f.rewriter();
    let mut joined = 0;
    for p in f.critical_pairs(&solver).iter().chain(&f.parallel_critical_pairs(&solver)) {
        match joinable(&trs, &p.left, &p.right, 10) {
            Joinability::Joinable(_) => joined += 1,
            other => return Err(format!("{} ≈ {}: {other:?}", p.left, p.right)),
        }
    }
    ensure(joined > 0, "fragment has no critical pairs")?;
    Ok(format!(
        "ex6var: y ≈ y and x ≈ x not equivalent, f(a,y) ≈ f(b,y) not 2-parallel closed, {joined} fragment pairs joinable"
    ))
}

/// Shortest index sequence solving `p`, by breadth-first enumeration.
fn brute_force_solution(p: &PcpInstance, max_len: usize) -> Option<Vec<usize>> {
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for i in 1..=p.len() {
                let mut v = w.clone();
                v.push(i);
                if is_solution(p, &v) {
                    return Some(v);
                }
                next.push(v);
            }
        }
        layer = next;
    }
    None
}

fn is_solution(p: &PcpInstance, w: &[usize]) -> bool {
    let concat = |side: usize| -> String {
        w.iter()
            .map(|&i| {
                let (a, b) = &p.pairs()[i - 1];
                if side == 0 { a.as_str() } else { b.as_str() }
            })
            .collect()
    };
    !w.is_empty() && concat(0) == concat(1)
}

fn criterion_6() -> Outcome {
    for (w, n) in [(vec![], 0), (vec![3, 3, 1, 3], 102), (vec![1, 1, 2], 22)] {
        ensure(encode(&w, 3) == Ok(BigInt::from(n)), format!("encode({w:?}) ≠ {n}"))?;
        ensure(decode(&BigInt::from(n), 3) == w, format!("decode({n}) ≠ {w:?}"))?;
    }
    let p = PcpInstance::parse("1,101;10,00;011,11").map_err(|e| e.to_string())?;
    let w = brute_force_solution(&p, 6).ok_or("brute force found no solution")?;
    let code = encode(&w, p.len()).map_err(|e| e.to_string())?;
    let got = check_candidate(&p, &code, default_fuel(&p, &code));
    ensure(got == Candidate::Solution, format!("solution {w:?} (code {code}) gave {got:?}"))?;
    let mut runner = runner(50);
    let words = prop::collection::vec(1..=p.len(), 1..7).prop_filter("not a solution", move |w| {
        !is_solution(&PcpInstance::parse("1,101;10,00;011,11").unwrap(), w)
    });
    runner
        .run(&words, |w| {
            let code = encode(&w, 3).unwrap();
            let got = check_candidate(&p, &code, default_fuel(&p, &code));
            prop_assert_eq!(got, Candidate::NonSolution, "{:?}", w);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("encoding examples hold, solution {w:?} rewrites to top, 50 non-solutions to bot"))
}

fn criterion_7() -> Outcome {
    let solver = Solver::internal();
    let mut total = (0, 0);
    for name in ["ex2", "ex4", "ex5", "ex53", "ex6", "ex6var", "rp"] {
        let r = load(name);
        let d = ValueDomain::for_system(-4, 4, &r);
        let corr = check_cp_correspondence(&r, &d, 200, &solver);
        ensure(corr.violations.is_empty(), format!("{name}: {:?}", corr.violations))?;
        let steps = check_step_equivalence(&r, &d, 200, 0, &solver);
        ensure(steps.violations.is_empty(), format!("{name}: {:?}", steps.violations))?;
        total.0 += corr.instances;
        total.1 += steps.steps;
    }
    Ok(format!(
        "no violations on the corpus ({} pair instances, {} steps compared)",
        total.0, total.1
    ))
}

#[derive(Clone, Debug)]
enum Shape {
    Var(u8),
    A,
    B,
    G(Box<Shape>),
    F(Box<Shape>, Box<Shape>),
}

fn shape() -> impl Strategy<Value = Shape> {
    let leaf = prop_oneof![(0u8..4).prop_map(Shape::Var), Just(Shape::A), Just(Shape::B)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Shape::G(Box::new(t))),
            (inner.clone(), inner).prop_map(|(s, t)| Shape::F(Box::new(s), Box::new(t))),
        ]
    })
}

/// Textbook unification on shapes, used as the oracle.
fn oracle_unify(s: &Shape, t: &Shape, sub: &mut BTreeMap<u8, Shape>) -> bool {
    fn resolve(t: &Shape, sub: &BTreeMap<u8, Shape>) -> Shape {
        match t {
            Shape::Var(x) => match sub.get(x) {
                Some(u) => resolve(u, sub),
                None => t.clone(),
            },
            Shape::G(a) => Shape::G(Box::new(resolve(a, sub))),
            Shape::F(a, b) => Shape::F(Box::new(resolve(a, sub)), Box::new(resolve(b, sub))),
            _ => t.clone(),
        }
    }
    fn occurs(x: u8, t: &Shape) -> bool {
        match t {
            Shape::Var(y) => x == *y,
            Shape::G(a) => occurs(x, a),
            Shape::F(a, b) => occurs(x, a) || occurs(x, b),
            _ => false,
        }
    }
    match (resolve(s, sub), resolve(t, sub)) {
        (Shape::Var(x), Shape::Var(y)) if x == y => true,
        (Shape::Var(x), u) | (u, Shape::Var(x)) => {
            if occurs(x, &u) {
                return false;
            }
            sub.insert(x, u);
            true
        }
        (Shape::A, Shape::A) | (Shape::B, Shape::B) => true,
        (Shape::G(a), Shape::G(b)) => oracle_unify(&a, &b, sub),
        (Shape::F(a1, b1), Shape::F(a2, b2)) => oracle_unify(&a1, &a2, sub) && oracle_unify(&b1, &b2, sub),
        _ => false,
    }
}

fn oracle_apply(t: &Shape, sub: &BTreeMap<u8, Shape>) -> Shape {
    match t {
        Shape::Var(x) => sub.get(x).map_or(t.clone(), |u| oracle_apply(u, sub)),
        Shape::G(a) => Shape::G(Box::new(oracle_apply(a, sub))),
        Shape::F(a, b) => Shape::F(Box::new(oracle_apply(a, sub)), Box::new(oracle_apply(b, sub))),
        _ => t.clone(),
    }
}

struct TermSig {
    a: Sym,
    b: Sym,
    f: Sym,
    g: Sym,
    s: Sort,
}

impl TermSig {
    fn new() -> Self {
        let s = Sort::new("S");
        TermSig {
            a: FunSym::term("a", vec![], s.clone()),
            b: FunSym::term("b", vec![], s.clone()),
            f: FunSym::term("f", vec![s.clone(), s.clone()], s.clone()),
            g: FunSym::term("g", vec![s.clone()], s.clone()),
            s,
        }
    }

    fn term(&self, t: &Shape) -> Term {
        match t {
            Shape::Var(x) => Term::Var(Var::new(&format!("x{x}"), self.s.clone())),
            Shape::A => Term::constant(self.a.clone()),
            Shape::B => Term::constant(self.b.clone()),
            Shape::G(a) => Term::app(self.g.clone(), vec![self.term(a)]),
            Shape::F(a, b) => Term::app(self.f.clone(), vec![self.term(a), self.term(b)]),
        }
    }
}

fn variants(s: &Term, t: &Term) -> bool {
    match_term(s, t).is_some_and(|m| m.is_renaming()) && match_term(t, s).is_some_and(|m| m.is_renaming())
}

fn unification_property(cases: u32) -> Result<(), String> {
    let sig = TermSig::new();
    let mut runner = runner(cases);
    runner
        .run(&(shape(), shape()), |(s, t)| {
            let (ts, tt) = (sig.term(&s), sig.term(&t));
            let mut oracle = BTreeMap::new();
            let expected = oracle_unify(&s, &t, &mut oracle);
            match unify_pair(&ts, &tt) {
                None => prop_assert!(!expected, "missed unifier of {} and {}", ts, tt),
                Some(sigma) => {
                    prop_assert!(expected, "bogus unifier of {} and {}", ts, tt);
                    let u = sigma.apply(&ts);
                    prop_assert_eq!(&u, &sigma.apply(&tt));
                    prop_assert!(sigma.is_idempotent());
                    let m = sig.term(&oracle_apply(&s, &oracle));
                    prop_assert!(variants(&u, &m), "{} is not a most general instance ({})", u, m);
                }
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn encoding_property() -> Result<(), String> {
    for n in 1..=5usize {
        for code in 0..=2000u32 {
            let code = BigInt::from(code);
            let w = decode(&code, n);
            ensure(w.iter().all(|&i| (1..=n).contains(&i)), format!("decode({code}, {n}) = {w:?}"))?;
            ensure(encode(&w, n) == Ok(code.clone()), format!("encode(decode({code}, {n})) ≠ {code}"))?;
        }
    }
    let mut runner = runner(256);
    let words = (1..=5usize).prop_flat_map(|n| (Just(n), prop::collection::vec(1..=n, 0..30)));
    runner
        .run(&words, |(n, w)| {
            let code = encode(&w, n).map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert_eq!(decode(&code, n), w);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

#[derive(Clone, Debug)]
enum Arith {
    Lit(i64),
    Neg(Box<Arith>),
    Bin(TheoryOp, Box<Arith>, Box<Arith>),
}

#[derive(Clone, Debug)]
enum Logic {
    Lit(bool),
    Cmp(TheoryOp, Arith, Arith),
    Not(Box<Logic>),
    Bin(TheoryOp, Box<Logic>, Box<Logic>),
}

fn arith() -> impl Strategy<Value = Arith> {
    (-20i64..=20).prop_map(Arith::Lit).prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Arith::Neg(Box::new(a))),
            (
                prop_oneof![Just(TheoryOp::Add), Just(TheoryOp::Sub), Just(TheoryOp::Mul)],
                inner.clone(),
                inner
            )
                .prop_map(|(op, a, b)| Arith::Bin(op, Box::new(a), Box::new(b))),
        ]
    })
}

fn cmp_op() -> impl Strategy<Value = TheoryOp> {
    prop_oneof![
        Just(TheoryOp::Eq),
        Just(TheoryOp::Ne),
        Just(TheoryOp::Lt),
        Just(TheoryOp::Le),
        Just(TheoryOp::Gt),
        Just(TheoryOp::Ge)
    ]
}

fn logic() -> impl Strategy<Value = Logic> {
    let leaf = prop_oneof![
        any::<bool>().prop_map(Logic::Lit),
        (cmp_op(), arith(), arith()).prop_map(|(op, a, b)| Logic::Cmp(op, a, b)),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Logic::Not(Box::new(a))),
            (
                prop_oneof![
                    Just(TheoryOp::And),
                    Just(TheoryOp::Or),
                    Just(TheoryOp::Implies),
                    Just(TheoryOp::Eq),
                    Just(TheoryOp::Ne)
                ],
                inner.clone(),
                inner
            )
                .prop_map(|(op, a, b)| Logic::Bin(op, Box::new(a), Box::new(b))),
        ]
    })
}

fn arith_term(a: &Arith) -> Term {
    match a {
        Arith::Lit(n) => Term::int(*n),
        Arith::Neg(a) => Term::theory(TheoryOp::Neg, vec![arith_term(a)]),
        Arith::Bin(op, a, b) => Term::theory(*op, vec![arith_term(a), arith_term(b)]),
    }
}

fn logic_term(l: &Logic) -> Term {
    match l {
        Logic::Lit(b) => Term::bool(*b),
        Logic::Cmp(op, a, b) => Term::theory(*op, vec![arith_term(a), arith_term(b)]),
        Logic::Not(a) => Term::theory(TheoryOp::Not, vec![logic_term(a)]),
        Logic::Bin(op, a, b) => Term::theory(*op, vec![logic_term(a), logic_term(b)]),
    }
}

fn arith_value(a: &Arith) -> i128 {
    match a {
        Arith::Lit(n) => *n as i128,
        Arith::Neg(a) => -arith_value(a),
        Arith::Bin(TheoryOp::Add, a, b) => arith_value(a) + arith_value(b),
        Arith::Bin(TheoryOp::Sub, a, b) => arith_value(a) - arith_value(b),
        Arith::Bin(_, a, b) => arith_value(a) * arith_value(b),
    }
}

fn logic_value(l: &Logic) -> bool {
    match l {
        Logic::Lit(b) => *b,
        Logic::Cmp(op, a, b) => {
            let (x, y) = (arith_value(a), arith_value(b));
            match op {
                TheoryOp::Eq => x == y,
                TheoryOp::Ne => x != y,
                TheoryOp::Lt => x < y,
                TheoryOp::Le => x <= y,
                TheoryOp::Gt => x > y,
                _ => x >= y,
            }
        }
        Logic::Not(a) => !logic_value(a),
        Logic::Bin(op, a, b) => {
            let (x, y) = (logic_value(a), logic_value(b));
            match op {
                TheoryOp::And => x && y,
                TheoryOp::Or => x || y,
                TheoryOp::Implies => !x || y,
                TheoryOp::Eq => x == y,
                _ => x != y,
            }
        }
    }
}

/// `[[f(t₁,…,tₙ)]] = f_J([[t₁]],…,[[tₙ]])` on every subterm, and the value
/// agrees with direct machine arithmetic.
fn homomorphic(t: &Term) -> Result<Value, TestCaseError> {
    let v = interpret(t).map_err(|e| TestCaseError::fail(e.to_string()))?;
    if let Term::App(f, args) = t {
        let vals = args.iter().map(homomorphic).collect::<Result<Vec<_>, _>>()?;
        let op = f.theory_op().expect("theory symbol");
        prop_assert_eq!(Some(v.clone()), eval_op(op, &vals));
    }
    Ok(v)
}

fn interpretation_property(cases: u32) -> Result<(), String> {
    let mut runner = runner(cases);
    runner
        .run(&logic(), |l| {
            let t = logic_term(&l);
            prop_assert_eq!(homomorphic(&t)?, Value::Bool(logic_value(&l)));
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    runner
        .run(&arith(), |a| {
            let t = arith_term(&a);
            prop_assert_eq!(homomorphic(&t)?, Value::Int(BigInt::from(arith_value(&a))));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

const Z3: &str = "/usr/local/bin/z3";

#[derive(Clone, Debug)]
struct LinearAtom {
    coeffs: [i64; 3],
    constant: i64,
    op: TheoryOp,
}

fn linear_constraint() -> impl Strategy<Value = Vec<Vec<LinearAtom>>> {
    let atom = (prop::array::uniform3(-3i64..=3), -10i64..=10, cmp_op()).prop_map(|(coeffs, constant, op)| LinearAtom {
        coeffs,
        constant,
        op,
    });
    prop::collection::vec(prop::collection::vec(atom, 1..4), 1..4)
}

/// A disjunction of conjunctions of `a·x + b·y + c·z + k ⋈ 0`.
fn linear_term(dnf: &[Vec<LinearAtom>]) -> Term {
    let vars: Vec<Term> = ["x", "y", "z"].iter().map(|n| Term::Var(Var::new(n, Sort::int()))).collect();
    let atom = |a: &LinearAtom| {
        let sum = vars.iter().zip(a.coeffs).fold(Term::int(a.constant), |acc, (v, c)| {
            Term::theory(TheoryOp::Add, vec![acc, Term::theory(TheoryOp::Mul, vec![Term::int(c), v.clone()])])
        });
        Term::theory(a.op, vec![sum, Term::int(0)])
    };
    dnf.iter()
        .map(|conj| and_all(conj.iter().map(atom)))
        .reduce(|a, b| Term::theory(TheoryOp::Or, vec![a, b]))
        .expect("non-empty")
}

fn solver_property(cases: u32) -> Result<String, String> {
    if !std::path::Path::new(Z3).exists() {
        return Err(format!("{Z3} not found, the external solver comparison cannot run"));
    }
    let z3 = SmtBackend::new(&format!("{Z3} -in"), Duration::from_secs(10)).ok_or("bad solver command")?;
    let internal = Solver::internal();
    let mut runner = runner(cases);
    runner
        .run(&linear_constraint(), |dnf| {
            let phi = linear_term(&dnf);
            let ours = internal.is_satisfiable(&phi);
            let theirs = z3.check(&[], &phi, false);
            prop_assert!(!theirs.is_unknown(), "z3: {}", theirs);
            prop_assert_eq!(ours.is_sat(), theirs.is_sat(), "{}: internal {}, z3 {}", phi, ours, theirs);
            if let SolverVerdict::Sat(m) = &ours {
                prop_assert!(lctrs::logic::satisfies(m, &phi));
            }
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("{cases} linear constraints agree with z3"))
}

fn criterion_8() -> Outcome {
    unification_property(1000)?;
    encoding_property()?;
    interpretation_property(500)?;
    let z3 = solver_property(200)?;
    Ok(format!(
        "unification (1000 cases), encoding (N ≤ 5, n ≤ 2000), interpretation (500 cases), {z3}"
    ))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 8] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
    ];
    let mut failed = 0;
    for (n, check) in criteria {
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(msg) => println!("criterion {n}: PASS  {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n}: FAIL  {msg}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
