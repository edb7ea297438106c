//! Rewriting on unconstrained terms: single steps, parallel steps and
//! multi-steps.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, Ordering};

use super::lctrs::{Lctrs, ValueDomain};
use super::rule::Rule;
use super::{Flavor, StepRecord};
use crate::logic::{interpret, SolverVerdict, Solver};
use crate::subst::{match_term, Substitution};
use crate::term::{PosFilter, Position, Sort, Term, Value, Var};

/// Upper bound on the number of results a single parallel or multi-step
/// enumeration may produce; larger products are truncated.
pub const MAX_RESULTS: usize = 20_000;

/// Source of root redexes: every `(ρ, σ)` with `ℓσ = t` that may fire.
pub trait RootRewrite {
    fn root_redexes(&self, t: &Term) -> Vec<(Rule, Substitution)>;
}

/// One-step rewriting with `R_rc` on terms.
///
/// Logical variables that are not bound by matching are resolved exactly
/// when the guard determines them; otherwise they are enumerated over the
/// value domain and the result set is flagged incomplete. With
/// `domain_only`, every logical variable must take a value in the domain,
/// which is exactly rewriting with the finite ground fragment.
pub struct PlainRewriter<'a> {
    pub lctrs: &'a Lctrs,
    pub domain: &'a ValueDomain,
    pub solver: &'a Solver,
    pub domain_only: bool,
    incomplete: AtomicBool,
}

impl<'a> PlainRewriter<'a> {
    pub fn new(lctrs: &'a Lctrs, domain: &'a ValueDomain, solver: &'a Solver) -> Self {
        PlainRewriter {
            lctrs,
            domain,
            solver,
            domain_only: false,
            incomplete: AtomicBool::new(false),
        }
    }

    pub fn restricted_to_domain(mut self) -> Self {
        self.domain_only = true;
        self
    }

    /// True once some enumeration had to guess values from the domain.
    pub fn incomplete(&self) -> bool {
        self.incomplete.load(Ordering::Relaxed)
    }

    fn mark_incomplete(&self) {
        self.incomplete.store(true, Ordering::Relaxed);
    }

    /// Rule instances `σ ⊨ ρ` with `ℓσ = t`.
    pub fn root_instances(&self, t: &Term) -> Vec<(&'a Rule, Substitution)> {
        let Term::App(f, _) = t else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for rule in self.lctrs.rc() {
            if rule.lhs.root() != Some(f) {
                continue;
            }
            let Some(sigma) = match_term(&rule.lhs, t) else {
                continue;
            };
            for s in self.complete_logical(rule, sigma) {
                out.push((rule, s));
            }
        }
        out
    }

    fn complete_logical(&self, rule: &Rule, mut sigma: Substitution) -> Vec<Substitution> {
        let lhs_vars = rule.lhs.vars();
        let lvars = rule.lvars();
        for x in lvars.iter().filter(|x| lhs_vars.contains(x)) {
            match sigma.image(x) {
                Term::Val(v) if !self.domain_only || self.domain.contains(&v) => {}
                _ => return Vec::new(),
            }
        }
        if rule.calc {
            let Ok(v) = interpret(&sigma.apply(&rule.lhs)) else {
                return Vec::new();
            };
            sigma.insert(rule.rhs.as_var().expect("calculation rhs").clone(), Term::Val(v));
            return vec![sigma];
        }
        let free: Vec<Var> = lvars.iter().filter(|x| !lhs_vars.contains(x)).cloned().collect();
        if self.domain_only {
            let mut out = Vec::new();
            self.enumerate_domain(rule, &free, sigma, &mut out);
            return out;
        }
        let rhs_vars = rule.rhs.vars();
        let (in_rhs, guard_only): (Vec<Var>, Vec<Var>) = free.into_iter().partition(|x| rhs_vars.contains(x));
        let mut partial = Vec::new();
        self.assign_rhs(rule, &in_rhs, sigma, &mut partial);
        partial
            .into_iter()
            .filter_map(|s| self.witness_guard(rule, &guard_only, s))
            .collect()
    }

    fn enumerate_domain(&self, rule: &Rule, free: &[Var], sigma: Substitution, out: &mut Vec<Substitution>) {
        let Some((x, rest)) = free.split_first() else {
            if interpret(&sigma.apply(&rule.guard)) == Ok(Value::Bool(true)) {
                out.push(sigma);
            }
            return;
        };
        for v in self.domain.values(&x.sort) {
            let mut s = sigma.clone();
            s.insert(x.clone(), Term::Val(v));
            self.enumerate_domain(rule, rest, s, out);
        }
    }

    /// Values for logical variables that occur in the right-hand side.
    fn assign_rhs(&self, rule: &Rule, vars: &[Var], sigma: Substitution, out: &mut Vec<Substitution>) {
        let Some((x, rest)) = vars.split_first() else {
            out.push(sigma);
            return;
        };
        let psi = sigma.apply(&rule.guard);
        let bind = |v: Value, out: &mut Vec<Substitution>| {
            let mut s = sigma.clone();
            s.insert(x.clone(), Term::Val(v));
            self.assign_rhs(rule, rest, s, out);
        };
        if !psi.occurs(x) {
            if x.sort != Sort::bool() {
                self.mark_incomplete();
            }
            for v in self.domain.values(&x.sort) {
                bind(v, out);
            }
            return;
        }
        match self.solver.is_satisfiable(&psi) {
            SolverVerdict::Sat(_) => {}
            SolverVerdict::Unknown(_) => {
                self.mark_incomplete();
                return;
            }
            _ => return,
        }
        if let Some(v) = self.solver.unique_value(&psi, x) {
            bind(v, out);
            return;
        }
        if x.sort != Sort::bool() {
            self.mark_incomplete();
        }
        for v in self.domain.values(&x.sort) {
            let fixed = Substitution::singleton(x.clone(), Term::Val(v.clone())).apply(&psi);
            if self.solver.is_satisfiable(&fixed).is_sat() {
                bind(v, out);
            }
        }
    }

    /// Some valuation of the guard-only variables making the guard true.
    /// The step result does not depend on it, so one witness suffices;
    /// witnesses from the domain are preferred.
    fn witness_guard(&self, rule: &Rule, vars: &[Var], sigma: Substitution) -> Option<Substitution> {
        let psi = sigma.apply(&rule.guard);
        if vars.is_empty() {
            return (interpret(&psi) == Ok(Value::Bool(true))).then_some(sigma);
        }
        if vars.len() <= 2 {
            let mut found = Vec::new();
            self.enumerate_domain(rule, vars, sigma.clone(), &mut found);
            if let Some(s) = found.into_iter().next() {
                return Some(s);
            }
        }
        match self.solver.is_satisfiable(&psi) {
            SolverVerdict::Sat(m) => {
                let mut s = sigma;
                for x in vars {
                    let v = m.get(x).cloned().unwrap_or_else(|| default_value(&x.sort));
                    s.insert(x.clone(), Term::Val(v));
                }
                Some(s)
            }
            SolverVerdict::Unknown(_) => {
                self.mark_incomplete();
                None
            }
            _ => None,
        }
    }

    /// All one-step successors of `s`.
    pub fn successors(&self, s: &Term) -> Vec<(Term, StepRecord)> {
        let mut out = Vec::new();
        for p in s.positions(PosFilter::Function) {
            let sub = s.subterm_at(&p).expect("own position");
            if !matches!(sub, Term::App(..)) {
                continue;
            }
            for (rule, sigma) in self.root_instances(sub) {
                let result = s.replace(&p, sigma.apply(&rule.rhs)).expect("own position");
                out.push((
                    result,
                    StepRecord::single(p.clone(), rule.clone(), sigma, Flavor::Plain),
                ));
            }
        }
        out
    }
}

impl RootRewrite for PlainRewriter<'_> {
    fn root_redexes(&self, t: &Term) -> Vec<(Rule, Substitution)> {
        self.root_instances(t)
            .into_iter()
            .map(|(r, s)| (r.clone(), s))
            .collect()
    }
}

pub(crate) fn default_value(sort: &Sort) -> Value {
    if *sort == Sort::bool() {
        Value::Bool(false)
    } else {
        Value::int(0)
    }
}

/// One-step `→_R` successors over the value domain `d`.
pub fn plain_successors(s: &Term, r: &Lctrs, d: &ValueDomain, solver: &Solver) -> Vec<(Term, StepRecord)> {
    PlainRewriter::new(r, d, solver).successors(s)
}

/// Cartesian product of per-argument choices, truncated at [`MAX_RESULTS`].
pub fn product<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = vec![Vec::new()];
    for c in choices {
        let mut next = Vec::new();
        'outer: for prefix in &acc {
            for x in c {
                if next.len() >= MAX_RESULTS {
                    break 'outer;
                }
                let mut p = prefix.clone();
                p.push(x.clone());
                next.push(p);
            }
        }
        acc = next;
    }
    acc
}

/// All `t ⊸→^P u` with the redex positions `P` (including `t ⊸→^∅ t`).
pub fn parallel_successors(t: &Term, rw: &impl RootRewrite) -> Vec<(Term, BTreeSet<Position>)> {
    let mut out: BTreeSet<(Term, BTreeSet<Position>)> = BTreeSet::new();
    parallel_into(t, rw, &Position::root(), &mut out);
    out.into_iter().collect()
}

fn parallel_into(
    t: &Term,
    rw: &impl RootRewrite,
    at: &Position,
    out: &mut BTreeSet<(Term, BTreeSet<Position>)>,
) {
    let Term::App(f, args) = t else {
        out.insert((t.clone(), BTreeSet::new()));
        return;
    };
    for (rule, sigma) in rw.root_redexes(t) {
        out.insert((sigma.apply(&rule.rhs), BTreeSet::from([at.clone()])));
    }
    let choices: Vec<Vec<(Term, BTreeSet<Position>)>> = args
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let mut sub = BTreeSet::new();
            parallel_into(a, rw, &at.child(i + 1), &mut sub);
            sub.into_iter().collect()
        })
        .collect();
    for combo in product(&choices) {
        let mut ps = BTreeSet::new();
        let mut new_args = Vec::with_capacity(combo.len());
        for (u, p) in combo {
            new_args.push(u);
            ps.extend(p);
        }
        out.insert((Term::app(f.clone(), new_args), ps));
    }
}

/// All `t ○→ u` with at most `nesting` levels of nested redex contraction.
pub fn multi_successors(t: &Term, rw: &impl RootRewrite, nesting: usize) -> BTreeSet<Term> {
    let Term::App(f, args) = t else {
        return BTreeSet::from([t.clone()]);
    };
    let choices: Vec<Vec<Term>> = args
        .iter()
        .map(|a| multi_successors(a, rw, nesting).into_iter().collect())
        .collect();
    let mut out: BTreeSet<Term> = product(&choices)
        .into_iter()
        .map(|xs| Term::app(f.clone(), xs))
        .collect();
    if nesting > 0 {
        for (rule, sigma) in rw.root_redexes(t) {
            out.extend(contract_with_inner(&rule, &sigma, |u| {
                multi_successors(u, rw, nesting - 1)
            }));
        }
    }
    out
}

/// `rτ` for every `τ` with `σ(x) ○→ τ(x)`; logical variables keep their
/// values.
pub(crate) fn contract_with_inner(
    rule: &Rule,
    sigma: &Substitution,
    mut inner: impl FnMut(&Term) -> BTreeSet<Term>,
) -> Vec<Term> {
    let vars: Vec<Var> = rule.rhs.vars().into_iter().collect();
    let lvars = rule.lvars();
    let choices: Vec<Vec<Term>> = vars
        .iter()
        .map(|x| {
            let img = sigma.image(x);
            if lvars.contains(x) {
                vec![img]
            } else {
                inner(&img).into_iter().collect()
            }
        })
        .collect();
    product(&choices)
        .into_iter()
        .map(|xs| {
            let tau: Substitution = vars.iter().cloned().zip(xs).collect();
            tau.apply(&rule.rhs)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::eq;
    use crate::rewriting::lctrs::Signature;
    use crate::term::TheoryOp;

    fn a_system() -> Lctrs {
        let mut sig = Signature::ints();
        let a = sig.declare("a", vec![], Sort::int());
        let x = Term::Var(Var::new("x", Sort::int()));
        let r = Rule::new(Term::constant(a), x.clone(), eq(x, Term::int(0))).unwrap();
        Lctrs::new(sig, vec![r])
    }

    #[test]
    fn logical_rhs_variable_is_computed() {
        let r = a_system();
        let solver = Solver::internal();
        let d = ValueDomain::default();
        let a = Term::constant(r.signature.get("a").unwrap().clone());
        let rw = PlainRewriter::new(&r, &d, &solver);
        let out: Vec<Term> = rw.successors(&a).into_iter().map(|(t, _)| t).collect();
        assert_eq!(out, vec![Term::int(0)]);
        assert!(!rw.incomplete());
    }

    #[test]
    fn calculation_steps_are_exact() {
        let r = a_system();
        let solver = Solver::internal();
        let d = ValueDomain::interval(0, 0);
        let t = Term::theory(TheoryOp::Add, vec![Term::int(1), Term::int(1)]);
        let out = plain_successors(&t, &r, &d, &solver);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].0, Term::int(2));
        assert!(crate::rewriting::respects(&out[0].1.subst, &out[0].1.rule));
    }

    #[test]
    fn parallel_and_multi_steps() {
        let r = a_system();
        let solver = Solver::internal();
        let d = ValueDomain::default();
        let rw = PlainRewriter::new(&r, &d, &solver);
        let one = Term::theory(TheoryOp::Add, vec![Term::int(1), Term::int(1)]);
        let t = Term::theory(TheoryOp::Mul, vec![one.clone(), one]);
        let par = parallel_successors(&t, &rw);
        // identity, either argument, both arguments, but not the outer product
        assert_eq!(par.len(), 4);
        for (u, ps) in &par {
            assert!(crate::term::pairwise_parallel(ps.iter()));
            assert!(multi_successors(&t, &rw, 1).contains(u));
        }
        // the product only becomes a redex after its arguments are evaluated
        let two_two = Term::theory(TheoryOp::Mul, vec![Term::int(2), Term::int(2)]);
        assert!(multi_successors(&t, &rw, 1).contains(&two_two));
        assert!(!multi_successors(&t, &rw, 1).contains(&Term::int(4)));
        assert_eq!(multi_successors(&t, &rw, 0), BTreeSet::from([t.clone()]));
    }
}
