//! Rewriting on constrained terms `s [φ]`, the equivalence `~` and the
//! relations `→̃`, `⊸̃→` and `○̃→` built from them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::lctrs::Lctrs;
use super::plain::{contract_with_inner, default_value, product};
use super::rule::Rule;
use super::{Answer, Flavor, StepRecord};
use crate::logic::{and_all, conjuncts, eq, implies, interpret, Quantifier, Solver, SolverVerdict};
use crate::subst::{match_term, Substitution};
use crate::term::{PosFilter, Position, Sort, Term, TheoryOp, Value, Var};

/// A constrained term `t [φ]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CTerm {
    pub term: Term,
    pub constraint: Term,
}

impl CTerm {
    pub fn new(term: Term, constraint: Term) -> Self {
        CTerm { term, constraint }
    }

    /// `Var(φ)`: the variables that stand for values.
    pub fn logical_vars(&self) -> BTreeSet<Var> {
        self.constraint.vars()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v = self.term.vars();
        self.constraint.collect_vars(&mut v);
        v
    }
}

impl fmt::Display for CTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.term, self.constraint)
    }
}

impl fmt::Debug for CTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Copy of `x` under an index range no parser or renaming produces, used to
/// keep rule variables apart from the term being rewritten without touching
/// the global fresh-name counter (which would defeat solver caching).
fn reserved(x: &Var, base: u32, k: usize) -> Var {
    x.with_index(base - k as u32)
}

const RULE_BASE: u32 = u32::MAX;
const EQUIV_BASE: u32 = u32::MAX - (1 << 20);

/// Rewriting with `R_rc` on constrained terms.
pub struct CRewriter<'a> {
    pub lctrs: &'a Lctrs,
    pub solver: &'a Solver,
    /// Maximal number of nested rule applications inside one multi-step.
    pub nesting: usize,
}

impl<'a> CRewriter<'a> {
    pub fn new(lctrs: &'a Lctrs, solver: &'a Solver) -> Self {
        CRewriter {
            lctrs,
            solver,
            nesting: 3,
        }
    }

    fn satisfiable(&self, phi: &Term) -> bool {
        self.solver.is_satisfiable(phi).is_sat()
    }

    /// Rule instances applicable at the root of `t` under `φ`: `ℓσ = t`,
    /// `σ(x) ∈ Val ∪ Var(φ)` for logical `x`, and `φ ⇒ ψσ` valid. The caller
    /// checks satisfiability of `φ`.
    pub fn root_steps(&self, t: &Term, phi: &Term) -> Vec<(Rule, Substitution)> {
        let Term::App(f, _) = t else {
            return Vec::new();
        };
        let phi_vars = phi.vars();
        let mut out = Vec::new();
        for rule in self.lctrs.rc() {
            if rule.lhs.root() != Some(f) {
                continue;
            }
            let Some(sigma) = match_term(&rule.lhs, t) else {
                continue;
            };
            out.extend(
                self.complete_logical(rule, sigma, phi, &phi_vars)
                    .into_iter()
                    .map(|s| (rule.clone(), s)),
            );
        }
        out
    }

    fn complete_logical(
        &self,
        rule: &Rule,
        sigma: Substitution,
        phi: &Term,
        phi_vars: &BTreeSet<Var>,
    ) -> Vec<Substitution> {
        let lhs_vars = rule.lhs.vars();
        let lvars = rule.lvars();
        for x in lvars.iter().filter(|x| lhs_vars.contains(x)) {
            match sigma.image(x) {
                Term::Val(_) => {}
                Term::Var(y) if phi_vars.contains(&y) => {}
                _ => return Vec::new(),
            }
        }
        let free: Vec<Var> = lvars.iter().filter(|x| !lhs_vars.contains(x)).cloned().collect();
        // fast path for calculations on values
        if rule.calc {
            if let Ok(v) = interpret(&sigma.apply(&rule.lhs)) {
                let mut s = sigma;
                s.insert(free[0].clone(), Term::Val(v));
                return vec![s];
            }
        }
        let keep_apart: Substitution = free
            .iter()
            .enumerate()
            .map(|(k, x)| (x.clone(), Term::Var(reserved(x, RULE_BASE, k))))
            .collect();
        let psi = keep_apart.apply(&sigma.apply(&rule.guard));
        let mut candidates: Vec<Vec<Term>> = Vec::new();
        if !free.is_empty() {
            let model = match self.solver.is_satisfiable(&and_all([phi.clone(), psi.clone()])) {
                SolverVerdict::Sat(m) => m,
                _ => return Vec::new(),
            };
            for (k, x) in free.iter().enumerate() {
                let r = reserved(x, RULE_BASE, k);
                let mut c: Vec<Term> = phi_vars
                    .iter()
                    .filter(|y| y.sort == x.sort)
                    .map(|y| Term::Var(y.clone()))
                    .collect();
                let v = model.get(&r).cloned().unwrap_or_else(|| default_value(&x.sort));
                c.push(Term::Val(v));
                candidates.push(c);
            }
        }
        let mut out = Vec::new();
        for choice in product(&candidates) {
            let mut s = sigma.clone();
            for (x, t) in free.iter().zip(choice) {
                s.insert(x.clone(), t);
            }
            let guard = s.apply(&rule.guard);
            let ok = if guard.is_ground() {
                interpret(&guard) == Ok(Value::Bool(true))
            } else {
                self.solver.is_valid(&implies(phi.clone(), guard)).is_valid()
            };
            if ok {
                out.push(s);
            }
        }
        out
    }

    /// `s [φ] →_R t [φ]` at positions below `region`.
    pub fn cstep_below(&self, s: &CTerm, region: &Position) -> Vec<(CTerm, StepRecord)> {
        if !self.satisfiable(&s.constraint) {
            return Vec::new();
        }
        let Some(base) = s.term.subterm_at(region) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for q in base.positions(PosFilter::Function) {
            let sub = base.subterm_at(&q).expect("own position");
            if !matches!(sub, Term::App(..)) {
                continue;
            }
            let p = q.under(region);
            for (rule, sigma) in self.root_steps(sub, &s.constraint) {
                let t = s.term.replace(&p, sigma.apply(&rule.rhs)).expect("own position");
                out.push((
                    CTerm::new(t, s.constraint.clone()),
                    StepRecord::single(p.clone(), rule, sigma, Flavor::Constrained),
                ));
            }
        }
        out
    }

    pub fn cstep(&self, s: &CTerm) -> Vec<(CTerm, StepRecord)> {
        self.cstep_below(s, &Position::root())
    }

    /// `→̃ = ~ · → · ~`, with definitional extensions as the `~`-moves.
    pub fn cstep_tilde_below(&self, s: &CTerm, region: &Position) -> Vec<(CTerm, StepRecord)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for ext in equiv_extensions(s) {
            for (t, rec) in self.cstep_below(&ext, region) {
                let t = drop_unused_definitions(&t);
                if seen.insert(t.clone()) {
                    out.push((t, rec));
                }
            }
        }
        out
    }

    pub fn cstep_tilde(&self, s: &CTerm) -> Vec<(CTerm, StepRecord)> {
        self.cstep_tilde_below(s, &Position::root())
    }

    /// `s [φ] ⊸→^P t [φ]` with every redex below `region`.
    pub fn parallel_below(&self, s: &CTerm, region: &Position) -> Vec<(CTerm, BTreeSet<Position>)> {
        let identity = (s.clone(), BTreeSet::new());
        if !self.satisfiable(&s.constraint) {
            return vec![identity];
        }
        let Some(base) = s.term.subterm_at(region) else {
            return vec![identity];
        };
        let mut results = BTreeSet::new();
        self.parallel_into(base, &s.constraint, region, &mut results);
        results
            .into_iter()
            .map(|(u, ps)| {
                let t = s.term.replace(region, u).expect("own position");
                (CTerm::new(t, s.constraint.clone()), ps)
            })
            .collect()
    }

    fn parallel_into(&self, t: &Term, phi: &Term, at: &Position, out: &mut BTreeSet<(Term, BTreeSet<Position>)>) {
        let Term::App(f, args) = t else {
            out.insert((t.clone(), BTreeSet::new()));
            return;
        };
        for (rule, sigma) in self.root_steps(t, phi) {
            out.insert((sigma.apply(&rule.rhs), BTreeSet::from([at.clone()])));
        }
        let choices: Vec<Vec<(Term, BTreeSet<Position>)>> = args
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let mut sub = BTreeSet::new();
                self.parallel_into(a, phi, &at.child(i + 1), &mut sub);
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

    /// `⊸̃→` below `region`.
    pub fn parallel_tilde_below(&self, s: &CTerm, region: &Position) -> Vec<(CTerm, BTreeSet<Position>)> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for ext in equiv_extensions(s) {
            for (t, ps) in self.parallel_below(&ext, region) {
                let t = drop_unused_definitions(&t);
                if seen.insert((t.clone(), ps.clone())) {
                    out.push((t, ps));
                }
            }
        }
        out
    }

    /// `s [φ] ○→ t [φ]` with every redex below `region`.
    pub fn multi_below(&self, s: &CTerm, region: &Position) -> Vec<CTerm> {
        if !self.satisfiable(&s.constraint) {
            return vec![s.clone()];
        }
        let Some(base) = s.term.subterm_at(region) else {
            return vec![s.clone()];
        };
        self.multi_term(base, &s.constraint, self.nesting)
            .into_iter()
            .map(|u| CTerm::new(s.term.replace(region, u).expect("own position"), s.constraint.clone()))
            .collect()
    }

    fn multi_term(&self, t: &Term, phi: &Term, nesting: usize) -> BTreeSet<Term> {
        let Term::App(f, args) = t else {
            return BTreeSet::from([t.clone()]);
        };
        let choices: Vec<Vec<Term>> = args
            .iter()
            .map(|a| self.multi_term(a, phi, nesting).into_iter().collect())
            .collect();
        let mut out: BTreeSet<Term> = product(&choices)
            .into_iter()
            .map(|xs| Term::app(f.clone(), xs))
            .collect();
        if nesting > 0 {
            for (rule, sigma) in self.root_steps(t, phi) {
                out.extend(contract_with_inner(&rule, &sigma, |u| self.multi_term(u, phi, nesting - 1)));
            }
        }
        out
    }

    /// `○̃→` below `region`.
    pub fn multi_tilde_below(&self, s: &CTerm, region: &Position) -> Vec<CTerm> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for ext in equiv_extensions(s) {
            for t in self.multi_below(&ext, region) {
                let t = drop_unused_definitions(&t);
                if seen.insert(t.clone()) {
                    out.push(t);
                }
            }
        }
        out
    }
}

/// A fresh `w` not occurring in `s`.
fn extension_var(s: &CTerm, sort: &Sort, offset: u32) -> Var {
    let next = s
        .vars()
        .iter()
        .filter(|v| &*v.name == "w")
        .map(|v| v.idx)
        .max()
        .map_or(1, |i| i + 1);
    Var::new("w", sort.clone()).with_index(next + offset)
}

/// Reformulations of `s [φ]` that are `~`-equivalent by construction: the
/// input itself and definitional extensions `φ ∧ w = f(ū)` for theory
/// subterms `f(ū)` with arguments in `Val ∪ Var(φ)`, one at a time and all
/// at once. Renamings are not generated since every consumer works modulo
/// renaming already.
pub fn equiv_extensions(s: &CTerm) -> Vec<CTerm> {
    let phi_vars = s.logical_vars();
    let mut targets: Vec<Term> = Vec::new();
    for p in s.term.positions(PosFilter::Function) {
        let sub = s.term.subterm_at(&p).expect("own position");
        if let Term::App(f, args) = sub {
            let simple = args.iter().all(|a| match a {
                Term::Val(_) => true,
                Term::Var(x) => phi_vars.contains(x),
                Term::App(..) => false,
            });
            if f.is_theory() && simple && !targets.contains(sub) {
                targets.push(sub.clone());
            }
        }
    }
    let mut out = vec![s.clone()];
    let define = |ts: &[Term]| {
        let defs = ts
            .iter()
            .enumerate()
            .map(|(k, u)| eq(Term::Var(extension_var(s, &u.sort(), k as u32)), u.clone()));
        CTerm::new(s.term.clone(), and_all(defs.chain([s.constraint.clone()])))
    };
    for u in &targets {
        out.push(define(std::slice::from_ref(u)));
    }
    if targets.len() > 1 {
        out.push(define(&targets));
    }
    out
}

/// Removes conjuncts `z = e` whose variable `z` occurs nowhere else: every
/// valuation of the remaining variables extends to `z`, so the result is
/// `~`-equivalent.
pub fn drop_unused_definitions(s: &CTerm) -> CTerm {
    let term_vars = s.term.vars();
    let mut parts = conjuncts(&s.constraint);
    loop {
        let removable = (0..parts.len()).find(|&i| {
            let Some(z) = defined_var(&parts[i]) else {
                return false;
            };
            !term_vars.contains(&z)
                && parts
                    .iter()
                    .enumerate()
                    .all(|(j, c)| j == i || !c.occurs(&z))
        });
        match removable {
            Some(i) => {
                parts.remove(i);
            }
            None => break,
        }
    }
    CTerm::new(s.term.clone(), and_all(parts))
}

fn defined_var(c: &Term) -> Option<Var> {
    let Term::App(f, args) = c else { return None };
    if f.theory_op() != Some(TheoryOp::Eq) {
        return None;
    }
    for (a, b) in [(&args[0], &args[1]), (&args[1], &args[0])] {
        if let Term::Var(z) = a {
            if !b.occurs(z) {
                return Some(z.clone());
            }
        }
    }
    None
}

/// Aligns `a` (logical variables `av`) with `b` (logical variables `bv`),
/// collecting the equations needed at value positions. False on a rigid
/// mismatch.
pub(crate) fn align(a: &Term, b: &Term, av: &BTreeSet<Var>, bv: &BTreeSet<Var>, eqs: &mut Vec<Term>) -> bool {
    let value_like = |t: &Term, vs: &BTreeSet<Var>| match t {
        Term::Val(_) => true,
        Term::Var(x) => vs.contains(x),
        Term::App(..) => false,
    };
    if value_like(a, av) && value_like(b, bv) {
        if a != b {
            eqs.push(eq(a.clone(), b.clone()));
        }
        return true;
    }
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => x == y && !av.contains(x) && !bv.contains(y),
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.iter().zip(ys.iter()).all(|(x, y)| align(x, y, av, bv, eqs))
        }
        _ => false,
    }
}

/// Decides `s [φ] ~ t [ψ]` on the structurally aligned fragment: the terms
/// must agree outside value positions, and the value equations reduce the
/// question to two `∀∃` sentences.
pub fn equiv(s: &CTerm, t: &CTerm, solver: &Solver) -> Answer {
    let sv = s.logical_vars();
    let apart: Substitution = t
        .logical_vars()
        .iter()
        .enumerate()
        .map(|(k, x)| (x.clone(), Term::Var(reserved(x, EQUIV_BASE, k))))
        .collect();
    let t_term = apart.apply(&t.term);
    let psi = apart.apply(&t.constraint);
    let tv = psi.vars();
    // With an unsatisfiable side both sentences are decided by satisfiability
    // alone; checking first also keeps Cooper expansion off the vacuous case.
    let emptiness = match (solver.is_satisfiable(&s.constraint), solver.is_satisfiable(&psi)) {
        (SolverVerdict::Unsat, SolverVerdict::Unsat) => Some(Answer::Yes),
        (SolverVerdict::Unsat, SolverVerdict::Sat(_)) | (SolverVerdict::Sat(_), SolverVerdict::Unsat) => {
            Some(Answer::No)
        }
        (SolverVerdict::Unknown(why), _) | (_, SolverVerdict::Unknown(why)) => Some(Answer::Unknown(why)),
        _ => None,
    };
    if let Some(a) = emptiness {
        return a;
    }
    let mut eqs = Vec::new();
    if !align(&s.term, &t_term, &sv, &tv, &mut eqs) {
        return Answer::No;
    }
    let phi = &s.constraint;
    let eqs = and_all(eqs);
    let forward = solver.is_valid_quantified(
        &[
            (Quantifier::Forall, sv.iter().cloned().collect()),
            (Quantifier::Exists, tv.iter().cloned().collect()),
        ],
        &implies(phi.clone(), and_all([psi.clone(), eqs.clone()])),
    );
    let backward = solver.is_valid_quantified(
        &[
            (Quantifier::Forall, tv.iter().cloned().collect()),
            (Quantifier::Exists, sv.iter().cloned().collect()),
        ],
        &implies(psi.clone(), and_all([phi.clone(), eqs])),
    );
    match (forward, backward) {
        (SolverVerdict::Valid, SolverVerdict::Valid) => Answer::Yes,
        (SolverVerdict::Invalid(_), _) | (_, SolverVerdict::Invalid(_)) => Answer::No,
        (SolverVerdict::Unknown(why), _) | (_, SolverVerdict::Unknown(why)) => Answer::Unknown(why),
        _ => Answer::Unknown("unexpected solver answer".into()),
    }
}

/// Model of `φ` restricted to `Var(φ)`, as a substitution of values.
pub fn model_substitution(model: &BTreeMap<Var, Value>) -> Substitution {
    model.iter().map(|(x, v)| (x.clone(), Term::Val(v.clone()))).collect()
}
