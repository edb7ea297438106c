//! Finite fragments of the unconstrained system `R̄` and plain TRS
//! machinery on them: critical pairs, joinability and closedness.

pub mod check;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::analysis::pairs::{critical_pairs, parallel_critical_pairs, CriticalPair};
use crate::logic::{interpret, tt, Solver};
use crate::rewriting::plain::{multi_successors, parallel_successors, product, RootRewrite};
use crate::rewriting::{Lctrs, Rule, ValueDomain};
use crate::subst::{match_term, Substitution};
use crate::term::{PosFilter, Position, Sym, Term, Value, Var};

pub use check::{
    check_cp_correspondence, check_step_equivalence, find_counterexample, sample_models, CorrespondenceReport,
    StepReport, Witness,
};

/// The rules of `R̄` whose logical variables take values in a finite domain.
#[derive(Clone, Debug)]
pub struct GroundFragment {
    pub domain: ValueDomain,
    /// Instances `ℓτ → rτ` of the user rules.
    pub rules: Vec<Rule>,
    /// Calculation instances `f(v̄) → ⟦f(v̄)⟧`.
    pub calc: Vec<Rule>,
}

impl GroundFragment {
    pub fn all(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().chain(self.calc.iter())
    }

    pub fn len(&self) -> usize {
        self.rules.len() + self.calc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rewriter(&self) -> TrsRewriter<'_> {
        TrsRewriter::new(self.all().collect())
    }

    pub fn critical_pairs(&self, solver: &Solver) -> Vec<CriticalPair> {
        let rules: Vec<&Rule> = self.all().collect();
        critical_pairs(&rules, solver)
    }

    pub fn parallel_critical_pairs(&self, solver: &Solver) -> Vec<CriticalPair> {
        let rules: Vec<&Rule> = self.all().collect();
        parallel_critical_pairs(&rules, solver)
    }
}

/// Enumerates every `τ` over the domain with `τ ⊨ ρ`. Calculation instances
/// are generated for the theory symbols occurring in left- or right-hand
/// sides, since no other calculation can ever fire on a term built from
/// rule instances and values.
pub fn ground_fragment(r: &Lctrs, d: &ValueDomain) -> GroundFragment {
    let mut rules = BTreeSet::new();
    for rule in &r.rules {
        let lvars: Vec<Var> = rule.lvars().into_iter().collect();
        let choices: Vec<Vec<Value>> = lvars.iter().map(|x| d.values(&x.sort)).collect();
        for combo in product(&choices) {
            let tau: Substitution = lvars
                .iter()
                .cloned()
                .zip(combo.into_iter().map(Term::Val))
                .collect();
            if interpret(&tau.apply(&rule.guard)) == Ok(Value::Bool(true)) {
                rules.insert(Rule {
                    lhs: tau.apply(&rule.lhs),
                    rhs: tau.apply(&rule.rhs),
                    guard: tt(),
                    calc: false,
                });
            }
        }
    }
    let mut calc = BTreeSet::new();
    for f in r.term_theory_symbols() {
        let choices: Vec<Vec<Value>> = f.args.iter().map(|s| d.values(s)).collect();
        for combo in product(&choices) {
            let lhs = Term::app(f.clone(), combo.into_iter().map(Term::Val).collect());
            let v = interpret(&lhs).expect("ground theory term");
            calc.insert(Rule {
                lhs,
                rhs: Term::Val(v),
                guard: tt(),
                calc: true,
            });
        }
    }
    GroundFragment {
        domain: d.clone(),
        rules: rules.into_iter().collect(),
        calc: calc.into_iter().collect(),
    }
}

/// Rewriting with an unconstrained rule list, indexed by root symbol.
pub struct TrsRewriter<'a> {
    rules: Vec<&'a Rule>,
    by_root: BTreeMap<Sym, Vec<usize>>,
}

impl<'a> TrsRewriter<'a> {
    pub fn new(rules: Vec<&'a Rule>) -> Self {
        let mut by_root: BTreeMap<Sym, Vec<usize>> = BTreeMap::new();
        for (i, r) in rules.iter().enumerate() {
            if let Some(f) = r.lhs.root() {
                by_root.entry(f.clone()).or_default().push(i);
            }
        }
        TrsRewriter { rules, by_root }
    }

    /// One-step successors with the position of the contracted redex.
    pub fn successors(&self, t: &Term) -> Vec<(Position, Term)> {
        let mut out = Vec::new();
        for p in t.positions(PosFilter::Function) {
            let sub = t.subterm_at(&p).expect("own position");
            for (rule, sigma) in self.root_redexes(sub) {
                out.push((p.clone(), t.replace(&p, sigma.apply(&rule.rhs)).expect("own position")));
            }
        }
        out
    }

    pub fn parallel(&self, t: &Term) -> Vec<(Term, BTreeSet<Position>)> {
        parallel_successors(t, self)
    }

    pub fn multi(&self, t: &Term, nesting: usize) -> BTreeSet<Term> {
        multi_successors(t, self, nesting)
    }
}

impl RootRewrite for TrsRewriter<'_> {
    fn root_redexes(&self, t: &Term) -> Vec<(Rule, Substitution)> {
        let Some(f) = t.root() else { return Vec::new() };
        let Some(ids) = self.by_root.get(f) else { return Vec::new() };
        ids.iter()
            .filter_map(|&i| match_term(&self.rules[i].lhs, t).map(|s| (self.rules[i].clone(), s)))
            .collect()
    }
}

/// Terms reachable from `t` in at most `depth` steps (capped at
/// `max_states`), and whether that set is closed under rewriting.
pub fn reachable(
    t: &Term,
    depth: usize,
    max_states: usize,
    mut step: impl FnMut(&Term) -> Vec<Term>,
) -> (BTreeSet<Term>, bool) {
    let mut seen = BTreeSet::from([t.clone()]);
    let mut queue = VecDeque::from([(t.clone(), 0usize)]);
    let mut closed = true;
    while let Some((u, d)) = queue.pop_front() {
        let next = step(&u);
        if d >= depth {
            if next.iter().any(|v| !seen.contains(v)) {
                closed = false;
            }
            continue;
        }
        for v in next {
            if seen.contains(&v) {
                continue;
            }
            if seen.len() >= max_states {
                closed = false;
                break;
            }
            seen.insert(v.clone());
            queue.push_back((v, d + 1));
        }
    }
    (seen, closed)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Joinability {
    /// A common reduct.
    Joinable(Term),
    NotWithinBound,
    /// Both reachable sets are closed and share no term; the sets of normal
    /// forms are listed.
    DisjointNormalForms(Vec<Term>, Vec<Term>),
}

const MAX_JOIN_STATES: usize = 5000;

pub fn joinable(f: &TrsRewriter, s: &Term, t: &Term, depth: usize) -> Joinability {
    join_with(s, t, depth, MAX_JOIN_STATES, |u| f.successors(u).into_iter().map(|(_, v)| v).collect())
}

pub(crate) fn join_with(
    s: &Term,
    t: &Term,
    depth: usize,
    max_states: usize,
    mut step: impl FnMut(&Term) -> Vec<Term>,
) -> Joinability {
    if s == t {
        return Joinability::Joinable(s.clone());
    }
    let (rs, cs) = reachable(s, depth, max_states, &mut step);
    let (rt, ct) = reachable(t, depth, max_states, &mut step);
    if let Some(u) = rs.intersection(&rt).next() {
        return Joinability::Joinable(u.clone());
    }
    if cs && ct {
        let nfs = |set: &BTreeSet<Term>, step: &mut dyn FnMut(&Term) -> Vec<Term>| {
            set.iter().filter(|u| step(u).is_empty()).cloned().collect::<Vec<_>>()
        };
        return Joinability::DisjointNormalForms(nfs(&rs, &mut step), nfs(&rt, &mut step));
    }
    Joinability::NotWithinBound
}

/// Closedness of the plain critical pairs of a fragment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosednessReport {
    pub critical_pairs: usize,
    pub parallel_critical_pairs: usize,
    pub almost_development_closed: bool,
    pub parallel_closed_1: bool,
    pub parallel_closed_2: bool,
    pub failures: Vec<String>,
}

impl ClosednessReport {
    pub fn parallel_closed(&self) -> bool {
        self.parallel_closed_1 && self.parallel_closed_2
    }
}

/// `Var(t, P)`: variables below the positions `P`.
fn vars_below<'p>(t: &Term, ps: impl IntoIterator<Item = &'p Position>) -> BTreeSet<Var> {
    ps.into_iter()
        .filter_map(|p| t.subterm_at(p))
        .flat_map(|u| u.vars())
        .collect()
}

/// Checks almost development closedness and 1-/2-parallel closedness of the
/// fragment directly, with `depth` bounding the rewrite tails.
pub fn trs_closedness_check(f: &GroundFragment, depth: usize, nesting: usize, solver: &Solver) -> ClosednessReport {
    let rw = f.rewriter();
    let cps = f.critical_pairs(solver);
    let pcps = f.parallel_critical_pairs(solver);
    let mut report = ClosednessReport {
        critical_pairs: cps.len(),
        parallel_critical_pairs: pcps.len(),
        almost_development_closed: true,
        parallel_closed_1: true,
        parallel_closed_2: true,
        failures: Vec::new(),
    };
    let reach = |t: &Term| {
        reachable(t, depth, MAX_JOIN_STATES, |u| rw.successors(u).into_iter().map(|(_, v)| v).collect()).0
    };
    for cp in &cps {
        let from_right = reach(&cp.right);
        let multi = rw.multi(&cp.left, nesting);
        let adc = if cp.is_overlay() {
            multi.iter().any(|u| from_right.contains(u))
        } else {
            multi.contains(&cp.right)
        };
        if !adc {
            report.almost_development_closed = false;
            report.failures.push(format!("not almost development closed: {} ≈ {}", cp.left, cp.right));
        }
        if !rw.parallel(&cp.left).iter().any(|(u, _)| from_right.contains(u)) {
            report.parallel_closed_1 = false;
            report.failures.push(format!("not 1-parallel closed: {} ≈ {}", cp.left, cp.right));
        }
    }
    for cp in &pcps {
        let from_left = reach(&cp.left);
        let allowed = vars_below(&cp.source, &cp.positions);
        let ok = rw
            .parallel(&cp.right)
            .iter()
            .any(|(v, q)| from_left.contains(v) && vars_below(v, q).is_subset(&allowed));
        if !ok {
            report.parallel_closed_2 = false;
            report.failures.push(format!("not 2-parallel closed: {} ≈ {}", cp.left, cp.right));
        }
    }
    report
}
