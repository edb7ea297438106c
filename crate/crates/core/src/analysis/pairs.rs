//! Overlaps, constrained critical pairs and constrained parallel critical
//! pairs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use crate::logic::{and_all, Solver, SolverVerdict};
use crate::rewriting::{CTerm, Lctrs, Rule};
use crate::subst::{canonical_renaming, unify, Substitution};
use crate::term::{pairwise_parallel, PosFilter, Position, Term, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairKind {
    /// From an overlap of two rules at one position.
    Critical,
    /// From a rule overlapped by a set of rules at parallel positions.
    Parallel,
}

/// A constrained (parallel) critical pair `s ≈ t [Φ]` together with the
/// peak it originates from.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CriticalPair {
    pub left: Term,
    pub right: Term,
    pub constraint: Term,
    pub kind: PairKind,
    /// Term the peak starts from (`ℓ₂σ`, respectively `ℓσ`).
    pub source: Term,
    /// Overlap position (a singleton for ordinary pairs) or the set `P`.
    pub positions: Vec<Position>,
    /// Indices into `R_rc`: the outer rule first.
    pub rules: Vec<usize>,
    /// Satisfiability of the constraint could not be decided.
    pub unsure: bool,
}

impl CriticalPair {
    pub fn is_overlay(&self) -> bool {
        self.positions.iter().all(Position::is_root)
    }

    /// The pair as a single constrained term `s ≈ t [Φ]`.
    pub fn as_cterm(&self) -> CTerm {
        CTerm::new(Term::pair(self.left.clone(), self.right.clone()), self.constraint.clone())
    }
}

impl fmt::Display for CriticalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ≈ {} [{}]", self.left, self.right, self.constraint)
    }
}

impl fmt::Debug for CriticalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// True if `σ(x) ∈ Val ∪ V` for every logical variable of the rules.
fn logical_images_ok(sigma: &Substitution, rules: &[&Rule]) -> bool {
    rules
        .iter()
        .flat_map(|r| r.lvars())
        .all(|x| matches!(sigma.image(&x), Term::Val(_) | Term::Var(_)))
}

fn canonical(mut cp: CriticalPair) -> CriticalPair {
    let mut order: Vec<Var> = Vec::new();
    for t in [&cp.left, &cp.right, &cp.constraint, &cp.source] {
        t.vars_ordered(&mut order);
    }
    let rn = canonical_renaming(&order);
    cp.left = rn.apply(&cp.left);
    cp.right = rn.apply(&cp.right);
    cp.constraint = rn.apply(&cp.constraint);
    cp.source = rn.apply(&cp.source);
    cp
}

/// Sorts and removes pairs that coincide after canonical renaming.
fn dedup(pairs: Vec<CriticalPair>) -> Vec<CriticalPair> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for cp in pairs {
        let key = (cp.left.clone(), cp.right.clone(), cp.constraint.clone(), cp.positions.clone());
        if seen.insert(key) {
            out.push(cp);
        }
    }
    out
}

/// Condition (4): satisfiability of the combined guards. `None` means
/// unsatisfiable, `Some(true)` undecided.
fn guards_satisfiable(solver: &Solver, guards: Vec<Term>) -> Option<bool> {
    match solver.is_satisfiable(&and_all(guards)) {
        SolverVerdict::Unsat => None,
        SolverVerdict::Unknown(_) => Some(true),
        _ => Some(false),
    }
}

/// All constrained critical pairs of `R_rc`. Overlaps between two
/// calculation rules are skipped: they only arise at the root, where both
/// sides evaluate to the same value.
pub fn ccps(r: &Lctrs, solver: &Solver) -> Vec<CriticalPair> {
    let rc: Vec<&Rule> = r.rc().collect();
    critical_pairs(&rc, solver)
}

/// Critical pairs of an arbitrary rule list; indices in the records refer
/// to `rc`.
pub fn critical_pairs(rc: &[&Rule], solver: &Solver) -> Vec<CriticalPair> {
    let jobs: Vec<(usize, usize)> = (0..rc.len())
        .flat_map(|i| (0..rc.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| !(rc[i].calc && rc[j].calc))
        .collect();
    let mut found: Vec<CriticalPair> = jobs
        .par_iter()
        .flat_map_iter(|&(i, j)| overlaps_of(rc, i, j, solver))
        .collect();
    found.sort();
    dedup(found)
}

fn overlaps_of(rc: &[&Rule], i: usize, j: usize, solver: &Solver) -> Vec<CriticalPair> {
    let (r1, r2) = (rc[i], rc[j]);
    let a = r1.fresh();
    let b = r2.fresh();
    let mut out = Vec::new();
    for p in b.lhs.positions(PosFilter::Function) {
        let sub = b.lhs.subterm_at(&p).expect("own position");
        if sub.root() != a.lhs.root() {
            continue;
        }
        let Some(sigma) = unify(&[(a.lhs.clone(), sub.clone())]) else {
            continue;
        };
        if !logical_images_ok(&sigma, &[&a, &b]) {
            continue;
        }
        if p.is_root() && r1.is_variant_of(r2) && r1.rhs_vars_in_lhs() {
            continue;
        }
        let Some(unsure) = guards_satisfiable(solver, vec![sigma.apply(&a.guard), sigma.apply(&b.guard)]) else {
            continue;
        };
        let source = sigma.apply(&b.lhs);
        let left = source.replace(&p, sigma.apply(&a.rhs)).expect("own position");
        let constraint = and_all([
            sigma.apply(&a.guard),
            sigma.apply(&b.guard),
            sigma.apply(&a.ec()),
            sigma.apply(&b.ec()),
        ]);
        out.push(canonical(CriticalPair {
            left,
            right: sigma.apply(&b.rhs),
            constraint,
            kind: PairKind::Critical,
            source,
            positions: vec![p],
            rules: vec![j, i],
            unsure,
        }));
    }
    out
}

/// All constrained parallel critical pairs of `R_rc`.
pub fn cpcps(r: &Lctrs, solver: &Solver) -> Vec<CriticalPair> {
    let rc: Vec<&Rule> = r.rc().collect();
    parallel_critical_pairs(&rc, solver)
}

/// Parallel critical pairs of an arbitrary rule list, with every
/// non-calculation rule as the outer rule.
pub fn parallel_critical_pairs(rc: &[&Rule], solver: &Solver) -> Vec<CriticalPair> {
    let mut found: Vec<CriticalPair> = (0..rc.len())
        .into_par_iter()
        .filter(|&i| !rc[i].calc)
        .flat_map_iter(|i| parallel_overlaps_of(rc, i, solver))
        .collect();
    found.sort();
    dedup(found)
}

/// Largest position set considered for one parallel overlap.
const MAX_PARALLEL: usize = 6;

fn parallel_overlaps_of(rc: &[&Rule], i: usize, solver: &Solver) -> Vec<CriticalPair> {
    let outer = rc[i].fresh();
    // candidate inner rules per position, each a fresh copy
    let mut cands: BTreeMap<Position, Vec<(usize, Rule)>> = BTreeMap::new();
    for p in outer.lhs.positions(PosFilter::Function) {
        let sub = outer.lhs.subterm_at(&p).expect("own position");
        let Term::App(..) = sub else { continue };
        for (j, r) in rc.iter().enumerate() {
            if r.lhs.root() != sub.root() {
                continue;
            }
            let b = r.fresh();
            if unify(&[(b.lhs.clone(), sub.clone())]).is_some() {
                cands.entry(p.clone()).or_default().push((j, b));
            }
        }
    }
    let positions: Vec<Position> = cands.keys().cloned().collect();
    let mut out = Vec::new();
    let mut chosen: Vec<Position> = Vec::new();
    parallel_sets(&positions, 0, &mut chosen, &mut |set| {
        let choices: Vec<Vec<(usize, Rule)>> = set.iter().map(|p| cands[p].clone()).collect();
        for combo in crate::rewriting::plain::product(&choices) {
            if let Some(cp) = parallel_pair(rc, i, &outer, set, &combo, solver) {
                out.push(cp);
            }
        }
    });
    out
}

/// Calls `f` on every non-empty pairwise parallel subset (in order).
fn parallel_sets(ps: &[Position], from: usize, chosen: &mut Vec<Position>, f: &mut impl FnMut(&[Position])) {
    for k in from..ps.len() {
        if chosen.len() >= MAX_PARALLEL || !chosen.iter().all(|q| q.is_parallel_to(&ps[k])) {
            continue;
        }
        chosen.push(ps[k].clone());
        f(chosen);
        parallel_sets(ps, k + 1, chosen, f);
        chosen.pop();
    }
}

fn parallel_pair(
    rc: &[&Rule],
    i: usize,
    outer: &Rule,
    set: &[Position],
    inner: &[(usize, Rule)],
    solver: &Solver,
) -> Option<CriticalPair> {
    debug_assert!(pairwise_parallel(set.iter()));
    let equations: Vec<(Term, Term)> = set
        .iter()
        .zip(inner)
        .map(|(p, (_, b))| (b.lhs.clone(), outer.lhs.subterm_at(p).expect("own position").clone()))
        .collect();
    let sigma = unify(&equations)?;
    let mut all: Vec<&Rule> = vec![outer];
    all.extend(inner.iter().map(|(_, b)| b));
    if !logical_images_ok(&sigma, &all) {
        return None;
    }
    if set.len() == 1 && set[0].is_root() {
        let j = inner[0].0;
        if rc[i].is_variant_of(rc[j]) && rc[i].rhs_vars_in_lhs() {
            return None;
        }
    }
    let mut guards = vec![sigma.apply(&outer.guard)];
    guards.extend(inner.iter().map(|(_, b)| sigma.apply(&b.guard)));
    let unsure = guards_satisfiable(solver, guards.clone())?;
    let source = sigma.apply(&outer.lhs);
    let replacements: BTreeMap<Position, Term> = set
        .iter()
        .zip(inner)
        .map(|(p, (_, b))| (p.clone(), sigma.apply(&b.rhs)))
        .collect();
    let left = source.replace_at(&replacements).ok()?;
    let mut parts = guards;
    parts.push(sigma.apply(&outer.ec()));
    parts.extend(inner.iter().map(|(_, b)| sigma.apply(&b.ec())));
    let mut rules = vec![i];
    rules.extend(inner.iter().map(|(j, _)| *j));
    Some(canonical(CriticalPair {
        left,
        right: sigma.apply(&outer.rhs),
        constraint: and_all(parts),
        kind: PairKind::Parallel,
        source,
        positions: set.to_vec(),
        rules,
        unsure,
    }))
}
