//! Brute-force comparisons between the constrained analysis and finite
//! fragments of `R̄`, and the ground search for non-joinable peaks.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{ground_fragment, join_with, Joinability};
use crate::analysis::pairs::{ccps, cpcps, CriticalPair};
use crate::logic::{interpret, Model, Solver, SolverVerdict};
use crate::rewriting::constrained::model_substitution;
use crate::rewriting::plain::product;
use crate::rewriting::{Lctrs, PlainRewriter, ValueDomain};
use crate::subst::{match_term, Substitution};
use crate::term::{Sort, Sym, Term, Value, Var};

/// Beyond this many assignments models are drawn at random.
const EXHAUSTIVE_LIMIT: usize = 100_000;

/// Up to `count` assignments of `vars` over `d` satisfying `phi`: all of
/// them (in a seeded random order) when the space is small, otherwise
/// random draws.
pub fn sample_models(phi: &Term, vars: &[Var], d: &ValueDomain, count: usize, seed: u64) -> Vec<Model> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let choices: Vec<Vec<Value>> = vars.iter().map(|x| d.values(&x.sort)).collect();
    if choices.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let holds = |m: &Model| interpret(&model_substitution(m).apply(phi)) == Ok(Value::Bool(true));
    let space = choices
        .iter()
        .try_fold(1usize, |acc, c| acc.checked_mul(c.len()))
        .unwrap_or(usize::MAX);
    let mut out: Vec<Model> = if space <= EXHAUSTIVE_LIMIT {
        let mut all: Vec<Model> = product(&choices)
            .into_iter()
            .map(|vs| vars.iter().cloned().zip(vs).collect::<Model>())
            .filter(holds)
            .collect();
        all.shuffle(&mut rng);
        all
    } else {
        let mut seen = BTreeSet::new();
        for _ in 0..count.saturating_mul(50) {
            let m: Model = vars
                .iter()
                .zip(&choices)
                .map(|(x, c)| (x.clone(), c[rng.gen_range(0..c.len())].clone()))
                .collect();
            if holds(&m) {
                seen.insert(m);
                if seen.len() >= count {
                    break;
                }
            }
        }
        seen.into_iter().collect()
    };
    out.truncate(count);
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorrespondenceReport {
    pub fragment_pairs: usize,
    pub fragment_parallel_pairs: usize,
    pub constrained_pairs: usize,
    pub constrained_parallel_pairs: usize,
    /// Instances of constrained pairs compared against the fragment.
    pub instances: usize,
    pub violations: Vec<String>,
}

fn pair_of(cp: &CriticalPair) -> Term {
    Term::pair(cp.left.clone(), cp.right.clone())
}

/// `γ` with `s = s'γ`, `t = t'γ` and `γ ⊨ Φ` for some pair `s' ≈ t' [Φ]`.
fn covered_by(s: &Term, t: &Term, pairs: &[CriticalPair], solver: &Solver) -> bool {
    let target = Term::pair(s.clone(), t.clone());
    pairs.iter().any(|cp| {
        let Some(gamma) = match_term(&pair_of(cp), &target) else {
            return false;
        };
        let logical = cp.constraint.vars();
        if logical
            .iter()
            .any(|x| gamma.get(x).is_some_and(|v| !v.is_value()))
        {
            return false;
        }
        solver.is_satisfiable(&gamma.apply(&cp.constraint)).is_sat()
    })
}

/// Some fragment pair `s' ≈ t'` and `δ` with `s = s'δ`, `t = t'δ`.
fn instance_of_fragment(s: &Term, t: &Term, pairs: &[CriticalPair]) -> bool {
    let target = Term::pair(s.clone(), t.clone());
    pairs.iter().any(|cp| match_term(&pair_of(cp), &target).is_some())
}

/// Compares the (parallel) critical pairs of the fragment of `r` over `d`
/// with the constrained ones, in both directions: every fragment pair is an
/// instance of a constrained pair, and every sampled instance of a
/// constrained pair over `d` is trivial or an instance of a fragment pair.
pub fn check_cp_correspondence(r: &Lctrs, d: &ValueDomain, samples: usize, solver: &Solver) -> CorrespondenceReport {
    let fragment = ground_fragment(r, d);
    let plain = fragment.critical_pairs(solver);
    let plain_par = fragment.parallel_critical_pairs(solver);
    let constrained = ccps(r, solver);
    let constrained_par = cpcps(r, solver);
    let mut report = CorrespondenceReport {
        fragment_pairs: plain.len(),
        fragment_parallel_pairs: plain_par.len(),
        constrained_pairs: constrained.len(),
        constrained_parallel_pairs: constrained_par.len(),
        ..Default::default()
    };

    for (frag, cons, what) in [
        (&plain, &constrained, "critical pair"),
        (&plain_par, &constrained_par, "parallel critical pair"),
    ] {
        let missing: Vec<String> = frag
            .par_iter()
            .filter(|cp| !covered_by(&cp.left, &cp.right, cons, solver))
            .map(|cp| format!("fragment {what} {} ≈ {} has no constrained counterpart", cp.left, cp.right))
            .collect();
        report.violations.extend(missing);

        let checked: Vec<(usize, Vec<String>)> = cons
            .par_iter()
            .enumerate()
            .map(|(k, cp)| {
                let vars: Vec<Var> = cp.constraint.vars().into_iter().collect();
                let models = sample_models(&cp.constraint, &vars, d, samples, k as u64);
                let mut bad = Vec::new();
                for m in &models {
                    let sigma = model_substitution(m);
                    let (s, t) = (sigma.apply(&cp.left), sigma.apply(&cp.right));
                    if s != t && !instance_of_fragment(&s, &t, frag) {
                        bad.push(format!("instance {s} ≈ {t} of constrained {what} {cp} is not a fragment {what}"));
                    }
                }
                (models.len(), bad)
            })
            .collect();
        for (n, bad) in checked {
            report.instances += n;
            report.violations.extend(bad);
        }
    }
    report
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepReport {
    pub terms: usize,
    pub steps: usize,
    pub violations: Vec<String>,
}

/// Random terms over the symbols of a system, with values drawn from a
/// domain.
struct TermGen<'a> {
    symbols: Vec<Sym>,
    values: &'a ValueDomain,
}

impl TermGen<'_> {
    fn leaf(&self, sort: &Sort, rng: &mut ChaCha8Rng, var_id: &mut u32) -> Term {
        let vals = self.values.values(sort);
        if !vals.is_empty() && rng.gen_bool(0.8) {
            return Term::Val(vals[rng.gen_range(0..vals.len())].clone());
        }
        let constants: Vec<&Sym> = self.symbols.iter().filter(|f| f.args.is_empty() && f.result == *sort).collect();
        if !constants.is_empty() && rng.gen_bool(0.7) {
            return Term::constant(constants[rng.gen_range(0..constants.len())].clone());
        }
        *var_id += 1;
        Term::Var(Var::new(&format!("v{var_id}"), sort.clone()))
    }

    fn term(&self, sort: &Sort, depth: usize, rng: &mut ChaCha8Rng, var_id: &mut u32) -> Term {
        let fs: Vec<&Sym> = self.symbols.iter().filter(|f| f.result == *sort).collect();
        if depth == 0 || fs.is_empty() || rng.gen_bool(0.3) {
            return self.leaf(sort, rng, var_id);
        }
        let f = fs[rng.gen_range(0..fs.len())].clone();
        let args = f.args.iter().map(|s| self.term(s, depth - 1, rng, var_id)).collect();
        Term::app(f, args)
    }
}

/// Compares one-step successors (with positions) of `→_R` restricted to
/// logical values in `d` and of the fragment over `d` on random terms and
/// on random instances of left-hand sides.
pub fn check_step_equivalence(r: &Lctrs, d: &ValueDomain, samples: usize, seed: u64, solver: &Solver) -> StepReport {
    let fragment = ground_fragment(r, d);
    let frs = fragment.rewriter();
    let prw = PlainRewriter::new(r, d, solver).restricted_to_domain();
    let mut symbols: Vec<Sym> = r
        .signature
        .funs
        .values()
        .filter(|f| !f.is_theory())
        .cloned()
        .collect();
    symbols.extend(r.term_theory_symbols());
    let gen = TermGen { symbols, values: d };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut var_id = 0;
    let mut terms = Vec::with_capacity(samples);
    for k in 0..samples {
        if k % 2 == 1 && !r.rules.is_empty() {
            let rule = &r.rules[rng.gen_range(0..r.rules.len())];
            let lvars = rule.lvars();
            let sigma: Substitution = rule
                .lhs
                .vars()
                .into_iter()
                .map(|x| {
                    let t = if lvars.contains(&x) {
                        gen.leaf(&x.sort, &mut rng, &mut var_id)
                    } else {
                        gen.term(&x.sort, 2, &mut rng, &mut var_id)
                    };
                    (x, t)
                })
                .collect();
            terms.push(sigma.apply(&rule.lhs));
        } else {
            let sorts: Vec<Sort> = gen.symbols.iter().map(|f| f.result.clone()).collect();
            let sort = if sorts.is_empty() {
                Sort::int()
            } else {
                sorts[rng.gen_range(0..sorts.len())].clone()
            };
            terms.push(gen.term(&sort, 3, &mut rng, &mut var_id));
        }
    }
    let mut report = StepReport {
        terms: terms.len(),
        ..Default::default()
    };
    for t in &terms {
        let a: BTreeSet<_> = prw.successors(t).into_iter().map(|(u, rec)| (rec.position, u)).collect();
        let b: BTreeSet<_> = frs.successors(t).into_iter().collect();
        report.steps += a.len();
        if a != b {
            let only_r: Vec<String> = a.difference(&b).map(|(p, u)| format!("{u}@{p}")).collect();
            let only_f: Vec<String> = b.difference(&a).map(|(p, u)| format!("{u}@{p}")).collect();
            report.violations.push(format!(
                "{t}: only with R [{}], only with the fragment [{}]",
                only_r.join(", "),
                only_f.join(", ")
            ));
        }
    }
    report
}

/// A peak `left ← source → right` whose sides have no common reduct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// The constrained critical pair the peak instantiates.
    pub pair: String,
    pub substitution: String,
    pub source: Term,
    pub left: Term,
    pub right: Term,
    pub left_normal_form: Term,
    pub right_normal_form: Term,
}

const WITNESS_DEPTH: usize = 30;
const WITNESS_STATES: usize = 2000;

/// Instantiates critical pairs with sampled models over `d` and explores
/// both sides with exact rewriting. Reports a peak only if both reachable
/// sets were explored completely, are disjoint, and contain normal forms.
pub fn find_counterexample(
    r: &Lctrs,
    pairs: &[CriticalPair],
    d: &ValueDomain,
    samples: usize,
    solver: &Solver,
) -> Option<Witness> {
    let found: Vec<Option<Witness>> = pairs
        .par_iter()
        .enumerate()
        .map(|(k, cp)| {
            let vars: Vec<Var> = cp.constraint.vars().into_iter().collect();
            let models = if vars.is_empty() {
                match solver.is_satisfiable(&cp.constraint) {
                    SolverVerdict::Sat(_) => vec![Model::new()],
                    _ => Vec::new(),
                }
            } else {
                sample_models(&cp.constraint, &vars, d, samples, k as u64)
            };
            models.iter().find_map(|m| witness_for(r, cp, m, d, solver))
        })
        .collect();
    found.into_iter().flatten().next()
}

fn witness_for(r: &Lctrs, cp: &CriticalPair, m: &Model, d: &ValueDomain, solver: &Solver) -> Option<Witness> {
    let sigma = model_substitution(m);
    let source = sigma.apply(&cp.source);
    let left = sigma.apply(&cp.left);
    let right = sigma.apply(&cp.right);
    if left == right {
        return None;
    }
    let rw = PlainRewriter::new(r, d, solver);
    let succ: BTreeSet<Term> = rw.successors(&source).into_iter().map(|(u, _)| u).collect();
    if !succ.contains(&left) || !succ.contains(&right) {
        return None;
    }
    let step = |u: &Term| rw.successors(u).into_iter().map(|(v, _)| v).collect::<Vec<_>>();
    let joins = join_with(&left, &right, WITNESS_DEPTH, WITNESS_STATES, step);
    if rw.incomplete() {
        return None;
    }
    match joins {
        Joinability::DisjointNormalForms(ls, rs) => {
            let (l, r) = (ls.first()?.clone(), rs.first()?.clone());
            Some(Witness {
                pair: cp.to_string(),
                substitution: sigma.to_string(),
                source,
                left,
                right,
                left_normal_form: l,
                right_normal_form: r,
            })
        }
        _ => None,
    }
}
