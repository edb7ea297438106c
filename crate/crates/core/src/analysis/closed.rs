//! Triviality and the closedness conditions on constrained critical pairs.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use super::pairs::CriticalPair;
use crate::logic::{and_all, implies, Solver, SolverVerdict};
use crate::rewriting::constrained::align;
use crate::rewriting::{Answer, CRewriter, CTerm};
use crate::term::{Position, Term, Var};

/// Bounds for the closing-sequence search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Length bound of the `→̃*` tail.
    pub depth: usize,
    /// Nesting bound for multi-steps.
    pub nesting: usize,
    /// States explored per pair before giving up.
    pub max_states: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            depth: 4,
            nesting: 3,
            max_states: 3000,
        }
    }
}

/// One link of a closing sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosingStep {
    pub relation: &'static str,
    pub state: CTerm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Closure {
    /// The pair reaches a trivial pair; the sequence ends there. For
    /// 2-parallel closedness `q` holds the set `Q` used.
    Closed {
        steps: Vec<ClosingStep>,
        q: Option<BTreeSet<Position>>,
    },
    NotClosed,
    Unknown(String),
}

impl Closure {
    pub fn is_closed(&self) -> bool {
        matches!(self, Closure::Closed { .. })
    }
}

impl fmt::Display for Closure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Closure::Closed { steps, .. } if steps.is_empty() => f.write_str("closed (trivial)"),
            Closure::Closed { steps, .. } => {
                f.write_str("closed:")?;
                for s in steps {
                    write!(f, " {} {}", s.relation, show_pair(&s.state))?;
                }
                Ok(())
            }
            Closure::NotClosed => f.write_str("not closed"),
            Closure::Unknown(why) => write!(f, "unknown ({why})"),
        }
    }
}

/// The position set `Q` chosen by a 2-parallel closing step.
type Q = BTreeSet<Position>;

/// Renders a pair state as `s ≈ t [φ]`.
pub fn show_pair(s: &CTerm) -> String {
    match s.term.as_pair() {
        Some((l, r)) => format!("{l} ≈ {r} [{}]", s.constraint),
        None => s.to_string(),
    }
}

/// The empty closing sequence, if the pair is trivial already.
fn closed_if_trivial(start: &CTerm, solver: &Solver) -> Option<Closure> {
    is_trivial(start, solver).is_yes().then(|| Closure::Closed {
        steps: Vec::new(),
        q: Some(BTreeSet::new()),
    })
}

/// `s ≈ t [φ]` is trivial if `sσ = tσ` for every `σ ⊨ φ`.
pub fn is_trivial(pair: &CTerm, solver: &Solver) -> Answer {
    let (s, t) = pair.term.as_pair().expect("a pair term");
    trivial_terms(s, t, &pair.constraint, solver)
}

pub fn trivial_terms(s: &Term, t: &Term, phi: &Term, solver: &Solver) -> Answer {
    let vars = phi.vars();
    let mut eqs = Vec::new();
    if !align(s, t, &vars, &vars, &mut eqs) {
        return match solver.is_satisfiable(phi) {
            SolverVerdict::Unsat => Answer::Yes,
            SolverVerdict::Unknown(why) => Answer::Unknown(why),
            _ => Answer::No,
        };
    }
    if eqs.is_empty() {
        return Answer::Yes;
    }
    match solver.is_valid(&implies(phi.clone(), and_all(eqs))) {
        SolverVerdict::Valid => Answer::Yes,
        SolverVerdict::Unknown(why) => Answer::Unknown(why),
        _ => Answer::No,
    }
}

/// `TVar(t, φ, P) = ⋃_{p∈P} Var(t|_p) ∖ Var(φ)`
pub fn tvar<'a>(t: &Term, phi: &Term, positions: impl IntoIterator<Item = &'a Position>) -> BTreeSet<Var> {
    let logical = phi.vars();
    let mut out = BTreeSet::new();
    for p in positions {
        if let Some(sub) = t.subterm_at(p) {
            out.extend(sub.vars().into_iter().filter(|x| !logical.contains(x)));
        }
    }
    out
}

fn left() -> Position {
    Position::from_slice(&[1])
}

fn right() -> Position {
    Position::from_slice(&[2])
}

/// Breadth-first search along `→̃` steps below `region` for a state
/// accepted by `accept`, starting from every state in `starts`.
/// The set `Q` of a 2-parallel closing step, when one was taken.
type QSet = Option<BTreeSet<Position>>;

/// A partial closing sequence and the state it reached.
type Start = (Vec<ClosingStep>, CTerm, QSet);

fn search(
    rw: &CRewriter,
    starts: Vec<(Vec<ClosingStep>, CTerm, Option<Q>)>,
    region: &Position,
    relation: &'static str,
    cfg: &SearchConfig,
    mut accept: impl FnMut(&CTerm, &QSet) -> Answer,
) -> Closure {
    let mut unknown: Option<String> = None;
    let mut seen: BTreeSet<(CTerm, QSet)> = BTreeSet::new();
    let mut queue: VecDeque<(Vec<ClosingStep>, CTerm, Option<Q>, usize)> = VecDeque::new();
    for (path, s, q) in starts {
        if seen.insert((s.clone(), q.clone())) {
            queue.push_back((path, s, q, 0));
        }
    }
    while let Some((path, s, q, depth)) = queue.pop_front() {
        match accept(&s, &q) {
            Answer::Yes => return Closure::Closed { steps: path, q },
            Answer::Unknown(why) => unknown = Some(why),
            Answer::No => {}
        }
        if depth >= cfg.depth || seen.len() >= cfg.max_states {
            continue;
        }
        for (t, _) in rw.cstep_tilde_below(&s, region) {
            if seen.len() >= cfg.max_states {
                unknown.get_or_insert_with(|| "search bound reached".into());
                break;
            }
            if seen.insert((t.clone(), q.clone())) {
                let mut next = path.clone();
                next.push(ClosingStep {
                    relation,
                    state: t.clone(),
                });
                queue.push_back((next, t, q.clone(), depth + 1));
            }
        }
    }
    match unknown {
        Some(why) => Closure::Unknown(why),
        None => Closure::NotClosed,
    }
}

fn first_steps(states: Vec<CTerm>, start: &CTerm, relation: &'static str) -> Vec<Start> {
    states
        .into_iter()
        .map(|s| {
            let path = if s == *start {
                Vec::new()
            } else {
                vec![ClosingStep {
                    relation,
                    state: s.clone(),
                }]
            };
            (path, s, None)
        })
        .collect()
}

/// Almost development closedness of one pair: `○̃→_{≥1}` followed, for
/// overlays, by a `→̃*_{≥2}` tail of at most `depth` steps.
pub fn dev_closed_check(cp: &CriticalPair, rw: &CRewriter, cfg: &SearchConfig) -> Closure {
    let start = cp.as_cterm();
    if let Some(c) = closed_if_trivial(&start, rw.solver) {
        return c;
    }
    let firsts = rw.multi_tilde_below(&start, &left());
    let tail = SearchConfig {
        depth: if cp.is_overlay() { cfg.depth } else { 0 },
        ..*cfg
    };
    search(
        rw,
        first_steps(firsts, &start, "○̃→≥1"),
        &right(),
        "→̃≥2",
        &tail,
        |s, _| is_trivial(s, rw.solver),
    )
}

/// 1-parallel closedness: `⊸̃→_{≥1} · →̃*_{≥2}` to a trivial pair.
pub fn parallel_closed_1(cp: &CriticalPair, rw: &CRewriter, cfg: &SearchConfig) -> Closure {
    let start = cp.as_cterm();
    if let Some(c) = closed_if_trivial(&start, rw.solver) {
        return c;
    }
    let firsts: Vec<CTerm> = rw
        .parallel_tilde_below(&start, &left())
        .into_iter()
        .map(|(s, _)| s)
        .collect();
    search(
        rw,
        first_steps(firsts, &start, "⊸̃→≥1"),
        &right(),
        "→̃≥2",
        cfg,
        |s, _| is_trivial(s, rw.solver),
    )
}

/// 2-parallel closedness: `⊸̃→^Q_{≥2} · →̃*_{≥1}` to a trivial `u ≈ v [ψ]`
/// with `TVar(v, ψ, Q) ⊆ TVar(ℓσ, φ, P)`. `Q` is reported in coordinates of
/// the pair term, so every position in it starts with 2.
pub fn parallel_closed_2(cp: &CriticalPair, rw: &CRewriter, cfg: &SearchConfig) -> Closure {
    let start = cp.as_cterm();
    if let Some(c) = closed_if_trivial(&start, rw.solver) {
        return c;
    }
    let allowed = tvar(&cp.source, &cp.constraint, &cp.positions);
    let mut starts = Vec::new();
    for (s, ps) in rw.parallel_tilde_below(&start, &right()) {
        let q: BTreeSet<Position> = ps.iter().cloned().collect();
        let path = if ps.is_empty() && s == start {
            Vec::new()
        } else {
            vec![ClosingStep {
                relation: "⊸̃→≥2",
                state: s.clone(),
            }]
        };
        starts.push((path, s, Some(q)));
    }
    search(rw, starts, &left(), "→̃≥1", cfg, |s, q| {
        match is_trivial(s, rw.solver) {
            Answer::Yes => {
                let q = q.as_ref().expect("set by the first step");
                if tvar(&s.term, &s.constraint, q).is_subset(&allowed) {
                    Answer::Yes
                } else {
                    Answer::No
                }
            }
            other => other,
        }
    })
}
