//! Critical pairs, closedness criteria and the confluence verdict.

pub mod closed;
pub mod pairs;

use std::fmt;

use rayon::prelude::*;

pub use closed::{
    dev_closed_check, is_trivial, parallel_closed_1, parallel_closed_2, trivial_terms, tvar, ClosingStep, Closure,
    SearchConfig,
};
pub use pairs::{ccps, cpcps, critical_pairs, parallel_critical_pairs, CriticalPair, PairKind};

use crate::grounding::{find_counterexample, Witness};
use crate::logic::Solver;
use crate::rewriting::{Answer, CRewriter, Lctrs, ValueDomain};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Criterion {
    WeakOrthogonality,
    AlmostDevelopmentClosed,
    ParallelClosed,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [
        Criterion::WeakOrthogonality,
        Criterion::AlmostDevelopmentClosed,
        Criterion::ParallelClosed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::WeakOrthogonality => "weakly-orthogonal",
            Criterion::AlmostDevelopmentClosed => "almost-development-closed",
            Criterion::ParallelClosed => "parallel-closed",
        }
    }

    /// Accepts the short names `wo`, `adc`, `pc` and the full names.
    pub fn parse(s: &str) -> Option<Criterion> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.name() == s || c.short() == s)
    }

    pub fn short(self) -> &'static str {
        match self {
            Criterion::WeakOrthogonality => "wo",
            Criterion::AlmostDevelopmentClosed => "adc",
            Criterion::ParallelClosed => "pc",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
    Unknown,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Holds => "holds",
            Status::Fails => "fails",
            Status::Unknown => "unknown",
            Status::Skipped => "skipped",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    pub criterion: Criterion,
    pub status: Status,
    /// Reasons for failure, one per offending pair.
    pub details: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes(Criterion),
    No(Box<Witness>),
    Maybe,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes(_) => "YES",
            Verdict::No(_) => "NO",
            Verdict::Maybe => "MAYBE",
        })
    }
}

#[derive(Clone, Debug)]
pub struct AnalysisConfig {
    pub criteria: Vec<Criterion>,
    pub search: SearchConfig,
    /// Domain of the ground search for non-joinable peaks.
    pub domain: ValueDomain,
    /// Constraint models tried per critical pair by that search.
    pub samples: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            criteria: Criterion::ALL.to_vec(),
            search: SearchConfig::default(),
            domain: ValueDomain::default(),
            samples: 20,
        }
    }
}

/// Results of the closedness checks on one constrained critical pair.
#[derive(Clone, Debug)]
pub struct CcpOutcome {
    pub pair: CriticalPair,
    pub trivial: Answer,
    pub development_closed: Option<Closure>,
    pub parallel_closed_1: Option<Closure>,
}

#[derive(Clone, Debug)]
pub struct CpcpOutcome {
    pub pair: CriticalPair,
    pub parallel_closed_2: Option<Closure>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub verdict: Verdict,
    pub left_linear: bool,
    pub criteria: Vec<CriterionReport>,
    pub ccps: Vec<CcpOutcome>,
    pub cpcps: Vec<CpcpOutcome>,
    pub witnesses: Vec<Witness>,
}

/// Left-linearity in the non-logical variables.
pub fn is_left_linear(r: &Lctrs) -> bool {
    r.is_left_linear()
}

/// Left-linear with only trivial constrained critical pairs.
pub fn is_weakly_orthogonal(r: &Lctrs, solver: &Solver) -> Answer {
    if !r.is_left_linear() {
        return Answer::No;
    }
    let outcomes: Vec<Answer> = ccps(r, solver)
        .par_iter()
        .map(|cp| is_trivial(&cp.as_cterm(), solver))
        .collect();
    fold_answers(outcomes)
}

fn fold_answers(xs: impl IntoIterator<Item = Answer>) -> Answer {
    let mut unknown = None;
    for a in xs {
        match a {
            Answer::No => return Answer::No,
            Answer::Unknown(why) => unknown = Some(why),
            Answer::Yes => {}
        }
    }
    unknown.map_or(Answer::Yes, Answer::Unknown)
}

fn closure_answer(c: &Closure) -> Answer {
    match c {
        Closure::Closed { .. } => Answer::Yes,
        Closure::NotClosed => Answer::No,
        Closure::Unknown(why) => Answer::Unknown(why.clone()),
    }
}

fn criterion_report(criterion: Criterion, checks: Vec<(String, Answer)>) -> CriterionReport {
    let mut status = Status::Holds;
    let mut details = Vec::new();
    for (pair, a) in checks {
        match a {
            Answer::Yes => {}
            Answer::No => {
                status = Status::Fails;
                details.push(format!("not closed: {pair}"));
            }
            Answer::Unknown(why) => {
                if status == Status::Holds {
                    status = Status::Unknown;
                }
                details.push(format!("undecided ({why}): {pair}"));
            }
        }
    }
    CriterionReport {
        criterion,
        status,
        details,
    }
}

/// Decides confluence where one of the criteria applies, and looks for a
/// ground peak with distinct normal forms when none does.
pub fn analyze(r: &Lctrs, config: &AnalysisConfig, solver: &Solver) -> Report {
    let rw = CRewriter {
        nesting: config.search.nesting,
        ..CRewriter::new(r, solver)
    };
    let left_linear = r.is_left_linear();
    let pairs = ccps(r, solver);
    let parallel = cpcps(r, solver);
    let wants = |c| config.criteria.contains(&c);

    let ccp_outcomes: Vec<CcpOutcome> = pairs
        .par_iter()
        .map(|cp| CcpOutcome {
            pair: cp.clone(),
            trivial: is_trivial(&cp.as_cterm(), solver),
            development_closed: (left_linear && wants(Criterion::AlmostDevelopmentClosed))
                .then(|| dev_closed_check(cp, &rw, &config.search)),
            parallel_closed_1: (left_linear && wants(Criterion::ParallelClosed))
                .then(|| parallel_closed_1(cp, &rw, &config.search)),
        })
        .collect();
    let cpcp_outcomes: Vec<CpcpOutcome> = parallel
        .par_iter()
        .map(|cp| CpcpOutcome {
            pair: cp.clone(),
            parallel_closed_2: (left_linear && wants(Criterion::ParallelClosed))
                .then(|| parallel_closed_2(cp, &rw, &config.search)),
        })
        .collect();

    let mut criteria = Vec::new();
    for c in Criterion::ALL {
        if !wants(c) {
            criteria.push(CriterionReport {
                criterion: c,
                status: Status::Skipped,
                details: Vec::new(),
            });
            continue;
        }
        if !left_linear {
            criteria.push(CriterionReport {
                criterion: c,
                status: Status::Fails,
                details: vec!["the system is not left-linear".into()],
            });
            continue;
        }
        let checks: Vec<(String, Answer)> = match c {
            Criterion::WeakOrthogonality => ccp_outcomes
                .iter()
                .map(|o| (o.pair.to_string(), o.trivial.clone()))
                .collect(),
            Criterion::AlmostDevelopmentClosed => ccp_outcomes
                .iter()
                .map(|o| (o.pair.to_string(), closure_answer(o.development_closed.as_ref().expect("checked"))))
                .collect(),
            Criterion::ParallelClosed => ccp_outcomes
                .iter()
                .map(|o| (o.pair.to_string(), closure_answer(o.parallel_closed_1.as_ref().expect("checked"))))
                .chain(cpcp_outcomes.iter().map(|o| {
                    (
                        o.pair.to_string(),
                        closure_answer(o.parallel_closed_2.as_ref().expect("checked")),
                    )
                }))
                .collect(),
        };
        criteria.push(criterion_report(c, checks));
    }

    let holds = criteria.iter().find(|c| c.status == Status::Holds).map(|c| c.criterion);
    let mut witnesses = Vec::new();
    let verdict = match holds {
        Some(c) => Verdict::Yes(c),
        None => match find_counterexample(r, &pairs, &config.domain, config.samples, solver) {
            Some(w) => {
                witnesses.push(w.clone());
                Verdict::No(Box::new(w))
            }
            None => Verdict::Maybe,
        },
    };
    Report {
        verdict,
        left_linear,
        criteria,
        ccps: ccp_outcomes,
        cpcps: cpcp_outcomes,
        witnesses,
    }
}
