//! Human-readable and JSON renderings of analysis results.

use std::fmt::Write;

use serde_json::{json, Value};

use lctrs::analysis::{CcpOutcome, Closure, CpcpOutcome, CriticalPair, Report, Verdict};
use lctrs::grounding::{ClosednessReport, CorrespondenceReport, GroundFragment, StepReport, Witness};
use lctrs::rewriting::Answer;

fn closure_json(c: &Option<Closure>) -> Value {
    match c {
        None => Value::Null,
        Some(Closure::Closed { steps, q }) => json!({
            "status": "closed",
            "steps": steps.iter().map(|s| json!({"relation": s.relation, "state": s.state.to_string()})).collect::<Vec<_>>(),
            "q": q.as_ref().map(|q| q.iter().map(ToString::to_string).collect::<Vec<_>>()),
        }),
        Some(Closure::NotClosed) => json!({"status": "not-closed"}),
        Some(Closure::Unknown(why)) => json!({"status": "unknown", "reason": why}),
    }
}

fn answer_json(a: &Answer) -> Value {
    match a {
        Answer::Yes => json!("yes"),
        Answer::No => json!("no"),
        Answer::Unknown(_) => json!("unknown"),
    }
}

pub fn pair_json(cp: &CriticalPair) -> Value {
    json!({
        "left": cp.left.to_string(),
        "right": cp.right.to_string(),
        "constraint": cp.constraint.to_string(),
        "overlay": cp.is_overlay(),
        "positions": cp.positions.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "source": cp.source.to_string(),
        "unsure": cp.unsure,
    })
}

fn ccp_json(o: &CcpOutcome) -> Value {
    let mut v = pair_json(&o.pair);
    v["trivial"] = answer_json(&o.trivial);
    v["development_closed"] = closure_json(&o.development_closed);
    v["parallel_closed_1"] = closure_json(&o.parallel_closed_1);
    v
}

fn cpcp_json(o: &CpcpOutcome) -> Value {
    let mut v = pair_json(&o.pair);
    v["parallel_closed_2"] = closure_json(&o.parallel_closed_2);
    v
}

pub fn witness_json(w: &Witness) -> Value {
    json!({
        "pair": w.pair,
        "substitution": w.substitution,
        "source": w.source.to_string(),
        "left": w.left.to_string(),
        "right": w.right.to_string(),
        "left_normal_form": w.left_normal_form.to_string(),
        "right_normal_form": w.right_normal_form.to_string(),
    })
}

pub fn report_json(r: &Report) -> Value {
    json!({
        "verdict": r.verdict.to_string(),
        "criterion": match &r.verdict {
            Verdict::Yes(c) => Value::from(c.name()),
            _ => Value::Null,
        },
        "left_linear": r.left_linear,
        "criteria": r.criteria.iter().map(|c| json!({
            "name": c.criterion.name(),
            "status": c.status.to_string(),
            "details": c.details,
        })).collect::<Vec<_>>(),
        "ccps": r.ccps.iter().map(ccp_json).collect::<Vec<_>>(),
        "cpcps": r.cpcps.iter().map(cpcp_json).collect::<Vec<_>>(),
        "witnesses": r.witnesses.iter().map(witness_json).collect::<Vec<_>>(),
    })
}

/// COPS-style text: the verdict on the first line, then the details.
pub fn report_text(r: &Report) -> String {
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "{}", r.verdict).unwrap();
    match &r.verdict {
        Verdict::Yes(c) => writeln!(w, "criterion: {c}").unwrap(),
        Verdict::No(wit) => write_witness(w, wit),
        Verdict::Maybe => {}
    }
    if !r.left_linear {
        writeln!(w, "the system is not left-linear").unwrap();
    }
    for c in &r.criteria {
        writeln!(w, "{}: {}", c.criterion, c.status).unwrap();
        for d in &c.details {
            writeln!(w, "  {d}").unwrap();
        }
    }
    writeln!(w, "constrained critical pairs: {}", r.ccps.len()).unwrap();
    for o in &r.ccps {
        writeln!(w, "  {}{}", o.pair, if o.pair.is_overlay() { " (overlay)" } else { "" }).unwrap();
        writeln!(w, "    trivial: {}", o.trivial).unwrap();
        if let Some(c) = &o.development_closed {
            writeln!(w, "    almost development closed: {c}").unwrap();
        }
        if let Some(c) = &o.parallel_closed_1 {
            writeln!(w, "    1-parallel closed: {c}").unwrap();
        }
    }
    writeln!(w, "constrained parallel critical pairs: {}", r.cpcps.len()).unwrap();
    for o in &r.cpcps {
        let ps: Vec<String> = o.pair.positions.iter().map(ToString::to_string).collect();
        writeln!(w, "  {} with P = {{{}}}", o.pair, ps.join(", ")).unwrap();
        if let Some(c) = &o.parallel_closed_2 {
            writeln!(w, "    2-parallel closed: {c}").unwrap();
        }
    }
    out
}

fn write_witness(w: &mut String, wit: &Witness) {
    writeln!(w, "witness: {} ← {} → {}", wit.left, wit.source, wit.right).unwrap();
    writeln!(w, "  instance {} of {}", wit.substitution, wit.pair).unwrap();
    writeln!(w, "  normal forms {} and {}", wit.left_normal_form, wit.right_normal_form).unwrap();
}

pub fn pairs_text(pairs: &[CriticalPair]) -> String {
    let mut out = String::new();
    for cp in pairs {
        let ps: Vec<String> = cp.positions.iter().map(ToString::to_string).collect();
        writeln!(out, "{}    at {{{}}}", cp, ps.join(", ")).unwrap();
    }
    out
}

pub fn fragment_json(f: &GroundFragment, cps: &[CriticalPair], pcps: &[CriticalPair], c: &ClosednessReport) -> Value {
    json!({
        "rules": f.rules.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "calculation_rules": f.calc.len(),
        "critical_pairs": cps.iter().map(pair_json).collect::<Vec<_>>(),
        "parallel_critical_pairs": pcps.iter().map(pair_json).collect::<Vec<_>>(),
        "almost_development_closed": c.almost_development_closed,
        "parallel_closed": c.parallel_closed(),
        "failures": c.failures,
    })
}

pub fn fragment_text(f: &GroundFragment, cps: &[CriticalPair], pcps: &[CriticalPair], c: &ClosednessReport) -> String {
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "rules: {} (plus {} calculation instances)", f.rules.len(), f.calc.len()).unwrap();
    for r in &f.rules {
        writeln!(w, "  {r}").unwrap();
    }
    writeln!(w, "critical pairs: {}", cps.len()).unwrap();
    for cp in cps {
        writeln!(w, "  {} ≈ {}", cp.left, cp.right).unwrap();
    }
    writeln!(w, "parallel critical pairs: {}", pcps.len()).unwrap();
    for cp in pcps {
        writeln!(w, "  {} ≈ {}", cp.left, cp.right).unwrap();
    }
    writeln!(w, "almost development closed: {}", c.almost_development_closed).unwrap();
    writeln!(w, "parallel closed: {}", c.parallel_closed()).unwrap();
    for f in &c.failures {
        writeln!(w, "  {f}").unwrap();
    }
    out
}

pub fn check_json(c: &CorrespondenceReport, s: &StepReport) -> Value {
    json!({
        "correspondence": {
            "fragment_pairs": c.fragment_pairs,
            "fragment_parallel_pairs": c.fragment_parallel_pairs,
            "constrained_pairs": c.constrained_pairs,
            "constrained_parallel_pairs": c.constrained_parallel_pairs,
            "instances": c.instances,
            "violations": c.violations,
        },
        "steps": {
            "terms": s.terms,
            "steps": s.steps,
            "violations": s.violations,
        },
    })
}

pub fn check_text(c: &CorrespondenceReport, s: &StepReport) -> String {
    let mut out = String::new();
    let w = &mut out;
    writeln!(
        w,
        "critical pair correspondence: {} ({} + {} fragment pairs, {} + {} constrained pairs, {} instances)",
        if c.violations.is_empty() { "ok" } else { "violated" },
        c.fragment_pairs,
        c.fragment_parallel_pairs,
        c.constrained_pairs,
        c.constrained_parallel_pairs,
        c.instances
    )
    .unwrap();
    for v in &c.violations {
        writeln!(w, "  {v}").unwrap();
    }
    writeln!(
        w,
        "step equivalence: {} ({} terms, {} steps)",
        if s.violations.is_empty() { "ok" } else { "violated" },
        s.terms,
        s.steps
    )
    .unwrap();
    for v in &s.violations {
        writeln!(w, "  {v}").unwrap();
    }
    out
}
