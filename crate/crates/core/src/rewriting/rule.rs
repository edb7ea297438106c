use std::collections::BTreeSet;
use std::fmt;

use crate::error::RuleError;
use crate::logic::{and_all, eq, interpret, tt};
use crate::subst::{fresh_renaming, variant_renaming, Renamable, Substitution};
use crate::term::{Sort, Sym, Term, Value, Var};

/// A constrained rewrite rule `ℓ → r [φ]`. Calculation rules are flagged so
/// analyses can treat them specially.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
    pub guard: Term,
    pub calc: bool,
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term, guard: Term) -> Result<Rule, RuleError> {
        let ls = lhs.sort_of()?;
        let rs = rhs.sort_of()?;
        if ls != rs {
            return Err(RuleError::SortMismatch(ls, rs));
        }
        match &lhs {
            Term::App(f, _) if !f.is_theory() => {}
            _ => return Err(RuleError::TheoryRoot(lhs.to_string())),
        }
        if guard.sort_of()? != Sort::bool() || !guard.is_logical() {
            return Err(RuleError::BadGuard(guard.to_string()));
        }
        Ok(Rule {
            lhs,
            rhs,
            guard,
            calc: false,
        })
    }

    pub fn unconstrained(lhs: Term, rhs: Term) -> Result<Rule, RuleError> {
        Rule::new(lhs, rhs, tt())
    }

    /// The calculation rule `f(x₁,…,xₙ) → y [y = f(x₁,…,xₙ)]`.
    pub fn calculation(f: &Sym) -> Rule {
        let args: Vec<Term> = f
            .args
            .iter()
            .enumerate()
            .map(|(i, s)| Term::Var(Var::new(&format!("x{}", i + 1), s.clone())))
            .collect();
        let lhs = Term::app(f.clone(), args);
        let y = Term::Var(Var::new("y", f.result.clone()));
        Rule {
            guard: eq(y.clone(), lhs.clone()),
            lhs,
            rhs: y,
            calc: true,
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = self.lhs.vars();
        self.rhs.collect_vars(&mut out);
        self.guard.collect_vars(&mut out);
        out
    }

    /// `Var(φ) ∪ (Var(r) ∖ Var(ℓ))`
    pub fn lvars(&self) -> BTreeSet<Var> {
        let l = self.lhs.vars();
        let mut out = self.guard.vars();
        out.extend(self.rhs.vars().into_iter().filter(|x| !l.contains(x)));
        out
    }

    /// `Var(r) ∖ (Var(ℓ) ∪ Var(φ))`
    pub fn evars(&self) -> BTreeSet<Var> {
        let l = self.lhs.vars();
        let g = self.guard.vars();
        self.rhs
            .vars()
            .into_iter()
            .filter(|x| !l.contains(x) && !g.contains(x))
            .collect()
    }

    /// `EC_ρ = ⋀ {x = x | x ∈ EVar(ρ)}`
    pub fn ec(&self) -> Term {
        and_all(self.evars().into_iter().map(|x| eq(Term::Var(x.clone()), Term::Var(x))))
    }

    /// True if `Var(r) ⊆ Var(ℓ)`.
    pub fn rhs_vars_in_lhs(&self) -> bool {
        let l = self.lhs.vars();
        self.rhs.vars().is_subset(&l)
    }

    /// Linear in every variable outside `LVar`.
    pub fn is_left_linear(&self) -> bool {
        let lv = self.lvars();
        let mut occ = std::collections::BTreeMap::new();
        self.lhs.var_occurrences(&mut occ);
        occ.iter().all(|(x, n)| *n == 1 || lv.contains(x))
    }

    pub fn is_variant_of(&self, other: &Rule) -> bool {
        variant_renaming(
            &[&self.lhs, &self.rhs, &self.guard],
            &[&other.lhs, &other.rhs, &other.guard],
        )
        .is_some()
    }

    pub fn apply(&self, s: &Substitution) -> Rule {
        Rule {
            lhs: s.apply(&self.lhs),
            rhs: s.apply(&self.rhs),
            guard: s.apply(&self.guard),
            calc: self.calc,
        }
    }

    /// A copy with all variables renamed to fresh ones.
    pub fn fresh(&self) -> Rule {
        self.apply(&fresh_renaming(&self.vars()))
    }
}

impl Renamable for Rule {
    fn variables(&self) -> BTreeSet<Var> {
        self.vars()
    }

    fn rename(&self, renaming: &Substitution) -> Self {
        self.apply(renaming)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} → {}", self.lhs, self.rhs)?;
        if self.guard != tt() {
            write!(f, " [{}]", self.guard)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `σ ⊨ ρ`: the domain covers all rule variables, logical variables are
/// mapped to values and the instantiated guard holds.
pub fn respects(sigma: &Substitution, rule: &Rule) -> bool {
    let vars = rule.vars();
    // identity bindings are not stored, so a variable counts as covered when
    // it is bound or mapped to itself (only possible for non-logical ones)
    let lv = rule.lvars();
    let logical_ok = lv
        .iter()
        .all(|x| matches!(sigma.get(x), Some(Term::Val(_))));
    let domain_ok = sigma.domain().all(|x| vars.contains(x));
    logical_ok && domain_ok && interpret(&sigma.apply(&rule.guard)) == Ok(Value::Bool(true))
}
