//! Substitutions, matching, syntactic unification and variable renaming.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering};

use crate::term::{Term, Var};

/// A finite, sort-preserving map from variables to terms. Identity bindings
/// are never stored, so the key set is the domain.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution(BTreeMap<Var, Term>);

impl Substitution {
    pub fn new() -> Self {
        Substitution(BTreeMap::new())
    }

    pub fn singleton(x: Var, t: Term) -> Self {
        let mut s = Substitution::new();
        s.insert(x, t);
        s
    }

    /// Binds `x` to `t`, dropping the binding if it is the identity.
    pub fn insert(&mut self, x: Var, t: Term) {
        debug_assert_eq!(x.sort, t.sort(), "sort-changing binding {x:?} -> {t}");
        if t.as_var() == Some(&x) {
            self.0.remove(&x);
        } else {
            self.0.insert(x, t);
        }
    }

    pub fn get(&self, x: &Var) -> Option<&Term> {
        self.0.get(x)
    }

    /// Image of `x`, which is `x` itself outside the domain.
    pub fn image(&self, x: &Var) -> Term {
        self.0.get(x).cloned().unwrap_or_else(|| Term::Var(x.clone()))
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.0.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, t: &Term) -> Term {
        if self.0.is_empty() {
            return t.clone();
        }
        t.map_vars(&mut |v| self.image(v))
    }

    /// `self` followed by `then`: applying the result equals applying `self`
    /// and then `then`.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (x, t) in &self.0 {
            out.insert(x.clone(), then.apply(t));
        }
        for (x, t) in &then.0 {
            if !self.0.contains_key(x) {
                out.insert(x.clone(), t.clone());
            }
        }
        out
    }

    /// Restriction to the given variables.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Substitution {
        Substitution(
            self.0
                .iter()
                .filter(|(x, _)| vars.contains(*x))
                .map(|(x, t)| (x.clone(), t.clone()))
                .collect(),
        )
    }

    pub fn is_idempotent(&self) -> bool {
        self.0
            .values()
            .all(|t| t.vars().iter().all(|v| !self.0.contains_key(v)))
    }

    /// True if every binding maps a variable to a distinct variable.
    pub fn is_renaming(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.0
            .values()
            .all(|t| matches!(t, Term::Var(v) if seen.insert(v.clone())))
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (x, t) in iter {
            s.insert(x, t);
        }
        s
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x} ↦ {t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Extends `subst` so that `pattern` instantiates to `subject`.
pub fn match_into(pattern: &Term, subject: &Term, subst: &mut Substitution) -> bool {
    match (pattern, subject) {
        (Term::Var(x), _) => {
            if x.sort != subject.sort() {
                return false;
            }
            match subst.get(x) {
                Some(bound) => bound == subject,
                None => {
                    // identity bindings are not stored, so remember them through
                    // an explicit check on later occurrences
                    if subject.as_var() == Some(x) {
                        subst.0.insert(x.clone(), subject.clone());
                    } else {
                        subst.insert(x.clone(), subject.clone());
                    }
                    true
                }
            }
        }
        (Term::Val(a), Term::Val(b)) => a == b,
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.iter().zip(ys.iter()).all(|(p, s)| match_into(p, s, subst))
        }
        _ => false,
    }
}

/// The minimal substitution σ with `σ(pattern) = subject`, if any.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut s = Substitution::new();
    if match_into(pattern, subject, &mut s) {
        Some(normalize(s))
    } else {
        None
    }
}

fn normalize(s: Substitution) -> Substitution {
    s.0.into_iter().collect()
}

/// Most general idempotent unifier of a simultaneous system of equations.
pub fn unify(equations: &[(Term, Term)]) -> Option<Substitution> {
    let mut work: Vec<(Term, Term)> = equations.iter().rev().cloned().collect();
    // bindings are kept fully applied, so `solved` stays idempotent
    let mut solved = Substitution::new();
    while let Some((s, t)) = work.pop() {
        let s = solved.apply(&s);
        let t = solved.apply(&t);
        if s == t {
            continue;
        }
        match (&s, &t) {
            (Term::Var(x), _) | (_, Term::Var(x)) => {
                let other = if s.as_var() == Some(x) { &t } else { &s };
                if x.sort != other.sort() || other.occurs(x) {
                    return None;
                }
                let bind = Substitution::singleton(x.clone(), other.clone());
                let mut next = Substitution::new();
                for (y, u) in solved.iter() {
                    next.insert(y.clone(), bind.apply(u));
                }
                next.insert(x.clone(), other.clone());
                solved = next;
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                for (a, b) in xs.iter().zip(ys.iter()).rev() {
                    work.push((a.clone(), b.clone()));
                }
            }
            _ => return None,
        }
    }
    debug_assert!(solved.is_idempotent());
    Some(solved)
}

/// Unifier of a single pair of terms.
pub fn unify_pair(s: &Term, t: &Term) -> Option<Substitution> {
    unify(&[(s.clone(), t.clone())])
}

static FRESH: AtomicU32 = AtomicU32::new(1);

/// A fresh copy of `x`: same base name and sort, new index from a global
/// monotone counter.
pub fn fresh_var(x: &Var) -> Var {
    x.with_index(FRESH.fetch_add(1, Ordering::Relaxed))
}

/// Injective renaming of `vars` to fresh variables.
pub fn fresh_renaming<'a>(vars: impl IntoIterator<Item = &'a Var>) -> Substitution {
    vars.into_iter()
        .map(|v| (v.clone(), Term::Var(fresh_var(v))))
        .collect()
}

/// Anything whose variables can be renamed apart.
pub trait Renamable: Sized {
    fn variables(&self) -> BTreeSet<Var>;
    fn rename(&self, renaming: &Substitution) -> Self;
}

impl Renamable for Term {
    fn variables(&self) -> BTreeSet<Var> {
        self.vars()
    }

    fn rename(&self, renaming: &Substitution) -> Self {
        renaming.apply(self)
    }
}

/// Pairwise variable-disjoint fresh copies of the given objects.
pub fn rename_apart<T: Renamable>(objects: &[T]) -> Vec<T> {
    objects
        .iter()
        .map(|o| o.rename(&fresh_renaming(&o.variables())))
        .collect()
}

/// Canonical renaming: variables in first-occurrence order are mapped back to
/// their base names, primed on collision. Used to make output deterministic.
pub fn canonical_renaming(order: &[Var]) -> Substitution {
    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mut out = Substitution::new();
    for v in order {
        let mut name = v.name.to_string();
        while taken.contains(&name) {
            name.push('\'');
        }
        taken.insert(name.clone());
        out.insert(v.clone(), Term::Var(Var::new(&name, v.sort.clone())));
    }
    out
}

/// Variable-renaming bijection `π` with `π(a) = b`, if one exists.
pub fn variant_renaming(a: &[&Term], b: &[&Term]) -> Option<Substitution> {
    if a.len() != b.len() {
        return None;
    }
    let mut fwd = Substitution::new();
    for (s, t) in a.iter().zip(b) {
        if !match_into(s, t, &mut fwd) {
            return None;
        }
    }
    let mut back = Substitution::new();
    for (s, t) in a.iter().zip(b) {
        if !match_into(t, s, &mut back) {
            return None;
        }
    }
    let fwd = normalize(fwd);
    if fwd.is_renaming() && normalize(back).is_renaming() {
        Some(fwd)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{FunSym, Sort, Sym};

    struct Sig {
        f: Sym,
        g: Sym,
        g1: Sym,
        a: Sym,
        b: Sym,
        s: Sort,
    }

    fn sig() -> Sig {
        let s = Sort::new("S");
        Sig {
            f: FunSym::term("f", vec![s.clone(), s.clone()], s.clone()),
            g: FunSym::term("g", vec![s.clone(), s.clone()], s.clone()),
            g1: FunSym::term("g1", vec![s.clone()], s.clone()),
            a: FunSym::term("a", vec![], s.clone()),
            b: FunSym::term("b", vec![], s.clone()),
            s,
        }
    }

    fn v(name: &str, s: &Sort) -> Term {
        Term::var(Var::new(name, s.clone()))
    }

    #[test]
    fn apply_examples() {
        let x = Var::new("x", Sort::int());
        let s = Substitution::singleton(x.clone(), Term::int(0));
        assert_eq!(s.apply(&Term::var(x)), Term::int(0));

        let sg = sig();
        let t = Term::app(sg.f.clone(), vec![v("x", &sg.s), v("y", &sg.s)]);
        let sub: Substitution = [
            (Var::new("x", sg.s.clone()), Term::app(sg.g1.clone(), vec![v("z", &sg.s)])),
            (Var::new("y", sg.s.clone()), v("y'", &sg.s)),
        ]
        .into_iter()
        .collect();
        assert_eq!(
            sub.apply(&t),
            Term::app(sg.f.clone(), vec![Term::app(sg.g1, vec![v("z", &sg.s)]), v("y'", &sg.s)])
        );
        assert_eq!(Substitution::new().apply(&t), t);
    }

    #[test]
    fn matching_examples() {
        let sg = sig();
        let (x, y) = (v("x", &sg.s), v("y", &sg.s));
        let (a, b) = (Term::constant(sg.a.clone()), Term::constant(sg.b.clone()));
        let m = match_term(&Term::app(sg.f.clone(), vec![x.clone(), y.clone()]), &Term::app(sg.f.clone(), vec![a.clone(), b.clone()])).unwrap();
        assert_eq!(m.image(&Var::new("x", sg.s.clone())), a);
        assert_eq!(m.image(&Var::new("y", sg.s.clone())), b);
        assert!(match_term(&Term::app(sg.f.clone(), vec![x.clone(), x.clone()]), &Term::app(sg.f.clone(), vec![a, b])).is_none());

        let pat = Term::app(sg.g.clone(), vec![x.clone(), y.clone()]);
        let subj = Term::app(sg.g.clone(), vec![y.clone(), x.clone()]);
        let m = match_term(&pat, &subj).unwrap();
        assert_eq!(m.apply(&pat), subj);
        assert_eq!(m.len(), 2);
    }

    #[test]
    fn matching_keeps_identity_bindings_consistent() {
        let sg = sig();
        let (x, y) = (v("x", &sg.s), v("y", &sg.s));
        // f(x, x) against f(x, y) must fail even though x ↦ x is an identity
        let pat = Term::app(sg.f.clone(), vec![x.clone(), x.clone()]);
        assert!(match_term(&pat, &Term::app(sg.f.clone(), vec![x.clone(), y])).is_none());
        assert!(match_term(&pat, &Term::app(sg.f, vec![x.clone(), x])).unwrap().is_empty());
    }

    #[test]
    fn unification_examples() {
        let sg = sig();
        let a = Term::constant(sg.a.clone());
        assert_eq!(unify(&[(a.clone(), a)]), Some(Substitution::new()));
        let x = v("x", &sg.s);
        assert!(unify(&[(x.clone(), Term::app(sg.g1.clone(), vec![x.clone()]))]).is_none());

        let lhs = Term::app(sg.f.clone(), vec![x.clone(), v("y", &sg.s)]);
        let rhs = Term::app(sg.f.clone(), vec![Term::app(sg.g1.clone(), vec![v("z", &sg.s)]), v("y'", &sg.s)]);
        let mgu = unify(&[(lhs.clone(), rhs.clone())]).unwrap();
        assert_eq!(mgu.apply(&lhs), mgu.apply(&rhs));
        assert!(mgu.is_idempotent());
        assert_eq!(mgu.image(&Var::new("x", sg.s.clone())), Term::app(sg.g1, vec![v("z", &sg.s)]));
    }

    #[test]
    fn unification_respects_sorts() {
        let x = Term::var(Var::new("x", Sort::int()));
        let sg = sig();
        assert!(unify(&[(x, Term::constant(sg.a))]).is_none());
    }

    #[test]
    fn rename_apart_gives_disjoint_copies() {
        let x = Var::new("x", Sort::int());
        let t = Term::var(x.clone());
        let copies = rename_apart(&[t.clone(), t.clone()]);
        let (a, b) = (copies[0].vars(), copies[1].vars());
        assert!(a.is_disjoint(&b));
        assert_eq!(copies[0].as_var().unwrap().name, x.name);
        assert!(variant_renaming(&[&copies[0]], &[&t]).is_some());
    }

    #[test]
    fn variants() {
        let sg = sig();
        let fx = Term::app(sg.g1.clone(), vec![v("x", &sg.s)]);
        let fy = Term::app(sg.g1.clone(), vec![v("y", &sg.s)]);
        assert!(variant_renaming(&[&fx, &v("x", &sg.s)], &[&fy, &v("y", &sg.s)]).is_some());
        let fxx = Term::app(sg.f.clone(), vec![v("x", &sg.s), v("x", &sg.s)]);
        let fxy = Term::app(sg.f, vec![v("x", &sg.s), v("y", &sg.s)]);
        assert!(variant_renaming(&[&fxx], &[&fxy]).is_none());
        assert!(variant_renaming(&[&fxy], &[&fxx]).is_none());
    }

    #[test]
    fn canonical_names_prime_on_collision() {
        let x = Var::new("x", Sort::int());
        let r = canonical_renaming(&[fresh_var(&x), fresh_var(&x)]);
        let names: Vec<String> = r.iter().map(|(_, t)| t.to_string()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(sorted, vec!["x", "x'"]);
    }
}
