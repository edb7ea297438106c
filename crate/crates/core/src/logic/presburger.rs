//! Quantifier elimination for Presburger arithmetic with boolean variables.
//!
//! Formulas are kept in negation normal form over three kinds of integer
//! atoms (`t > 0`, `k | t`, `¬(k | t)`) plus boolean literals. Integer
//! quantifiers are eliminated with Cooper's method; boolean ones by case
//! splitting. Models are extracted one variable at a time from the
//! eliminated formulas.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::term::{Term, TheoryOp, Value, Var};

pub type VarId = usize;

/// Linear combination `Σ cᵢ·xᵢ + k` with non-zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Lin {
    coeffs: BTreeMap<VarId, BigInt>,
    konst: BigInt,
}

impl Lin {
    pub fn constant(k: BigInt) -> Self {
        Lin {
            coeffs: BTreeMap::new(),
            konst: k,
        }
    }

    pub fn var(x: VarId) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(x, BigInt::one());
        Lin {
            coeffs,
            konst: BigInt::zero(),
        }
    }

    fn coeff(&self, x: VarId) -> BigInt {
        self.coeffs.get(&x).cloned().unwrap_or_default()
    }

    fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add(&self, other: &Lin) -> Lin {
        let mut out = self.clone();
        for (x, c) in &other.coeffs {
            let e = out.coeffs.entry(*x).or_default();
            *e += c;
            if e.is_zero() {
                out.coeffs.remove(x);
            }
        }
        out.konst += &other.konst;
        out
    }

    fn scale(&self, k: &BigInt) -> Lin {
        if k.is_zero() {
            return Lin::default();
        }
        Lin {
            coeffs: self.coeffs.iter().map(|(x, c)| (*x, c * k)).collect(),
            konst: &self.konst * k,
        }
    }

    fn neg(&self) -> Lin {
        self.scale(&-BigInt::one())
    }

    fn plus_const(&self, k: &BigInt) -> Lin {
        let mut out = self.clone();
        out.konst += k;
        out
    }

    fn without(&self, x: VarId) -> Lin {
        let mut out = self.clone();
        out.coeffs.remove(&x);
        out
    }

    /// Replaces `x` by `e`.
    fn subst(&self, x: VarId, e: &Lin) -> Lin {
        match self.coeffs.get(&x) {
            None => self.clone(),
            Some(c) => self.without(x).add(&e.scale(c)),
        }
    }

    fn eval(&self, env: &BTreeMap<VarId, BigInt>) -> Option<BigInt> {
        let mut acc = self.konst.clone();
        for (x, c) in &self.coeffs {
            acc += c * env.get(x)?;
        }
        Some(acc)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// `t > 0`
    Pos(Lin),
    /// `k | t`
    Dvd(BigInt, Lin),
    /// `¬(k | t)`
    NDvd(BigInt, Lin),
    /// boolean variable with polarity
    BVar(VarId, bool),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(Atom),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

fn sym_mod(a: &BigInt, k: &BigInt) -> BigInt {
    let r = a.mod_floor(k);
    if &r * 2 > *k {
        r - k
    } else {
        r
    }
}

fn mk_pos(t: Lin) -> Formula {
    if t.is_constant() {
        return if t.konst.is_positive() {
            Formula::True
        } else {
            Formula::False
        };
    }
    let g = t
        .coeffs
        .values()
        .fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_one() {
        return Formula::Atom(Atom::Pos(t));
    }
    // Σ(c/g)x > -k/g  ⟺  Σ(c/g)x + ⌈k/g⌉ > 0
    let konst = t.konst.div_ceil(&g);
    let coeffs = t.coeffs.iter().map(|(x, c)| (*x, c / &g)).collect();
    Formula::Atom(Atom::Pos(Lin { coeffs, konst }))
}

fn mk_dvd(k: BigInt, t: Lin, positive: bool) -> Formula {
    let k = k.abs();
    debug_assert!(!k.is_zero());
    let mut coeffs = BTreeMap::new();
    for (x, c) in &t.coeffs {
        let r = sym_mod(c, &k);
        if !r.is_zero() {
            coeffs.insert(*x, r);
        }
    }
    let konst = sym_mod(&t.konst, &k);
    if coeffs.is_empty() || k.is_one() {
        let holds = konst.is_zero() || k.is_one();
        return if holds == positive {
            Formula::True
        } else {
            Formula::False
        };
    }
    let t = Lin { coeffs, konst };
    Formula::Atom(if positive {
        Atom::Dvd(k, t)
    } else {
        Atom::NDvd(k, t)
    })
}

impl Formula {
    pub fn and(parts: Vec<Formula>) -> Formula {
        let mut out: Vec<Formula> = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        out.sort();
        out.dedup();
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    pub fn or(parts: Vec<Formula>) -> Formula {
        let mut out: Vec<Formula> = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        out.sort();
        out.dedup();
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn negate(&self) -> Formula {
        match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::And(ps) => Formula::or(ps.iter().map(Formula::negate).collect()),
            Formula::Or(ps) => Formula::and(ps.iter().map(Formula::negate).collect()),
            Formula::Atom(a) => match a {
                Atom::Pos(t) => mk_pos(t.neg().plus_const(&BigInt::one())),
                Atom::Dvd(k, t) => mk_dvd(k.clone(), t.clone(), false),
                Atom::NDvd(k, t) => mk_dvd(k.clone(), t.clone(), true),
                Atom::BVar(b, pol) => Formula::Atom(Atom::BVar(*b, !pol)),
            },
        }
    }

    fn map_atoms(&self, f: &mut impl FnMut(&Atom) -> Formula) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Atom(a) => f(a),
            Formula::And(ps) => Formula::and(ps.iter().map(|p| p.map_atoms(f)).collect()),
            Formula::Or(ps) => Formula::or(ps.iter().map(|p| p.map_atoms(f)).collect()),
        }
    }

    fn atoms(&self, out: &mut Vec<Atom>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a) => out.push(a.clone()),
            Formula::And(ps) | Formula::Or(ps) => ps.iter().for_each(|p| p.atoms(out)),
        }
    }

    pub fn int_vars(&self) -> BTreeSet<VarId> {
        let mut atoms = Vec::new();
        self.atoms(&mut atoms);
        let mut out = BTreeSet::new();
        for a in atoms {
            match a {
                Atom::Pos(t) | Atom::Dvd(_, t) | Atom::NDvd(_, t) => {
                    out.extend(t.coeffs.keys().copied())
                }
                Atom::BVar(..) => {}
            }
        }
        out
    }

    pub fn bool_vars(&self) -> BTreeSet<VarId> {
        let mut atoms = Vec::new();
        self.atoms(&mut atoms);
        atoms
            .into_iter()
            .filter_map(|a| match a {
                Atom::BVar(b, _) => Some(b),
                _ => None,
            })
            .collect()
    }

    fn mentions(&self, x: VarId) -> bool {
        match self {
            Formula::True | Formula::False => false,
            Formula::Atom(a) => match a {
                Atom::Pos(t) | Atom::Dvd(_, t) | Atom::NDvd(_, t) => t.coeffs.contains_key(&x),
                Atom::BVar(b, _) => *b == x,
            },
            Formula::And(ps) | Formula::Or(ps) => ps.iter().any(|p| p.mentions(x)),
        }
    }

    pub fn subst_int(&self, x: VarId, e: &Lin) -> Formula {
        self.map_atoms(&mut |a| match a {
            Atom::Pos(t) => mk_pos(t.subst(x, e)),
            Atom::Dvd(k, t) => mk_dvd(k.clone(), t.subst(x, e), true),
            Atom::NDvd(k, t) => mk_dvd(k.clone(), t.subst(x, e), false),
            Atom::BVar(..) => Formula::Atom(a.clone()),
        })
    }

    pub fn subst_bool(&self, b: VarId, value: bool) -> Formula {
        self.map_atoms(&mut |a| match a {
            Atom::BVar(c, pol) if *c == b => {
                if *pol == value {
                    Formula::True
                } else {
                    Formula::False
                }
            }
            _ => Formula::Atom(a.clone()),
        })
    }

    /// Truth value under a total assignment of the mentioned variables.
    pub fn eval(&self, ints: &BTreeMap<VarId, BigInt>, bools: &BTreeMap<VarId, bool>) -> Option<bool> {
        Some(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a) => match a {
                Atom::Pos(t) => t.eval(ints)?.is_positive(),
                Atom::Dvd(k, t) => t.eval(ints)?.mod_floor(k).is_zero(),
                Atom::NDvd(k, t) => !t.eval(ints)?.mod_floor(k).is_zero(),
                Atom::BVar(b, pol) => *bools.get(b)? == *pol,
            },
            Formula::And(ps) => {
                for p in ps {
                    if !p.eval(ints, bools)? {
                        return Some(false);
                    }
                }
                true
            }
            Formula::Or(ps) => {
                for p in ps {
                    if p.eval(ints, bools)? {
                        return Some(true);
                    }
                }
                false
            }
        })
    }
}

/// Eliminates `∃x` for an integer variable `x`.
pub fn exists_int(x: VarId, f: &Formula) -> Formula {
    match f {
        _ if !f.mentions(x) => f.clone(),
        Formula::Or(ps) => Formula::or(ps.iter().map(|p| exists_int(x, p)).collect()),
        Formula::And(ps) => {
            if let Some(e) = unit_definition(x, ps) {
                return Formula::and(ps.iter().map(|p| p.subst_int(x, &e)).collect());
            }
            let (with, without): (Vec<_>, Vec<_>) = ps.iter().cloned().partition(|p| p.mentions(x));
            let mut parts = without;
            parts.push(cooper(x, &Formula::and(with)));
            Formula::and(parts)
        }
        _ => cooper(x, f),
    }
}

/// `e` such that the conjunction `ps` contains `x = e`, when `x` has a unit
/// coefficient there. Substituting it avoids a Cooper expansion.
fn unit_definition(x: VarId, ps: &[Formula]) -> Option<Lin> {
    let two = BigInt::from(2);
    ps.iter().find_map(|p| match p {
        // t > 0 ∧ 2 - t > 0 means t = 1
        Formula::Atom(Atom::Pos(t)) if t.coeff(x).abs().is_one() => {
            let other = Formula::Atom(Atom::Pos(t.neg().plus_const(&two)));
            if !ps.contains(&other) {
                return None;
            }
            let c = t.coeff(x);
            let rest = t.without(x).neg().plus_const(&BigInt::one());
            Some(if c.is_one() { rest } else { rest.neg() })
        }
        _ => None,
    })
}

fn cooper(x: VarId, f: &Formula) -> Formula {
    let mut atoms = Vec::new();
    f.atoms(&mut atoms);

    // scale every x-coefficient to ±l, then substitute x' = l·x
    let l = atoms.iter().fold(BigInt::one(), |acc, a| match a {
        Atom::Pos(t) | Atom::Dvd(_, t) | Atom::NDvd(_, t) => {
            let c = t.coeff(x);
            if c.is_zero() {
                acc
            } else {
                acc.lcm(&c.abs())
            }
        }
        Atom::BVar(..) => acc,
    });
    let unit = |t: &Lin, c: &BigInt| -> (BigInt, Lin) {
        let m = &l / c.abs();
        let mut rest = t.without(x).scale(&m);
        let sign = if c.is_negative() { -BigInt::one() } else { BigInt::one() };
        rest.coeffs.insert(x, sign);
        (m, rest)
    };
    let scaled = f.map_atoms(&mut |a| match a {
        Atom::Pos(t) if !t.coeff(x).is_zero() => {
            let (_, t) = unit(t, &t.coeff(x));
            Formula::Atom(Atom::Pos(t))
        }
        Atom::Dvd(k, t) if !t.coeff(x).is_zero() => {
            let (m, t) = unit(t, &t.coeff(x));
            mk_dvd(k * m, t, true)
        }
        Atom::NDvd(k, t) if !t.coeff(x).is_zero() => {
            let (m, t) = unit(t, &t.coeff(x));
            mk_dvd(k * m, t, false)
        }
        _ => Formula::Atom(a.clone()),
    });
    let f = if l.is_one() {
        scaled
    } else {
        Formula::and(vec![scaled, mk_dvd(l.clone(), Lin::var(x), true)])
    };

    let mut atoms = Vec::new();
    f.atoms(&mut atoms);
    let mut delta = BigInt::one();
    let mut lower = BTreeSet::new();
    let mut upper = BTreeSet::new();
    for a in &atoms {
        match a {
            Atom::Dvd(k, t) | Atom::NDvd(k, t) if !t.coeff(x).is_zero() => delta = delta.lcm(k),
            Atom::Pos(t) => {
                let c = t.coeff(x);
                if c.is_one() {
                    // x + r > 0  ⟺  x > -r
                    lower.insert(t.without(x).neg());
                } else if !c.is_zero() {
                    // -x + r > 0  ⟺  x < r
                    upper.insert(t.without(x));
                }
            }
            _ => {}
        }
    }

    let use_lower = lower.len() <= upper.len();
    let at_infinity = f.map_atoms(&mut |a| match a {
        Atom::Pos(t) if !t.coeff(x).is_zero() => {
            let is_lower = t.coeff(x).is_positive();
            if is_lower == use_lower {
                Formula::False
            } else {
                Formula::True
            }
        }
        _ => Formula::Atom(a.clone()),
    });

    let mut disjuncts = Vec::new();
    let mut j = BigInt::one();
    while j <= delta {
        let shift = if use_lower { j.clone() } else { -j.clone() };
        disjuncts.push(at_infinity.subst_int(x, &Lin::constant(shift.clone())));
        let bounds = if use_lower { &lower } else { &upper };
        for b in bounds {
            disjuncts.push(f.subst_int(x, &b.plus_const(&shift)));
        }
        if disjuncts.contains(&Formula::True) {
            return Formula::True;
        }
        j += 1;
    }
    Formula::or(disjuncts)
}

pub fn exists_bool(b: VarId, f: &Formula) -> Formula {
    Formula::or(vec![f.subst_bool(b, true), f.subst_bool(b, false)])
}

/// Kind of a formula variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarKind {
    Int,
    Bool,
}

pub fn exists(x: VarId, kind: VarKind, f: &Formula) -> Formula {
    match kind {
        VarKind::Int => exists_int(x, f),
        VarKind::Bool => exists_bool(x, f),
    }
}

pub fn forall(x: VarId, kind: VarKind, f: &Formula) -> Formula {
    exists(x, kind, &f.negate()).negate()
}

/// Decides a formula whose free variables are read existentially.
pub fn satisfiable(f: &Formula, vars: &[(VarId, VarKind)]) -> bool {
    let mut g = f.clone();
    for (x, k) in vars {
        g = exists(*x, *k, &g);
    }
    debug_assert!(matches!(g, Formula::True | Formula::False), "leftover {g:?}");
    g == Formula::True
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment {
    pub ints: BTreeMap<VarId, BigInt>,
    pub bools: BTreeMap<VarId, bool>,
}

/// Finds a satisfying assignment of all `vars`, or `None` if unsatisfiable.
pub fn model(f: &Formula, vars: &[(VarId, VarKind)]) -> Option<Assignment> {
    let mut current = f.clone();
    let mut out = Assignment::default();
    for (i, (x, kind)) in vars.iter().enumerate() {
        let mut projected = current.clone();
        for (y, k) in vars[i + 1..].iter().rev() {
            projected = exists(*y, *k, &projected);
        }
        match kind {
            VarKind::Bool => {
                let v = [false, true]
                    .into_iter()
                    .find(|v| satisfiable(&projected.subst_bool(*x, *v), &[]))?;
                out.bools.insert(*x, v);
                current = current.subst_bool(*x, v);
            }
            VarKind::Int => {
                let v = int_witness(*x, &projected)?;
                current = current.subst_int(*x, &Lin::constant(v.clone()));
                out.ints.insert(*x, v);
            }
        }
    }
    (current == Formula::True).then_some(out)
}

/// A value for `x` satisfying a formula in which `x` is the only variable.
fn int_witness(x: VarId, f: &Formula) -> Option<BigInt> {
    let mut atoms = Vec::new();
    f.atoms(&mut atoms);
    let mut period = BigInt::one();
    let mut thresholds = BTreeSet::new();
    for a in &atoms {
        match a {
            Atom::Pos(t) => {
                let c = t.coeff(x);
                if !c.is_zero() {
                    thresholds.insert((-&t.konst).div_floor(&c));
                }
            }
            Atom::Dvd(k, _) | Atom::NDvd(k, _) => period = period.lcm(k),
            Atom::BVar(..) => {}
        }
    }
    if thresholds.is_empty() {
        thresholds.insert(BigInt::zero());
    }
    // truth is constant up to the divisibility period between consecutive
    // thresholds, so a window of one period around each threshold suffices
    let mut candidates = BTreeSet::new();
    let reach = &period + 1;
    for t in &thresholds {
        let mut v: BigInt = t - &reach;
        while v <= t + &reach {
            candidates.insert(v.clone());
            v += 1;
        }
    }
    let mut candidates: Vec<BigInt> = candidates.into_iter().collect();
    candidates.sort_by_key(|v| (v.abs(), v.is_negative()));
    let bools = BTreeMap::new();
    candidates.into_iter().find(|v| {
        let mut env = BTreeMap::new();
        env.insert(x, v.clone());
        f.eval(&env, &bools) == Some(true)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonLinear(pub String);

/// Maps constraint variables to formula variables.
#[derive(Debug, Clone, Default)]
pub struct VarTable {
    ids: BTreeMap<Var, VarId>,
    vars: Vec<(Var, VarKind)>,
}

impl VarTable {
    pub fn id(&mut self, v: &Var) -> VarId {
        if let Some(id) = self.ids.get(v) {
            return *id;
        }
        let id = self.vars.len();
        let kind = if v.sort == crate::term::Sort::bool() {
            VarKind::Bool
        } else {
            VarKind::Int
        };
        self.ids.insert(v.clone(), id);
        self.vars.push((v.clone(), kind));
        id
    }

    pub fn lookup(&self, v: &Var) -> Option<VarId> {
        self.ids.get(v).copied()
    }

    pub fn kind(&self, id: VarId) -> VarKind {
        self.vars[id].1
    }

    pub fn var(&self, id: VarId) -> &Var {
        &self.vars[id].0
    }

    pub fn with_kinds(&mut self, vars: &[Var]) -> Vec<(VarId, VarKind)> {
        vars.iter()
            .map(|v| {
                let id = self.id(v);
                (id, self.kind(id))
            })
            .collect()
    }

    pub fn to_values(&self, a: &Assignment) -> BTreeMap<Var, Value> {
        let mut out = BTreeMap::new();
        for (id, n) in &a.ints {
            out.insert(self.var(*id).clone(), Value::Int(n.clone()));
        }
        for (id, b) in &a.bools {
            out.insert(self.var(*id).clone(), Value::Bool(*b));
        }
        out
    }
}

/// Translates an integer term into a linear combination.
pub fn linearize(t: &Term, table: &mut VarTable) -> Result<Lin, NonLinear> {
    match t {
        Term::Var(v) => Ok(Lin::var(table.id(v))),
        Term::Val(Value::Int(n)) => Ok(Lin::constant(n.clone())),
        Term::Val(Value::Bool(_)) => Err(NonLinear(format!("boolean `{t}` in arithmetic"))),
        Term::App(f, args) => {
            let op = f
                .theory_op()
                .ok_or_else(|| NonLinear(format!("non-theory symbol in `{t}`")))?;
            match op {
                TheoryOp::Add => Ok(linearize(&args[0], table)?.add(&linearize(&args[1], table)?)),
                TheoryOp::Sub => Ok(linearize(&args[0], table)?.add(&linearize(&args[1], table)?.neg())),
                TheoryOp::Neg => Ok(linearize(&args[0], table)?.neg()),
                TheoryOp::Mul => {
                    let a = linearize(&args[0], table)?;
                    let b = linearize(&args[1], table)?;
                    if a.is_constant() {
                        Ok(b.scale(&a.konst))
                    } else if b.is_constant() {
                        Ok(a.scale(&b.konst))
                    } else {
                        Err(NonLinear(format!("`{t}` multiplies two non-constant terms")))
                    }
                }
                _ => Err(NonLinear(format!("`{t}` is not an integer term"))),
            }
        }
    }
}

/// Translates a constraint into a formula in negation normal form. With
/// `positive = false` the negation is produced.
pub fn translate(t: &Term, positive: bool, table: &mut VarTable) -> Result<Formula, NonLinear> {
    match t {
        Term::Val(Value::Bool(b)) => Ok(if *b == positive {
            Formula::True
        } else {
            Formula::False
        }),
        Term::Var(v) if v.sort == crate::term::Sort::bool() => {
            Ok(Formula::Atom(Atom::BVar(table.id(v), positive)))
        }
        Term::App(f, args) => {
            let op = f
                .theory_op()
                .ok_or_else(|| NonLinear(format!("non-theory symbol in `{t}`")))?;
            let both = |table: &mut VarTable, pa: bool, pb: bool| -> Result<(Formula, Formula), NonLinear> {
                Ok((translate(&args[0], pa, table)?, translate(&args[1], pb, table)?))
            };
            let bool_args = args.first().map(|a| a.sort() == crate::term::Sort::bool()) == Some(true);
            match op {
                TheoryOp::Not => translate(&args[0], !positive, table),
                TheoryOp::And | TheoryOp::Or => {
                    let (a, b) = both(table, positive, positive)?;
                    let conj = (op == TheoryOp::And) == positive;
                    Ok(if conj {
                        Formula::and(vec![a, b])
                    } else {
                        Formula::or(vec![a, b])
                    })
                }
                TheoryOp::Implies => {
                    let (a, b) = both(table, !positive, positive)?;
                    Ok(if positive {
                        Formula::or(vec![a, b])
                    } else {
                        Formula::and(vec![a, b])
                    })
                }
                TheoryOp::Eq | TheoryOp::Ne if bool_args => {
                    let same = (op == TheoryOp::Eq) == positive;
                    let (a1, b1) = both(table, true, same)?;
                    let (a0, b0) = both(table, false, !same)?;
                    Ok(Formula::or(vec![
                        Formula::and(vec![a1, b1]),
                        Formula::and(vec![a0, b0]),
                    ]))
                }
                TheoryOp::Eq | TheoryOp::Ne | TheoryOp::Lt | TheoryOp::Le | TheoryOp::Gt | TheoryOp::Ge => {
                    let a = linearize(&args[0], table)?;
                    let b = linearize(&args[1], table)?;
                    let one = BigInt::one();
                    let a_minus_b = a.add(&b.neg());
                    let b_minus_a = b.add(&a.neg());
                    let f = match op {
                        TheoryOp::Lt => mk_pos(b_minus_a),
                        TheoryOp::Le => mk_pos(b_minus_a.plus_const(&one)),
                        TheoryOp::Gt => mk_pos(a_minus_b),
                        TheoryOp::Ge => mk_pos(a_minus_b.plus_const(&one)),
                        TheoryOp::Eq => Formula::and(vec![
                            mk_pos(a_minus_b.plus_const(&one)),
                            mk_pos(b_minus_a.plus_const(&one)),
                        ]),
                        TheoryOp::Ne => Formula::or(vec![mk_pos(a_minus_b), mk_pos(b_minus_a)]),
                        _ => unreachable!(),
                    };
                    Ok(if positive { f } else { f.negate() })
                }
                _ => Err(NonLinear(format!("`{t}` is not a constraint"))),
            }
        }
        _ => Err(NonLinear(format!("`{t}` is not a constraint"))),
    }
}
