#![allow(dead_code)]

use lctrs::logic::tt;
use lctrs::rewriting::{Lctrs, Rule, Signature};
use lctrs::term::{Sort, Sym, Term, TheoryOp, Var};

pub fn int(name: &str) -> Term {
    Term::Var(Var::new(name, Sort::int()))
}

pub fn op(o: TheoryOp, args: Vec<Term>) -> Term {
    Term::theory(o, args)
}

pub fn app(f: &Sym, args: Vec<Term>) -> Term {
    Term::app(f.clone(), args)
}

pub fn rule(l: Term, r: Term, g: Term) -> Rule {
    Rule::new(l, r, g).expect("well-formed rule")
}

/// `a → x [x = 0]`
pub fn ex4() -> Lctrs {
    let mut sig = Signature::ints();
    let a = sig.declare("a", vec![], Sort::int());
    let rules = vec![rule(Term::constant(a), int("x"), op(TheoryOp::Eq, vec![int("x"), Term::int(0)]))];
    Lctrs::new(sig, rules)
}

pub fn ex5() -> Lctrs {
    let mut sig = Signature::ints();
    let i = Sort::int();
    let c = sig.declare("c", vec![i.clone(), i.clone()], i.clone());
    let f = sig.declare("f", vec![i.clone(), i.clone()], i.clone());
    let g = sig.declare("g", vec![i.clone(), i.clone()], i.clone());
    let h = sig.declare("h", vec![i.clone()], i);
    let (x, y) = (int("x"), int("y"));
    let rules = vec![
        rule(
            app(&f, vec![x.clone(), y.clone()]),
            app(&h, vec![app(&g, vec![y.clone(), op(TheoryOp::Mul, vec![Term::int(2), Term::int(2)])])]),
            op(
                TheoryOp::And,
                vec![
                    op(TheoryOp::Le, vec![x.clone(), y.clone()]),
                    op(TheoryOp::Eq, vec![y.clone(), Term::int(2)]),
                ],
            ),
        ),
        rule(
            app(&f, vec![x.clone(), y.clone()]),
            app(&c, vec![Term::int(4), x.clone()]),
            op(TheoryOp::Le, vec![y.clone(), x.clone()]),
        ),
        rule(app(&g, vec![x.clone(), y.clone()]), app(&g, vec![y.clone(), x.clone()]), tt()),
        rule(app(&h, vec![x.clone()]), x.clone(), tt()),
        rule(
            app(&c, vec![x.clone(), y.clone()]),
            app(&g, vec![Term::int(4), Term::int(2)]),
            op(TheoryOp::Ne, vec![x, y]),
        ),
    ];
    Lctrs::new(sig, rules)
}

pub fn ex53() -> Lctrs {
    let mut sig = Signature::ints();
    let i = Sort::int();
    let f = sig.declare("f", vec![i.clone()], i.clone());
    let g = sig.declare("g", vec![i.clone()], i.clone());
    let h = sig.declare("h", vec![i.clone()], i);
    let (x, z) = (int("x"), int("z"));
    let two_z = op(TheoryOp::Mul, vec![Term::int(2), z]);
    let rules = vec![
        rule(app(&f, vec![x.clone()]), app(&g, vec![x.clone()]), tt()),
        rule(
            app(&f, vec![x.clone()]),
            app(&h, vec![x.clone()]),
            op(
                TheoryOp::And,
                vec![
                    op(TheoryOp::Le, vec![Term::int(1), x.clone()]),
                    op(TheoryOp::Le, vec![x.clone(), Term::int(2)]),
                ],
            ),
        ),
        rule(
            app(&g, vec![x.clone()]),
            app(&h, vec![Term::int(2)]),
            op(TheoryOp::Eq, vec![x.clone(), two_z.clone()]),
        ),
        rule(
            app(&g, vec![x.clone()]),
            app(&h, vec![Term::int(1)]),
            op(TheoryOp::Eq, vec![x, op(TheoryOp::Add, vec![two_z, Term::int(1)])]),
        ),
    ];
    Lctrs::new(sig, rules)
}

/// `a → b`, `a → c` over a sort without theory symbols.
pub fn fork() -> Lctrs {
    let mut sig = Signature::new();
    let s = Sort::new("S");
    sig.declare_sort(s.clone());
    let [a, b, c] = ["a", "b", "c"].map(|n| Term::constant(sig.declare(n, vec![], s.clone())));
    let rules = vec![rule(a.clone(), b, tt()), rule(a, c, tt())];
    Lctrs::new(sig, rules)
}

/// `f(x, x) → x`, optionally guarded by `x > 0`.
pub fn duplicating(guarded: bool) -> Lctrs {
    let mut sig = Signature::ints();
    let f = sig.declare("f", vec![Sort::int(), Sort::int()], Sort::int());
    let x = int("x");
    let guard = if guarded { op(TheoryOp::Gt, vec![x.clone(), Term::int(0)]) } else { tt() };
    Lctrs::new(sig, vec![rule(app(&f, vec![x.clone(), x.clone()]), x, guard)])
}
