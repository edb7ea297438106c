//! Post correspondence problem instances and their encoding as an LCTRS
//! whose local confluence is equivalent to the instance having no solution.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::PcpError;
use crate::logic::{and_all, eq, tt};
use crate::rewriting::{Lctrs, PlainRewriter, Rule, Signature, ValueDomain};
use crate::logic::Solver;
use crate::term::{Sort, Sym, Term, TheoryOp, Var};

/// Pairs `(αᵢ, βᵢ)` of non-empty binary words, not all with `αᵢ = βᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcpInstance {
    pairs: Vec<(String, String)>,
}

impl PcpInstance {
    pub fn new(pairs: Vec<(String, String)>) -> Result<Self, PcpError> {
        if pairs.is_empty() {
            return Err(PcpError::Empty);
        }
        for (i, (a, b)) in pairs.iter().enumerate() {
            if a.is_empty() || b.is_empty() {
                return Err(PcpError::EmptyWord(i + 1));
            }
            for w in [a, b] {
                if !w.chars().all(|c| c == '0' || c == '1') {
                    return Err(PcpError::BadAlphabet(w.clone()));
                }
            }
        }
        if pairs.iter().all(|(a, b)| a == b) {
            return Err(PcpError::Trivial);
        }
        Ok(PcpInstance { pairs })
    }

    /// Reads `α₁,β₁;α₂,β₂;…`.
    pub fn parse(text: &str) -> Result<Self, PcpError> {
        let pairs = text
            .trim()
            .split(';')
            .map(|p| match p.split(',').map(str::trim).collect::<Vec<_>>()[..] {
                [a, b] => Ok((a.to_string(), b.to_string())),
                _ => Err(PcpError::Syntax(format!("`{p}` is not a pair `ALPHA,BETA`"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        PcpInstance::new(pairs)
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    /// Number of pairs `N`.
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn max_word(&self) -> usize {
        self.pairs
            .iter()
            .map(|(a, b)| a.len().max(b.len()))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for PcpInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pairs.iter().map(|(a, b)| format!("{a},{b}")).collect();
        f.write_str(&parts.join(";"))
    }
}

/// `[i₀ i₁ ⋯ iₖ] = N · [i₁ ⋯ iₖ] + i₀` with `[ε] = 0`.
pub fn encode(indices: &[usize], n: usize) -> Result<BigInt, PcpError> {
    let mut acc = BigInt::zero();
    for &i in indices.iter().rev() {
        if i == 0 || i > n {
            return Err(PcpError::IndexOutOfRange(i, n));
        }
        acc = acc * n + i;
    }
    Ok(acc)
}

/// Inverse of [`encode`]. `n` must be positive.
pub fn decode(code: &BigInt, n: usize) -> Vec<usize> {
    assert!(n > 0, "alphabet size must be positive");
    let mut rest = code.clone();
    let mut out = Vec::new();
    while rest > BigInt::zero() {
        let i = (&rest - 1u32).mod_floor(&BigInt::from(n)) + 1u32;
        out.push(i.to_usize().expect("index fits"));
        rest = (rest - &i) / n;
    }
    out
}

/// Symbols of `R_P`. The string constructors `0`, `1` are spelled `b0`,
/// `b1` and the results `⊤`, `⊥` are `top`, `bot`, since the originals
/// clash with integer literals and are not plain identifiers.
struct RpSymbols {
    e: Sym,
    b0: Sym,
    b1: Sym,
    start: Sym,
    top: Sym,
    bot: Sym,
    test: Sym,
    alpha: Sym,
    beta: Sym,
}

fn rp_signature() -> (Signature, RpSymbols) {
    let mut sig = Signature::ints();
    let (pcp, string, int) = (Sort::new("PCP"), Sort::new("String"), Sort::int());
    sig.declare_sort(pcp.clone());
    sig.declare_sort(string.clone());
    let syms = RpSymbols {
        e: sig.declare("e", vec![], string.clone()),
        b0: sig.declare("b0", vec![string.clone()], string.clone()),
        b1: sig.declare("b1", vec![string.clone()], string.clone()),
        start: sig.declare("start", vec![], pcp.clone()),
        top: sig.declare("top", vec![], pcp.clone()),
        bot: sig.declare("bot", vec![], pcp.clone()),
        test: sig.declare("test", vec![string.clone(), string.clone(), int.clone()], pcp),
        alpha: sig.declare("alpha", vec![int.clone()], string.clone()),
        beta: sig.declare("beta", vec![int], string),
    };
    (sig, syms)
}

/// `γ(t)`: the word `γ` wrapped around `t`, first letter outermost.
fn wrap(word: &str, t: Term, s: &RpSymbols) -> Term {
    word.chars().rev().fold(t, |acc, c| {
        let f = if c == '0' { &s.b0 } else { &s.b1 };
        Term::app(f.clone(), vec![acc])
    })
}

/// The system `R_P`.
pub fn build_rp(p: &PcpInstance) -> Lctrs {
    let (sig, s) = rp_signature();
    let string = Sort::new("String");
    let int_var = |name: &str| Term::Var(Var::new(name, Sort::int()));
    let str_var = |name: &str| Term::Var(Var::new(name, string.clone()));
    let (n, m, x, y) = (int_var("n"), int_var("m"), str_var("x"), str_var("y"));
    let c = |f: &Sym| Term::constant(f.clone());
    let un = |f: &Sym, t: Term| Term::app(f.clone(), vec![t]);
    let test = |a: Term, b: Term| Term::app(s.test.clone(), vec![a, b, n.clone()]);
    let positive = Term::theory(TheoryOp::Gt, vec![n.clone(), Term::int(0)]);
    let rule = |l: Term, r: Term, g: Term| Rule::new(l, r, g).expect("well-sorted rule");

    let mut rules = vec![
        rule(
            c(&s.start),
            test(un(&s.alpha, n.clone()), un(&s.beta, n.clone())),
            positive.clone(),
        ),
        rule(test(c(&s.e), c(&s.e)), c(&s.top), tt()),
        rule(test(un(&s.b0, x.clone()), un(&s.b0, y.clone())), test(x.clone(), y.clone()), tt()),
        rule(test(un(&s.b0, x.clone()), un(&s.b1, y.clone())), c(&s.bot), tt()),
        rule(test(un(&s.b1, x.clone()), un(&s.b1, y.clone())), test(x.clone(), y.clone()), tt()),
        rule(test(un(&s.b1, x.clone()), un(&s.b0, y.clone())), c(&s.bot), tt()),
        rule(test(un(&s.b0, x.clone()), c(&s.e)), c(&s.bot), tt()),
        rule(test(c(&s.e), un(&s.b0, y.clone())), c(&s.bot), tt()),
        rule(test(un(&s.b1, x.clone()), c(&s.e)), c(&s.bot), tt()),
        rule(test(c(&s.e), un(&s.b1, y.clone())), c(&s.bot), tt()),
        rule(un(&s.alpha, Term::int(0)), c(&s.e), tt()),
        rule(un(&s.beta, Term::int(0)), c(&s.e), tt()),
    ];
    let big_n = p.len() as i64;
    for (f, words) in [(&s.alpha, 0usize), (&s.beta, 1usize)] {
        for (i, pair) in p.pairs.iter().enumerate() {
            let word = if words == 0 { &pair.0 } else { &pair.1 };
            let lhs_sum = Term::theory(
                TheoryOp::Add,
                vec![
                    Term::theory(TheoryOp::Mul, vec![Term::int(big_n), m.clone()]),
                    Term::int(i as i64 + 1),
                ],
            );
            let guard = and_all([eq(lhs_sum, n.clone()), positive.clone()]);
            rules.push(rule(un(f, n.clone()), wrap(word, un(f, m.clone()), &s), guard));
        }
    }
    Lctrs::new(sig, rules)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Candidate {
    Solution,
    NonSolution,
    OutOfFuel,
}

/// Default step budget: ten steps per letter of the compared words.
pub fn default_fuel(p: &PcpInstance, code: &BigInt) -> usize {
    let k = decode(code, p.len()).len();
    10 * (k * p.max_word() + 1)
}

/// Rewrites `test(alpha(n), beta(n), n)` with `R_P` to a normal form.
pub fn check_candidate(p: &PcpInstance, code: &BigInt, fuel: usize) -> Candidate {
    let r = build_rp(p);
    let (_, s) = rp_signature();
    let n = Term::Val(crate::term::Value::Int(code.clone()));
    let mut t = Term::app(
        s.test.clone(),
        vec![
            Term::app(s.alpha.clone(), vec![n.clone()]),
            Term::app(s.beta.clone(), vec![n.clone()]),
            n,
        ],
    );
    let d = ValueDomain::interval(0, 0);
    let solver = Solver::internal();
    let rw = PlainRewriter::new(&r, &d, &solver);
    for _ in 0..=fuel {
        match rw.successors(&t).into_iter().next() {
            Some((u, _)) => t = u,
            None => {
                return if t == Term::constant(s.top.clone()) {
                    Candidate::Solution
                } else if t == Term::constant(s.bot.clone()) {
                    Candidate::NonSolution
                } else {
                    Candidate::OutOfFuel
                };
            }
        }
    }
    Candidate::OutOfFuel
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encoding_examples() {
        assert_eq!(encode(&[], 3).unwrap(), BigInt::from(0));
        assert_eq!(encode(&[3, 3, 1, 3], 3).unwrap(), BigInt::from(102));
        assert_eq!(encode(&[1, 1, 2], 3).unwrap(), BigInt::from(22));
        assert_eq!(decode(&BigInt::from(102), 3), vec![3, 3, 1, 3]);
        assert_eq!(decode(&BigInt::from(22), 3), vec![1, 1, 2]);
        assert!(decode(&BigInt::from(0), 3).is_empty());
        assert_eq!(encode(&[4], 3), Err(PcpError::IndexOutOfRange(4, 3)));
    }

    #[test]
    fn instance_validation() {
        assert_eq!(PcpInstance::parse("1,1;0,0"), Err(PcpError::Trivial));
        assert_eq!(PcpInstance::parse("1,;0,1"), Err(PcpError::EmptyWord(1)));
        assert_eq!(PcpInstance::parse("12,1"), Err(PcpError::BadAlphabet("12".into())));
        assert!(matches!(PcpInstance::parse("1,1,1"), Err(PcpError::Syntax(_))));
        let p = PcpInstance::parse("1,101;10,00;011,11").unwrap();
        assert_eq!(p.to_string(), "1,101;10,00;011,11");
    }

    #[test]
    fn alpha_rules_expand_words() {
        let p = PcpInstance::parse("10,1;0,01;1,0").unwrap();
        let r = build_rp(&p);
        let shown: Vec<String> = r.rules.iter().map(ToString::to_string).collect();
        assert!(shown.contains(&"(alpha n) → (b1 (b0 (alpha m))) [(and (= (+ (* 3 m) 1) n) (> n 0))]".to_string()));
        assert!(shown.contains(&"(test e e n) → top".to_string()));
        assert_eq!(r.rules.len(), 12 + 2 * 3);
    }
}
