//! A small s-expression reader shared by the input format and the SMT-LIB
//! backend.

use std::fmt;

use thiserror::Error;

/// Line and column (both 1-based) of a token.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, Loc),
    List(Vec<Sexp>, Loc),
}

impl Sexp {
    pub fn loc(&self) -> Loc {
        match self {
            Sexp::Atom(_, l) | Sexp::List(_, l) => *l,
        }
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(s, _) => Some(s),
            Sexp::List(..) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Sexp]> {
        match self {
            Sexp::List(xs, _) => Some(xs),
            Sexp::Atom(..) => None,
        }
    }
}

impl fmt::Display for Sexp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sexp::Atom(s, _) => f.write_str(s),
            Sexp::List(xs, _) => {
                f.write_str("(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SexpError {
    #[error("{0}: unbalanced `)`")]
    UnexpectedClose(Loc),
    #[error("{0}: unclosed `(`")]
    Unclosed(Loc),
    #[error("{0}: unterminated string literal")]
    UnterminatedString(Loc),
}

/// Reads every top-level s-expression in `text`. `;` starts a line comment.
/// Double-quoted strings are returned as atoms including the quotes.
pub fn parse_all(text: &str) -> Result<Vec<Sexp>, SexpError> {
    let mut stack: Vec<(Vec<Sexp>, Loc)> = Vec::new();
    let mut top = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);

    let push = |stack: &mut Vec<(Vec<Sexp>, Loc)>, top: &mut Vec<Sexp>, s: Sexp| match stack.last_mut() {
        Some((xs, _)) => xs.push(s),
        None => top.push(s),
    };

    while let Some(&c) = chars.peek() {
        let here = Loc { line, col };
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                col += 1;
            }
            ';' => {
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            '(' => {
                chars.next();
                col += 1;
                stack.push((Vec::new(), here));
            }
            ')' => {
                chars.next();
                col += 1;
                let (xs, at) = stack.pop().ok_or(SexpError::UnexpectedClose(here))?;
                push(&mut stack, &mut top, Sexp::List(xs, at));
            }
            '"' => {
                chars.next();
                col += 1;
                let mut s = String::from('"');
                loop {
                    match chars.next() {
                        None => return Err(SexpError::UnterminatedString(here)),
                        Some('"') => {
                            col += 1;
                            s.push('"');
                            break;
                        }
                        Some('\n') => {
                            line += 1;
                            col = 1;
                            s.push('\n');
                        }
                        Some(c) => {
                            col += 1;
                            s.push(c);
                        }
                    }
                }
                push(&mut stack, &mut top, Sexp::Atom(s, here));
            }
            _ => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' || c == '"' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                    col += 1;
                }
                push(&mut stack, &mut top, Sexp::Atom(s, here));
            }
        }
    }
    if let Some((_, at)) = stack.pop() {
        return Err(SexpError::Unclosed(at));
    }
    Ok(top)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_lists_with_locations() {
        let xs = parse_all("(a (b c))\n ; note\n (d)").unwrap();
        assert_eq!(xs.len(), 2);
        assert_eq!(xs[0].to_string(), "(a (b c))");
        assert_eq!(xs[1].loc(), Loc { line: 3, col: 2 });
        let inner = xs[0].as_list().unwrap();
        assert_eq!(inner[1].loc(), Loc { line: 1, col: 4 });
    }

    #[test]
    fn unbalanced_input_is_reported() {
        assert_eq!(parse_all("(a"), Err(SexpError::Unclosed(Loc { line: 1, col: 1 })));
        assert_eq!(parse_all("a)"), Err(SexpError::UnexpectedClose(Loc { line: 1, col: 2 })));
    }

    #[test]
    fn strings_are_single_atoms() {
        let xs = parse_all("(echo \"a b\")").unwrap();
        assert_eq!(xs[0].as_list().unwrap()[1].as_atom(), Some("\"a b\""));
    }
}
