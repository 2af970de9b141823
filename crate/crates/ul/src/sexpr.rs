//! The shared s-expression concrete syntax.
//!
//! Every formula and automaton file is a sequence of s-expressions
//! starting with an `(alphabet ...)` header. Comments run from `;` to the
//! end of the line.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SExpr {
    Atom(String),
    List(Vec<SExpr>),
}

impl SExpr {
    pub fn atom(s: impl Into<String>) -> SExpr {
        SExpr::Atom(s.into())
    }

    pub fn list(items: Vec<SExpr>) -> SExpr {
        SExpr::List(items)
    }

    pub fn as_atom(&self) -> Option<&str> {
        match self {
            SExpr::Atom(s) => Some(s),
            SExpr::List(_) => None,
        }
    }

    pub fn as_list(&self) -> Option<&[SExpr]> {
        match self {
            SExpr::Atom(_) => None,
            SExpr::List(items) => Some(items),
        }
    }
}

impl fmt::Display for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Atom(s) => write!(f, "{s}"),
            SExpr::List(items) => {
                write!(f, "(")?;
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{e}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SexprError {
    #[error("{line}:{col}: unbalanced parentheses")]
    UnbalancedParens { line: usize, col: usize },
    #[error("input contains no s-expression")]
    EmptyInput,
    #[error("{line}:{col}: illegal token {token:?}")]
    IllegalToken {
        line: usize,
        col: usize,
        token: String,
    },
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> u8 {
        let c = self.src[self.pos];
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn skip_trivia(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => {
                    self.bump();
                }
                b';' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn next_token(&mut self) -> Result<Option<(Token, usize, usize)>, SexprError> {
        self.skip_trivia();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let (line, col) = (self.line, self.col);
        match self.src[self.pos] {
            b'(' => {
                self.bump();
                Ok(Some((Token::Open, line, col)))
            }
            b')' => {
                self.bump();
                Ok(Some((Token::Close, line, col)))
            }
            _ => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    match self.src[self.pos] {
                        b' ' | b'\t' | b'\r' | b'\n' | b'(' | b')' | b';' => break,
                        _ => {
                            self.bump();
                        }
                    }
                }
                let text = &self.src[start..self.pos];
                match std::str::from_utf8(text) {
                    Ok(s) if s.chars().all(|c| ('!'..='~').contains(&c)) => {
                        Ok(Some((Token::Atom(s.to_string()), line, col)))
                    }
                    _ => Err(SexprError::IllegalToken {
                        line,
                        col,
                        token: String::from_utf8_lossy(text).into_owned(),
                    }),
                }
            }
        }
    }
}

/// Parses the first complete s-expression of `text`.
pub fn parse_sexpr(text: &str) -> Result<SExpr, SexprError> {
    let mut lexer = Lexer::new(text);
    parse_one(&mut lexer)?.ok_or(SexprError::EmptyInput)
}

/// Parses every s-expression in `text`.
pub fn parse_sexprs(text: &str) -> Result<Vec<SExpr>, SexprError> {
    let mut lexer = Lexer::new(text);
    let mut out = Vec::new();
    while let Some(e) = parse_one(&mut lexer)? {
        out.push(e);
    }
    if out.is_empty() {
        return Err(SexprError::EmptyInput);
    }
    Ok(out)
}

fn parse_one(lexer: &mut Lexer<'_>) -> Result<Option<SExpr>, SexprError> {
    match lexer.next_token()? {
        None => Ok(None),
        Some((Token::Atom(s), _, _)) => Ok(Some(SExpr::Atom(s))),
        Some((Token::Close, line, col)) => Err(SexprError::UnbalancedParens { line, col }),
        Some((Token::Open, line, col)) => {
            let mut items = Vec::new();
            loop {
                match lexer.next_token()? {
                    None => return Err(SexprError::UnbalancedParens { line, col }),
                    Some((Token::Close, _, _)) => return Ok(Some(SExpr::List(items))),
                    Some((Token::Open, l2, c2)) => {
                        // Re-parse the sublist; cheapest to recurse on the lexer.
                        items.push(parse_rest(lexer, l2, c2)?);
                    }
                    Some((Token::Atom(s), _, _)) => items.push(SExpr::Atom(s)),
                }
            }
        }
    }
}

fn parse_rest(lexer: &mut Lexer<'_>, line: usize, col: usize) -> Result<SExpr, SexprError> {
    let mut items = Vec::new();
    loop {
        match lexer.next_token()? {
            None => return Err(SexprError::UnbalancedParens { line, col }),
            Some((Token::Close, _, _)) => return Ok(SExpr::List(items)),
            Some((Token::Open, l2, c2)) => items.push(parse_rest(lexer, l2, c2)?),
            Some((Token::Atom(s), _, _)) => items.push(SExpr::Atom(s)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_forms() {
        let e = parse_sexpr("(x a (top))").unwrap();
        assert_eq!(
            e,
            SExpr::list(vec![
                SExpr::atom("x"),
                SExpr::atom("a"),
                SExpr::list(vec![SExpr::atom("top")])
            ])
        );
        let e = parse_sexpr("(alphabet a b c d)").unwrap();
        assert_eq!(e.as_list().unwrap().len(), 5);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            parse_sexpr("(("),
            Err(SexprError::UnbalancedParens { .. })
        ));
        assert!(matches!(parse_sexpr("  ; nothing"), Err(SexprError::EmptyInput)));
        assert!(matches!(
            parse_sexpr(")"),
            Err(SexprError::UnbalancedParens { line: 1, col: 1 })
        ));
    }

    #[test]
    fn comments_and_positions() {
        let e = parse_sexprs("; header\n(a b) ; trailing\n(c)").unwrap();
        assert_eq!(e.len(), 2);
        let err = parse_sexpr("\n  (a \u{3b1})").unwrap_err();
        assert!(matches!(err, SexprError::IllegalToken { line: 2, .. }));
    }

    #[test]
    fn print_parse_roundtrip() {
        let e = parse_sexpr("( a ( b c )  d )").unwrap();
        assert_eq!(e.to_string(), "(a (b c) d)");
        assert_eq!(parse_sexpr(&e.to_string()).unwrap(), e);
    }
}
