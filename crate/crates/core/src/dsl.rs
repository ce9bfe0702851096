//! Text syntax for information inequalities.
//!
//! ```text
//! # comment
//! vars X, Y, Z;                      # optional; otherwise sorted mentions
//! h(X,Y) + 2*h(X,Z) + I(X;Y|Z) + Im(X,Y,Z) >= h(Y) + 1/2*h(Z|X)
//! ```
//!
//! Negative coefficients are accepted only in one-sided input `... >= 0`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::{
    expand_measure, format_rational, InequalityExpr, MeasureTerm, Rational, VarSet,
    VariableUniverse,
};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(String),
    LParen,
    RParen,
    Comma,
    Semi,
    Bar,
    Star,
    Slash,
    Plus,
    Minus,
    Ge,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Int(s) => format!("`{s}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Semi => "`;`".into(),
        Tok::Bar => "`|`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Ge => "`>=`".into(),
        Tok::Eof => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let start = (line, col);
        let push = |out: &mut Vec<Token>, tok| {
            out.push(Token {
                tok,
                line: start.0,
                column: start.1,
            })
        };
        match c {
            '\n' => {
                line += 1;
                col = 1;
                i += 1;
                continue;
            }
            c if c.is_whitespace() => {}
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            '(' => push(&mut out, Tok::LParen),
            ')' => push(&mut out, Tok::RParen),
            ',' => push(&mut out, Tok::Comma),
            ';' => push(&mut out, Tok::Semi),
            '|' => push(&mut out, Tok::Bar),
            '*' => push(&mut out, Tok::Star),
            '/' => push(&mut out, Tok::Slash),
            '+' => push(&mut out, Tok::Plus),
            '-' => push(&mut out, Tok::Minus),
            '>' if chars.get(i + 1) == Some(&'=') => {
                push(&mut out, Tok::Ge);
                i += 2;
                col += 2;
                continue;
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    s.push(chars[i]);
                    i += 1;
                    col += 1;
                }
                push(&mut out, Tok::Int(s));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    s.push(chars[i]);
                    i += 1;
                    col += 1;
                }
                push(&mut out, Tok::Ident(s));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    line,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
        col += 1;
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

/// A measure before variable names are resolved.
#[derive(Clone, Debug)]
enum RawMeasure {
    H(Vec<String>, Vec<String>),
    I(Vec<String>, Vec<String>, Vec<String>),
    Im(Vec<String>),
}

impl RawMeasure {
    fn names(&self) -> Vec<&String> {
        match self {
            RawMeasure::H(a, b) => a.iter().chain(b).collect(),
            RawMeasure::I(a, b, c) => a.iter().chain(b).chain(c).collect(),
            RawMeasure::Im(a) => a.iter().collect(),
        }
    }
}

struct RawTerm {
    coeff: Rational,
    measure: RawMeasure,
    line: usize,
    column: usize,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: String) -> Result<T> {
        let t = self.peek();
        Err(Error::Syntax {
            line: t.line,
            column: t.column,
            message,
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        if self.peek().tok == tok {
            self.next();
            Ok(())
        } else {
            self.error(format!(
                "expected {}, found {}",
                describe(&tok),
                describe(&self.peek().tok)
            ))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                self.next();
                Ok(s)
            }
            other => self.error(format!(
                "expected a variable name, found {}",
                describe(other)
            )),
        }
    }

    fn vars(&mut self) -> Result<Vec<String>> {
        let mut v = vec![self.ident()?];
        while self.peek().tok == Tok::Comma {
            self.next();
            v.push(self.ident()?);
        }
        Ok(v)
    }

    fn int(&mut self) -> Result<Rational> {
        match &self.peek().tok {
            Tok::Int(s) => {
                let r = Rational::from_integer(s.parse().expect("digits"));
                self.next();
                Ok(r)
            }
            other => self.error(format!("expected an integer, found {}", describe(other))),
        }
    }

    fn rational(&mut self) -> Result<Rational> {
        let negative = if self.peek().tok == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        let mut r = self.int()?;
        if self.peek().tok == Tok::Slash {
            self.next();
            let den = self.int()?;
            if den.is_zero() {
                return self.error("zero denominator".into());
            }
            r /= den;
        }
        Ok(if negative { -r } else { r })
    }

    fn measure(&mut self) -> Result<RawMeasure> {
        let name = self.ident()?;
        self.expect(Tok::LParen)?;
        let m = match name.as_str() {
            "h" => {
                let target = self.vars()?;
                let given = if self.peek().tok == Tok::Bar {
                    self.next();
                    self.vars()?
                } else {
                    Vec::new()
                };
                RawMeasure::H(target, given)
            }
            "I" => {
                let left = self.vars()?;
                self.expect(Tok::Semi)?;
                let right = self.vars()?;
                let given = if self.peek().tok == Tok::Bar {
                    self.next();
                    self.vars()?
                } else {
                    Vec::new()
                };
                RawMeasure::I(left, right, given)
            }
            "Im" => RawMeasure::Im(self.vars()?),
            other => {
                return Err(Error::Syntax {
                    line: self.toks[self.pos - 2].line,
                    column: self.toks[self.pos - 2].column,
                    message: format!("unknown measure `{other}`; expected h, I or Im"),
                })
            }
        };
        self.expect(Tok::RParen)?;
        Ok(m)
    }

    fn term(&mut self) -> Result<RawTerm> {
        let (line, column) = (self.peek().line, self.peek().column);
        let coeff = match self.peek().tok {
            Tok::Minus | Tok::Int(_) => {
                let r = self.rational()?;
                self.expect(Tok::Star)?;
                r
            }
            _ => Rational::one(),
        };
        Ok(RawTerm {
            coeff,
            measure: self.measure()?,
            line,
            column,
        })
    }

    /// `None` for the literal `0`.
    fn sum(&mut self) -> Result<Option<Vec<RawTerm>>> {
        if let Tok::Int(s) = &self.peek().tok {
            if s.chars().all(|c| c == '0')
                && *self.peek_at(1) != Tok::Star
                && *self.peek_at(1) != Tok::Slash
            {
                self.next();
                return Ok(None);
            }
        }
        let mut terms = vec![self.term()?];
        while self.peek().tok == Tok::Plus {
            self.next();
            terms.push(self.term()?);
        }
        Ok(Some(terms))
    }
}

/// Parses a program; the universe is the `vars` header if present,
/// otherwise the sorted set of mentioned variables.
pub fn parse_inequality(text: &str) -> Result<InequalityExpr> {
    parse_with(text, None)
}

/// Parses against a fixed universe; a `vars` header must then agree with it.
pub fn parse_inequality_in(text: &str, universe: &VariableUniverse) -> Result<InequalityExpr> {
    parse_with(text, Some(universe))
}

fn parse_with(text: &str, fixed: Option<&VariableUniverse>) -> Result<InequalityExpr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let mut declared = None;
    if p.peek().tok == Tok::Ident("vars".into()) && *p.peek_at(1) != Tok::LParen {
        p.next();
        let names = p.vars()?;
        p.expect(Tok::Semi)?;
        declared = Some(VariableUniverse::new(names)?);
    }
    let lhs = p.sum()?;
    p.expect(Tok::Ge)?;
    let rhs = p.sum()?;
    if p.peek().tok != Tok::Eof {
        return p.error(format!(
            "unexpected {} after the inequality",
            describe(&p.peek().tok)
        ));
    }
    let one_sided = rhs.is_none();
    let lhs = lhs.unwrap_or_default();
    let rhs = rhs.unwrap_or_default();
    if !one_sided {
        if let Some(t) = lhs.iter().chain(&rhs).find(|t| t.coeff.is_negative()) {
            return Err(Error::Syntax {
                line: t.line,
                column: t.column,
                message: "negative coefficients are only allowed in one-sided input `... >= 0`"
                    .into(),
            });
        }
    }

    let universe = match (declared, fixed) {
        (Some(d), Some(f)) if d != *f => {
            return Err(Error::domain(
                "declared variables differ from the expected universe",
            ))
        }
        (Some(d), _) => d,
        (None, Some(f)) => f.clone(),
        (None, None) => {
            let names: BTreeSet<&String> = lhs
                .iter()
                .chain(&rhs)
                .flat_map(|t| t.measure.names())
                .collect();
            VariableUniverse::new(names.into_iter().cloned())?
        }
    };
    let resolve = |names: &[String]| -> Result<VarSet> {
        let mut s = VarSet::EMPTY;
        for n in names {
            let i = universe
                .index_of(n)
                .ok_or_else(|| Error::UnknownIdentifier(n.clone()))?;
            s = s.with(i);
        }
        Ok(s)
    };
    let mut parts = Vec::new();
    for (sign, t) in lhs
        .iter()
        .map(|t| (1, t))
        .chain(rhs.iter().map(|t| (-1, t)))
    {
        let term = match &t.measure {
            RawMeasure::H(target, given) => {
                let (v, u) = (resolve(target)?, resolve(given)?);
                if v.is_subset(u) && !given.is_empty() {
                    return Err(Error::Syntax {
                        line: t.line,
                        column: t.column,
                        message: "conditional entropy with an empty target".into(),
                    });
                }
                if given.is_empty() {
                    MeasureTerm::Entropy(v)
                } else {
                    MeasureTerm::CondEntropy {
                        target: v,
                        given: u,
                    }
                }
            }
            RawMeasure::I(a, b, c) => {
                let (a, b, c) = (resolve(a)?, resolve(b)?, resolve(c)?);
                if c.is_empty() {
                    MeasureTerm::MutualInfo(a, b)
                } else {
                    MeasureTerm::CondMutualInfo {
                        left: a,
                        right: b,
                        given: c,
                    }
                }
            }
            RawMeasure::Im(a) => MeasureTerm::MultiMutualInfo(resolve(a)?),
        };
        let w = if sign > 0 {
            t.coeff.clone()
        } else {
            -t.coeff.clone()
        };
        parts.push(expand_measure(&universe, &term, &w)?);
    }
    let one = Rational::one();
    let items: Vec<(Rational, &InequalityExpr)> = parts.iter().map(|p| (one.clone(), p)).collect();
    InequalityExpr::combine(&universe, &items)
}

fn print_side(universe: &VariableUniverse, side: &[(VarSet, Rational)]) -> String {
    if side.is_empty() {
        return "0".into();
    }
    side.iter()
        .map(|(s, c)| {
            let names: Vec<&str> = s.iter().map(|i| universe.name(i)).collect();
            if c.is_one() {
                format!("h({})", names.join(","))
            } else {
                format!("{}*h({})", format_rational(c), names.join(","))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Prints `vars ...;` and the two-sided form; [`parse_inequality`] reads it
/// back to an equal expression.
pub fn print_inequality(expr: &InequalityExpr) -> String {
    let u = expr.universe();
    let two = expr.two_sided();
    let mut out = String::new();
    if !u.is_empty() {
        out.push_str(&format!("vars {};\n", u.names().join(", ")));
    }
    out.push_str(&format!(
        "{} >= {}\n",
        print_side(u, &two.lhs),
        print_side(u, &two.rhs)
    ));
    out
}
