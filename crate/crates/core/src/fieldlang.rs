//! Text syntax for polynomials and polynomial vector fields.
//!
//! ```text
//! field  := comp (";" comp)*
//! comp   := "d" INT ":" poly
//! poly   := term (("+" | "-") term)*
//! term   := ["-"] factor ("*" factor)*
//! factor := primary ("^" NAT)*
//! primary:= RATIONAL | VAR | PARAM | "(" poly ")"
//! VAR    := "x" INT            (1-based coordinate index)
//! RATIONAL := INT ["/" NAT]
//! ```
//!
//! Identifiers of the form `x<digits>` always denote coordinates; every other
//! identifier must be a bound parameter and is replaced by its value.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::poly::MultiPoly;
use crate::rational::{parse_rational, Rational};
use crate::tensor::PolyVectorField;

pub type Params = BTreeMap<String, Rational>;

/// Largest total degree a parsed expression may reach.
pub const MAX_DEGREE: u32 = 32;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("unknown identifier {0:?}")]
    UnknownIdentifier(String),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: String, n: usize },
    #[error("division is only allowed inside rational literals")]
    Division,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("duplicate clause for component d{0}")]
    DuplicateComponent(usize),
    #[error("degree exceeds {MAX_DEGREE}")]
    DegreeTooLarge,
    #[error("invalid parameter binding {0:?}")]
    BadBinding(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Colon,
    Semi,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Int(v) => write!(f, "integer {v}"),
            Tok::Ident(s) => write!(f, "identifier {s:?}"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Colon => write!(f, "':'"),
            Tok::Semi => write!(f, "';'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&ch) = chars.peek() {
        let (l, c) = (line, column);
        let mut advance = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let ch = chars.next().expect("peeked");
            if ch == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        if ch.is_whitespace() {
            advance(&mut chars);
            continue;
        }
        let tok = if ch.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                advance(&mut chars);
            }
            Tok::Int(s.parse().expect("digits"))
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                advance(&mut chars);
            }
            Tok::Ident(s)
        } else {
            let t = match ch {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ':' => Tok::Colon,
                ';' => Tok::Semi,
                other => {
                    return Err(ParseError {
                        line: l,
                        column: c,
                        kind: ParseErrorKind::UnexpectedChar(other),
                    })
                }
            };
            advance(&mut chars);
            t
        };
        out.push(Token {
            tok,
            line: l,
            column: c,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

/// Index part of `<prefix><digits>`, if the identifier has that shape.
fn indexed(ident: &str, prefix: char) -> Option<&str> {
    let rest = ident.strip_prefix(prefix)?;
    (!rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit())).then_some(rest)
}

fn resolve_index(digits: &str, n: usize) -> Option<usize> {
    digits
        .parse::<usize>()
        .ok()
        .filter(|&i| (1..=n).contains(&i))
        .map(|i| i - 1)
}

struct Parser<'p> {
    tokens: Vec<Token>,
    pos: usize,
    nvars: usize,
    params: &'p Params,
    depth: usize,
}

const MAX_NESTING: usize = 256;

impl<'p> Parser<'p> {
    fn new(text: &str, nvars: usize, params: &'p Params) -> Result<Self, ParseError> {
        Ok(Parser {
            tokens: lex(text)?,
            pos: 0,
            nvars,
            params,
            depth: 0,
        })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(tok: &Token, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: tok.line,
            column: tok.column,
            kind,
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        Self::error_at(
            t,
            ParseErrorKind::Unexpected {
                expected: expected.to_string(),
                found: t.tok.to_string(),
            },
        )
    }

    fn expect(&mut self, tok: Tok, expected: &str) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected("end of input"))
        }
    }

    fn poly(&mut self) -> Result<MultiPoly, ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(self.unexpected("shallower nesting"));
        }
        let mut acc = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc += &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc -= &self.term()?;
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let negate = if self.peek().tok == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let start = self.peek().clone();
        let mut acc = self.factor()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    let rhs = self.factor()?;
                    self.check_degree(&start, acc.degree(), rhs.degree())?;
                    acc = &acc * &rhs;
                }
                Tok::Slash => {
                    return Err(Self::error_at(self.peek(), ParseErrorKind::Division));
                }
                _ => break,
            }
        }
        Ok(if negate { -&acc } else { acc })
    }

    fn check_degree(&self, at: &Token, a: Option<u32>, b: Option<u32>) -> Result<(), ParseError> {
        let total = u64::from(a.unwrap_or(0)) + u64::from(b.unwrap_or(0));
        if total > u64::from(MAX_DEGREE) {
            return Err(Self::error_at(at, ParseErrorKind::DegreeTooLarge));
        }
        Ok(())
    }

    fn factor(&mut self) -> Result<MultiPoly, ParseError> {
        let start = self.peek().clone();
        let mut base = self.primary()?;
        while self.peek().tok == Tok::Caret {
            self.bump();
            let exp_tok = self.peek().clone();
            let Tok::Int(e) = exp_tok.tok else {
                return Err(self.unexpected("exponent"));
            };
            self.bump();
            let deg = u64::from(base.degree().unwrap_or(0));
            let e = e
                .to_u32()
                .filter(|&e| deg * u64::from(e) <= u64::from(MAX_DEGREE));
            // constants may be raised to any small power; cap the exponent anyway
            let Some(e) = e.filter(|&e| e <= 4 * MAX_DEGREE) else {
                return Err(Self::error_at(&start, ParseErrorKind::DegreeTooLarge));
            };
            base = base.pow(e);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<MultiPoly, ParseError> {
        let tok = self.peek().clone();
        match &tok.tok {
            Tok::Int(p) => {
                self.bump();
                let mut value = Rational::from_integer(p.clone());
                if self.peek().tok == Tok::Slash {
                    self.bump();
                    let q_tok = self.peek().clone();
                    let Tok::Int(q) = q_tok.tok.clone() else {
                        return Err(Self::error_at(&q_tok, ParseErrorKind::Division));
                    };
                    self.bump();
                    if q.is_zero() {
                        return Err(Self::error_at(&q_tok, ParseErrorKind::ZeroDenominator));
                    }
                    value = Rational::new(p.clone(), q);
                }
                Ok(MultiPoly::constant(self.nvars, value))
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(digits) = indexed(name, 'x') {
                    return match resolve_index(digits, self.nvars) {
                        Some(i) => Ok(MultiPoly::var(self.nvars, i)),
                        None => Err(Self::error_at(
                            &tok,
                            ParseErrorKind::IndexOutOfRange {
                                index: digits.to_string(),
                                n: self.nvars,
                            },
                        )),
                    };
                }
                match self.params.get(name) {
                    Some(v) => Ok(MultiPoly::constant(self.nvars, v.clone())),
                    None => Err(Self::error_at(
                        &tok,
                        ParseErrorKind::UnknownIdentifier(name.clone()),
                    )),
                }
            }
            Tok::LParen => {
                self.bump();
                let inner = self.poly()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(inner)
            }
            _ => Err(self.unexpected("a number, variable, parameter or '('")),
        }
    }

    fn field(&mut self) -> Result<Vec<(usize, MultiPoly)>, ParseError> {
        let mut comps: Vec<(usize, MultiPoly)> = Vec::new();
        loop {
            let tok = self.peek().clone();
            let index = match &tok.tok {
                Tok::Ident(name) => match indexed(name, 'd') {
                    Some(digits) => resolve_index(digits, self.nvars).ok_or_else(|| {
                        Self::error_at(
                            &tok,
                            ParseErrorKind::IndexOutOfRange {
                                index: digits.to_string(),
                                n: self.nvars,
                            },
                        )
                    })?,
                    None => return Err(self.unexpected("a component label d<index>")),
                },
                _ => return Err(self.unexpected("a component label d<index>")),
            };
            self.bump();
            if comps.iter().any(|(i, _)| *i == index) {
                return Err(Self::error_at(
                    &tok,
                    ParseErrorKind::DuplicateComponent(index + 1),
                ));
            }
            self.expect(Tok::Colon, "':'")?;
            let p = self.poly()?;
            comps.push((index, p));
            if self.peek().tok == Tok::Semi {
                self.bump();
            } else {
                break;
            }
        }
        Ok(comps)
    }
}

/// Parses a polynomial in `x1..x{nvars}` with parameters substituted.
pub fn parse_poly(text: &str, nvars: usize, params: &Params) -> Result<MultiPoly, ParseError> {
    let mut p = Parser::new(text, nvars, params)?;
    let poly = p.poly()?;
    p.finish()?;
    Ok(poly)
}

/// A parsed field expression: the source and its listed components.
#[derive(Clone, Debug)]
pub struct FieldExpr {
    pub source: String,
    pub components: Vec<(usize, MultiPoly)>,
    nvars: usize,
}

impl FieldExpr {
    pub fn parse(text: &str, nvars: usize, params: &Params) -> Result<Self, ParseError> {
        let mut p = Parser::new(text, nvars, params)?;
        let components = p.field()?;
        p.finish()?;
        Ok(FieldExpr {
            source: text.to_string(),
            components,
            nvars,
        })
    }

    pub fn to_field(&self) -> PolyVectorField {
        let mut comps = vec![MultiPoly::zero(self.nvars); self.nvars];
        for (i, p) in &self.components {
            comps[*i] = p.clone();
        }
        PolyVectorField::new(comps).expect("components share nvars")
    }
}

/// Parses a vector field; unlisted components are zero.
pub fn parse_field(
    text: &str,
    nvars: usize,
    params: &Params,
) -> Result<PolyVectorField, ParseError> {
    Ok(FieldExpr::parse(text, nvars, params)?.to_field())
}

/// Parses `name=value,name=value` bindings (values are rational literals).
pub fn parse_params(text: &str) -> Result<Params, ParseError> {
    let mut out = Params::new();
    let mut column = 1;
    for part in text.split(',') {
        let bad = || ParseError {
            line: 1,
            column,
            kind: ParseErrorKind::BadBinding(part.to_string()),
        };
        let trimmed = part.trim();
        if !trimmed.is_empty() {
            let (name, value) = trimmed.split_once('=').ok_or_else(bad)?;
            let name = name.trim();
            let valid_name = name
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && indexed(name, 'x').is_none();
            if !valid_name {
                return Err(bad());
            }
            let value = parse_rational(value).map_err(|_| bad())?;
            out.insert(name.to_string(), value);
        }
        column += part.chars().count() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn none() -> Params {
        Params::new()
    }

    fn abc(a: i64, b: i64, c: i64) -> Params {
        [("a", a), ("b", b), ("c", c)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), int(v)))
            .collect()
    }

    #[test]
    fn parses_rational_coefficients() {
        let p = parse_poly("x1^2 + 1/2*x2", 2, &none()).unwrap();
        let expected = &MultiPoly::var(2, 0).pow(2) + &MultiPoly::var(2, 1).scale(&frac(1, 2));
        assert_eq!(p, expected);
    }

    #[test]
    fn substitutes_parameters() {
        let p = parse_poly("(b-a)*x1*x2", 2, &abc(1, 2, 0)).unwrap();
        assert_eq!(p, &MultiPoly::var(2, 0) * &MultiPoly::var(2, 1));
    }

    #[test]
    fn out_of_range_variable() {
        let err = parse_poly("x3", 2, &none()).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::IndexOutOfRange { .. }));
        assert_eq!((err.line, err.column), (1, 1));
        assert!(parse_poly("x0", 2, &none()).is_err());
    }

    #[test]
    fn rotation_field() {
        let f = parse_field("d1: x2; d2: -x1", 2, &none()).unwrap();
        assert_eq!(f.component(0), &MultiPoly::var(2, 1));
        assert_eq!(f.component(1), &-&MultiPoly::var(2, 0));
    }

    #[test]
    fn euler_field() {
        let f = parse_field(
            "d3: (b-a)*x1*x2; d1: (c-b)*x2*x3; d2: (a-c)*x3*x1",
            3,
            &abc(1, 2, 3),
        )
        .unwrap();
        assert_eq!(f.to_string(), "d1: x2*x3; d2: -2*x1*x3; d3: x1*x2");
    }

    #[test]
    fn duplicate_clause() {
        let err = parse_field("d1: x1; d1: x2", 2, &none()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateComponent(1));
        assert_eq!(err.column, 9);
    }

    #[test]
    fn division_and_positions() {
        let err = parse_poly("x1/2", 1, &none()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Division);
        assert_eq!(err.column, 3);
        let err = parse_poly("1 +\n  (x1 + y)", 1, &none()).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("y".into()));
        assert_eq!((err.line, err.column), (2, 9));
        assert_eq!(
            parse_poly("1/0", 1, &none()).unwrap_err().kind,
            ParseErrorKind::ZeroDenominator
        );
        assert!(parse_poly("x1 +", 1, &none()).is_err());
        assert!(parse_poly("x1 x1", 1, &none()).is_err());
        assert!(parse_poly("", 1, &none()).is_err());
        assert!(parse_poly("x1 $", 1, &none()).is_err());
    }

    #[test]
    fn powers_and_unary_minus() {
        let p = parse_poly("-(x1 - 1)^2", 1, &none()).unwrap();
        assert_eq!(p.to_string(), "-x1^2 + 2*x1 - 1");
        assert_eq!(
            parse_poly("2^3", 1, &none()).unwrap(),
            MultiPoly::constant(1, int(8))
        );
        assert_eq!(
            parse_poly("x1^40", 1, &none()).unwrap_err().kind,
            ParseErrorKind::DegreeTooLarge
        );
    }

    #[test]
    fn param_bindings() {
        let p = parse_params("a=1, b=-2/3,c = 5").unwrap();
        assert_eq!(p["a"], int(1));
        assert_eq!(p["b"], frac(-2, 3));
        assert_eq!(p["c"], int(5));
        assert!(parse_params("a").is_err());
        assert!(parse_params("x1=2").is_err());
        assert!(parse_params("a=q").is_err());
        assert!(parse_params("").unwrap().is_empty());
    }
}
