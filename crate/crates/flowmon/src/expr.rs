//! Expression text, candidate files, and report records.
//!
//! The grammar accepts the variables `l1`, `l2` (curvature basis) or `H`,
//! `A`, integer literals, `+ - * / ^`, parentheses, and unary minus.
//! Precedence from tightest to loosest: `^`, unary minus, `*` and `/`,
//! then `+` and `-`; `^` is right-associative and takes a nonnegative
//! integer exponent of at most 64. Every expression folds to a single
//! reduced quotient, so `parse` returns a canonical [`RationalFn`].

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::poly::{Basis, BivarPoly, PolyError, Var};
use crate::ratfn::RationalFn;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source text.
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
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
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits parse as an integer");
                out.push((start, Tok::Int(n)));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => return err(i, format!("unexpected character '{c}'")),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    basis: Basis,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(usize, Tok)> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn var(&self, name: &str, at: usize) -> Result<RationalFn, ParseError> {
        let (first, second) = self.basis.var_names();
        if name == first {
            Ok(RationalFn::var(self.basis, Var::First))
        } else if name == second {
            Ok(RationalFn::var(self.basis, Var::Second))
        } else {
            err(
                at,
                format!("unknown variable '{name}' (expected '{first}' or '{second}')"),
            )
        }
    }

    /// Pratt parser. Binding powers: `+ -` 10, `* /` 20, unary minus 26,
    /// `^` 30.
    fn expr(&mut self, min_bp: u8) -> Result<RationalFn, ParseError> {
        let mut lhs = match self.next() {
            None => return err(self.end, "unexpected end of expression"),
            Some((at, tok)) => match tok {
                Tok::Int(n) => RationalFn::constant(self.basis, BigRational::from(n)),
                Tok::Ident(name) => self.var(&name, at)?,
                Tok::Minus => self.expr(26)?.neg(),
                Tok::LParen => {
                    let inner = self.expr(0)?;
                    match self.next() {
                        Some((_, Tok::RParen)) => inner,
                        Some((p, _)) => return err(p, "expected ')'"),
                        None => return err(self.end, "missing ')'"),
                    }
                }
                _ => return err(at, "expected a value"),
            },
        };
        loop {
            let (at, op) = match self.peek() {
                Some(&(at, ref t)) => (at, t.clone()),
                None => break,
            };
            let bp = match op {
                Tok::Plus | Tok::Minus => 10,
                Tok::Star | Tok::Slash => 20,
                Tok::Caret => 30,
                _ => break,
            };
            if bp < min_bp {
                break;
            }
            self.pos += 1;
            match op {
                Tok::Caret => {
                    let e = self.exponent()?;
                    lhs = lhs.pow(e);
                }
                _ => {
                    let rhs = self.expr(bp + 1)?;
                    lhs = match op {
                        Tok::Plus => lhs.add(&rhs),
                        Tok::Minus => lhs.sub(&rhs),
                        Tok::Star => lhs.mul(&rhs),
                        Tok::Slash => match lhs.div(&rhs) {
                            Ok(v) => v,
                            Err(PolyError::DivisionByZero) => {
                                return err(at, "division by a zero denominator")
                            }
                            Err(e) => return err(at, e.to_string()),
                        },
                        _ => unreachable!(),
                    };
                }
            }
        }
        Ok(lhs)
    }

    /// A nonnegative integer exponent; a chain `a^b^c` nests to the right.
    fn exponent(&mut self) -> Result<u32, ParseError> {
        let (at, tok) = match self.next() {
            Some(t) => t,
            None => return err(self.end, "missing exponent"),
        };
        let base: u32 = match tok {
            Tok::Int(n) => match u32::try_from(&n) {
                Ok(v) if v <= 64 => v,
                _ => return err(at, "exponent overflow (maximum is 64)"),
            },
            Tok::Minus => return err(at, "exponent must be a nonnegative integer"),
            _ => return err(at, "exponent must be a nonnegative integer"),
        };
        if matches!(self.peek(), Some((_, Tok::Caret))) {
            self.pos += 1;
            let upper = self.exponent()?;
            return match base.checked_pow(upper) {
                Some(v) if v <= 64 => Ok(v),
                _ => err(at, "exponent overflow (maximum is 64)"),
            };
        }
        Ok(base)
    }
}

/// Parse an expression into a canonical rational function.
pub fn parse(src: &str, basis: Basis) -> Result<RationalFn, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        basis,
        end: src.len(),
    };
    let value = p.expr(0)?;
    match p.peek() {
        None => Ok(value),
        Some(&(at, _)) => err(at, "unexpected trailing input"),
    }
}

/// Canonical text form; `parse(print(f))` returns `f` again.
pub fn print(f: &RationalFn) -> String {
    f.to_string()
}

pub fn print_poly(p: &BivarPoly) -> String {
    p.to_string()
}

/// Parse a velocity or candidate file: UTF-8, one expression per line,
/// blank lines and `#` comments ignored. Errors carry the 1-based line.
pub fn parse_expr_lines(text: &str, basis: Basis) -> Result<Vec<RationalFn>, FileParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(k) => &raw[..k],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        match parse(line, basis) {
            Ok(f) => out.push(f),
            Err(e) => {
                return Err(FileParseError {
                    line: idx + 1,
                    error: e,
                })
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct FileParseError {
    pub line: usize,
    pub error: ParseError,
}

impl fmt::Display for FileParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

impl std::error::Error for FileParseError {}

// ----- report records -------------------------------------------------------

/// One certificate in a report: the sign verdict for a named target
/// expression, the method that produced it, and a witness point when the
/// verdict is indefinite.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CertificateRecord {
    /// `"C_w"` or `"G1"`.
    pub target: String,
    /// `"NonnegativeOnQuadrant"`, `"NonpositiveOnQuadrant"`,
    /// `"ZeroIdentically"`, or `"Indefinite"`.
    pub verdict: String,
    /// `"sturm"` or `"randomized-only"`.
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[String; 2]>,
}

/// One line of a search or verify report. Serialized as JSON, one record
/// per line.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportRecord {
    pub velocity: String,
    pub candidate: String,
    /// `"verified"` or `"rejected"`.
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stage: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(rename = "C_w", skip_serializing_if = "Option::is_none")]
    pub c_w: Option<String>,
    #[serde(rename = "G1", skip_serializing_if = "Option::is_none")]
    pub g1: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<CertificateRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<[String; 2]>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn parses_table_quantity() {
        let w = parse("(l1-l2)^2/(4*l1^2*l2^2)", Basis::Lambda).unwrap();
        assert_eq!(w.to_string(), "(l1^2 - 2*l1*l2 + l2^2)/(4*l1^2*l2^2)");
    }

    #[test]
    fn parses_ha_variable() {
        let h = parse("H", Basis::HA).unwrap();
        assert_eq!(h, RationalFn::var(Basis::HA, Var::First));
        assert!(parse("l1", Basis::HA).is_err());
    }

    #[test]
    fn folds_division_into_single_quotient() {
        let f = parse("1/(l1*l2) + 1/(l1*l2)", Basis::Lambda).unwrap();
        assert_eq!(f.to_string(), "2/(l1*l2)");
        let g = parse("(1/l1)/(1/l2)", Basis::Lambda).unwrap();
        assert_eq!(g.to_string(), "l2/l1");
    }

    #[test]
    fn precedence_and_unary_minus() {
        let a = parse("-2^2", Basis::Lambda).unwrap();
        assert_eq!(a, RationalFn::from_integer(Basis::Lambda, -4));
        let b = parse("-l1*3", Basis::Lambda).unwrap();
        assert_eq!(b.to_string(), "-3*l1");
        let c = parse("2^3^2", Basis::Lambda).unwrap();
        assert_eq!(c, RationalFn::from_integer(Basis::Lambda, 512));
        let d = parse("1 - -l1", Basis::Lambda).unwrap();
        assert_eq!(d.to_string(), "l1 + 1");
    }

    #[test]
    fn positioned_errors() {
        let e = parse("l1 + + l2", Basis::Lambda).unwrap_err();
        assert_eq!(e.pos, 5);
        let e = parse("l1 ^ 65", Basis::Lambda).unwrap_err();
        assert_eq!(e.pos, 5);
        let e = parse("l3", Basis::Lambda).unwrap_err();
        assert_eq!(e.pos, 0);
        let e = parse("1/(l1-l1)", Basis::Lambda).unwrap_err();
        assert_eq!(e.pos, 1);
        assert!(e.message.contains("zero denominator"));
        let e = parse("(l1", Basis::Lambda).unwrap_err();
        assert_eq!(e.pos, 3);
    }

    #[test]
    fn print_examples() {
        let p = parse("(l1-l2)*(l1+l2)", Basis::Lambda).unwrap();
        assert_eq!(print(&p), "l1^2 - l2^2");
        assert_eq!(print(&RationalFn::zero(Basis::Lambda)), "0");
        let g = parse("-2/l1^6", Basis::Lambda).unwrap();
        assert_eq!(print(&g), "-2/l1^6");
    }

    #[test]
    fn expression_file_lines() {
        let text = "# velocities\n-1/(l1*l2)\n\n-(l1+l2)/(l1*l2)  # trailing note\n";
        let fs = parse_expr_lines(text, Basis::Lambda).unwrap();
        assert_eq!(fs.len(), 2);
        assert!(fs[0].num().neg().is_one());
        let bad = parse_expr_lines("l1\nl1 +\n", Basis::Lambda).unwrap_err();
        assert_eq!(bad.line, 2);
    }
}
