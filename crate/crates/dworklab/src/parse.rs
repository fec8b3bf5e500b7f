//! Text grammar for forms, and the canonical printer.
//!
//! Grammar (EBNF):
//! ```text
//! form  := ['-'] term (('+'|'-') term)*
//! term  := [coeff '*'] mono | coeff
//! coeff := int ['/' posint]
//! mono  := var ('*' var)*
//! var   := 'x' posint ['^' posint]
//! ```
//! Coefficients default to 1 and exponents to 1. Variable indices are
//! 1-based in the text (`x1`, `x2`, ...); the in-memory representation is
//! 0-based. Whitespace is insignificant everywhere between tokens.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::poly::{Form, Monomial};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("zero denominator at line {line}, column {col}")]
    ZeroDenominator { line: usize, col: usize },
    #[error("variable index 0 at line {line}, column {col}; indices start at x1")]
    VariableIndexZero { line: usize, col: usize },
    #[error("form uses x{max_index} but only {declared} variables were declared")]
    ExceedsDeclared { max_index: usize, declared: usize },
}

/// A form as text plus an optional declared variable count; when absent the
/// count is inferred as the largest variable index occurring in the text.
#[derive(Debug, Clone)]
pub struct FormSource {
    pub text: String,
    pub nvars: Option<usize>,
}

impl FormSource {
    pub fn new(text: impl Into<String>) -> Self {
        FormSource {
            text: text.into(),
            nvars: None,
        }
    }

    pub fn with_nvars(text: impl Into<String>, n: usize) -> Self {
        FormSource {
            text: text.into(),
            nvars: Some(n),
        }
    }

    pub fn parse(&self) -> Result<Form, ParseError> {
        parse_form(&self.text, self.nvars)
    }
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.bump();
        }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            col: self.col,
            message: message.into(),
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", c as char)))
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.bump();
        }
        if self.pos == start {
            return Err(self.error("expected a digit"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse::<BigInt>().unwrap())
    }

    fn small_integer(&mut self) -> Result<u32, ParseError> {
        let (line, col) = (self.line, self.col);
        let v = self.integer()?;
        u32::try_from(&v).map_err(|_| ParseError::Syntax {
            line,
            col,
            message: format!("integer {v} too large"),
        })
    }
}

/// One parsed additive term: a coefficient and per-variable exponents keyed
/// by 1-based index.
struct RawTerm {
    coeff: BigRational,
    exps: Vec<(usize, u32)>,
}

fn parse_var(cur: &mut Cursor) -> Result<(usize, u32), ParseError> {
    cur.expect(b'x')?;
    let (line, col) = (cur.line, cur.col);
    let idx = cur.small_integer()? as usize;
    if idx == 0 {
        return Err(ParseError::VariableIndexZero { line, col });
    }
    cur.skip_ws();
    let exp = if cur.peek() == Some(b'^') {
        cur.bump();
        cur.skip_ws();
        cur.small_integer()?
    } else {
        1
    };
    Ok((idx, exp))
}

fn parse_term(cur: &mut Cursor) -> Result<RawTerm, ParseError> {
    cur.skip_ws();
    let mut coeff = BigRational::one();
    let mut exps: Vec<(usize, u32)> = Vec::new();
    match cur.peek() {
        Some(b'0'..=b'9') => {
            let numer = cur.integer()?;
            cur.skip_ws();
            let mut c = BigRational::from_integer(numer);
            if cur.peek() == Some(b'/') {
                cur.bump();
                cur.skip_ws();
                let (line, col) = (cur.line, cur.col);
                let denom = cur.integer()?;
                if denom.is_zero() {
                    return Err(ParseError::ZeroDenominator { line, col });
                }
                c /= BigRational::from_integer(denom);
            }
            coeff = c;
            cur.skip_ws();
            if cur.peek() == Some(b'*') {
                cur.bump();
                cur.skip_ws();
                exps.push(parse_var(cur)?);
            } else {
                // bare constant term
                return Ok(RawTerm { coeff, exps });
            }
        }
        Some(b'x') => {
            exps.push(parse_var(cur)?);
        }
        _ => return Err(cur.error("expected a coefficient or a variable")),
    }
    loop {
        cur.skip_ws();
        if cur.peek() == Some(b'*') {
            cur.bump();
            cur.skip_ws();
            exps.push(parse_var(cur)?);
        } else {
            break;
        }
    }
    Ok(RawTerm { coeff, exps })
}

/// Parses the grammar above into a canonical `Form`.
pub fn parse_form(text: &str, declared_nvars: Option<usize>) -> Result<Form, ParseError> {
    let mut cur = Cursor::new(text);
    let mut raw_terms: Vec<RawTerm> = Vec::new();
    cur.skip_ws();
    let mut sign = BigRational::one();
    if cur.peek() == Some(b'-') {
        cur.bump();
        sign = -sign;
    }
    loop {
        let mut term = parse_term(&mut cur)?;
        term.coeff *= &sign;
        raw_terms.push(term);
        cur.skip_ws();
        match cur.peek() {
            Some(b'+') => {
                cur.bump();
                sign = BigRational::one();
            }
            Some(b'-') => {
                cur.bump();
                sign = -BigRational::one();
            }
            None => break,
            Some(c) => {
                return Err(cur.error(format!("unexpected character '{}'", c as char)));
            }
        }
    }

    let max_index = raw_terms
        .iter()
        .flat_map(|t| t.exps.iter().map(|&(i, _)| i))
        .max()
        .unwrap_or(0);
    let n = match declared_nvars {
        Some(n) => {
            if max_index > n {
                return Err(ParseError::ExceedsDeclared {
                    max_index,
                    declared: n,
                });
            }
            n
        }
        None => max_index,
    };

    let mut form = Form::zero(n);
    for t in raw_terms {
        let mut exps = vec![0u32; n];
        for (i, e) in t.exps {
            exps[i - 1] += e;
        }
        form.add_term(Monomial::new(exps), t.coeff);
    }
    Ok(form)
}

fn coeff_text(c: &BigRational) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn mono_text(m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            _ => parts.push(format!("x{}^{}", i + 1, e)),
        }
    }
    parts.join("*")
}

/// Deterministic canonical printing: terms in descending graded-lex order.
/// The output re-parses to the same form (given the same variable count).
pub fn print_form(f: &Form) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in f.terms().collect::<Vec<_>>().into_iter().rev().enumerate() {
        let neg = c.is_negative();
        let abs = if neg { -c.clone() } else { c.clone() };
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&coeff_text(&abs));
        } else if abs.is_one() {
            out.push_str(&mono_text(m));
        } else {
            out.push_str(&coeff_text(&abs));
            out.push('*');
            out.push_str(&mono_text(m));
        }
    }
    out
}

impl std::fmt::Display for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", print_form(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_examples_parse() {
        let f = parse_form("x1^3 + x2^3 + x3^3 + x4^3", None).unwrap();
        assert_eq!(f.nvars(), 4);
        assert_eq!(f.num_terms(), 4);

        let g = parse_form("x1^3 + x1*x2^2 + x2*x3*x4", None).unwrap();
        assert_eq!(g.nvars(), 4);
        assert_eq!(g.degree(), Some(3));

        let h = parse_form("1/2*x1^2 - x2^2", None).unwrap();
        assert_eq!(
            h.coefficient(&Monomial::new(vec![2, 0])).unwrap(),
            &BigRational::new(BigInt::from(1), BigInt::from(2))
        );
    }

    #[test]
    fn canonical_print_order() {
        let f = parse_form("x2^2 + x1^2", None).unwrap();
        assert_eq!(print_form(&f), "x1^2 + x2^2");
        assert_eq!(print_form(&Form::zero(2)), "0");
        let g = parse_form("x1^3 + x1 + 7", None).unwrap();
        assert_eq!(print_form(&g), "x1^3 + x1 + 7");
        let h = parse_form("-x1 + 1/3*x2", None).unwrap();
        assert_eq!(print_form(&h), "-x1 + 1/3*x2");
    }

    #[test]
    fn whitespace_insensitive() {
        let a = parse_form("x1^3+x1*x2^2", None).unwrap();
        let b = parse_form("  x1 ^ 3 \n + x1 * x2 ^ 2 ", None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn error_positions() {
        match parse_form("x1 + @", None) {
            Err(ParseError::Syntax { line: 1, col, .. }) => assert_eq!(col, 6),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_form("1/0*x1", None),
            Err(ParseError::ZeroDenominator { .. })
        ));
        assert!(matches!(
            parse_form("x0 + x1", None),
            Err(ParseError::VariableIndexZero { .. })
        ));
        assert!(matches!(
            parse_form("x3", Some(2)),
            Err(ParseError::ExceedsDeclared {
                max_index: 3,
                declared: 2
            })
        ));
    }

    #[test]
    fn repeated_variables_multiply() {
        let a = parse_form("x1*x1*x2", None).unwrap();
        let b = parse_form("x1^2*x2", None).unwrap();
        assert_eq!(a, b);
    }

    use num_bigint::BigInt;
}
