//! Recursive-descent parser for Laurent polynomial expressions.
//!
//! ```text
//! expr   := "-"? term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := base ("^" integer)?
//! base   := "x" | "y" | "z" | "a" | digits | "(" expr ")"
//! ```
//!
//! Exponents may be negative, but only monomials can be inverted.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use super::{LaurentPolynomial, Monomial};
use crate::ring::IntegerPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable '{name}' at position {position}")]
    UnknownVariable { name: char, position: usize },
    #[error("cannot raise a non-monomial to a negative power (position {position})")]
    NonMonomialInverse { position: usize },
    #[error("expression uses z but only {0} variables were requested")]
    TooManyVariables(usize),
}

/// A parsed expression: integer coefficients unless the parameter `a`
/// appears.
#[derive(Debug, Clone, PartialEq)]
pub enum ParsedPolynomial {
    Integer(LaurentPolynomial<BigInt>),
    Parametric(LaurentPolynomial<IntegerPolynomial>),
}

impl ParsedPolynomial {
    pub fn nvars(&self) -> usize {
        match self {
            Self::Integer(p) => p.nvars(),
            Self::Parametric(p) => p.nvars(),
        }
    }

    pub fn into_parametric(self) -> LaurentPolynomial<IntegerPolynomial> {
        match self {
            Self::Integer(p) => p.map_coefficients(|c| IntegerPolynomial::constant(c.clone())),
            Self::Parametric(p) => p,
        }
    }

    pub fn as_integer(&self) -> Option<&LaurentPolynomial<BigInt>> {
        match self {
            Self::Integer(p) => Some(p),
            Self::Parametric(_) => None,
        }
    }
}

impl std::fmt::Display for ParsedPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Integer(p) => write!(f, "{p}"),
            Self::Parametric(p) => write!(f, "{p}"),
        }
    }
}

/// Parses `text`, using three variables if `z` appears and two otherwise.
pub fn parse_expression(text: &str) -> Result<ParsedPolynomial, ParseError> {
    parse_impl(text, None)
}

/// Parses `text` as a polynomial in exactly `nvars` variables.
pub fn parse_expression_in(text: &str, nvars: usize) -> Result<ParsedPolynomial, ParseError> {
    parse_impl(text, Some(nvars))
}

fn parse_impl(text: &str, nvars: Option<usize>) -> Result<ParsedPolynomial, ParseError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, uses_z: false, uses_a: false };
    p.skip_ws();
    let value = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    let n = match nvars {
        Some(n) if p.uses_z && n < 3 => return Err(ParseError::TooManyVariables(n)),
        Some(n) if !(2..=3).contains(&n) => {
            return Err(ParseError::Syntax { position: 0, message: format!("bad variable count {n}") })
        }
        Some(n) => n,
        None if p.uses_z => 3,
        None => 2,
    };
    let poly = LaurentPolynomial::from_terms(n, value.terms)
        .expect("variable count checked above");
    if p.uses_a {
        Ok(ParsedPolynomial::Parametric(poly))
    } else {
        Ok(ParsedPolynomial::Integer(poly.map_coefficients(|c| {
            c.as_constant().expect("no parameter used")
        })))
    }
}

/// Intermediate value: always three variables, parametric coefficients.
struct Value {
    terms: Vec<(Monomial, IntegerPolynomial)>,
}

impl Value {
    fn poly(&self) -> LaurentPolynomial<IntegerPolynomial> {
        LaurentPolynomial::from_terms(3, self.terms.iter().cloned()).expect("three variables")
    }

    fn from_poly(p: LaurentPolynomial<IntegerPolynomial>) -> Self {
        Value { terms: p.terms().map(|(m, c)| (*m, c.clone())).collect() }
    }

    fn constant(c: IntegerPolynomial) -> Self {
        Value { terms: vec![(Monomial::ONE, c)] }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    uses_z: bool,
    uses_a: bool,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError::Syntax { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Value, ParseError> {
        let negate_first = self.eat(b'-');
        let first = self.term()?;
        let mut acc = if negate_first { first.poly().neg() } else { first.poly() };
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?.poly()).expect("same variables");
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?.poly()).expect("same variables");
            } else {
                break;
            }
        }
        Ok(Value::from_poly(acc))
    }

    fn term(&mut self) -> Result<Value, ParseError> {
        let mut acc = self.factor()?.poly();
        while self.eat(b'*') {
            acc = acc.multiply(&self.factor()?.poly()).expect("same variables");
        }
        Ok(Value::from_poly(acc))
    }

    fn factor(&mut self) -> Result<Value, ParseError> {
        let base = self.base()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        self.skip_ws();
        let at = self.pos;
        let exp = self.integer(true)?;
        let exp: i64 = i64::try_from(&exp).map_err(|_| ParseError::Syntax {
            position: at,
            message: "exponent out of range".to_string(),
        })?;
        if exp >= 0 {
            let k = u32::try_from(exp).map_err(|_| ParseError::Syntax {
                position: at,
                message: "exponent out of range".to_string(),
            })?;
            return Ok(Value::from_poly(base.poly().pow(k)));
        }
        // Negative powers: only ±(monomial).
        let poly = base.poly();
        let mut terms = poly.terms();
        let (m, c) = match (terms.next(), terms.next()) {
            (Some((m, c)), None) => (*m, c.clone()),
            _ => return Err(ParseError::NonMonomialInverse { position: at }),
        };
        let unit = c.as_constant().filter(|u| u.abs().is_one());
        let Some(unit) = unit else {
            return Err(ParseError::NonMonomialInverse { position: at });
        };
        let k = exp.unsigned_abs();
        let scale = |e: i32| -> Result<i32, ParseError> {
            i64::from(e)
                .checked_mul(exp)
                .and_then(|v| i32::try_from(v).ok())
                .ok_or(ParseError::Syntax { position: at, message: "exponent out of range".into() })
        };
        let inv = Monomial([scale(m.0[0])?, scale(m.0[1])?, scale(m.0[2])?]);
        let sign = if unit.is_negative() && k % 2 == 1 { -BigInt::one() } else { BigInt::one() };
        Ok(Value { terms: vec![(inv, IntegerPolynomial::constant(sign))] })
    }

    fn base(&mut self) -> Result<Value, ParseError> {
        let Some(c) = self.peek() else {
            return Err(self.error("unexpected end of input"));
        };
        let at = self.pos;
        match c {
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            b'x' | b'y' | b'z' => {
                self.pos += 1;
                let mut e = [0; 3];
                e[usize::from(c - b'x')] = 1;
                if c == b'z' {
                    self.uses_z = true;
                }
                Ok(Value { terms: vec![(Monomial(e), IntegerPolynomial::one())] })
            }
            b'a' => {
                self.pos += 1;
                self.uses_a = true;
                Ok(Value::constant(IntegerPolynomial::parameter()))
            }
            b'0'..=b'9' => {
                let n = self.integer(false)?;
                Ok(Value::constant(IntegerPolynomial::constant(n)))
            }
            c if c.is_ascii_alphabetic() => {
                Err(ParseError::UnknownVariable { name: char::from(c), position: at })
            }
            _ => Err(self.error("expected a variable, number, or '('")),
        }
    }

    fn integer(&mut self, allow_sign: bool) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let negative = allow_sign && self.src.get(self.pos) == Some(&b'-');
        if negative {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        let text = std::str::from_utf8(&self.src[digits_start..self.pos]).expect("ascii digits");
        let n: BigInt = text.parse().expect("digits parse");
        Ok(if negative { -n } else { n })
    }
}
