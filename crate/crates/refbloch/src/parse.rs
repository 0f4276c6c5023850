//! Text syntax for field elements and projective points.
//!
//! Functional forms `add(..)`, `mul(..)`, `neg(x)`, `inv(x)`, `sqrt(x)` mix
//! freely with infix `+ - * /`, unary minus, parentheses and integer powers
//! `x^k`. `inf` denotes the point at infinity where a point is expected.

use std::fmt;

use num_bigint::BigInt;
use refbloch_core::configurations::ProjPoint;
use refbloch_core::expr::Expr;
use refbloch_core::field::Field;

/// Largest `|k|` accepted in `x^k`.
const MAX_POWER: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at position {}: {}",
            self.position, self.message
        )
    }
}

impl std::error::Error for ParseError {}

/// Parse a full expression; trailing input is an error.
pub fn parse_expr(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser {
        src: input.as_bytes(),
        pos: 0,
    };
    let e = p.sum()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error(format!("unexpected '{}'", p.src[p.pos] as char)));
    }
    Ok(e)
}

/// A point of the projective line: `inf` or an expression.
pub fn parse_point(input: &str) -> Result<Option<Expr>, ParseError> {
    if input.trim() == "inf" {
        return Ok(None);
    }
    parse_expr(input).map(Some)
}

/// Evaluate a parsed point in `ctx`.
pub fn eval_point<F: Field>(
    p: Option<&Expr>,
    ctx: &mut F::Context,
) -> refbloch_core::Result<ProjPoint<F>> {
    Ok(match p {
        None => ProjPoint::Infinity,
        Some(e) => ProjPoint::Finite(e.evaluate(ctx)?),
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.into(),
        }
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

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(d) if d == c => {
                self.pos += 1;
                Ok(())
            }
            Some(d) => Err(self.error(format!("expected '{}', found '{}'", c as char, d as char))),
            None => Err(self.error(format!("expected '{}', found end of input", c as char))),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.product()?];
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    terms.push(self.product()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    terms.push(-self.product()?);
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            Expr::Add(terms)
        })
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.unary()?];
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    factors.push(self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    factors.push(Expr::inv(self.unary()?));
                }
                _ => break,
            }
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            Expr::Mul(factors)
        })
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.pos;
        let k: i64 = self
            .digits()
            .and_then(|d| d.parse().ok())
            .filter(|k| *k <= MAX_POWER)
            .ok_or_else(|| ParseError {
                position: at,
                message: format!("expected an exponent of at most {MAX_POWER}"),
            })?;
        let e = match k {
            0 => Expr::int(1),
            1 => base,
            _ => Expr::Mul(vec![base; k as usize]),
        };
        Ok(if negative { Expr::inv(e) } else { e })
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap();
                Ok(Expr::Int(d.parse::<BigInt>().expect("decimal digits")))
            }
            Some(c) if c.is_ascii_alphabetic() => self.call(),
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn call(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
        let arity = match name.as_str() {
            "add" | "mul" => None,
            "neg" | "inv" | "sqrt" => Some(1),
            _ => {
                return Err(ParseError {
                    position: start,
                    message: format!("unknown function '{name}'"),
                })
            }
        };
        self.expect(b'(')?;
        let mut args = Vec::new();
        if self.peek() != Some(b')') {
            args.push(self.sum()?);
            while self.peek() == Some(b',') {
                self.pos += 1;
                args.push(self.sum()?);
            }
        }
        self.expect(b')')?;
        if let Some(n) = arity {
            if args.len() != n {
                return Err(ParseError {
                    position: start,
                    message: format!("'{name}' takes {n} argument, got {}", args.len()),
                });
            }
        }
        Ok(match name.as_str() {
            "add" => Expr::Add(args),
            "mul" => Expr::Mul(args),
            "neg" => -args.pop().unwrap(),
            "inv" => Expr::inv(args.pop().unwrap()),
            _ => Expr::sqrt(args.pop().unwrap()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use refbloch_core::field::Rational;

    fn eval_q(s: &str) -> Rational {
        parse_expr(s)
            .unwrap()
            .evaluate::<Rational>(&mut ())
            .unwrap()
    }

    #[test]
    fn infix_and_functional_agree() {
        assert_eq!(
            eval_q("1 - 2/3*3"),
            eval_q("add(1, neg(mul(2, inv(3), 3)))")
        );
        assert_eq!(eval_q("-2^3"), Rational::from_integer((-8).into()));
        assert_eq!(eval_q("2^-2"), Rational::new(1.into(), 4.into()));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_expr("1 + foo(2)").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse_expr("sqrt(2").unwrap_err();
        assert_eq!(e.position, 6);
        let e = parse_expr("2 3").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(parse_expr("neg(1, 2)").is_err());
    }

    #[test]
    fn infinity_is_a_point() {
        assert_eq!(parse_point(" inf ").unwrap(), None);
        assert!(parse_point("3").unwrap().is_some());
    }
}
