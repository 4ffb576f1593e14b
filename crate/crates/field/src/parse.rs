//! Recursive-descent parser for field-element expressions.
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := factor (("*" | "/") factor)*
//! factor   := atom ["^" nat]
//! atom     := rational | "t" | "(" expr ")" | "-" factor | "sqrt" "(" expr ")"
//! rational := int ["/" nat]
//! ```
//!
//! Whitespace is insignificant. A literal `2/3` is a single rational atom, so
//! `2/3^2` is `(2/3)^2`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::tower::{FieldElement, Tower};
use crate::{FieldError, ParseError};

pub fn parse_element(src: &str, tower: &Tower) -> Result<FieldElement, ParseError> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, tower };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    tower: &'a Tower,
}

impl Parser<'_> {
    fn syntax(&self, msg: &str) -> ParseError {
        ParseError::Syntax { position: self.pos, message: msg.to_string() }
    }

    fn field(&self, e: FieldError) -> ParseError {
        ParseError::Field { position: self.pos, source: e }
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

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<FieldElement, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc + self.term()?;
            } else if self.eat(b'-') {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FieldElement, ParseError> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc * self.factor()?;
            } else if self.peek() == Some(b'/') {
                self.pos += 1;
                let rhs = self.factor()?;
                let at = self.pos;
                acc = acc.try_div(&rhs).map_err(|e| ParseError::Field { position: at, source: e })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<FieldElement, ParseError> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.nat()?;
            let e = u32::try_from(exp).map_err(|_| self.syntax("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FieldElement, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b't') => {
                self.pos += 1;
                self.tower.t().map_err(|e| self.field(e))
            }
            Some(b's') => {
                if !self.src[self.pos..].starts_with(b"sqrt") {
                    return Err(self.syntax("unknown identifier"));
                }
                self.pos += 4;
                self.expect(b'(')?;
                let start = self.pos;
                let v = self.expr()?;
                self.expect(b')')?;
                v.sqrt().map_err(|e| ParseError::Field { position: start, source: e })
            }
            Some(c) if c.is_ascii_digit() => self.rational(),
            Some(_) => Err(self.syntax("expected a number, 't', 'sqrt', '-' or '('")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.syntax("expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("ascii digits parse"))
    }

    fn nat(&mut self) -> Result<u64, ParseError> {
        let v = self.digits()?;
        u64::try_from(v).map_err(|_| self.syntax("number too large"))
    }

    fn rational(&mut self) -> Result<FieldElement, ParseError> {
        let num = self.digits()?;
        // `int "/" nat` is a literal only when digits follow the slash.
        let save = self.pos;
        if self.eat(b'/') && self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let den = self.digits()?;
            if den == BigInt::from(0) {
                return Err(self.field(FieldError::DivisionByZero));
            }
            return Ok(self.tower.from_rational(BigRational::new(num, den)));
        }
        self.pos = save;
        Ok(self.tower.from_rational(BigRational::from_integer(num)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_literal() {
        let q = Tower::rationals();
        assert_eq!(q.parse("3/5").unwrap(), q.from_ratio(3, 5));
        assert_eq!(q.parse(" 2/3^2 ").unwrap(), q.from_ratio(4, 9));
        assert_eq!(q.parse("2/(3^2)").unwrap(), q.from_ratio(2, 9));
        assert_eq!(q.parse("1 - -2").unwrap(), q.from_int(3));
        assert_eq!(q.parse("-2^2").unwrap(), q.from_int(-4));
    }

    #[test]
    fn negative_radicand_is_rejected() {
        let q = Tower::rationals();
        let err = q.parse("sqrt(-1)").unwrap_err();
        assert!(matches!(err, ParseError::Field { source: FieldError::NegativeRadicand, .. }));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let q = Tower::rationals();
        match q.parse("1 + * 2").unwrap_err() {
            ParseError::Syntax { position, .. } => assert_eq!(position, 4),
            e => panic!("unexpected {e:?}"),
        }
        assert!(matches!(q.parse("(1 + 2").unwrap_err(), ParseError::Syntax { position: 6, .. }));
        assert!(matches!(q.parse("1 2").unwrap_err(), ParseError::Syntax { .. }));
        assert!(matches!(q.parse("").unwrap_err(), ParseError::Syntax { position: 0, .. }));
        assert!(matches!(q.parse("t").unwrap_err(), ParseError::Field { source: FieldError::WrongBase, .. }));
        assert!(matches!(q.parse("1/0").unwrap_err(), ParseError::Field { source: FieldError::DivisionByZero, .. }));
        assert!(matches!(q.parse("1/(1-1)").unwrap_err(), ParseError::Field { source: FieldError::DivisionByZero, .. }));
    }

    #[test]
    fn expression_over_rational_functions() {
        let k = Tower::rational_functions();
        let x = k.parse("1 + 2*t - sqrt(1+t^2)").unwrap();
        assert_eq!(k.height(), 1);
        let t = k.t().unwrap();
        let s = (k.one() + t.square()).sqrt().unwrap();
        assert_eq!(x, k.one() + k.from_int(2) * &t - s);
    }
}
