//! Small recursive-descent parser shared by the scalar and polynomial text formats.
//!
//! Grammar (whitespace ignored between tokens):
//!
//! ```text
//! expr    := sign? term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := '-' factor | primary ('^' UINT)?
//! primary := UINT | IDENT | 'sqrt' '(' '-'? UINT ')' | '(' expr ')'
//! ```

use num_bigint::BigInt;

use crate::scalars::ScalarError;

/// Values an expression can evaluate to.
pub(crate) trait ExprValue: Sized {
    fn from_int(n: BigInt) -> Self;
    fn sqrt_of(d: BigInt) -> Result<Self, ScalarError>;
    fn variable(name: &str) -> Option<Self>;
    fn plus(self, rhs: Self) -> Result<Self, ScalarError>;
    fn minus(self, rhs: Self) -> Result<Self, ScalarError>;
    fn times(self, rhs: Self) -> Result<Self, ScalarError>;
    fn over(self, rhs: Self) -> Result<Self, ScalarError>;
    fn negate(self) -> Self;
    fn power(self, e: u32) -> Result<Self, ScalarError>;
}

pub(crate) fn parse<T: ExprValue>(text: &str) -> Result<T, ScalarError> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ScalarError {
        ScalarError::Parse { offset: self.pos, message: msg.to_string() }
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

    fn expect(&mut self, c: u8) -> Result<(), ScalarError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr<T: ExprValue>(&mut self) -> Result<T, ScalarError> {
        let mut acc = if self.eat(b'-') {
            self.term::<T>()?.negate()
        } else {
            self.eat(b'+');
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                acc = acc.plus(rhs)?;
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                acc = acc.minus(rhs)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<T: ExprValue>(&mut self) -> Result<T, ScalarError> {
        let mut acc: T = self.factor()?;
        loop {
            if self.eat(b'*') {
                let rhs = self.factor()?;
                acc = acc.times(rhs)?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.factor()?;
                acc = acc.over(rhs).map_err(|e| match e {
                    ScalarError::Parse { message, .. } => ScalarError::Parse { offset: at, message },
                    other => other,
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor<T: ExprValue>(&mut self) -> Result<T, ScalarError> {
        if self.eat(b'-') {
            return Ok(self.factor::<T>()?.negate());
        }
        let base: T = self.primary()?;
        if self.eat(b'^') {
            self.skip_ws();
            let e = self.uint()?;
            let e: u32 = e.try_into().map_err(|_| self.err("exponent too large"))?;
            return base.power(e);
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            self.pos = start;
            return Err(self.err("expected integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digit string"))
    }

    fn primary<T: ExprValue>(&mut self) -> Result<T, ScalarError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(T::from_int(self.uint()?)),
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii ident");
                if name == "sqrt" {
                    self.expect(b'(')?;
                    let neg = self.eat(b'-');
                    let arg_at = self.pos;
                    let mut d = self.uint()?;
                    if neg {
                        d = -d;
                    }
                    self.expect(b')')?;
                    return T::sqrt_of(d).map_err(|e| match e {
                        ScalarError::Parse { message, .. } => {
                            ScalarError::Parse { offset: arg_at, message }
                        }
                        other => other,
                    });
                }
                T::variable(name).ok_or_else(|| {
                    ScalarError::Parse { offset: start, message: format!("unknown symbol '{name}'") }
                })
            }
            _ => Err(self.err("expected number, symbol or '('")),
        }
    }
}
