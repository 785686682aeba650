//! Text form of polynomials.
//!
//! ```text
//! poly := term (('+' | '-') term)*
//! term := coef ('*'? 'x' ('^' nat)?)? | 'x' ('^' nat)?
//! coef := int | int '/' nat
//! ```
//!
//! Whitespace is ignored everywhere; an optional sign may precede the first
//! term. Repeated powers accumulate. Errors carry the byte offset.

use super::{PolyError, Polynomial, Rational};
use num_bigint::BigInt;
use num_traits::Zero;

pub fn parse_polynomial(input: &str) -> Result<Polynomial, PolyError> {
    let mut p = Parser { bytes: input.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(PolyError::EmptyInput);
    }
    let mut coeffs: Vec<Rational> = Vec::new();
    let mut negate = match p.peek() {
        Some(b'-') => {
            p.pos += 1;
            true
        }
        Some(b'+') => {
            p.pos += 1;
            false
        }
        _ => false,
    };
    loop {
        let (mut coef, power) = p.term()?;
        if negate {
            coef = -coef;
        }
        if coeffs.len() <= power {
            coeffs.resize(power + 1, Rational::zero());
        }
        coeffs[power] += coef;
        p.skip_ws();
        if p.at_end() {
            break;
        }
        negate = match p.peek() {
            Some(b'+') => false,
            Some(b'-') => true,
            _ => {
                return Err(p.syntax("expected '+' or '-' between terms"));
            }
        };
        p.pos += 1;
    }
    Ok(Polynomial::new(coeffs))
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn skip_ws(&mut self) {
        while self.peek().map_or(false, |b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn syntax(&self, message: &str) -> PolyError {
        PolyError::Syntax { offset: self.pos, message: message.to_string() }
    }

    /// One term: returns (coefficient, power).
    fn term(&mut self) -> Result<(Rational, usize), PolyError> {
        self.skip_ws();
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                let power = self.exponent()?;
                Ok((Rational::from_integer(1.into()), power))
            }
            Some(b) if b.is_ascii_digit() || b == b'-' => {
                let num = self.integer()?;
                self.skip_ws();
                let coef = if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let den_off = self.pos;
                    let den = self.natural()?;
                    if den.is_zero() {
                        return Err(PolyError::Syntax {
                            offset: den_off,
                            message: "zero denominator".to_string(),
                        });
                    }
                    Rational::new(num, den)
                } else {
                    Rational::from_integer(num)
                };
                self.skip_ws();
                let starred = if self.peek() == Some(b'*') {
                    self.pos += 1;
                    self.skip_ws();
                    true
                } else {
                    false
                };
                if self.peek() == Some(b'x') {
                    self.pos += 1;
                    let power = self.exponent()?;
                    Ok((coef, power))
                } else if starred {
                    Err(self.syntax("expected 'x' after '*'"))
                } else {
                    Ok((coef, 0))
                }
            }
            _ => Err(self.syntax("expected coefficient or 'x'")),
        }
    }

    /// Optional `^ nat` following an `x`.
    fn exponent(&mut self) -> Result<usize, PolyError> {
        self.skip_ws();
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        self.skip_ws();
        if self.peek() == Some(b'-') {
            return Err(PolyError::NegativeExponent { offset: self.pos });
        }
        let off = self.pos;
        let n = self.natural()?;
        n.try_into().map_err(|_| PolyError::Syntax {
            offset: off,
            message: "exponent too large".to_string(),
        })
    }

    fn integer(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.peek().map_or(false, |b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(PolyError::Syntax {
                offset: self.pos,
                message: "expected digits".to_string(),
            });
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn natural(&mut self) -> Result<BigInt, PolyError> {
        let start = self.pos;
        while self.peek().map_or(false, |b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(PolyError::Syntax {
                offset: self.pos,
                message: "expected digits".to_string(),
            });
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }
}
