//! Integer polynomials in the tokens `T` and `z`, e.g. `T+2+4*z` or `T^2-3*z*T`.

use std::fmt;

/// Largest exponent accepted by the parser; keeps reduction cost bounded.
pub const MAX_EXPONENT: u32 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub coeff: i128,
    pub z: u32,
    pub t: u32,
}

/// A polynomial with integer coefficients in `T` and `z`, as written.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly {
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad element `{input}`: {reason} at offset {offset}")]
pub struct ExprError {
    pub input: String,
    pub offset: usize,
    pub reason: &'static str,
}

impl IntPoly {
    pub fn constant(c: i128) -> Self {
        IntPoly { terms: vec![Term { coeff: c, z: 0, t: 0 }] }
    }

    pub fn parse(s: &str) -> Result<Self, ExprError> {
        Parser { src: s, bytes: s.as_bytes(), pos: 0 }.expr()
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, term) in self.terms.iter().enumerate() {
            let neg = term.coeff < 0;
            let mag = term.coeff.unsigned_abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            let mut parts: Vec<String> = Vec::new();
            if mag != 1 || (term.z == 0 && term.t == 0) {
                parts.push(mag.to_string());
            }
            match term.z {
                0 => {}
                1 => parts.push("z".into()),
                e => parts.push(format!("z^{e}")),
            }
            match term.t {
                0 => {}
                1 => parts.push("T".into()),
                e => parts.push(format!("T^{e}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, reason: &'static str) -> ExprError {
        ExprError { input: self.src.to_string(), offset: self.pos, reason }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u128, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        self.src[start..self.pos]
            .parse::<u128>()
            .map_err(|_| self.err("number too large"))
    }

    fn expr(mut self) -> Result<IntPoly, ExprError> {
        let mut terms = Vec::new();
        let mut sign = 1i128;
        match self.peek() {
            Some(b'-') => {
                sign = -1;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            None => return Err(self.err("empty element")),
            _ => {}
        }
        loop {
            let mut t = self.term()?;
            t.coeff = t.coeff.checked_mul(sign).ok_or_else(|| self.err("coefficient overflow"))?;
            terms.push(t);
            match self.peek() {
                None => break,
                Some(b'+') => sign = 1,
                Some(b'-') => sign = -1,
                Some(_) => return Err(self.err("unexpected character")),
            }
            self.pos += 1;
        }
        Ok(IntPoly { terms })
    }

    fn term(&mut self) -> Result<Term, ExprError> {
        let mut term = Term { coeff: 1, z: 0, t: 0 };
        loop {
            let c = self.peek().ok_or_else(|| self.err("expected a factor"))?;
            let (kind, base) = match c {
                b'0'..=b'9' => (0u8, self.number()?),
                b'T' => {
                    self.pos += 1;
                    (1, 0)
                }
                b'z' => {
                    self.pos += 1;
                    (2, 0)
                }
                _ => return Err(self.err("expected a factor")),
            };
            let mut exp = 1u32;
            if self.peek() == Some(b'^') {
                self.pos += 1;
                let e = self.number()?;
                if e > MAX_EXPONENT as u128 {
                    return Err(self.err("exponent too large"));
                }
                exp = e as u32;
            }
            match kind {
                0 => {
                    let b = i128::try_from(base).map_err(|_| self.err("number too large"))?;
                    let v = b.checked_pow(exp).ok_or_else(|| self.err("coefficient overflow"))?;
                    term.coeff =
                        term.coeff.checked_mul(v).ok_or_else(|| self.err("coefficient overflow"))?;
                }
                1 => term.t = term.t.saturating_add(exp).min(MAX_EXPONENT + 1),
                _ => term.z = term.z.saturating_add(exp).min(MAX_EXPONENT + 1),
            }
            if term.t > MAX_EXPONENT || term.z > MAX_EXPONENT {
                return Err(self.err("exponent too large"));
            }
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                return Ok(term);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        for s in ["T-3", "T+2+4*z", "T+4-2*z", "27", "-T^2+3*z*T", "z^2"] {
            let p = IntPoly::parse(s).unwrap();
            assert_eq!(p.to_string(), s);
        }
        let p = IntPoly::parse(" 2 * T * 3 ").unwrap();
        assert_eq!(p.terms, vec![Term { coeff: 6, z: 0, t: 1 }]);
        assert!(IntPoly::parse("").is_err());
        assert!(IntPoly::parse("T+").is_err());
        assert!(IntPoly::parse("T^99999999").is_err());
        assert!(IntPoly::parse("x").is_err());
    }
}
