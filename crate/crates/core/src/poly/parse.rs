//! Text syntax: `2*x0^3*x2 + x1^2*x2 - [0,1]*x0*x1^2`.
//!
//! Integers are reduced mod p; `[a0,a1,..]` is a digit tuple in the
//! polynomial basis of `F_q`. Errors report 1-based columns on line 1; the
//! spec-file parser shifts them to the right line.

use std::collections::BTreeMap;

use super::{MPoly, Monomial};
use crate::error::{Error, Result};
use crate::field::Field;

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn col(&self) -> usize {
        self.pos + 1
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(1, self.col(), msg)
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::parse(1, start + 1, "number too large"))
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{}'", c as char)))
        }
    }
}

pub(super) fn parse_poly(field: &Field, nvars: usize, text: &str) -> Result<MPoly> {
    let mut cur = Cursor {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut terms: BTreeMap<Monomial, u32> = BTreeMap::new();
    let mut degree: Option<(u32, usize)> = None;
    let mut first = true;
    loop {
        let mut negate = false;
        match cur.peek() {
            None if first => return Err(cur.err("empty polynomial")),
            None => break,
            Some(b'+') if !first => cur.pos += 1,
            Some(b'-') => {
                cur.pos += 1;
                negate = true;
            }
            Some(_) if first => {}
            Some(c) => return Err(cur.err(format!("unexpected '{}'", c as char))),
        }
        first = false;
        cur.skip_ws();
        let term_col = cur.col();
        let (exps, mut c) = parse_term(&mut cur, field, nvars)?;
        if negate {
            c = field.neg(c);
        }
        let deg: u32 = exps.iter().sum();
        if c != 0 {
            match degree {
                None => degree = Some((deg, term_col)),
                Some((d, _)) if d != deg => {
                    return Err(Error::parse(
                        1,
                        term_col,
                        format!("term of degree {deg} in a form of degree {d}"),
                    ))
                }
                _ => {}
            }
        }
        let slot = terms.entry(exps).or_insert(0);
        *slot = field.add(*slot, c);
    }
    terms.retain(|_, c| *c != 0);
    // All-zero input: take the degree of the first term as written.
    let d = match degree {
        Some((d, _)) => d,
        None => terms.keys().next().map(|m| m.iter().sum()).unwrap_or(0),
    };
    MPoly::from_terms(field, nvars, d, terms)
}

fn parse_term(cur: &mut Cursor<'_>, field: &Field, nvars: usize) -> Result<(Monomial, u32)> {
    let mut exps = vec![0u32; nvars];
    let mut coef = 1u32;
    loop {
        match cur.peek() {
            Some(b'x') => {
                cur.pos += 1;
                let col = cur.col();
                let var = cur.number()? as usize;
                if var >= nvars {
                    return Err(Error::parse(
                        1,
                        col,
                        format!("variable x{var} out of range (x0..x{})", nvars - 1),
                    ));
                }
                let mut e = 1u32;
                if cur.peek() == Some(b'^') {
                    cur.pos += 1;
                    if !matches!(cur.peek(), Some(c) if c.is_ascii_digit()) {
                        return Err(cur.err("malformed exponent"));
                    }
                    let col = cur.col();
                    e = u32::try_from(cur.number()?)
                        .ok()
                        .filter(|&e| e <= 1 << 16)
                        .ok_or_else(|| Error::parse(1, col, "exponent too large"))?;
                }
                exps[var] += e;
            }
            Some(c) if c.is_ascii_digit() => {
                let n = cur.number()?;
                coef = field.mul(coef, (n % field.p() as u64) as u32);
            }
            Some(b'[') => {
                cur.pos += 1;
                let col = cur.col();
                let mut digits = vec![cur.number()? as u32];
                while cur.peek() == Some(b',') {
                    cur.pos += 1;
                    digits.push(cur.number()? as u32);
                }
                cur.expect(b']')?;
                let c = field
                    .from_digits(&digits)
                    .map_err(|e| Error::parse(1, col, e.to_string()))?;
                coef = field.mul(coef, c);
            }
            Some(c) => return Err(cur.err(format!("unexpected '{}'", c as char))),
            None => return Err(cur.err("unexpected end of input")),
        }
        if cur.peek() == Some(b'*') {
            cur.pos += 1;
        } else {
            return Ok((exps, coef));
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::error::Error;
    use crate::field::make_field;
    use crate::poly::MPoly;

    #[test]
    fn parses_and_prints_canonically() {
        let f3 = make_field(3, 1).unwrap();
        let g = MPoly::parse(&f3, 3, "x1^2*x2 - x0^3 - x0^2*x2").unwrap();
        assert_eq!(g.to_string(), "2*x0^3 + 2*x0^2*x2 + x1^2*x2");
        let g2 = MPoly::parse(&f3, 3, &g.to_string()).unwrap();
        assert_eq!(g, g2);
        let h = MPoly::parse(&f3, 3, "2 * x0 * x1 + x1*x0").unwrap();
        assert!(h.is_zero());
        assert_eq!(h.degree(), 2);
    }

    #[test]
    fn reports_error_locations() {
        let f2 = make_field(2, 1).unwrap();
        match MPoly::parse(&f2, 3, "x0^ + x1") {
            Err(Error::Parse { line: 1, col, .. }) => assert_eq!(col, 5),
            other => panic!("unexpected {other:?}"),
        }
        match MPoly::parse(&f2, 3, "x0^2 + x1") {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 8),
            other => panic!("unexpected {other:?}"),
        }
        assert!(MPoly::parse(&f2, 2, "x2").is_err());
        assert!(MPoly::parse(&f2, 2, "").is_err());
        assert!(MPoly::parse(&f2, 2, "x0 +").is_err());
    }
}
