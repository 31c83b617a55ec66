//! Textual form of coefficients: `p(Re,h)/q(Re,h)` with explicit `*` and `^`,
//! e.g. `h^2/(12*Re)`.  `Display` and `FromStr` round-trip exactly.

use super::poly::IntPoly;
use super::ParamCoeff;
use crate::error::Error;
use num_bigint::BigInt;
use num_traits::{One, Signed};
use std::fmt;
use std::str::FromStr;

fn fmt_poly(p: &IntPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by_key(|(e, _)| std::cmp::Reverse((e.0 + e.1, e.0)));
    let mut out = String::new();
    for (i, (e, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.magnitude();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        if !mag.is_one() || (e.0 == 0 && e.1 == 0) {
            factors.push(mag.to_string());
        }
        if e.0 > 0 {
            factors.push(if e.0 == 1 { "Re".into() } else { format!("Re^{}", e.0) });
        }
        if e.1 > 0 {
            factors.push(if e.1 == 1 { "h".into() } else { format!("h^{}", e.1) });
        }
        out.push_str(&factors.join("*"));
    }
    out
}

impl fmt::Display for ParamCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = fmt_poly(self.numerator());
        if self.denominator().is_one() {
            return write!(f, "{n}");
        }
        let d = fmt_poly(self.denominator());
        let n = if self.numerator().num_terms() > 1 {
            format!("({n})")
        } else {
            n
        };
        let d = if d.contains(['*', '+', '-', '^']) {
            format!("({d})")
        } else {
            d
        };
        write!(f, "{n}/{d}")
    }
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            chars: s.chars().peekable(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.next()
    }

    fn expr(&mut self) -> Result<ParamCoeff, Error> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                '-' => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ParamCoeff, Error> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                '/' => {
                    self.bump();
                    acc = acc.div(&self.unary()?)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ParamCoeff, Error> {
        if self.peek() == Some('-') {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<ParamCoeff, Error> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.bump();
            let e = self.uint()?;
            let mut acc = ParamCoeff::one();
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ParamCoeff, Error> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                if self.bump() != Some(')') {
                    return Err(Error::Parse("expected `)`".into()));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.bigint()?;
                Ok(ParamCoeff::new(
                    IntPoly::monomial(n, 0, 0),
                    IntPoly::one(),
                )
                .unwrap())
            }
            Some(c) if c.is_alphabetic() => {
                let mut name = String::new();
                while self
                    .chars
                    .peek()
                    .is_some_and(|c| c.is_alphanumeric() || *c == '_')
                {
                    name.push(self.chars.next().unwrap());
                }
                match name.as_str() {
                    "Re" => Ok(ParamCoeff::re()),
                    "h" => Ok(ParamCoeff::h()),
                    other => Err(Error::Parse(format!("unknown symbol `{other}`"))),
                }
            }
            other => Err(Error::Parse(format!("unexpected input at {other:?}"))),
        }
    }

    fn uint(&mut self) -> Result<u32, Error> {
        self.skip_ws();
        let mut s = String::new();
        while self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
            s.push(self.chars.next().unwrap());
        }
        s.parse()
            .map_err(|_| Error::Parse("expected integer exponent".into()))
    }

    fn bigint(&mut self) -> Result<BigInt, Error> {
        self.skip_ws();
        let mut s = String::new();
        while self.chars.peek().is_some_and(|c| c.is_ascii_digit()) {
            s.push(self.chars.next().unwrap());
        }
        s.parse()
            .map_err(|_| Error::Parse("expected integer".into()))
    }

    fn finish(mut self) -> Result<(), Error> {
        if let Some(c) = self.peek() {
            return Err(Error::Parse(format!("trailing input `{c}`")));
        }
        Ok(())
    }
}

impl FromStr for ParamCoeff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut p = Parser::new(s);
        let e = p.expr()?;
        p.finish()?;
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_expected_forms() {
        let c: ParamCoeff = "h^2/(12*Re)".parse().unwrap();
        assert_eq!(c.to_string(), "h^2/(12*Re)");
        let c: ParamCoeff = "-h/Re".parse().unwrap();
        assert_eq!(c.to_string(), "-h/Re");
        let c: ParamCoeff = "1/(2*h)".parse().unwrap();
        assert_eq!(c.to_string(), "1/(2*h)");
    }

    #[test]
    fn roundtrip_composite() {
        for s in [
            "(Re^2 + 2*h)/(3*Re*h^2)",
            "0",
            "5",
            "-2/3",
            "(h + 1)/(h - 1)",
        ] {
            let c: ParamCoeff = s.parse().unwrap();
            let c2: ParamCoeff = c.to_string().parse().unwrap();
            assert_eq!(c, c2, "failed roundtrip for {s}");
        }
    }
}
