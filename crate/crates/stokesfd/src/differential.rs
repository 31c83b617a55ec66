//! Linear differential polynomials in u, v, p, f1, f2 over Q(Re, h).
//!
//! The derivative operators d/dx, d/dy act as a commutative monoid on the
//! derivative orders.  The ranking is lexicographic POT: indeterminate
//! position first (u > v > p > f1 > f2), then (dx, dy) lexicographically with
//! x > y.

use crate::coeff::ParamCoeff;
use crate::error::{Error, Result};
use crate::ring::{self, Indeterminate, LinPoly, ShiftAlgebra, Term};
use serde_json::json;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiffIndet {
    U,
    V,
    P,
    F1,
    F2,
}

impl Indeterminate for DiffIndet {
    fn position(self) -> u8 {
        match self {
            DiffIndet::U => 0,
            DiffIndet::V => 1,
            DiffIndet::P => 2,
            DiffIndet::F1 => 3,
            DiffIndet::F2 => 4,
        }
    }

    fn name(self) -> &'static str {
        match self {
            DiffIndet::U => "u",
            DiffIndet::V => "v",
            DiffIndet::P => "p",
            DiffIndet::F1 => "f1",
            DiffIndet::F2 => "f2",
        }
    }
}

impl DiffIndet {
    pub const ALL: [DiffIndet; 5] = [
        DiffIndet::U,
        DiffIndet::V,
        DiffIndet::P,
        DiffIndet::F1,
        DiffIndet::F2,
    ];

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|i| i.name() == s)
    }
}

/// A derivative of one of the dependent variables, e.g. `u_xy` = (U, 1, 1).
pub type DiffTerm = Term<DiffIndet>;

/// Construct a derivative term; orders are nonnegative.
pub fn dterm(indet: DiffIndet, dx: u32, dy: u32) -> DiffTerm {
    Term::new(indet, dx as i64, dy as i64)
}

/// The fixed differential ranking: POT with u > v > p > f1 > f2 and
/// lexicographic comparison of (dx, dy), x-order dominant.
#[derive(Debug, Clone, Copy, Default)]
pub struct DiffRanking;

impl DiffRanking {
    pub fn compare(&self, t1: &DiffTerm, t2: &DiffTerm) -> std::cmp::Ordering {
        t1.cmp(t2)
    }
}

pub const MODE: ShiftAlgebra = ShiftAlgebra::Monoid;

pub type DiffPoly = LinPoly<DiffIndet>;

/// d^(a+b)/dx^a dy^b applied to a differential polynomial (coefficients are
/// parameter-only, so differentiation is a pure index shift).
pub fn differentiate(g: &DiffPoly, a: u32, b: u32) -> DiffPoly {
    g.shifted((a as i64, b as i64))
}

pub fn normal_form(g: &DiffPoly, basis: &[DiffPoly], _r: DiffRanking) -> DiffPoly {
    ring::normal_form(g, basis, MODE)
}

/// Minimal reduced Groebner basis of the module generated by `gens`.
pub fn groebner_complete(gens: &[DiffPoly], _r: DiffRanking) -> Vec<DiffPoly> {
    ring::groebner(gens, MODE)
}

pub fn is_member(g: &DiffPoly, basis: &[DiffPoly], _r: DiffRanking) -> bool {
    ring::is_member(g, basis, MODE)
}

// --- text format -----------------------------------------------------------

fn fmt_term(t: &DiffTerm) -> String {
    let (a, b) = (t.shift.0 as usize, t.shift.1 as usize);
    if a + b == 0 {
        t.indet.name().to_string()
    } else {
        format!("{}_{}{}", t.indet.name(), "x".repeat(a), "y".repeat(b))
    }
}

/// Render as e.g. `p_xx + p_yy - f1_x - f2_y`; unit coefficients are omitted,
/// other coefficients appear as a parenthesized prefix factor.
pub fn poly_to_string(g: &DiffPoly) -> String {
    if g.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (t, c)) in g.iter().rev().enumerate() {
        let neg = c.numerator().leading_coeff() < num_bigint::BigInt::from(0);
        let mag = if neg { c.neg() } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mag.is_one() {
            out.push_str(&fmt_term(t));
        } else {
            out.push_str(&format!("({})*{}", mag, fmt_term(t)));
        }
    }
    out
}

pub fn poly_to_json(g: &DiffPoly) -> serde_json::Value {
    json!({
        "terms": g.iter().rev().map(|(t, c)| json!({
            "indet": t.indet.name(),
            "dx": t.shift.0,
            "dy": t.shift.1,
            "coeff": c.to_string(),
        })).collect::<Vec<_>>(),
        "leader": g.leader().map(fmt_term),
        "text": poly_to_string(g),
    })
}

struct PolyParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> PolyParser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let n = self.rest().len() - self.rest().trim_start().len();
        self.pos += n;
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let end = rest
            .char_indices()
            .find(|(_, c)| !c.is_alphanumeric())
            .map(|(i, _)| i)
            .unwrap_or(rest.len());
        if end == 0 {
            return None;
        }
        let s = &rest[..end];
        self.pos += end;
        Some(s)
    }

    fn parse_expr(&mut self) -> Result<DiffPoly> {
        let mut acc = self.parse_product()?;
        while let Some(c) = self.peek() {
            match c {
                '+' => {
                    self.eat('+');
                    acc = acc.add(&self.parse_product()?);
                }
                '-' => {
                    self.eat('-');
                    acc = acc.sub(&self.parse_product()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    /// One summand: coefficient factors and at most one indeterminate factor.
    fn parse_product(&mut self) -> Result<DiffPoly> {
        let mut coeff = ParamCoeff::one();
        let mut term: Option<DiffTerm> = None;
        let mut negate = false;
        while self.peek() == Some('-') {
            self.eat('-');
            negate = !negate;
        }
        loop {
            match self.parse_factor()? {
                Factor::Coeff(c) => coeff = coeff.mul(&c),
                Factor::Term(t) => {
                    if term.is_some() {
                        return Err(Error::Parse("nonlinear product of indeterminates".into()));
                    }
                    term = Some(t);
                }
            }
            match self.peek() {
                Some('*') => {
                    self.eat('*');
                }
                Some('/') => {
                    self.eat('/');
                    match self.parse_factor()? {
                        Factor::Coeff(c) => coeff = coeff.div(&c)?,
                        Factor::Term(_) => {
                            return Err(Error::Parse("division by indeterminate".into()))
                        }
                    }
                }
                _ => break,
            }
        }
        if negate {
            coeff = coeff.neg();
        }
        let t = term.ok_or_else(|| Error::Parse("summand without indeterminate".into()))?;
        Ok(DiffPoly::term(t, coeff))
    }

    fn parse_factor(&mut self) -> Result<Factor> {
        match self.peek() {
            Some('(') => {
                // coefficient subexpression
                let start = self.pos;
                let mut depth = 0;
                let mut end = None;
                for (i, c) in self.src[start..].char_indices() {
                    match c {
                        '(' => depth += 1,
                        ')' => {
                            depth -= 1;
                            if depth == 0 {
                                end = Some(start + i);
                                break;
                            }
                        }
                        _ => {}
                    }
                }
                let end = end.ok_or_else(|| Error::Parse("unbalanced parentheses".into()))?;
                let inner = &self.src[start + 1..end];
                self.pos = end + 1;
                Ok(Factor::Coeff(inner.parse()?))
            }
            Some(c) if c.is_ascii_digit() => {
                let mut s = String::new();
                while self.rest().chars().next().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(self.rest().chars().next().unwrap());
                    self.pos += 1;
                }
                // allow an exponent on a plain integer
                if self.rest().starts_with('^') {
                    self.pos += 1;
                    let mut e = String::new();
                    while self.rest().chars().next().is_some_and(|c| c.is_ascii_digit()) {
                        e.push(self.rest().chars().next().unwrap());
                        self.pos += 1;
                    }
                    s = format!("{s}^{e}");
                }
                Ok(Factor::Coeff(s.parse()?))
            }
            Some(c) if c.is_alphabetic() => {
                let id = self.ident().unwrap();
                match id {
                    "Re" => {
                        let c = self.maybe_pow(ParamCoeff::re())?;
                        Ok(Factor::Coeff(c))
                    }
                    "h" => {
                        let c = self.maybe_pow(ParamCoeff::h())?;
                        Ok(Factor::Coeff(c))
                    }
                    _ => {
                        // indeterminate with optional derivative suffix: u, u_x, f1_xyy
                        let (name, sub) = match id.split_once('_') {
                            Some((n, s)) => (n, Some(s.to_string())),
                            None => {
                                if self.rest().starts_with('_') {
                                    self.pos += 1;
                                    let sub = self.ident().unwrap_or("").to_string();
                                    (id, Some(sub))
                                } else {
                                    (id, None)
                                }
                            }
                        };
                        let indet = DiffIndet::from_name(name)
                            .ok_or_else(|| Error::Parse(format!("unknown indeterminate `{name}`")))?;
                        let (mut dx, mut dy) = (0u32, 0u32);
                        if let Some(sub) = sub {
                            for c in sub.chars() {
                                match c {
                                    'x' => dx += 1,
                                    'y' => dy += 1,
                                    other => {
                                        return Err(Error::Parse(format!(
                                            "bad derivative subscript `{other}`"
                                        )))
                                    }
                                }
                            }
                        }
                        Ok(Factor::Term(dterm(indet, dx, dy)))
                    }
                }
            }
            other => Err(Error::Parse(format!("unexpected input at {other:?}"))),
        }
    }

    fn maybe_pow(&mut self, base: ParamCoeff) -> Result<ParamCoeff> {
        if self.rest().starts_with('^') {
            self.pos += 1;
            let mut e = String::new();
            while self.rest().chars().next().is_some_and(|c| c.is_ascii_digit()) {
                e.push(self.rest().chars().next().unwrap());
                self.pos += 1;
            }
            let e: u32 = e.parse().map_err(|_| Error::Parse("bad exponent".into()))?;
            let mut acc = ParamCoeff::one();
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            Ok(acc)
        } else {
            Ok(base)
        }
    }
}

enum Factor {
    Coeff(ParamCoeff),
    Term(DiffTerm),
}

/// Parse the `p_xx + p_yy - f1_x - f2_y` format.
pub fn poly_from_str(s: &str) -> Result<DiffPoly> {
    if s.trim() == "0" {
        return Ok(DiffPoly::zero());
    }
    let mut p = PolyParser { src: s, pos: 0 };
    let e = p.parse_expr()?;
    if p.peek().is_some() {
        return Err(Error::Parse(format!("trailing input in `{s}`")));
    }
    Ok(e)
}

/// Wrapper so `str::parse` works on the text format.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedDiffPoly(pub DiffPoly);

impl FromStr for ParsedDiffPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        poly_from_str(s).map(ParsedDiffPoly)
    }
}

impl fmt::Display for ParsedDiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poly_to_string(&self.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn dp(s: &str) -> DiffPoly {
        poly_from_str(s).unwrap()
    }

    #[test]
    fn ranking_examples() {
        let r = DiffRanking;
        // u_x vs v_yy: u wins on position
        assert_eq!(
            r.compare(&dterm(DiffIndet::U, 1, 0), &dterm(DiffIndet::V, 0, 2)),
            std::cmp::Ordering::Greater
        );
        // p_xx vs p_yy: lex with x dominant
        assert_eq!(
            r.compare(&dterm(DiffIndet::P, 2, 0), &dterm(DiffIndet::P, 0, 2)),
            std::cmp::Ordering::Greater
        );
        let t = dterm(DiffIndet::F1, 1, 1);
        assert_eq!(r.compare(&t, &t), std::cmp::Ordering::Equal);
    }

    #[test]
    fn parse_and_print_roundtrip() {
        for s in [
            "p_xx + p_yy - f1_x - f2_y",
            "u_x + v_y",
            "p_x - (1/Re)*u_yy + (1/Re)*v_xy - f1",
            "(h^2*Re/6)*f2_y - (h^2*Re/6)*p_yy + (h^2/3)*v_yyy",
        ] {
            let p = dp(s);
            let p2 = dp(&poly_to_string(&p));
            assert_eq!(p, p2, "roundtrip failed for `{s}`");
        }
    }

    #[test]
    fn leader_of_momentum_is_u_yy() {
        let p = dp("p_x - (1/Re)*u_yy + (1/Re)*v_xy - f1");
        assert_eq!(p.leader(), Some(&dterm(DiffIndet::U, 0, 2)));
    }
}
