//! Linear difference polynomials on the uniform grid over Q(Re, h).
//!
//! Grid indeterminates carry integer shift offsets in the two grid indices
//! (j, k); the translations sigma_1, sigma_2 act invertibly, so polynomials
//! are handled as representatives of their translation orbit (see
//! [`crate::ring`]).  Besides the five field variables there are four
//! auxiliary grid functions ux, uy, vx, vy approximating the velocity
//! derivatives; they rank above everything else so that completion eliminates
//! them.

use crate::coeff::ParamCoeff;
use crate::error::{Error, Result};
use crate::ring::{self, Indeterminate, LinPoly, ShiftAlgebra, Term};
use serde_json::json;
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GridIndet {
    Ux,
    Uy,
    Vx,
    Vy,
    U,
    V,
    P,
    F1,
    F2,
}

impl Indeterminate for GridIndet {
    fn position(self) -> u8 {
        match self {
            GridIndet::Ux => 0,
            GridIndet::Uy => 1,
            GridIndet::Vx => 2,
            GridIndet::Vy => 3,
            GridIndet::U => 4,
            GridIndet::V => 5,
            GridIndet::P => 6,
            GridIndet::F1 => 7,
            GridIndet::F2 => 8,
        }
    }

    fn name(self) -> &'static str {
        match self {
            GridIndet::Ux => "ux",
            GridIndet::Uy => "uy",
            GridIndet::Vx => "vx",
            GridIndet::Vy => "vy",
            GridIndet::U => "u",
            GridIndet::V => "v",
            GridIndet::P => "p",
            GridIndet::F1 => "f1",
            GridIndet::F2 => "f2",
        }
    }
}

impl GridIndet {
    pub const ALL: [GridIndet; 9] = [
        GridIndet::Ux,
        GridIndet::Uy,
        GridIndet::Vx,
        GridIndet::Vy,
        GridIndet::U,
        GridIndet::V,
        GridIndet::P,
        GridIndet::F1,
        GridIndet::F2,
    ];

    pub const AUX: [GridIndet; 4] = [GridIndet::Ux, GridIndet::Uy, GridIndet::Vx, GridIndet::Vy];

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|i| i.name() == s)
    }

    /// The differential variable a grid function approximates, together with
    /// the derivative it carries (auxiliary functions stand for first
    /// derivatives of the velocities).
    pub fn continuous_counterpart(self) -> (crate::differential::DiffIndet, (u32, u32)) {
        use crate::differential::DiffIndet as D;
        match self {
            GridIndet::U => (D::U, (0, 0)),
            GridIndet::V => (D::V, (0, 0)),
            GridIndet::P => (D::P, (0, 0)),
            GridIndet::F1 => (D::F1, (0, 0)),
            GridIndet::F2 => (D::F2, (0, 0)),
            GridIndet::Ux => (D::U, (1, 0)),
            GridIndet::Uy => (D::U, (0, 1)),
            GridIndet::Vx => (D::V, (1, 0)),
            GridIndet::Vy => (D::V, (0, 1)),
        }
    }
}

/// A shifted grid function, e.g. `u[j+2,k+1]` = (U, (2, 1)).
pub type DiffnceTerm = Term<GridIndet>;

pub fn gterm(indet: GridIndet, a: i64, b: i64) -> DiffnceTerm {
    Term::new(indet, a, b)
}

/// The fixed difference ranking: POT with ux > uy > vx > vy > u > v > p >
/// f1 > f2 and lexicographic comparison of the shifts, j-offset dominant.
#[derive(Debug, Clone, Copy, Default)]
pub struct DiffnceRanking;

impl DiffnceRanking {
    pub fn compare(&self, t1: &DiffnceTerm, t2: &DiffnceTerm) -> std::cmp::Ordering {
        t1.cmp(t2)
    }
}

pub const MODE: ShiftAlgebra = ShiftAlgebra::Group;

pub type DiffncePoly = LinPoly<GridIndet>;

/// Translate by sigma_1^a sigma_2^b; coefficients are unchanged.
pub fn shift(g: &DiffncePoly, offset: (i64, i64)) -> DiffncePoly {
    g.shifted(offset)
}

pub fn normal_form_diff(g: &DiffncePoly, basis: &[DiffncePoly], _r: DiffnceRanking) -> DiffncePoly {
    ring::normal_form_full(g, basis, MODE)
}

/// Minimal reduced Groebner basis of the difference module generated by `gens`.
pub fn groebner_complete_diff(gens: &[DiffncePoly], _r: DiffnceRanking) -> Vec<DiffncePoly> {
    ring::groebner(gens, MODE)
}

pub fn is_member_diff(g: &DiffncePoly, basis: &[DiffncePoly], r: DiffnceRanking) -> bool {
    normal_form_diff(g, basis, r).is_zero()
}

/// Complete and keep only the basis elements free of the dropped
/// indeterminates.  With the dropped block ranked on top this is a basis of
/// the elimination module.
pub fn eliminate(
    gens: &[DiffncePoly],
    drop: &BTreeSet<GridIndet>,
    r: DiffnceRanking,
) -> Vec<DiffncePoly> {
    groebner_complete_diff(gens, r)
        .into_iter()
        .filter(|g| !g.iter().any(|(t, _)| drop.contains(&t.indet)))
        .collect()
}

/// A central-difference operator as a table of shifts and coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralOp {
    pub axis: u8,
    pub table: Vec<(i64, ParamCoeff)>,
}

impl CentralOp {
    /// Apply to a difference polynomial: sum of shifted copies weighted by the
    /// tabulated coefficients.
    pub fn apply(&self, g: &DiffncePoly) -> DiffncePoly {
        let mut out = DiffncePoly::zero();
        for (s, c) in &self.table {
            let off = if self.axis == 1 { (*s, 0) } else { (0, *s) };
            out = out.add(&shift(g, off).scale(c));
        }
        out
    }

    /// Apply to a single grid function at the origin.
    pub fn applied_to(&self, w: GridIndet) -> DiffncePoly {
        self.apply(&DiffncePoly::term(gterm(w, 0, 0), ParamCoeff::one()))
    }
}

/// Central-difference approximations of d/dx_i (derivative = 1) and
/// d^2/dx_i^2 (derivative = 2) with accuracy h^(2m), m in {1, 2}.
pub fn central_diff_op(axis: u8, derivative: u8, m: u32) -> Result<CentralOp> {
    assert!(axis == 1 || axis == 2, "axis must be 1 or 2");
    let c = |p: i64, q: i64, hpow: u32| {
        ParamCoeff::from_ratio(p, q)
            .div(&pow_h(hpow))
            .expect("nonzero h power")
    };
    let table = match (derivative, m) {
        (1, 1) => vec![(1, c(1, 2, 1)), (-1, c(-1, 2, 1))],
        (2, 1) => vec![(1, c(1, 1, 2)), (0, c(-2, 1, 2)), (-1, c(1, 1, 2))],
        (1, 2) => vec![
            (2, c(-1, 12, 1)),
            (1, c(8, 12, 1)),
            (-1, c(-8, 12, 1)),
            (-2, c(1, 12, 1)),
        ],
        (2, 2) => vec![
            (2, c(-1, 12, 2)),
            (1, c(16, 12, 2)),
            (0, c(-30, 12, 2)),
            (-1, c(16, 12, 2)),
            (-2, c(-1, 12, 2)),
        ],
        _ => return Err(Error::UnsupportedAccuracy(m)),
    };
    Ok(CentralOp { axis, table })
}

fn pow_h(k: u32) -> ParamCoeff {
    let mut acc = ParamCoeff::one();
    for _ in 0..k {
        acc = acc.mul(&ParamCoeff::h());
    }
    acc
}

// --- text format -----------------------------------------------------------

fn fmt_offset(idx: char, o: i64) -> String {
    match o.cmp(&0) {
        std::cmp::Ordering::Equal => idx.to_string(),
        std::cmp::Ordering::Greater => format!("{idx}+{o}"),
        std::cmp::Ordering::Less => format!("{idx}{o}"),
    }
}

fn fmt_term(t: &DiffnceTerm) -> String {
    format!(
        "{}[{},{}]",
        t.indet.name(),
        fmt_offset('j', t.shift.0),
        fmt_offset('k', t.shift.1)
    )
}

/// Render as e.g. `(1/(2*h))*u[j+2,k+1] - (1/(2*h))*u[j,k+1]`.
pub fn poly_to_string(g: &DiffncePoly) -> String {
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

pub fn poly_to_json(g: &DiffncePoly) -> serde_json::Value {
    json!({
        "terms": g.iter().rev().map(|(t, c)| json!({
            "indet": t.indet.name(),
            "dj": t.shift.0,
            "dk": t.shift.1,
            "coeff": c.to_string(),
        })).collect::<Vec<_>>(),
        "leader": g.leader().map(fmt_term),
        "text": poly_to_string(g),
    })
}

/// Parse the `u[j+2,k+1]` format with coefficient factors as in the
/// differential parser.
pub fn poly_from_str(s: &str) -> Result<DiffncePoly> {
    if s.trim() == "0" {
        return Ok(DiffncePoly::zero());
    }
    let mut p = Parser { src: s, pos: 0 };
    let e = p.parse_expr()?;
    p.skip_ws();
    if p.pos != s.len() {
        return Err(Error::Parse(format!("trailing input in `{s}`")));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
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

    fn parse_expr(&mut self) -> Result<DiffncePoly> {
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

    fn parse_product(&mut self) -> Result<DiffncePoly> {
        let mut coeff = ParamCoeff::one();
        let mut term: Option<DiffnceTerm> = None;
        let mut negate = false;
        while self.peek() == Some('-') {
            self.eat('-');
            negate = !negate;
        }
        loop {
            match self.parse_factor()? {
                DFactor::Coeff(c) => coeff = coeff.mul(&c),
                DFactor::Term(t) => {
                    if term.is_some() {
                        return Err(Error::Parse("nonlinear product of grid functions".into()));
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
                        DFactor::Coeff(c) => coeff = coeff.div(&c)?,
                        DFactor::Term(_) => {
                            return Err(Error::Parse("division by grid function".into()))
                        }
                    }
                }
                _ => break,
            }
        }
        if negate {
            coeff = coeff.neg();
        }
        let t = term.ok_or_else(|| Error::Parse("summand without grid function".into()))?;
        Ok(DiffncePoly::term(t, coeff))
    }

    fn parse_factor(&mut self) -> Result<DFactor> {
        match self.peek() {
            Some('(') => {
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
                Ok(DFactor::Coeff(inner.parse()?))
            }
            Some(c) if c.is_ascii_digit() => {
                let mut s = String::new();
                while self.rest().chars().next().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(self.rest().chars().next().unwrap());
                    self.pos += 1;
                }
                Ok(DFactor::Coeff(s.parse()?))
            }
            Some(c) if c.is_alphabetic() => {
                let rest = self.rest();
                let end = rest
                    .char_indices()
                    .find(|(_, c)| !c.is_alphanumeric())
                    .map(|(i, _)| i)
                    .unwrap_or(rest.len());
                let id = &rest[..end];
                self.pos += end;
                match id {
                    "Re" => Ok(DFactor::Coeff(ParamCoeff::re())),
                    "h" => {
                        if self.rest().starts_with('^') {
                            self.pos += 1;
                            let mut e = String::new();
                            while self.rest().chars().next().is_some_and(|c| c.is_ascii_digit()) {
                                e.push(self.rest().chars().next().unwrap());
                                self.pos += 1;
                            }
                            let e: u32 =
                                e.parse().map_err(|_| Error::Parse("bad exponent".into()))?;
                            Ok(DFactor::Coeff(pow_h(e)))
                        } else {
                            Ok(DFactor::Coeff(ParamCoeff::h()))
                        }
                    }
                    name => {
                        let indet = GridIndet::from_name(name)
                            .ok_or_else(|| Error::Parse(format!("unknown grid function `{name}`")))?;
                        if !self.eat('[') {
                            return Err(Error::Parse(format!("expected `[` after `{name}`")))?;
                        }
                        let a = self.parse_index('j')?;
                        if !self.eat(',') {
                            return Err(Error::Parse("expected `,` in grid index".into()));
                        }
                        let b = self.parse_index('k')?;
                        if !self.eat(']') {
                            return Err(Error::Parse("expected `]`".into()));
                        }
                        Ok(DFactor::Term(gterm(indet, a, b)))
                    }
                }
            }
            other => Err(Error::Parse(format!("unexpected input at {other:?}"))),
        }
    }

    fn parse_index(&mut self, idx: char) -> Result<i64> {
        if !self.eat(idx) {
            return Err(Error::Parse(format!("expected index `{idx}`")));
        }
        match self.peek() {
            Some('+') | Some('-') => {
                let sign = if self.eat('+') {
                    1
                } else {
                    self.eat('-');
                    -1
                };
                let mut s = String::new();
                while self.rest().chars().next().is_some_and(|c| c.is_ascii_digit()) {
                    s.push(self.rest().chars().next().unwrap());
                    self.pos += 1;
                }
                let n: i64 = s.parse().map_err(|_| Error::Parse("bad offset".into()))?;
                Ok(sign * n)
            }
            _ => Ok(0),
        }
    }
}

enum DFactor {
    Coeff(ParamCoeff),
    Term(DiffnceTerm),
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn qp(s: &str) -> DiffncePoly {
        poly_from_str(s).unwrap()
    }

    #[test]
    fn shift_examples() {
        let u = qp("u[j,k]");
        assert_eq!(shift(&u, (1, 0)), qp("u[j+1,k]"));
        let g = qp("u[j+1,k] - (1/(2*h))*p[j,k-1]");
        assert_eq!(shift(&g, (0, 0)), g);
        assert_eq!(shift(&shift(&g, (1, 2)), (-1, -2)), g);
    }

    #[test]
    fn parse_and_print_roundtrip() {
        for s in [
            "(1/(2*h))*u[j+2,k+1] - (1/(2*h))*u[j,k+1]",
            "ux[j+1,k] + ux[j,k]",
            "p[j,k] - p[j-2,k-3]",
        ] {
            let p = qp(s);
            let p2 = qp(&poly_to_string(&p));
            assert_eq!(p, p2, "roundtrip failed for `{s}`");
        }
    }

    #[test]
    fn central_op_tables() {
        let d11 = central_diff_op(1, 1, 1).unwrap();
        assert_eq!(
            d11.applied_to(GridIndet::U),
            qp("(1/(2*h))*u[j+1,k] - (1/(2*h))*u[j-1,k]")
        );
        let d22 = central_diff_op(1, 2, 2).unwrap();
        assert_eq!(
            d22.applied_to(GridIndet::U),
            qp("(-1/(12*h^2))*u[j+2,k] + (16/(12*h^2))*u[j+1,k] - (30/(12*h^2))*u[j,k] + (16/(12*h^2))*u[j-1,k] - (1/(12*h^2))*u[j-2,k]")
        );
        assert!(matches!(
            central_diff_op(1, 1, 3),
            Err(Error::UnsupportedAccuracy(3))
        ));
    }

    #[test]
    fn translation_compatible_ranking() {
        let r = DiffnceRanking;
        let t1 = gterm(GridIndet::U, 2, 1);
        let t2 = gterm(GridIndet::U, 1, 2);
        assert_eq!(r.compare(&t1, &t2), std::cmp::Ordering::Greater);
        let s1 = gterm(GridIndet::U, 2 + 5, 1 - 3);
        let s2 = gterm(GridIndet::U, 1 + 5, 2 - 3);
        assert_eq!(r.compare(&s1, &s2), std::cmp::Ordering::Greater);
    }
}
