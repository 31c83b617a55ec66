//! Exact arithmetic in the coefficient field Q(Re, h).
//!
//! A [`ParamCoeff`] is a reduced fraction of integer polynomials in the two
//! formal parameters `Re` (Reynolds number) and `h` (grid spacing).  Canonical
//! form: numerator and denominator share no polynomial factor, their integer
//! coefficients have joint content 1, the denominator's leading coefficient
//! (graded lex, Re > h) is positive, and zero is `0/1`.  All arithmetic stays
//! exact; floating point enters only in the numerics module.

mod parse;
pub mod poly;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use poly::{divide_exact, IntPoly};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamCoeff {
    num: IntPoly,
    den: IntPoly,
}

impl ParamCoeff {
    /// Build the canonical representative of `num/den`.
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonicalize_parts(num, den))
    }

    fn canonicalize_parts(num: IntPoly, den: IntPoly) -> Self {
        if num.is_zero() {
            return ParamCoeff {
                num: IntPoly::zero(),
                den: IntPoly::one(),
            };
        }
        let g = IntPoly::gcd(&num, &den);
        let mut num = divide_exact(&num, &g);
        let mut den = divide_exact(&den, &g);
        let c = num.content().gcd(&den.content());
        if !c.is_one() {
            num = divide_exact(&num, &IntPoly::monomial(c.clone(), 0, 0));
            den = divide_exact(&den, &IntPoly::monomial(c, 0, 0));
        }
        if den.leading_coeff().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        ParamCoeff { num, den }
    }

    /// Canonicalization is idempotent; exposed for tests and for rebuilding
    /// after external manipulation of the parts.
    pub fn canonicalize(&self) -> Self {
        Self::canonicalize_parts(self.num.clone(), self.den.clone())
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    pub fn zero() -> Self {
        ParamCoeff {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        ParamCoeff {
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        ParamCoeff {
            num: IntPoly::from_int(n),
            den: IntPoly::one(),
        }
    }

    /// The fraction p/q of two integers.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self::new(IntPoly::from_int(p), IntPoly::from_int(q)).expect("nonzero q")
    }

    /// The parameter Re.
    pub fn re() -> Self {
        ParamCoeff {
            num: IntPoly::monomial(BigInt::one(), 1, 0),
            den: IntPoly::one(),
        }
    }

    /// The parameter h.
    pub fn h() -> Self {
        ParamCoeff {
            num: IntPoly::monomial(BigInt::one(), 0, 1),
            den: IntPoly::one(),
        }
    }

    /// c * Re^a * h^b as a convenience constructor.
    pub fn monomial(p: i64, q: i64, re: u32, h: u32) -> Self {
        Self::new(IntPoly::monomial(BigInt::from(p), re, h), IntPoly::from_int(q))
            .expect("nonzero q")
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::canonicalize_parts(num, den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        ParamCoeff {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::canonicalize_parts(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::canonicalize_parts(
            self.num.mul(&other.den),
            self.den.mul(&other.num),
        ))
    }

    pub fn inv(&self) -> Result<Self> {
        Self::one().div(self)
    }

    /// h-adic valuation: lowest power of h in the Laurent expansion at h = 0.
    /// `None` encodes +infinity (the zero element).
    pub fn h_order(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let vn = self.num.h_valuation().unwrap() as i64;
        let vd = self.den.h_valuation().unwrap() as i64;
        Some(vn - vd)
    }

    /// True when the value involves neither a positive nor a negative power of h.
    pub fn is_h_free(&self) -> bool {
        self.num.is_h_free() && self.den.is_h_free()
    }

    /// Exact evaluation at rational parameter values.
    pub fn evaluate(&self, re: &BigRational, h: &BigRational) -> Result<BigRational> {
        let d = self.den.evaluate(re, h);
        if d.is_zero() {
            return Err(Error::PoleAtEvaluation);
        }
        Ok(self.num.evaluate(re, h) / d)
    }

    /// Evaluation into f64 for the numerics bridge.
    pub fn evaluate_f64(&self, re: f64, h: f64) -> Result<f64> {
        let conv = |x: f64| -> BigRational {
            BigRational::from_float(x).expect("finite parameter value")
        };
        let v = self.evaluate(&conv(re), &conv(h))?;
        let n = v.numer();
        let d = v.denom();
        // avoid overflow for huge exact rationals: go through string-free division
        let nf = bigint_to_f64(n);
        let df = bigint_to_f64(d);
        Ok(nf / df)
    }

    /// Coefficients of the h-Laurent series about h = 0, as h-free elements:
    /// returns pairs (power, coefficient) for all powers `<= upto` with nonzero
    /// coefficient, starting at the h-order.
    pub fn h_series(&self, upto: i64) -> Vec<(i64, ParamCoeff)> {
        if self.is_zero() {
            return Vec::new();
        }
        let vn = self.num.h_valuation().unwrap();
        let vd = self.den.h_valuation().unwrap();
        let ord = vn as i64 - vd as i64;
        if ord > upto {
            return Vec::new();
        }
        let n0 = self.num.shift_h_down(vn);
        let d0 = self.den.shift_h_down(vd);
        let k = (upto - ord) as u32;
        // invert d0 as a power series in h with h-free ParamCoeff coefficients
        let dc: Vec<ParamCoeff> = (0..=k)
            .map(|i| ParamCoeff {
                num: d0.h_coeff(i),
                den: IntPoly::one(),
            })
            .collect();
        let d0inv = dc[0].inv().expect("leading series coefficient nonzero");
        let mut inv: Vec<ParamCoeff> = Vec::with_capacity(k as usize + 1);
        inv.push(d0inv.clone());
        for i in 1..=(k as usize) {
            let mut acc = ParamCoeff::zero();
            for j in 1..=i {
                acc = acc.add(&dc[j].mul(&inv[i - j]));
            }
            inv.push(acc.neg().mul(&d0inv));
        }
        let nc: Vec<ParamCoeff> = (0..=k)
            .map(|i| ParamCoeff {
                num: n0.h_coeff(i),
                den: IntPoly::one(),
            })
            .collect();
        let mut out = Vec::new();
        for i in 0..=(k as usize) {
            let mut acc = ParamCoeff::zero();
            for j in 0..=i {
                acc = acc.add(&nc[j].mul(&inv[i - j]));
            }
            if !acc.is_zero() {
                out.push((ord + i as i64, acc));
            }
        }
        out
    }
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    // num's to_f64 saturates cleanly; fall back through string only if absent
    num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pc(s: &str) -> ParamCoeff {
        s.parse().unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        // 2h^2 / 4h -> h/2
        let c = ParamCoeff::new(
            IntPoly::monomial(BigInt::from(2), 0, 2),
            IntPoly::monomial(BigInt::from(4), 0, 1),
        )
        .unwrap();
        assert_eq!(c, pc("h/2"));
        // 0/Re -> 0/1
        let z = ParamCoeff::new(IntPoly::zero(), IntPoly::monomial(BigInt::one(), 1, 0)).unwrap();
        assert_eq!(z, ParamCoeff::zero());
        assert!(z.denominator().is_one());
        // -h / -Re -> h/Re
        let c = ParamCoeff::new(
            IntPoly::monomial(BigInt::from(-1), 0, 1),
            IntPoly::monomial(BigInt::from(-1), 1, 0),
        )
        .unwrap();
        assert_eq!(c, pc("h/Re"));
    }

    #[test]
    fn canonicalize_idempotent() {
        let c = pc("(2*h^2 + 2*h)/(4*h*Re)");
        assert_eq!(c.canonicalize(), c);
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(matches!(
            ParamCoeff::new(IntPoly::one(), IntPoly::zero()),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn h_order_examples() {
        assert_eq!(pc("h^2/(12*Re)").h_order(), Some(2));
        assert_eq!(pc("1/(2*h)").h_order(), Some(-1));
        assert_eq!(ParamCoeff::zero().h_order(), None);
    }

    #[test]
    fn evaluate_examples() {
        let r = |p: i64, q: i64| BigRational::new(BigInt::from(p), BigInt::from(q));
        // 1/(2h) at h = 1/10 -> 5
        let v = pc("1/(2*h)").evaluate(&r(1, 1), &r(1, 10)).unwrap();
        assert_eq!(v, r(5, 1));
        // h^2 Re / 6 at h = 1/2, Re = 100 -> 25/6
        let v = pc("h^2*Re/6").evaluate(&r(100, 1), &r(1, 2)).unwrap();
        assert_eq!(v, r(25, 6));
        // 1/(Re - 1) at Re = 1 -> pole
        assert!(matches!(
            pc("1/(Re - 1)").evaluate(&r(1, 1), &r(1, 2)),
            Err(Error::PoleAtEvaluation)
        ));
    }

    #[test]
    fn h_series_of_simple_fraction() {
        // 1/(2 + h) = 1/2 - h/4 + h^2/8 - ...
        let s = pc("1/(2 + h)").h_series(2);
        assert_eq!(s.len(), 3);
        assert_eq!(s[0], (0, pc("1/2")));
        assert_eq!(s[1], (1, pc("-1/4")));
        assert_eq!(s[2], (2, pc("1/8")));
        // and a Laurent one: (1 + h)/h^2 starts at -2
        let s = pc("(1 + h)/h^2").h_series(0);
        assert_eq!(s, vec![(-2, pc("1")), (-1, pc("1"))]);
    }
}
