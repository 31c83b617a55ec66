//! Bivariate integer polynomials in the formal parameters `Re` and `h`.
//!
//! These are the numerators and denominators of [`super::ParamCoeff`].
//! Exponent keys are `(re, h)` pairs; coefficients are arbitrary-precision
//! integers.  The monomial order used for leading-coefficient extraction is
//! graded lexicographic with `Re > h`, fixed once so canonical forms are
//! reproducible.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;

/// Key = (exponent of Re, exponent of h).
pub type Exp = (u32, u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    terms: BTreeMap<Exp, BigInt>,
}

fn grlex(e: &Exp) -> (u32, u32) {
    (e.0 + e.1, e.0)
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly::default()
    }

    pub fn one() -> Self {
        IntPoly::monomial(BigInt::one(), 0, 0)
    }

    pub fn monomial(c: BigInt, re: u32, h: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((re, h), c);
        }
        IntPoly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        IntPoly::monomial(BigInt::from(n), 0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, e: Exp, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert(*e, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        IntPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = IntPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.insert((ea.0 + eb.0, ea.1 + eb.1), ca * cb);
            }
        }
        out
    }

    pub fn mul_bigint(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return IntPoly::zero();
        }
        IntPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Exact division by an integer; panics if not exact (internal use after content computation).
    fn div_bigint_exact(&self, k: &BigInt) -> Self {
        IntPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let (q, r) = c.div_rem(k);
                    debug_assert!(r.is_zero());
                    (*e, q)
                })
                .collect(),
        }
    }

    /// gcd of all integer coefficients, always nonnegative; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Leading exponent under graded lex with Re > h.
    pub fn leading_exp(&self) -> Option<Exp> {
        self.terms.keys().max_by_key(|e| grlex(e)).copied()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.leading_exp()
            .map(|e| self.terms[&e].clone())
            .unwrap_or_else(BigInt::zero)
    }

    /// Lowest power of h occurring in any term (h-adic valuation of the polynomial).
    pub fn h_valuation(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.1).min()
    }

    /// Highest power of h occurring.
    pub fn h_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.1).max()
    }

    /// Divide by h^k (must be exact).
    pub fn shift_h_down(&self, k: u32) -> Self {
        IntPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    debug_assert!(e.1 >= k);
                    ((e.0, e.1 - k), c.clone())
                })
                .collect(),
        }
    }

    /// Coefficient of h^k, as a polynomial in Re alone.
    pub fn h_coeff(&self, k: u32) -> IntPoly {
        IntPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.1 == k)
                .map(|(e, c)| ((e.0, 0), c.clone()))
                .collect(),
        }
    }

    pub fn evaluate(&self, re: &BigRational, h: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = BigRational::from(c.clone());
            for _ in 0..e.0 {
                t *= re;
            }
            for _ in 0..e.1 {
                t *= h;
            }
            acc += t;
        }
        acc
    }

    /// Is this a polynomial in Re alone (no h)?
    pub fn is_h_free(&self) -> bool {
        self.terms.keys().all(|e| e.1 == 0)
    }

    // --- gcd machinery -------------------------------------------------

    /// View as a polynomial in Re with coefficients in Z[h] (dense in Re).
    fn re_coeffs(&self) -> Vec<IntPoly> {
        let deg = self.terms.keys().map(|e| e.0).max().unwrap_or(0) as usize;
        let mut out = vec![IntPoly::zero(); deg + 1];
        for (e, c) in &self.terms {
            out[e.0 as usize].insert((0, e.1), c.clone());
        }
        out
    }

    fn re_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.0).max()
    }

    /// gcd over Z[Re, h], returned with content 1 and positive leading coefficient.
    pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
        if a.is_zero() {
            return b.normalized_sign();
        }
        if b.is_zero() {
            return a.normalized_sign();
        }
        let ca = a.content();
        let cb = b.content();
        let cg = ca.gcd(&cb);
        let pa = a.div_bigint_exact(&ca);
        let pb = b.div_bigint_exact(&cb);
        let g = gcd_primitive_bivariate(&pa, &pb);
        g.mul_bigint(&cg).normalized_sign()
    }

    fn normalized_sign(&self) -> IntPoly {
        if self.leading_coeff().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }
}

/// gcd of two univariate polynomials in h over Z (inputs must be h-only).
fn gcd_univariate_h(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let (mut f, mut g) = (a.clone(), b.clone());
    let cf = f.content();
    let cg = g.content();
    let c = cf.gcd(&cg);
    if f.is_zero() {
        return g.div_bigint_exact(&cg).mul_bigint(&c);
    }
    if g.is_zero() {
        return f.div_bigint_exact(&cf).mul_bigint(&c);
    }
    f = f.div_bigint_exact(&cf);
    g = g.div_bigint_exact(&cg);
    loop {
        let df = f.h_degree().unwrap_or(0);
        let dg = g.h_degree().unwrap_or(0);
        if df < dg {
            std::mem::swap(&mut f, &mut g);
            continue;
        }
        if g.is_zero() {
            break;
        }
        // pseudo-remainder of f by g in h
        let lg = g.h_coeff(dg).terms.get(&(0, 0)).cloned().unwrap();
        let mut r = f.mul_bigint(&num_traits::pow::pow(lg.clone(), (df - dg + 1) as usize));
        while !r.is_zero() && r.h_degree().unwrap() >= dg {
            let dr = r.h_degree().unwrap();
            let lr = r.h_coeff(dr).terms.get(&(0, 0)).cloned().unwrap();
            let (q, rem) = lr.div_rem(&lg);
            debug_assert!(rem.is_zero());
            let m = IntPoly::monomial(q, 0, dr - dg);
            r = r.sub(&m.mul(&g));
        }
        f = g;
        let cr = r.content();
        g = if r.is_zero() { r } else { r.div_bigint_exact(&cr) };
    }
    let cf2 = f.content();
    f.div_bigint_exact(&cf2).mul_bigint(&c).normalized_sign()
}

/// gcd of two primitive (integer content 1) bivariate polynomials,
/// primitive pseudo-remainder sequence in Re over Z[h].
fn gcd_primitive_bivariate(a: &IntPoly, b: &IntPoly) -> IntPoly {
    // contents with respect to Re (gcd in Z[h] of the Re-coefficients)
    let content_re = |p: &IntPoly| -> IntPoly {
        let mut g = IntPoly::zero();
        for c in p.re_coeffs() {
            g = gcd_univariate_h(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    };
    let ca = content_re(a);
    let cb = content_re(b);
    let cont_gcd = gcd_univariate_h(&ca, &cb);
    let mut f = divide_exact(a, &ca);
    let mut g = divide_exact(b, &cb);
    loop {
        let df = f.re_degree().unwrap_or(0);
        let dg = g.re_degree().unwrap_or(0);
        if df < dg {
            std::mem::swap(&mut f, &mut g);
            continue;
        }
        if g.is_zero() {
            break;
        }
        let dg = g.re_degree().unwrap();
        let lg = g.re_coeffs()[dg as usize].clone();
        // pseudo-division of f by g in Re
        let mut r = f.clone();
        let df = f.re_degree().unwrap();
        for _ in 0..(df - dg + 1) {
            if r.is_zero() || r.re_degree().unwrap_or(0) < dg {
                break;
            }
            let dr = r.re_degree().unwrap();
            let lr = r.re_coeffs()[dr as usize].clone();
            r = r.mul(&lg).sub(&shift_re(&lr.mul(&g), dr - dg));
        }
        f = g;
        g = if r.is_zero() {
            r
        } else {
            let cr = content_re(&r);
            divide_exact(&r, &cr)
        };
    }
    let cf = content_re(&f);
    let pp = divide_exact(&f, &cf);
    pp.mul(&cont_gcd).normalized_sign()
}

fn shift_re(p: &IntPoly, k: u32) -> IntPoly {
    IntPoly {
        terms: p.terms.iter().map(|(e, c)| ((e.0 + k, e.1), c.clone())).collect(),
    }
}

/// Exact polynomial division (divisor must divide evenly); used for content removal
/// and fraction reduction after gcd.
pub fn divide_exact(num: &IntPoly, den: &IntPoly) -> IntPoly {
    assert!(!den.is_zero(), "exact division by zero polynomial");
    if num.is_zero() {
        return IntPoly::zero();
    }
    if den.is_one() {
        return num.clone();
    }
    // long division in Re over Q(h)... done over Z with exactness asserts,
    // dividing by the leading term under grlex repeatedly.
    let mut rem = num.clone();
    let mut quo = IntPoly::zero();
    let dl = den.leading_exp().unwrap();
    let dc = den.terms[&dl].clone();
    while !rem.is_zero() {
        let rl = rem.leading_exp().unwrap();
        assert!(rl.0 >= dl.0 && rl.1 >= dl.1, "non-exact polynomial division");
        let (q, r) = rem.terms[&rl].div_rem(&dc);
        assert!(r.is_zero(), "non-exact polynomial division");
        let m = IntPoly::monomial(q, rl.0 - dl.0, rl.1 - dl.1);
        quo = quo.add(&m);
        rem = rem.sub(&m.mul(den));
    }
    quo
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, u32, u32)]) -> IntPoly {
        let mut out = IntPoly::zero();
        for &(c, re, h) in terms {
            out = out.add(&IntPoly::monomial(BigInt::from(c), re, h));
        }
        out
    }

    #[test]
    fn gcd_monomials() {
        // gcd(2 h^2, 4 h) = 2 h
        let g = IntPoly::gcd(&p(&[(2, 0, 2)]), &p(&[(4, 0, 1)]));
        assert_eq!(g, p(&[(2, 0, 1)]));
    }

    #[test]
    fn gcd_with_common_factor() {
        // (Re + h)*(Re - h) and (Re + h)*h
        let a = p(&[(1, 2, 0), (-1, 0, 2)]);
        let b = p(&[(1, 1, 1), (1, 0, 2)]);
        let g = IntPoly::gcd(&a, &b);
        assert_eq!(g, p(&[(1, 1, 0), (1, 0, 1)]));
    }

    #[test]
    fn exact_division_roundtrip() {
        let a = p(&[(3, 1, 1), (6, 0, 2), (-3, 2, 0)]);
        let b = p(&[(3, 1, 0), (-3, 0, 1)]);
        let q = divide_exact(&a.mul(&b), &b);
        assert_eq!(q, a);
    }

    #[test]
    fn h_valuation_and_coeffs() {
        let a = p(&[(1, 1, 2), (5, 0, 3)]);
        assert_eq!(a.h_valuation(), Some(2));
        assert_eq!(a.h_coeff(2), p(&[(1, 1, 0)]));
    }
}
