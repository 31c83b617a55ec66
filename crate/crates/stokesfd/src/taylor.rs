//! Continuous limits: Taylor expansion of difference polynomials about a grid
//! point, graded by powers of h.
//!
//! A grid value w[j+a, k+b] with the expansion based at index offset
//! (a0, b0) is replaced by the series of w(x + (a-a0) h, y + (b-b0) h), so a
//! difference polynomial becomes a formal sum  sum_g h^g P_g  with
//! differential polynomials P_g whose coefficients are h-free.  The lowest
//! grade is the implied differential polynomial of the scheme equation.

use crate::coeff::ParamCoeff;
use crate::differential::{dterm, DiffPoly};
use crate::difference::DiffncePoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// A difference polynomial expanded about a grid point: grades are powers of
/// h, each carrying a differential polynomial with h-free coefficients.
/// Grades are kept up to `min_grade + order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaylorForm {
    grades: BTreeMap<i64, DiffPoly>,
    order: u32,
    base: (BigRational, BigRational),
}

impl TaylorForm {
    pub fn grades(&self) -> impl Iterator<Item = (i64, &DiffPoly)> {
        self.grades.iter().map(|(g, p)| (*g, p))
    }

    pub fn grade(&self, g: i64) -> DiffPoly {
        self.grades.get(&g).cloned().unwrap_or_else(DiffPoly::zero)
    }

    pub fn min_grade(&self) -> Option<i64> {
        self.grades.keys().next().copied()
    }

    /// The implied differential polynomial: the coefficient of the lowest
    /// power of h.
    pub fn implied(&self) -> DiffPoly {
        self.min_grade().map(|g| self.grade(g)).unwrap_or_else(DiffPoly::zero)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn base(&self) -> (&BigRational, &BigRational) {
        (&self.base.0, &self.base.1)
    }

    pub fn is_zero(&self) -> bool {
        self.grades.is_empty()
    }

    /// Map every grade, dropping the ones that become zero.
    pub fn map_grades(&self, mut f: impl FnMut(i64, &DiffPoly) -> DiffPoly) -> TaylorForm {
        let grades = self
            .grades
            .iter()
            .map(|(g, p)| (*g, f(*g, p)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        TaylorForm {
            grades,
            order: self.order,
            base: self.base.clone(),
        }
    }

    pub fn from_grades(
        grades: BTreeMap<i64, DiffPoly>,
        order: u32,
        base: (BigRational, BigRational),
    ) -> TaylorForm {
        let grades = grades.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        TaylorForm { grades, order, base }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "base": [self.base.0.to_string(), self.base.1.to_string()],
            "order": self.order,
            "grades": self.grades.iter().map(|(g, p)| {
                (g.to_string(), crate::differential::poly_to_string(p))
            }).collect::<BTreeMap<_, _>>(),
        })
    }
}

fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}

fn rational_pow(x: &BigRational, n: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..n {
        acc *= x;
    }
    acc
}

fn coeff_from_rational(r: &BigRational) -> ParamCoeff {
    use crate::coeff::poly::IntPoly;
    ParamCoeff::new(
        IntPoly::monomial(r.numer().clone(), 0, 0),
        IntPoly::monomial(r.denom().clone(), 0, 0),
    )
    .expect("nonzero denominator")
}

/// Expand `g` about the grid point at index offset `base`, keeping all grades
/// up to `min_grade + order`.  Base offsets are rational multiples of the
/// step, in index units.
pub fn continuous_limit(g: &DiffncePoly, base: (BigRational, BigRational), order: u32) -> TaylorForm {
    // Working cap: every term contributes at grade (coefficient h-order) +
    // derivative total; grades below the eventual minimum cancel exactly, so
    // carry enough headroom above the smallest coefficient order.
    let vmin = g
        .iter()
        .map(|(_, c)| c.h_order().expect("nonzero coefficient"))
        .min()
        .unwrap_or(0);
    let headroom: i64 = 8;
    let cap = vmin + order as i64 + headroom;
    let mut grades: BTreeMap<i64, DiffPoly> = BTreeMap::new();
    for (t, c) in g.iter() {
        let (indet, (da, db)) = t.indet.continuous_counterpart();
        let dx = BigRational::from(BigInt::from(t.shift.0)) - &base.0;
        let dy = BigRational::from(BigInt::from(t.shift.1)) - &base.1;
        for (k, ck) in c.h_series(cap) {
            let mmax = (cap - k).max(0) as u32;
            for m in 0..=mmax {
                let dxm = rational_pow(&dx, m);
                if dxm.is_zero() && m > 0 {
                    continue;
                }
                for n in 0..=(mmax - m) {
                    let grade = k + (m + n) as i64;
                    if grade > cap {
                        break;
                    }
                    let dyn_ = rational_pow(&dy, n);
                    if dyn_.is_zero() && n > 0 {
                        continue;
                    }
                    let w = &dxm * &dyn_
                        / BigRational::from(factorial(m) * factorial(n));
                    if w.is_zero() {
                        continue;
                    }
                    let coeff = ck.mul(&coeff_from_rational(&w));
                    grades
                        .entry(grade)
                        .or_insert_with(DiffPoly::zero)
                        .add_term(dterm(indet, da + m, db + n), coeff);
                }
            }
        }
    }
    grades.retain(|_, p| !p.is_zero());
    if let Some(&mn) = grades.keys().next() {
        let cutoff = mn + order as i64;
        assert!(
            cutoff <= cap,
            "expansion headroom exceeded; raise the working cap"
        );
        grades.retain(|g, _| *g <= cutoff);
    }
    TaylorForm {
        grades,
        order,
        base,
    }
}

/// Convenience: expansion about integer index offsets.
pub fn continuous_limit_at(g: &DiffncePoly, base: (i64, i64), order: u32) -> TaylorForm {
    continuous_limit(
        g,
        (
            BigRational::from(BigInt::from(base.0)),
            BigRational::from(BigInt::from(base.1)),
        ),
        order,
    )
}

/// The implied differential polynomial of a difference polynomial (the lowest
/// grade of its expansion; independent of the expansion point).
pub fn implied_poly(g: &DiffncePoly) -> DiffPoly {
    continuous_limit_at(g, (0, 0), 0).implied()
}

/// Graded differential-operator series of a central-difference operator:
/// pairs (grade, derivative orders, coefficient), e.g. the first-derivative
/// operator of second order is  d/dx + (h^2/6) d^3/dx^3 + ...
pub fn operator_series(
    op: &crate::difference::CentralOp,
    upto: u32,
) -> Vec<(i64, (u32, u32), ParamCoeff)> {
    use crate::difference::GridIndet;
    let applied = op.applied_to(GridIndet::U);
    let t = continuous_limit_at(&applied, (0, 0), upto);
    let mut out = Vec::new();
    for (g, p) in t.grades() {
        for (term, c) in p.iter() {
            out.push((g, (term.shift.0 as u32, term.shift.1 as u32), c.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::difference::poly_from_str;
    use crate::differential::poly_from_str as dstr;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn half_step_forward_difference() {
        let g = poly_from_str("u[j+1,k] - u[j,k]").unwrap();
        let t = continuous_limit(&g, (rat(1, 2), rat(0, 1)), 4);
        assert_eq!(t.min_grade(), Some(1));
        assert_eq!(t.grade(1), dstr("u_x").unwrap());
        assert_eq!(t.grade(3), dstr("(1/24)*u_xxx").unwrap());
        assert_eq!(t.grade(5), dstr("(1/1920)*u_xxxxx").unwrap());
        assert!(t.grade(2).is_zero() && t.grade(4).is_zero());
    }

    #[test]
    fn central_difference_is_exact_derivative_at_grade_zero() {
        let op = crate::difference::central_diff_op(1, 1, 2).unwrap();
        let series = operator_series(&op, 3);
        assert_eq!(series[0], (0, (1, 0), ParamCoeff::one()));
        // accuracy h^4: nothing between grades 1 and 3
        assert!(series.iter().all(|(g, _, _)| *g == 0 || *g >= 4));
    }

    #[test]
    fn aux_grid_function_expands_to_velocity_derivative() {
        let g = poly_from_str("ux[j,k]").unwrap();
        let t = continuous_limit_at(&g, (0, 0), 0);
        assert_eq!(t.implied(), dstr("u_x").unwrap());
    }
}
