//! Consistency analysis: weak consistency of scheme equations with their
//! differential counterparts, the Groebner-basis criterion for strong
//! consistency, modified equations, and the integrability residual.

use crate::coeff::ParamCoeff;
use crate::difference::{
    central_diff_op, groebner_complete_diff, poly_to_json as dnce_json,
    poly_to_string as dnce_str, DiffnceRanking, DiffncePoly,
};
use crate::differential::{normal_form, poly_to_string as diff_str, DiffPoly, DiffRanking};
use crate::ring::{self, Indeterminate, ShiftAlgebra};
use crate::taylor::{continuous_limit_at, implied_poly, operator_series, TaylorForm};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::json;
use std::collections::BTreeMap;

/// Does the continuous limit of each scheme equation reproduce the paired
/// differential polynomial?  Reproduction means equality up to a nonzero
/// h-free factor, allowing reduction modulo the target system itself (the
/// momentum equations enter the scheme in their unreduced form).
pub fn check_w_consistency(scheme: &[DiffncePoly], targets: &[DiffPoly]) -> Vec<bool> {
    assert_eq!(scheme.len(), targets.len(), "scheme and targets are paired by index");
    let gb = crate::differential::groebner_complete(targets, DiffRanking);
    scheme
        .iter()
        .zip(targets)
        .map(|(g, target)| {
            let implied = implied_poly(g);
            if implied.is_zero() || target.is_zero() {
                return false;
            }
            // strict proportionality first
            if implied.leader() == target.leader() {
                let lam = implied
                    .leading_coeff()
                    .div(&target.leading_coeff())
                    .expect("nonzero leading coefficient");
                if lam.is_h_free() && implied == target.scale(&lam) {
                    return true;
                }
            }
            // otherwise the pair must agree on the leading indeterminate and
            // the implied polynomial must be a consequence of the system
            let same_block = implied.leader().map(|t| t.indet) == target.leader().map(|t| t.indet);
            same_block && ring::is_member(&implied, &gb, ShiftAlgebra::Monoid)
        })
        .collect()
}

/// One element of the difference basis whose implied differential polynomial
/// is not a consequence of the differential system.
#[derive(Debug, Clone)]
pub struct Witness {
    pub basis_element: DiffncePoly,
    pub implied: DiffPoly,
    pub normal_form: DiffPoly,
}

/// Outcome of the strong-consistency criterion.
#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    /// Per scheme equation: implied differential polynomial and whether it is
    /// a consequence of the differential system.
    pub equations: Vec<(DiffPoly, bool)>,
    /// The difference basis the criterion ran over (for auditability).
    pub difference_basis: Vec<DiffncePoly>,
    /// Basis elements whose implied polynomials fall outside the differential
    /// module; empty iff the scheme is strongly consistent.
    pub witnesses: Vec<Witness>,
    pub s_consistent: bool,
}

/// The Groebner criterion: complete the scheme's difference module, take the
/// continuous limit of every basis element and test membership in the
/// differential module.
pub fn check_s_consistency(scheme: &[DiffncePoly], diff_basis: &[DiffPoly]) -> ConsistencyReport {
    let basis = groebner_complete_diff(scheme, DiffnceRanking);
    let mut witnesses = Vec::new();
    for g in &basis {
        let implied = implied_poly(g);
        let nf = normal_form(&implied, diff_basis, DiffRanking);
        if !nf.is_zero() {
            witnesses.push(Witness {
                basis_element: g.clone(),
                implied,
                normal_form: nf,
            });
        }
    }
    let equations = scheme
        .iter()
        .map(|g| {
            let implied = implied_poly(g);
            let ok = !implied.is_zero()
                && normal_form(&implied, diff_basis, DiffRanking).is_zero();
            (implied, ok)
        })
        .collect();
    ConsistencyReport {
        equations,
        difference_basis: basis,
        s_consistent: witnesses.is_empty(),
        witnesses,
    }
}

/// Clear denominators and integer content so the polynomial has coprime
/// integer coefficients and a positive leading one; used to present witnesses
/// in their published shape.  Falls back to the monic form when a coefficient
/// involves the parameters.
pub fn primitive_integer_form(p: &DiffPoly) -> DiffPoly {
    if p.is_zero() {
        return p.clone();
    }
    let mut rationals = Vec::new();
    for (_, c) in p.iter() {
        let (num, den) = (c.numerator(), c.denominator());
        let nc = num.leading_coeff();
        let dc = den.leading_coeff();
        let pure = num.num_terms() == 1
            && den.num_terms() == 1
            && num.leading_exp() == Some((0, 0))
            && den.leading_exp() == Some((0, 0));
        if !pure {
            return p.monic();
        }
        rationals.push((nc, dc));
    }
    let mut den_lcm = BigInt::one();
    for (_, d) in &rationals {
        den_lcm = den_lcm.lcm(d);
    }
    let mut num_gcd = BigInt::zero();
    for (n, d) in &rationals {
        num_gcd = num_gcd.gcd(&(n * (&den_lcm / d)));
    }
    if num_gcd.is_zero() {
        return p.clone();
    }
    let factor = ParamCoeff::new(
        crate::coeff::poly::IntPoly::monomial(den_lcm, 0, 0),
        crate::coeff::poly::IntPoly::monomial(num_gcd, 0, 0),
    )
    .unwrap();
    let scaled = p.scale(&factor);
    if scaled
        .leading_coeff()
        .numerator()
        .leading_coeff()
        .is_negative()
    {
        scaled.neg()
    } else {
        scaled
    }
}

/// The modified differential system of a scheme: per equation, the Taylor
/// expansion with every grade above the leading one reduced to normal form
/// modulo the differential basis; the leading grade is replaced by the basis
/// element it reproduces.
#[derive(Debug, Clone)]
pub struct ModifiedFlow {
    pub equations: Vec<TaylorForm>,
    pub base_points: Vec<(i64, i64)>,
}

/// Raw (unreduced) expansions of the scheme equations about their base points.
pub fn raw_expansions(
    scheme: &[DiffncePoly],
    base_points: &[(i64, i64)],
    order: u32,
) -> Vec<TaylorForm> {
    scheme
        .iter()
        .zip(base_points)
        .map(|(g, bp)| continuous_limit_at(g, *bp, order))
        .collect()
}

pub fn modified_equations(
    scheme: &[DiffncePoly],
    base_points: &[(i64, i64)],
    order: u32,
    diff_basis: &[DiffPoly],
) -> ModifiedFlow {
    let equations = scheme
        .iter()
        .zip(base_points)
        .map(|(g, bp)| {
            let t = continuous_limit_at(g, *bp, order);
            let min = t.min_grade().unwrap_or(0);
            t.map_grades(|grade, p| {
                if grade == min {
                    reduce_leading_grade(p, diff_basis)
                } else {
                    normal_form(p, diff_basis, DiffRanking)
                }
            })
        })
        .collect();
    ModifiedFlow {
        equations,
        base_points: base_points.to_vec(),
    }
}

/// Rewrite the leading grade as the basis element it is a consequence of: the
/// full normal form would be zero, so reduce modulo all other basis elements
/// instead, landing on a multiple of the matched one.
fn reduce_leading_grade(p: &DiffPoly, diff_basis: &[DiffPoly]) -> DiffPoly {
    for (i, b) in diff_basis.iter().enumerate() {
        let others: Vec<DiffPoly> = diff_basis
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, q)| q.clone())
            .collect();
        let r = normal_form(p, &others, DiffRanking);
        if r.is_zero() {
            continue;
        }
        if r.leader() == b.leader() {
            let lam = r.leading_coeff().div(&b.leading_coeff()).unwrap();
            if lam.is_h_free() && r == b.scale(&lam) {
                return r;
            }
        }
    }
    normal_form(p, diff_basis, DiffRanking)
}

/// Substitute four expansions (divergence, momentum-x, momentum-y, pressure)
/// into the integrability combination
/// `Dx m2 + Dy m3 + (1/Re)(Dxx + Dyy) m1 - m4`
/// with centered operators of accuracy h^(2m) applied grade-wise as their own
/// expansions, reducing every grade modulo the differential basis.  For a
/// strongly consistent scheme the result vanishes at every computed grade.
pub fn integrability_residual(
    expansions: &[TaylorForm],
    order: u32,
    diff_basis: &[DiffPoly],
    m: u32,
) -> TaylorForm {
    assert_eq!(expansions.len(), 4, "four expansions: divergence, momentum pair, pressure");
    let cap = order as i64;
    let mut grades: BTreeMap<i64, DiffPoly> = BTreeMap::new();
    let inv_re = ParamCoeff::one().div(&ParamCoeff::re()).unwrap();
    let pieces: [(usize, u8, u8, ParamCoeff); 4] = [
        (1, 1, 1, ParamCoeff::one()),
        (2, 2, 1, ParamCoeff::one()),
        (0, 1, 2, inv_re.clone()),
        (0, 2, 2, inv_re),
    ];
    for (idx, axis, deriv, scale) in pieces {
        let op = central_diff_op(axis, deriv, m).expect("supported accuracy");
        let series = operator_series(&op, order);
        for (og, (da, db), oc) in &series {
            for (tg, p) in expansions[idx].grades() {
                let grade = og + tg;
                if grade > cap {
                    continue;
                }
                let q = p.shifted((*da as i64, *db as i64)).scale(&oc.mul(&scale));
                let entry = grades.entry(grade).or_insert_with(DiffPoly::zero);
                *entry = entry.add(&q);
            }
        }
    }
    for (tg, p) in expansions[3].grades() {
        if tg > cap {
            continue;
        }
        let entry = grades.entry(tg).or_insert_with(DiffPoly::zero);
        *entry = entry.sub(p);
    }
    let reduced = grades
        .into_iter()
        .map(|(g, p)| (g, normal_form(&p, diff_basis, DiffRanking)))
        .collect();
    let (b0, b1) = {
        let b = expansions[3].base();
        (b.0.clone(), b.1.clone())
    };
    TaylorForm::from_grades(reduced, order, (b0, b1))
}

/// The centered discrete integrability combination of a four-equation scheme:
/// `D1 g2 + D2 g3 + (1/Re)(D11 + D22) g1 - g4` with the second-order centered
/// operators.  For the symmetric scheme this is a translate of the wide
/// pressure equation sitting inside the module.
pub fn discrete_integrability_defect(scheme: &[DiffncePoly]) -> DiffncePoly {
    assert_eq!(scheme.len(), 4);
    let d1 = central_diff_op(1, 1, 1).unwrap();
    let d2 = central_diff_op(2, 1, 1).unwrap();
    let d11 = central_diff_op(1, 2, 1).unwrap();
    let d22 = central_diff_op(2, 2, 1).unwrap();
    let inv_re = ParamCoeff::one().div(&ParamCoeff::re()).unwrap();
    d1.apply(&scheme[1])
        .add(&d2.apply(&scheme[2]))
        .add(&d11.apply(&scheme[0]).add(&d22.apply(&scheme[0])).scale(&inv_re))
        .sub(&scheme[3])
}

/// Is the scheme set already a basis of the difference module it generates?
/// For a four-equation w-consistent scheme the essential obstruction is the
/// discrete integrability combination; otherwise all S-polynomials are
/// checked against the set directly.
pub fn check_groebner_equivalence(scheme: &[DiffncePoly], _r: DiffnceRanking) -> bool {
    if scheme.len() <= 1 {
        return true;
    }
    let normalized: Vec<DiffncePoly> = scheme
        .iter()
        .map(|g| g.translated_to_origin().monic())
        .collect();
    if scheme.len() == 4 {
        let defect = discrete_integrability_defect(scheme);
        return ring::normal_form_full(&defect, &normalized, ShiftAlgebra::Group).is_zero();
    }
    ring::is_groebner_basis(&normalized, ShiftAlgebra::Group)
}

// --- report rendering --------------------------------------------------------

impl ConsistencyReport {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("s-consistent: {}\n", self.s_consistent));
        out.push_str(&format!(
            "difference basis: {} elements\n",
            self.difference_basis.len()
        ));
        for (i, (implied, ok)) in self.equations.iter().enumerate() {
            out.push_str(&format!(
                "equation {}: implied {} ({})\n",
                i + 1,
                diff_str(implied),
                if *ok { "consequence" } else { "NOT a consequence" }
            ));
        }
        for w in &self.witnesses {
            out.push_str(&format!(
                "witness: leader {} implies {} (normal form {})\n",
                w.basis_element
                    .leader()
                    .map(|t| format!("{:?}{:?}", t.indet, t.shift))
                    .unwrap_or_default(),
                diff_str(&primitive_integer_form(&w.implied)),
                diff_str(&w.normal_form),
            ));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "s_consistent": self.s_consistent,
            "equations": self.equations.iter().map(|(p, ok)| json!({
                "implied": diff_str(p),
                "consequence": ok,
            })).collect::<Vec<_>>(),
            "difference_basis": self.difference_basis.iter().map(dnce_json).collect::<Vec<_>>(),
            "witnesses": self.witnesses.iter().map(|w| json!({
                "basis_element": dnce_str(&w.basis_element),
                "implied": diff_str(&primitive_integer_form(&w.implied)),
                "normal_form": diff_str(&w.normal_form),
            })).collect::<Vec<_>>(),
        })
    }
}

impl ModifiedFlow {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.equations.iter().enumerate() {
            out.push_str(&format!("equation {}:\n", i + 1));
            for (g, p) in t.grades() {
                if g == 0 {
                    out.push_str(&format!("  {}\n", diff_str(p)));
                } else {
                    out.push_str(&format!("  + h^{} * [ {} ]\n", g, diff_str(p)));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "base_points": self.base_points,
            "equations": self.equations.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn to_latex(&self) -> String {
        let mut out = String::new();
        out.push_str("\\begin{align}\n");
        for t in &self.equations {
            let mut parts = Vec::new();
            for (g, p) in t.grades() {
                if g == 0 {
                    parts.push(latex_poly(p));
                } else {
                    parts.push(format!("h^{{{g}}}\\left({}\\right)", latex_poly(p)));
                }
            }
            out.push_str(&format!("  &{} + O(h^{{{}}}) = 0\\\\\n",
                parts.join(" + "),
                t.min_grade().unwrap_or(0) + t.order() as i64 + 2));
        }
        out.push_str("\\end{align}\n");
        out
    }
}

fn latex_poly(p: &DiffPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (t, c)) in p.iter().rev().enumerate() {
        let neg = c.numerator().leading_coeff().is_negative();
        let mag = if neg { c.neg() } else { c.clone() };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let name = match t.indet.name() {
            "f1" => "f^{(1)}".to_string(),
            "f2" => "f^{(2)}".to_string(),
            other => other.to_string(),
        };
        let sub = format!(
            "{}{}",
            "x".repeat(t.shift.0 as usize),
            "y".repeat(t.shift.1 as usize)
        );
        let var = if sub.is_empty() {
            name
        } else {
            format!("{name}_{{{sub}}}")
        };
        if mag.is_one() {
            out.push_str(&var);
        } else {
            out.push_str(&format!("\\tfrac{{{}}}{{{}}}{var}",
                latex_coeff_part(&mag, true),
                latex_coeff_part(&mag, false)));
        }
    }
    out
}

fn latex_coeff_part(c: &ParamCoeff, numer: bool) -> String {
    let s = c.to_string();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.to_string(), d.trim_matches(['(', ')']).to_string()),
        None => (s, "1".to_string()),
    };
    let part = if numer { n } else { d };
    part.replace("Re", "\\mathrm{Re}\\,").replace('*', " ")
}
