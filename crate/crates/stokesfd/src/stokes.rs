//! The concrete steady Stokes fixtures: governing system, involutive
//! completion, quadrature-generated discrete system, and the symmetric
//! strongly consistent scheme with its compact pressure variant.

use crate::coeff::ParamCoeff;
use crate::difference::{
    eliminate, gterm, poly_from_str as qparse, DiffnceRanking, DiffncePoly, GridIndet,
};
use crate::differential::{
    groebner_complete, poly_from_str as dparse, DiffIndet, DiffPoly, DiffRanking,
};
use crate::error::{Error, Result};
use crate::ring::{same_module, Term};
use std::collections::BTreeSet;

fn dp(s: &str) -> DiffPoly {
    dparse(s).expect("fixture parses")
}

fn qp(s: &str) -> DiffncePoly {
    qparse(s).expect("fixture parses")
}

/// The governing system: continuity and the two momentum equations, with the
/// momentum equations in their original (unreduced) Laplacian form.
pub fn stokes_system() -> Vec<DiffPoly> {
    vec![
        dp("u_x + v_y"),
        dp("p_x - (1/Re)*u_xx - (1/Re)*u_yy - f1"),
        dp("p_y - (1/Re)*v_xx - (1/Re)*v_yy - f2"),
    ]
}

/// The involutive completion of [`stokes_system`]: the second equation reduced
/// modulo continuity, plus the pressure Poisson equation.
pub fn involutive_system() -> Vec<DiffPoly> {
    vec![
        dp("u_x + v_y"),
        dp("p_x - (1/Re)*u_yy + (1/Re)*v_xy - f1"),
        dp("p_y - (1/Re)*v_xx - (1/Re)*v_yy - f2"),
        dp("p_xx + p_yy - f1_x - f2_y"),
    ]
}

/// The differential polynomials that the four scheme equations reproduce in
/// their continuous limit: continuity, the two momentum equations in original
/// form, and the pressure Poisson equation.
pub fn w_consistency_targets() -> Vec<DiffPoly> {
    let s = stokes_system();
    vec![
        s[0].clone(),
        s[1].clone(),
        s[2].clone(),
        dp("p_xx + p_yy - f1_x - f2_y"),
    ]
}

/// First spurious constraint implied by the compact-Poisson scheme: a
/// fifth-order relation among the forces alone.
pub fn spurious_force_constraint() -> DiffPoly {
    dp("f1_xxxxx + f1_xyyyy + f2_xxxxy + f2_yyyyy")
}

/// Second spurious constraint: third-order force terms plus 2 p_yyyy.
pub fn spurious_pressure_constraint() -> DiffPoly {
    dp("f1_xxx - f1_xyy + f2_xxy - f2_yyy + 2*p_yyyy")
}

/// The pressure Poisson equation expressed through the governing left-hand
/// sides: F4 = dx F2 + dy F3 + (1/Re)(dxx + dyy) F1, as an exact identity.
pub fn pressure_poisson_cofactor_identity() -> bool {
    let s = stokes_system();
    let combo = s[1]
        .shifted((1, 0))
        .add(&s[2].shifted((0, 1)))
        .add(
            &s[0]
                .shifted((2, 0))
                .add(&s[0].shifted((0, 2)))
                .scale(&ParamCoeff::one().div(&ParamCoeff::re()).unwrap()),
        );
    combo == involutive_system()[3]
}

/// Completion of the governing system; equals [`involutive_system`] by
/// construction of the ranking.
pub fn complete_stokes() -> Vec<DiffPoly> {
    groebner_complete(&stokes_system(), DiffRanking)
}

// --- quadrature-based scheme generation -------------------------------------

/// The integration contour and quadrature rules of the generation procedure:
/// a 3x3 cell with corners at index offsets (0,0)..(2,2), midpoint rule on the
/// contour, trapezoidal rule for the derivative relations, and the area term
/// collapsed onto the center node with weight 4h^2.
#[derive(Debug, Clone)]
pub struct StencilQuadrature {
    /// Half the contour side length, in index units (fixed to 1: a 2h side).
    pub half_side: i64,
}

impl Default for StencilQuadrature {
    fn default() -> Self {
        StencilQuadrature { half_side: 1 }
    }
}

struct Side {
    mid: (i64, i64),
    /// signed length carried by dx-integrands (counterclockwise walk)
    dx_weight: i64,
    /// signed length carried by dy-integrands
    dy_weight: i64,
}

impl StencilQuadrature {
    fn sides(&self) -> [Side; 4] {
        let s = self.half_side;
        [
            // bottom: (0,0) -> (2s,0)
            Side { mid: (s, 0), dx_weight: 2 * s, dy_weight: 0 },
            // right: (2s,0) -> (2s,2s)
            Side { mid: (2 * s, s), dx_weight: 0, dy_weight: 2 * s },
            // top: (2s,2s) -> (0,2s)
            Side { mid: (s, 2 * s), dx_weight: -2 * s, dy_weight: 0 },
            // left: (0,2s) -> (0,0)
            Side { mid: (0, s), dx_weight: 0, dy_weight: -2 * s },
        ]
    }

    fn center(&self) -> (i64, i64) {
        (self.half_side, self.half_side)
    }
}

fn h_pow(k: u32) -> ParamCoeff {
    let mut acc = ParamCoeff::one();
    for _ in 0..k {
        acc = acc.mul(&ParamCoeff::h());
    }
    acc
}

fn inv_re() -> ParamCoeff {
    ParamCoeff::one().div(&ParamCoeff::re()).unwrap()
}

/// A line integrand: a linear combination of grid functions evaluated at the
/// side midpoint.
type Integrand = Vec<(GridIndet, ParamCoeff)>;

fn contour_integral(q: &StencilQuadrature, dx_part: &Integrand, dy_part: &Integrand) -> DiffncePoly {
    let mut out = DiffncePoly::zero();
    for side in q.sides() {
        for (part, w) in [(dx_part, side.dx_weight), (dy_part, side.dy_weight)] {
            if w == 0 {
                continue;
            }
            let weight = ParamCoeff::from_int(w).mul(&ParamCoeff::h());
            for (indet, c) in part {
                out.add_term(
                    Term::new(*indet, side.mid.0, side.mid.1),
                    c.mul(&weight),
                );
            }
        }
    }
    out
}

/// Apply the quadrature rules to the integral form of the governing system
/// plus the derivative relations, producing the discrete generating system:
/// continuity, the two momentum equations (on the auxiliary derivative grid
/// functions), and the four trapezoidal relations tying those functions to
/// the velocities.
pub fn discretize(q: &StencilQuadrature) -> Vec<DiffncePoly> {
    use GridIndet::*;
    let one = ParamCoeff::one;
    let minus = |c: ParamCoeff| c.neg();
    let area = ParamCoeff::from_int(4).mul(&h_pow(2));
    let center = q.center();

    // oint -v dx + u dy
    let eq1 = contour_integral(q, &vec![(V, minus(one()))], &vec![(U, one())]);

    // oint (1/Re) uy dx + (p - ux/Re) dy  -  f1 * 4h^2 at the center
    let mut eq2 = contour_integral(
        q,
        &vec![(Uy, inv_re())],
        &vec![(P, one()), (Ux, minus(inv_re()))],
    );
    eq2.add_term(Term::new(F1, center.0, center.1), minus(area.clone()));

    // oint -(p - vy/Re) dx - (vx/Re) dy  -  f2 * 4h^2 at the center
    let mut eq3 = contour_integral(
        q,
        &vec![(P, minus(one())), (Vy, inv_re())],
        &vec![(Vx, minus(inv_re()))],
    );
    eq3.add_term(Term::new(F2, center.0, center.1), minus(area));

    // trapezoidal relations: (w[+1] + w)/2 * h - target[+1] + target
    let trapezoid = |w: GridIndet, target: GridIndet, axis: u8| -> DiffncePoly {
        let step = if axis == 1 { (1, 0) } else { (0, 1) };
        let half_h = ParamCoeff::from_ratio(1, 2).mul(&ParamCoeff::h());
        let mut g = DiffncePoly::zero();
        g.add_term(Term::new(w, step.0, step.1), half_h.clone());
        g.add_term(Term::new(w, 0, 0), half_h);
        g.add_term(Term::new(target, step.0, step.1), minus(one()));
        g.add_term(Term::new(target, 0, 0), one());
        g
    };

    vec![
        eq1,
        eq2,
        eq3,
        trapezoid(Ux, U, 1),
        trapezoid(Vx, V, 1),
        trapezoid(Uy, U, 2),
        trapezoid(Vy, V, 2),
    ]
}

// --- the published symmetric scheme ------------------------------------------

/// The compact five-point discrete Laplacian acting on a grid function based
/// at (j, k): values at (2,1), (1,2), (1,1), (1,0), (0,1) over h^2.
pub fn delta1(w: GridIndet) -> DiffncePoly {
    let q = ParamCoeff::one().div(&h_pow(2)).unwrap();
    DiffncePoly::from_terms([
        (gterm(w, 2, 1), q.clone()),
        (gterm(w, 1, 2), q.clone()),
        (gterm(w, 1, 1), q.mul(&ParamCoeff::from_int(-4))),
        (gterm(w, 1, 0), q.clone()),
        (gterm(w, 0, 1), q),
    ])
}

/// The wide discrete Laplacian on the doubled stencil: values at (4,2), (2,4),
/// (2,2), (2,0), (0,2) over 4h^2.
pub fn delta2(w: GridIndet) -> DiffncePoly {
    let q = ParamCoeff::from_ratio(1, 4).div(&h_pow(2)).unwrap();
    DiffncePoly::from_terms([
        (gterm(w, 4, 2), q.clone()),
        (gterm(w, 2, 4), q.clone()),
        (gterm(w, 2, 2), q.mul(&ParamCoeff::from_int(-4))),
        (gterm(w, 2, 0), q.clone()),
        (gterm(w, 0, 2), q),
    ])
}

/// The redundant but symmetric four-equation scheme: central divergence,
/// two momentum equations with the compact Laplacian, and the wide pressure
/// Poisson equation.
pub fn s_consistent_scheme() -> Vec<DiffncePoly> {
    let f1 = qp("(1/(2*h))*u[j+2,k+1] - (1/(2*h))*u[j,k+1] + (1/(2*h))*v[j+1,k+2] - (1/(2*h))*v[j+1,k]");
    let f2 = qp("(1/(2*h))*p[j+2,k+1] - (1/(2*h))*p[j,k+1] - f1[j+1,k+1]")
        .sub(&delta1(GridIndet::U).scale(&inv_re()));
    let f3 = qp("(1/(2*h))*p[j+1,k+2] - (1/(2*h))*p[j+1,k] - f2[j+1,k+1]")
        .sub(&delta1(GridIndet::V).scale(&inv_re()));
    let f4 = delta2(GridIndet::P).sub(&qp(
        "(1/(2*h))*f1[j+3,k+2] - (1/(2*h))*f1[j+1,k+2] + (1/(2*h))*f2[j+2,k+3] - (1/(2*h))*f2[j+2,k+1]",
    ));
    vec![f1, f2, f3, f4]
}

/// The tempting compact discretization of the pressure Poisson equation on
/// the 3x3 stencil.  Replacing the wide equation with it destroys strong
/// consistency.
pub fn compact_poisson_variant() -> DiffncePoly {
    delta1(GridIndet::P).sub(&qp(
        "(1/(2*h))*f1[j+2,k+1] - (1/(2*h))*f1[j,k+1] + (1/(2*h))*f2[j+1,k+2] - (1/(2*h))*f2[j+1,k]",
    ))
}

/// The scheme with the compact pressure equation substituted.
pub fn compact_scheme() -> Vec<DiffncePoly> {
    let mut s = s_consistent_scheme();
    s[3] = compact_poisson_variant();
    s
}

/// Derive the scheme by elimination from the quadrature system and verify it
/// generates the same difference module as the published symmetric form.
pub fn derive_scheme() -> Result<Vec<DiffncePoly>> {
    let drop: BTreeSet<GridIndet> = GridIndet::AUX.into_iter().collect();
    let eliminated = eliminate(&discretize(&StencilQuadrature::default()), &drop, DiffnceRanking);
    let published = s_consistent_scheme();
    if !same_module(&eliminated, &published, crate::difference::MODE) {
        return Err(Error::SchemeDerivationMismatch);
    }
    Ok(published)
}

/// The aux-free part of the completed quadrature system (the algorithmic,
/// interreduced form of the scheme).
pub fn eliminated_scheme() -> Vec<DiffncePoly> {
    let drop: BTreeSet<GridIndet> = GridIndet::AUX.into_iter().collect();
    eliminate(&discretize(&StencilQuadrature::default()), &drop, DiffnceRanking)
}

/// Rebuild the wide pressure Poisson discretization from the integral form of
/// the pressure equation on the same contour: midpoint rule for the pressure
/// gradient and force fluxes, with the gradient values replaced through the
/// exact two-step integral relations.  Errors if the result does not match
/// the published equation.
pub fn poisson_from_quadrature() -> Result<DiffncePoly> {
    use GridIndet::*;
    let q = StencilQuadrature::default();
    // p_x at a midpoint, replaced via the relation over [x-h, x+h]
    let px = |a: i64, b: i64| {
        qp("(1/(2*h))*p[j+1,k] - (1/(2*h))*p[j-1,k]").shifted((a, b))
    };
    let py = |a: i64, b: i64| {
        qp("(1/(2*h))*p[j,k+1] - (1/(2*h))*p[j,k-1]").shifted((a, b))
    };
    let two_h = ParamCoeff::from_int(2).mul(&ParamCoeff::h());
    let mut total = DiffncePoly::zero();
    for side in q.sides() {
        // oint (p_x - f1) dy - (p_y - f2) dx
        if side.dy_weight != 0 {
            let w = ParamCoeff::from_int(side.dy_weight / 2).mul(&two_h);
            total = total.add(&px(side.mid.0, side.mid.1).scale(&w));
            total.add_term(Term::new(F1, side.mid.0, side.mid.1), w.neg());
        }
        if side.dx_weight != 0 {
            let w = ParamCoeff::from_int(-side.dx_weight / 2).mul(&two_h);
            total = total.add(&py(side.mid.0, side.mid.1).scale(&w));
            total.add_term(Term::new(F2, side.mid.0, side.mid.1), w.neg());
        }
    }
    let scaled = total.scale(&ParamCoeff::from_ratio(1, 4).div(&h_pow(2)).unwrap());
    let recentered = scaled.shifted((1, 1));
    if recentered != s_consistent_scheme()[3] {
        return Err(Error::QuadratureMismatch);
    }
    Ok(recentered)
}

// --- swap symmetry ------------------------------------------------------------

/// The involution exchanging {x, u, f1} with {y, v, f2} (and the grid indices
/// j with k on the discrete side).
#[derive(Debug, Clone, Copy, Default)]
pub struct SwapTransform;

impl SwapTransform {
    pub fn apply_diff(&self, g: &DiffPoly) -> DiffPoly {
        let swap = |i: DiffIndet| match i {
            DiffIndet::U => DiffIndet::V,
            DiffIndet::V => DiffIndet::U,
            DiffIndet::P => DiffIndet::P,
            DiffIndet::F1 => DiffIndet::F2,
            DiffIndet::F2 => DiffIndet::F1,
        };
        DiffPoly::from_terms(
            g.iter()
                .map(|(t, c)| (Term::new(swap(t.indet), t.shift.1, t.shift.0), c.clone())),
        )
    }

    pub fn apply_diffnce(&self, g: &DiffncePoly) -> DiffncePoly {
        let swap = |i: GridIndet| match i {
            GridIndet::U => GridIndet::V,
            GridIndet::V => GridIndet::U,
            GridIndet::P => GridIndet::P,
            GridIndet::F1 => GridIndet::F2,
            GridIndet::F2 => GridIndet::F1,
            GridIndet::Ux => GridIndet::Vy,
            GridIndet::Vy => GridIndet::Ux,
            GridIndet::Uy => GridIndet::Vx,
            GridIndet::Vx => GridIndet::Uy,
        };
        DiffncePoly::from_terms(
            g.iter()
                .map(|(t, c)| (Term::new(swap(t.indet), t.shift.1, t.shift.0), c.clone())),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::differential::poly_to_string;

    #[test]
    fn stokes_system_shape() {
        let s = stokes_system();
        assert_eq!(s.len(), 3);
        assert_eq!(poly_to_string(&s[0]), "u_x + v_y");
        assert_eq!(
            s[1].leader(),
            Some(&crate::differential::dterm(DiffIndet::U, 2, 0))
        );
        assert_eq!(
            s[2].leader(),
            Some(&crate::differential::dterm(DiffIndet::V, 2, 0))
        );
    }

    #[test]
    fn swap_maps_momentum_equations_to_each_other() {
        let s = stokes_system();
        let sw = SwapTransform;
        assert_eq!(sw.apply_diff(&s[1]), s[2]);
        assert_eq!(sw.apply_diff(&s[2]), s[1]);
        assert_eq!(sw.apply_diff(&s[0]), s[0]);
    }

    #[test]
    fn swap_is_involutive() {
        let sw = SwapTransform;
        for g in involutive_system() {
            assert_eq!(sw.apply_diff(&sw.apply_diff(&g)), g);
        }
        for g in s_consistent_scheme() {
            assert_eq!(sw.apply_diffnce(&sw.apply_diffnce(&g)), g);
        }
    }

    #[test]
    fn discretize_first_output_is_the_central_divergence() {
        let d = discretize(&StencilQuadrature::default());
        assert_eq!(d.len(), 7);
        assert_eq!(
            d[0],
            qp("(2*h)*u[j+2,k+1] - (2*h)*u[j,k+1] + (2*h)*v[j+1,k+2] - (2*h)*v[j+1,k]")
        );
    }

    #[test]
    fn discretize_trapezoid_relations() {
        let d = discretize(&StencilQuadrature::default());
        assert_eq!(
            d[3],
            qp("(h/2)*ux[j+1,k] + (h/2)*ux[j,k] - u[j+1,k] + u[j,k]")
        );
        assert_eq!(
            d[6],
            qp("(h/2)*vy[j,k+1] + (h/2)*vy[j,k] - v[j,k+1] + v[j,k]")
        );
    }

    #[test]
    fn swap_maps_discrete_momentum_equations() {
        let d = discretize(&StencilQuadrature::default());
        let sw = SwapTransform;
        assert_eq!(sw.apply_diffnce(&d[1]), d[2]);
        assert_eq!(sw.apply_diffnce(&d[0]), d[0]);
    }

    #[test]
    fn scheme_fixtures_match_published_forms() {
        let s = s_consistent_scheme();
        assert_eq!(
            s[1],
            qp("(1/(2*h))*p[j+2,k+1] - (1/(2*h))*p[j,k+1] - f1[j+1,k+1] \
                - (1/(Re*h^2))*u[j+2,k+1] - (1/(Re*h^2))*u[j+1,k+2] + (4/(Re*h^2))*u[j+1,k+1] \
                - (1/(Re*h^2))*u[j+1,k] - (1/(Re*h^2))*u[j,k+1]")
        );
        assert_eq!(
            delta2(GridIndet::P),
            qp("(1/(4*h^2))*p[j+4,k+2] + (1/(4*h^2))*p[j+2,k+4] - (1/h^2)*p[j+2,k+2] \
                + (1/(4*h^2))*p[j+2,k] + (1/(4*h^2))*p[j,k+2]")
        );
    }

    #[test]
    fn compact_variant_stencil_is_narrow() {
        let c = compact_poisson_variant();
        let width = |g: &DiffncePoly| {
            let a: Vec<i64> = g.iter().map(|(t, _)| t.shift.0).collect();
            a.iter().max().unwrap() - a.iter().min().unwrap()
        };
        assert_eq!(width(&c), 2);
        assert_eq!(width(&s_consistent_scheme()[3]), 4);
    }

    #[test]
    fn swap_fixes_wide_poisson_equation() {
        let sw = SwapTransform;
        let f4 = s_consistent_scheme()[3].clone();
        assert_eq!(sw.apply_diffnce(&f4), f4);
    }
}
