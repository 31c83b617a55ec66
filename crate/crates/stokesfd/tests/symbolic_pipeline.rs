//! End-to-end symbolic pipeline: completion of the governing system,
//! difference elimination, consistency verdicts, modified equations and the
//! integrability residual, checked against independently derived values.

use stokesfd::consistency::{
    check_groebner_equivalence, check_s_consistency, check_w_consistency, integrability_residual,
    modified_equations, primitive_integer_form, raw_expansions,
};
use stokesfd::difference::{
    groebner_complete_diff, normal_form_diff, poly_from_str as qparse, shift, DiffnceRanking,
    GridIndet,
};
use stokesfd::differential::{
    groebner_complete, is_member, normal_form, poly_from_str as dparse, DiffIndet, DiffPoly,
    DiffRanking,
};
use stokesfd::ring::Indeterminate;
use stokesfd::stokes::{
    compact_poisson_variant, compact_scheme, complete_stokes, derive_scheme, discretize,
    eliminated_scheme, involutive_system, poisson_from_quadrature,
    pressure_poisson_cofactor_identity, s_consistent_scheme, spurious_force_constraint,
    spurious_pressure_constraint, stokes_system, w_consistency_targets, StencilQuadrature,
};
use stokesfd::taylor::implied_poly;

fn dp(s: &str) -> DiffPoly {
    dparse(s).unwrap()
}

const SCHEME_BASES: [(i64, i64); 4] = [(1, 1), (1, 1), (1, 1), (2, 2)];
const COMPACT_BASES: [(i64, i64); 4] = [(1, 1), (1, 1), (1, 1), (1, 1)];

#[test]
fn completion_reproduces_involutive_system() {
    let gb = complete_stokes();
    let inv = involutive_system();
    assert_eq!(gb.len(), 4);
    let expected: Vec<DiffPoly> = inv.iter().map(|p| p.monic()).collect();
    assert_eq!(gb, expected);
    // leaders u_x, u_yy, v_xx, p_xx
    let leads: Vec<_> = gb
        .iter()
        .map(|g| {
            let t = g.leader().unwrap();
            (t.indet, t.shift.0, t.shift.1)
        })
        .collect();
    assert_eq!(
        leads,
        vec![
            (DiffIndet::U, 1, 0),
            (DiffIndet::U, 0, 2),
            (DiffIndet::V, 2, 0),
            (DiffIndet::P, 2, 0),
        ]
    );
    assert!(pressure_poisson_cofactor_identity());
}

#[test]
fn momentum_reduces_modulo_continuity() {
    let raw = stokes_system()[1].clone();
    let continuity = stokes_system()[0].clone();
    let nf = normal_form(&raw, &[continuity], DiffRanking);
    assert_eq!(nf, involutive_system()[1]);
    // self-reduction gives zero
    let f1 = stokes_system()[0].clone();
    assert!(normal_form(&f1, &[f1.clone()], DiffRanking).is_zero());
    // the spurious constraints stay irreducible
    let basis = complete_stokes();
    assert!(!normal_form(&spurious_force_constraint(), &basis, DiffRanking).is_zero());
    assert!(!normal_form(&spurious_pressure_constraint(), &basis, DiffRanking).is_zero());
}

#[test]
fn membership_examples() {
    let basis = complete_stokes();
    assert!(is_member(&involutive_system()[3], &basis, DiffRanking));
    assert!(!is_member(&spurious_force_constraint(), &basis, DiffRanking));
    assert!(is_member(&DiffPoly::zero(), &basis, DiffRanking));
}

#[test]
fn cross_derivative_pair_completion() {
    // div-curl pair: completion adds the Laplace equation for v
    let gens = [dp("u_x + v_y"), dp("u_y - v_x")];
    let gb = groebner_complete(&gens, DiffRanking);
    assert_eq!(
        gb,
        vec![dp("u_x + v_y"), dp("u_y - v_x"), dp("v_xx + v_yy")]
    );
}

#[test]
fn scheme_module_basis_and_memberships() {
    let scheme = s_consistent_scheme();
    let gb = groebner_complete_diff(&scheme, DiffnceRanking);
    assert_eq!(gb.len(), 4);
    let leads: Vec<_> = gb
        .iter()
        .map(|g| {
            let t = g.leader().unwrap();
            (t.indet, t.shift.0, t.shift.1)
        })
        .collect();
    assert_eq!(
        leads,
        vec![
            (GridIndet::U, 1, 0),
            (GridIndet::U, 0, 5),
            (GridIndet::V, 2, 1),
            (GridIndet::P, 4, 2),
        ]
    );
    // the compact pressure equation is irreducible modulo the scheme module
    assert!(!normal_form_diff(&compact_poisson_variant(), &gb, DiffnceRanking).is_zero());
    // basis elements and their translates reduce to zero
    assert!(normal_form_diff(&scheme[3], &gb, DiffnceRanking).is_zero());
    assert!(normal_form_diff(&shift(&scheme[0], (3, 5)), &gb, DiffnceRanking).is_zero());
}

#[test]
fn wide_pressure_equation_is_generated_by_the_momentum_block() {
    let scheme = s_consistent_scheme();
    let gb3 = groebner_complete_diff(&scheme[..3], DiffnceRanking);
    let gb4 = groebner_complete_diff(&scheme, DiffnceRanking);
    assert_eq!(gb3, gb4);
    assert!(normal_form_diff(&scheme[3], &gb3, DiffnceRanking).is_zero());
    // and the completed basis contains an element implying the pressure equation
    let p_lead = gb3
        .iter()
        .find(|g| g.leader().unwrap().indet == GridIndet::P)
        .expect("pressure-led element");
    let implied = implied_poly(p_lead);
    assert_eq!(
        primitive_integer_form(&implied),
        dp("p_xx + p_yy - f1_x - f2_y")
    );
}

#[test]
fn elimination_reproduces_the_scheme_module() {
    let full = groebner_complete_diff(&discretize(&StencilQuadrature::default()), DiffnceRanking);
    assert_eq!(full.len(), 8);
    let aux_free = eliminated_scheme();
    assert_eq!(aux_free.len(), 4);
    // the aux-free subset is exactly the reduced basis of the scheme module
    let gb9 = groebner_complete_diff(&s_consistent_scheme(), DiffnceRanking);
    assert_eq!(aux_free, gb9);
    assert!(derive_scheme().is_ok());
}

#[test]
fn eliminate_edge_cases() {
    use std::collections::BTreeSet;
    use stokesfd::difference::eliminate;
    let gens = discretize(&StencilQuadrature::default());
    let full = eliminate(&gens, &BTreeSet::new(), DiffnceRanking);
    assert_eq!(full.len(), 8);
    // nothing survives when the only generator mentions the dropped function
    let g = qparse("ux[j,k] - u[j,k]").unwrap();
    let dropped: BTreeSet<GridIndet> = [GridIndet::Ux].into_iter().collect();
    assert!(eliminate(&[g], &dropped, DiffnceRanking).is_empty());
}

#[test]
fn w_consistency_of_the_scheme() {
    let flags = check_w_consistency(&s_consistent_scheme(), &w_consistency_targets());
    assert_eq!(flags, vec![true; 4]);
    // with the involutive targets the unreduced momentum limit still passes
    let flags = check_w_consistency(&s_consistent_scheme(), &involutive_system());
    assert_eq!(flags, vec![true; 4]);
    // compact pressure equation vs the pressure Poisson target
    let flags = check_w_consistency(
        &[compact_poisson_variant()],
        &[dp("p_xx + p_yy - f1_x - f2_y")],
    );
    assert_eq!(flags, vec![true]);
    // a forward difference of u does not imply v_y
    let g = qparse("u[j+1,k] - u[j,k]").unwrap();
    let flags = check_w_consistency(&[g], &[dp("v_y")]);
    assert_eq!(flags, vec![false]);
}

#[test]
fn s_consistency_verdicts_and_witnesses() {
    let basis = involutive_system();
    let report = check_s_consistency(&s_consistent_scheme(), &basis);
    assert!(report.s_consistent);
    assert!(report.witnesses.is_empty());
    assert_eq!(report.difference_basis.len(), 4);
    assert!(report.equations.iter().all(|(_, ok)| *ok));

    let report = check_s_consistency(&compact_scheme(), &basis);
    assert!(!report.s_consistent);
    assert_eq!(report.difference_basis.len(), 7);
    assert_eq!(report.witnesses.len(), 3);
    let implied: Vec<DiffPoly> = report
        .witnesses
        .iter()
        .map(|w| primitive_integer_form(&w.implied))
        .collect();
    let f5 = spurious_force_constraint();
    let f6 = spurious_pressure_constraint();
    assert_eq!(implied.iter().filter(|p| **p == f6).count(), 2);
    assert_eq!(implied.iter().filter(|p| **p == f5).count(), 1);
    for w in &report.witnesses {
        assert!(!w.normal_form.is_zero());
    }

    // empty scheme is vacuously consistent
    let report = check_s_consistency(&[], &basis);
    assert!(report.s_consistent);
}

#[test]
fn groebner_equivalence_matches_s_consistency() {
    assert!(check_groebner_equivalence(&s_consistent_scheme(), DiffnceRanking));
    assert!(!check_groebner_equivalence(&compact_scheme(), DiffnceRanking));
    assert!(check_groebner_equivalence(
        &[compact_poisson_variant()],
        DiffnceRanking
    ));
}

#[test]
fn raw_expansions_match_central_difference_accuracy() {
    let ts = raw_expansions(&s_consistent_scheme(), &SCHEME_BASES, 2);
    let targets = w_consistency_targets();
    for (t, f) in ts.iter().zip(&targets) {
        assert_eq!(t.min_grade(), Some(0));
        assert_eq!(&t.grade(0), f);
    }
    assert_eq!(ts[0].grade(2), dp("(1/6)*u_xxx + (1/6)*v_yyy"));
    assert_eq!(
        ts[1].grade(2),
        dp("(1/6)*p_xxx - (1/(12*Re))*u_xxxx - (1/(12*Re))*u_yyyy")
    );
    assert_eq!(
        ts[2].grade(2),
        dp("(1/6)*p_yyy - (1/(12*Re))*v_xxxx - (1/(12*Re))*v_yyyy")
    );
    assert_eq!(
        ts[3].grade(2),
        dp("(1/3)*p_xxxx + (1/3)*p_yyyy - (1/6)*f1_xxx - (1/6)*f2_yyy")
    );
}

#[test]
fn even_powers_only_about_stencil_centers() {
    let mut all = s_consistent_scheme();
    let mut bases = SCHEME_BASES.to_vec();
    all.push(compact_poisson_variant());
    bases.push((1, 1));
    let ts = raw_expansions(&all, &bases, 6);
    for t in &ts {
        for (g, p) in t.grades() {
            assert!(g % 2 == 0 || p.is_zero(), "odd grade {g} present");
        }
    }
}

#[test]
fn modified_flow_of_the_scheme() {
    let basis = involutive_system();
    let flow = modified_equations(&s_consistent_scheme(), &SCHEME_BASES, 2, &basis);
    // leading grades are the involutive equations themselves
    for (t, b) in flow.equations.iter().zip(&basis) {
        assert_eq!(&t.grade(0), b);
    }
    assert_eq!(
        flow.equations[0].grade(2),
        dp("(1/3)*v_yyy - (Re/6)*p_yy + (Re/6)*f2_y")
    );
    assert_eq!(
        flow.equations[1].grade(2),
        dp("-(1/(6*Re))*v_xyyy - (1/6)*p_xyy + (1/6)*f1_xx + (1/12)*f1_yy + (1/12)*f2_xy")
    );
    assert_eq!(
        flow.equations[2].grade(2),
        dp("-(1/(6*Re))*v_yyyy + (1/3)*p_yyy - (1/12)*f1_xy + (1/12)*f2_xx - (1/6)*f2_yy")
    );
    assert_eq!(
        flow.equations[3].grade(2),
        dp("(2/3)*p_yyyy + (1/6)*f1_xxx - (1/3)*f1_xyy + (1/3)*f2_xxy - (1/2)*f2_yyy")
    );
}

#[test]
fn modified_flow_of_the_compact_scheme() {
    let basis = involutive_system();
    let flow = modified_equations(&compact_scheme(), &COMPACT_BASES, 2, &basis);
    for (t, b) in flow.equations.iter().zip(&basis) {
        assert_eq!(&t.grade(0), b);
    }
    // first three equations coincide with the symmetric scheme's modified flow
    let reference = modified_equations(&s_consistent_scheme(), &SCHEME_BASES, 2, &basis);
    for i in 0..3 {
        assert_eq!(flow.equations[i], reference.equations[i]);
    }
    assert_eq!(
        flow.equations[3].grade(2),
        dp("(1/6)*p_yyyy - (1/12)*f1_xxx - (1/12)*f1_xyy + (1/12)*f2_xxy - (1/4)*f2_yyy")
    );
}

#[test]
fn integrability_residual_vanishes_for_the_scheme() {
    let basis = involutive_system();
    let flow = modified_equations(&s_consistent_scheme(), &SCHEME_BASES, 4, &basis);
    let r = integrability_residual(&flow.equations, 4, &basis, 1);
    for (g, p) in r.grades() {
        assert!(p.is_zero(), "grade {g} of the residual is nonzero");
    }
    assert!(r.is_zero());
}

#[test]
fn integrability_residual_detects_the_compact_defect() {
    let basis = involutive_system();
    let flow = modified_equations(&compact_scheme(), &COMPACT_BASES, 4, &basis);
    let r = integrability_residual(&flow.equations, 2, &basis, 1);
    assert!(r.grade(0).is_zero());
    let expected =
        dp("(1/2)*p_yyyy + (1/4)*f1_xxx - (1/4)*f1_xyy + (1/4)*f2_xxy - (1/4)*f2_yyy");
    assert_eq!(r.grade(2), expected);
    // up to the factor 4 this is the second spurious constraint
    let quadrupled = r.grade(2).scale(&"4".parse().unwrap());
    assert_eq!(
        primitive_integer_form(&quadrupled),
        spurious_pressure_constraint()
    );
}

#[test]
fn integrability_residual_of_the_exact_system_vanishes() {
    // expansions with all grades >= 2 zeroed: the differential system itself
    let basis = involutive_system();
    let flow = modified_equations(&s_consistent_scheme(), &SCHEME_BASES, 4, &basis);
    let exact: Vec<_> = flow
        .equations
        .iter()
        .map(|t| t.map_grades(|g, p| if g == 0 { p.clone() } else { DiffPoly::zero() }))
        .collect();
    let r = integrability_residual(&exact, 2, &basis, 1);
    assert!(r.is_zero());
}

#[test]
fn quadrature_route_to_the_pressure_equation() {
    let f4 = poisson_from_quadrature().unwrap();
    assert_eq!(f4, s_consistent_scheme()[3]);
    let sw = stokesfd::stokes::SwapTransform;
    assert_eq!(sw.apply_diffnce(&f4), f4);
}

#[test]
fn scheme_continuous_limits() {
    // implied polynomials of the scheme match the governing forms exactly
    let targets = w_consistency_targets();
    for (g, f) in s_consistent_scheme().iter().zip(&targets) {
        assert_eq!(&implied_poly(g), f);
    }
    // the momentum limit differs from the involutive form only by a
    // continuity consequence
    let implied = implied_poly(&s_consistent_scheme()[1]);
    let diff = implied.sub(&involutive_system()[1]);
    assert!(is_member(&diff, &complete_stokes(), DiffRanking));
    // the compact variant implies the pressure Poisson equation itself
    assert_eq!(
        implied_poly(&compact_poisson_variant()),
        dp("p_xx + p_yy - f1_x - f2_y")
    );
}
