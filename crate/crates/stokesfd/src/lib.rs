//! Algorithmic derivation, verification and numerical validation of a
//! strongly consistent finite difference scheme for steady two-dimensional
//! Stokes flow.
//!
//! The crate is organized in symbolic layers and a numeric layer:
//!
//! * [`coeff`] — exact arithmetic in the coefficient field Q(Re, h);
//! * [`differential`] — linear differential polynomials, rankings, normal
//!   forms and Groebner completion (derives the pressure Poisson equation);
//! * [`difference`] — linear difference polynomials on the uniform grid,
//!   translation-invariant completion, elimination of auxiliary grid
//!   functions, central-difference operators;
//! * [`taylor`] — continuous limits: Taylor expansion of difference
//!   polynomials graded by powers of h;
//! * [`consistency`] — weak and strong consistency checks, modified
//!   equations, the integrability residual;
//! * [`stokes`] — the concrete governing system, its involutive completion,
//!   the quadrature-generated discrete system and the published scheme;
//! * [`numerics`] — floating-point solvers for the derived scheme and a
//!   staggered-grid baseline, manufactured-solution convergence studies.
//!
//! A narrative guide with runnable examples lives in `book/`; its code blocks
//! are compiled as doc-tests (see the `book` module).

pub mod coeff;
pub mod consistency;
pub mod difference;
pub mod differential;
pub mod error;
pub mod numerics;
pub mod ring;
pub mod stokes;
pub mod taylor;

pub use coeff::ParamCoeff;
pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }

    chapter!(introduction, "../book/src/introduction.md");
    chapter!(coefficient_field, "../book/src/coefficient-field.md");
    chapter!(differential_systems, "../book/src/differential-systems.md");
    chapter!(scheme_generation, "../book/src/scheme-generation.md");
    chapter!(consistency_analysis, "../book/src/consistency.md");
    chapter!(modified_equations, "../book/src/modified-equations.md");
    chapter!(numerical_validation, "../book/src/numerical-validation.md");
}
