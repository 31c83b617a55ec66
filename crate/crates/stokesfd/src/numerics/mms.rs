//! Manufactured solutions: exact fields with forcing chosen so the governing
//! equations hold, used to measure discretization error.

use crate::differential::{DiffIndet, DiffPoly};
use crate::difference::DiffncePoly;
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// A closed-form exact solution of the governing system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Manufactured {
    /// u = sin(pi x) cos(pi y), v = -cos(pi x) sin(pi y), p = cos(pi x) cos(pi y)
    /// on the unit square; divergence-free by construction.
    Trig,
    /// Fluid at rest: u = v = 0, constant pressure, no forcing.
    Zero,
}

impl Manufactured {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "trig" => Ok(Manufactured::Trig),
            "zero" => Ok(Manufactured::Zero),
            other => Err(Error::UnknownCase(other.into())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Manufactured::Trig => "trig",
            Manufactured::Zero => "zero",
        }
    }

    /// Derivative d^(a+b) f / dx^a dy^b of the exact field at (x, y).
    /// Forcing derivatives are assembled from the governing relations
    /// f1 = p_x - (u_xx + u_yy)/Re and f2 = p_y - (v_xx + v_yy)/Re.
    pub fn deriv(&self, field: DiffIndet, a: u32, b: u32, x: f64, y: f64, re: f64) -> f64 {
        match field {
            DiffIndet::F1 => {
                self.deriv(DiffIndet::P, a + 1, b, x, y, re)
                    - (self.deriv(DiffIndet::U, a + 2, b, x, y, re)
                        + self.deriv(DiffIndet::U, a, b + 2, x, y, re))
                        / re
            }
            DiffIndet::F2 => {
                self.deriv(DiffIndet::P, a, b + 1, x, y, re)
                    - (self.deriv(DiffIndet::V, a + 2, b, x, y, re)
                        + self.deriv(DiffIndet::V, a, b + 2, x, y, re))
                        / re
            }
            primary => match self {
                Manufactured::Zero => match primary {
                    DiffIndet::P if a == 0 && b == 0 => 1.0,
                    _ => 0.0,
                },
                Manufactured::Trig => {
                    // phase trick: d^k/dt^k sin(pi t) = pi^k sin(pi t + k pi/2)
                    let sx = (PI * x + a as f64 * PI / 2.0).sin();
                    let cx = (PI * x + a as f64 * PI / 2.0).cos();
                    let sy = (PI * y + b as f64 * PI / 2.0).sin();
                    let cy = (PI * y + b as f64 * PI / 2.0).cos();
                    let scale = PI.powi((a + b) as i32);
                    match primary {
                        DiffIndet::U => scale * sx * cy,
                        DiffIndet::V => -scale * cx * sy,
                        DiffIndet::P => scale * cx * cy,
                        _ => unreachable!(),
                    }
                }
            },
        }
    }

    pub fn u(&self, x: f64, y: f64) -> f64 {
        self.deriv(DiffIndet::U, 0, 0, x, y, 1.0)
    }

    pub fn v(&self, x: f64, y: f64) -> f64 {
        self.deriv(DiffIndet::V, 0, 0, x, y, 1.0)
    }

    pub fn p(&self, x: f64, y: f64) -> f64 {
        self.deriv(DiffIndet::P, 0, 0, x, y, 1.0)
    }

    pub fn f1(&self, x: f64, y: f64, re: f64) -> f64 {
        self.deriv(DiffIndet::F1, 0, 0, x, y, re)
    }

    pub fn f2(&self, x: f64, y: f64, re: f64) -> f64 {
        self.deriv(DiffIndet::F2, 0, 0, x, y, re)
    }
}

/// Evaluate a differential polynomial on the exact solution at a point, with
/// the parameters substituted: the symbolic-to-numeric bridge used by the
/// modified-equation cross-check.
pub fn eval_diff_poly(
    p: &DiffPoly,
    case: Manufactured,
    re: f64,
    h: f64,
    x: f64,
    y: f64,
) -> Result<f64> {
    let mut acc = 0.0;
    for (t, c) in p.iter() {
        let w = c.evaluate_f64(re, h)?;
        acc += w * case.deriv(t.indet, t.shift.0 as u32, t.shift.1 as u32, x, y, re);
    }
    Ok(acc)
}

/// Evaluate a difference polynomial on the exact solution: each grid value
/// w[j+a, k+b] becomes the field sampled at (x + (a - c1) h, y + (b - c2) h)
/// relative to the stencil center (c1, c2).
pub fn eval_diffnce_poly(
    g: &DiffncePoly,
    center: (i64, i64),
    case: Manufactured,
    re: f64,
    h: f64,
    x: f64,
    y: f64,
) -> Result<f64> {
    let mut acc = 0.0;
    for (t, c) in g.iter() {
        let w = c.evaluate_f64(re, h)?;
        let (field, (da, db)) = t.indet.continuous_counterpart();
        let xs = x + (t.shift.0 - center.0) as f64 * h;
        let ys = y + (t.shift.1 - center.1) as f64 * h;
        acc += w * case.deriv(field, da, db, xs, ys, re);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trig_is_divergence_free() {
        let c = Manufactured::Trig;
        for (x, y) in [(0.3, 0.7), (0.11, 0.52), (0.9, 0.05)] {
            let div = c.deriv(DiffIndet::U, 1, 0, x, y, 1.0)
                + c.deriv(DiffIndet::V, 0, 1, x, y, 1.0);
            assert!(div.abs() < 1e-13, "divergence {div} at ({x},{y})");
        }
    }

    #[test]
    fn trig_forcing_formula() {
        // f1 = -pi sin cos + (2 pi^2 / Re) sin cos
        let c = Manufactured::Trig;
        let (x, y, re) = (0.37, 0.18, 2.5);
        let expected =
            -PI * (PI * x).sin() * (PI * y).cos() + 2.0 * PI * PI / re * (PI * x).sin() * (PI * y).cos();
        assert!((c.f1(x, y, re) - expected).abs() < 1e-12);
    }

    #[test]
    fn zero_case_forcing_vanishes() {
        let c = Manufactured::Zero;
        assert_eq!(c.f1(0.4, 0.6, 3.0), 0.0);
        assert_eq!(c.f2(0.4, 0.6, 3.0), 0.0);
        assert_eq!(c.p(0.1, 0.2), 1.0);
    }

    #[test]
    fn unknown_case_rejected() {
        assert!(Manufactured::from_name("vortex").is_err());
    }
}
