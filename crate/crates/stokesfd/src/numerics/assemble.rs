//! Assembly of the discrete systems for the derived collocated scheme.
//!
//! Interior rows are generated directly from the symbolic scheme polynomials:
//! each stencil weight is the exact coefficient evaluated at the case's
//! (Re, h).  Boundary velocity rows are Dirichlet; boundary pressure rows use
//! one-sided second-order closures of the momentum equations; one pressure
//! node is pinned as the gauge.

use super::mms::Manufactured;
use super::solver::SparseSystem;
use super::{CaseSpec, GridField, GridSpec};
use crate::difference::{DiffncePoly, GridIndet};
use crate::error::{Error, Result};
use crate::stokes::{compact_poisson_variant, s_consistent_scheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMode {
    /// One linear system for (u, v, p) at every node.
    Coupled,
    /// Pressure first from the wide Poisson equation, then the two momentum
    /// solves; continuity is evaluated as a diagnostic only.
    PressurePoisson,
}

/// Boundary and forcing data for a case.
pub trait CaseData {
    fn velocity(&self, x: f64, y: f64) -> (f64, f64);
    fn forcing(&self, x: f64, y: f64) -> (f64, f64);
    /// Exact pressure when known (used for the gauge value and, in
    /// pressure-Poisson mode, the boundary closure).
    fn pressure(&self, x: f64, y: f64) -> Option<f64>;
    /// Laplacian of each velocity component when known exactly.
    fn velocity_laplacian(&self, x: f64, y: f64) -> Option<(f64, f64)>;
}

/// A manufactured case together with its Reynolds number.
#[derive(Debug, Clone, Copy)]
pub struct ManufacturedCase {
    pub case: Manufactured,
    pub re: f64,
}

impl CaseData for ManufacturedCase {
    fn velocity(&self, x: f64, y: f64) -> (f64, f64) {
        (self.case.u(x, y), self.case.v(x, y))
    }

    fn forcing(&self, x: f64, y: f64) -> (f64, f64) {
        (self.case.f1(x, y, self.re), self.case.f2(x, y, self.re))
    }

    fn pressure(&self, x: f64, y: f64) -> Option<f64> {
        Some(self.case.p(x, y))
    }

    fn velocity_laplacian(&self, x: f64, y: f64) -> Option<(f64, f64)> {
        use crate::differential::DiffIndet::{U, V};
        let lu = self.case.deriv(U, 2, 0, x, y, self.re) + self.case.deriv(U, 0, 2, x, y, self.re);
        let lv = self.case.deriv(V, 2, 0, x, y, self.re) + self.case.deriv(V, 0, 2, x, y, self.re);
        Some((lu, lv))
    }
}

/// A stencil extracted from a difference polynomial: unknown weights and
/// forcing weights at offsets relative to the stencil center.
struct Stencil {
    unknowns: Vec<(GridIndet, i64, i64, f64)>,
    forcing: Vec<(GridIndet, i64, i64, f64)>,
}

fn extract_stencil(g: &DiffncePoly, center: (i64, i64), re: f64, h: f64) -> Result<Stencil> {
    let mut unknowns = Vec::new();
    let mut forcing = Vec::new();
    for (t, c) in g.iter() {
        let w = c.evaluate_f64(re, h)?;
        let di = t.shift.0 - center.0;
        let dj = t.shift.1 - center.1;
        match t.indet {
            GridIndet::U | GridIndet::V | GridIndet::P => unknowns.push((t.indet, di, dj, w)),
            GridIndet::F1 | GridIndet::F2 => forcing.push((t.indet, di, dj, w)),
            other => {
                return Err(Error::InvalidCase(format!(
                    "stencil references auxiliary grid function {other:?}"
                )))
            }
        }
    }
    Ok(Stencil { unknowns, forcing })
}

fn unknown_col(grid: &GridSpec, kind: GridIndet, i: i64, j: i64) -> usize {
    let n = grid.idx(i as usize, j as usize);
    match kind {
        GridIndet::U => 3 * n,
        GridIndet::V => 3 * n + 1,
        GridIndet::P => 3 * n + 2,
        _ => unreachable!(),
    }
}

/// Assemble the coupled system for the derived scheme on the given grid.
/// `mask[n]` marks solid nodes (zero velocity).  Rows per node: momentum-x,
/// momentum-y, continuity (interior); Dirichlet velocity plus a one-sided
/// momentum closure for the pressure (boundary).
pub fn assemble(
    grid: &GridSpec,
    data: &dyn CaseData,
    re: f64,
    mask: &[bool],
) -> Result<SparseSystem> {
    grid.validate()?;
    let h = grid.h();
    let scheme = s_consistent_scheme();
    let momentum_x = extract_stencil(&scheme[1], (1, 1), re, h)?;
    let momentum_y = extract_stencil(&scheme[2], (1, 1), re, h)?;
    let continuity = extract_stencil(&scheme[0], (1, 1), re, h)?;
    let (nx, ny) = (grid.nx, grid.ny);
    let mut sys = SparseSystem::new(3 * nx * ny, "node-major, (u, v, p) per node");

    // pressure gauge: first unmasked node in index order
    let gauge = (0..nx * ny).find(|n| !mask[*n]).ok_or_else(|| {
        Error::InvalidCase("every node is masked".into())
    })?;

    for j in 0..ny {
        for i in 0..nx {
            let n = grid.idx(i, j);
            let (x, y) = (grid.x(i), grid.y(j));
            let row_u = 3 * n;
            let row_v = 3 * n + 1;
            let row_p = 3 * n + 2;
            if mask[n] {
                sys.push(row_u, row_u, 1.0);
                sys.push(row_v, row_v, 1.0);
                // harmonic pressure extension into the mask
                let mut nbrs = Vec::new();
                for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if ii >= 0 && jj >= 0 && (ii as usize) < nx && (jj as usize) < ny {
                        let m = grid.idx(ii as usize, jj as usize);
                        if !mask[m] {
                            nbrs.push(m);
                        }
                    }
                }
                sys.push(row_p, row_p, 1.0);
                if !nbrs.is_empty() {
                    let w = -1.0 / nbrs.len() as f64;
                    for m in nbrs {
                        sys.push(row_p, 3 * m + 2, w);
                    }
                }
                continue;
            }
            let interior = i >= 1 && i + 1 < nx && j >= 1 && j + 1 < ny;
            if interior {
                let (f1, f2) = data.forcing(x, y);
                for (st, row, fval) in [
                    (&momentum_x, row_u, (f1, f2)),
                    (&momentum_y, row_v, (f1, f2)),
                    (&continuity, row_p, (f1, f2)),
                ] {
                    for &(kind, di, dj, w) in &st.unknowns {
                        sys.push(row, unknown_col(grid, kind, i as i64 + di, j as i64 + dj), w);
                    }
                    for &(kind, _di, _dj, w) in &st.forcing {
                        // forcing is smooth: sample at the stencil's own node
                        let f = match kind {
                            GridIndet::F1 => fval.0,
                            GridIndet::F2 => fval.1,
                            _ => unreachable!(),
                        };
                        sys.add_rhs(row, -w * f);
                    }
                }
            } else {
                let (ub, vb) = data.velocity(x, y);
                sys.push(row_u, row_u, 1.0);
                sys.add_rhs(row_u, ub);
                sys.push(row_v, row_v, 1.0);
                sys.add_rhs(row_v, vb);
                pressure_closure_row(&mut sys, grid, data, re, i, j, row_p);
            }
            if n == gauge {
                // replace the pressure row with the gauge
                retain_rows_except(&mut sys, row_p);
                sys.rhs[row_p] = data.pressure(x, y).unwrap_or(0.0);
                sys.push(row_p, row_p, 1.0);
            }
        }
    }
    Ok(sys)
}

fn retain_rows_except(sys: &mut SparseSystem, row: usize) {
    sys.triplets.retain(|&(i, _, _)| i != row);
    sys.rhs[row] = 0.0;
}

/// One-sided second-order momentum closure for the boundary pressure:
/// on a vertical boundary  p_x - lap(u)/Re = f1 , on a horizontal one
/// p_y - lap(v)/Re = f2 , with one-sided differences pointing inward.
fn pressure_closure_row(
    sys: &mut SparseSystem,
    grid: &GridSpec,
    data: &dyn CaseData,
    re: f64,
    i: usize,
    j: usize,
    row: usize,
) {
    let h = grid.h();
    let (nx, ny) = (grid.nx, grid.ny);
    let (x, y) = (grid.x(i), grid.y(j));
    let col = |kind: GridIndet, ii: i64, jj: i64| unknown_col(grid, kind, ii, jj);
    let (i, j) = (i as i64, j as i64);
    // direction: prefer x-closure on vertical boundaries, y-closure otherwise
    let vertical = i == 0 || i == (nx - 1) as i64;
    let (f1v, f2v) = data.forcing(x, y);
    if vertical {
        let s: i64 = if i == 0 { 1 } else { -1 };
        // p_x one-sided: s * (-3 p0 + 4 p1 - p2) / (2h)
        for (k, w) in [(0i64, -3.0), (1, 4.0), (2, -1.0)] {
            sys.push(row, col(GridIndet::P, i + s * k, j), s as f64 * w / (2.0 * h));
        }
        // u_xx one-sided: (2 u0 - 5 u1 + 4 u2 - u3) / h^2
        for (k, w) in [(0i64, 2.0), (1, -5.0), (2, 4.0), (3, -1.0)] {
            sys.push(row, col(GridIndet::U, i + s * k, j), -w / (re * h * h));
        }
        // u_yy: central when possible, one-sided in the corners
        if j >= 1 && j + 1 < ny as i64 {
            for (k, w) in [(-1i64, 1.0), (0, -2.0), (1, 1.0)] {
                sys.push(row, col(GridIndet::U, i, j + k), -w / (re * h * h));
            }
        } else {
            let t: i64 = if j == 0 { 1 } else { -1 };
            for (k, w) in [(0i64, 2.0), (1, -5.0), (2, 4.0), (3, -1.0)] {
                sys.push(row, col(GridIndet::U, i, j + t * k), -w / (re * h * h));
            }
        }
        sys.add_rhs(row, f1v);
    } else {
        let s: i64 = if j == 0 { 1 } else { -1 };
        for (k, w) in [(0i64, -3.0), (1, 4.0), (2, -1.0)] {
            sys.push(row, col(GridIndet::P, i, j + s * k), s as f64 * w / (2.0 * h));
        }
        for (k, w) in [(0i64, 2.0), (1, -5.0), (2, 4.0), (3, -1.0)] {
            sys.push(row, col(GridIndet::V, i, j + s * k), -w / (re * h * h));
        }
        if i >= 1 && i + 1 < nx as i64 {
            for (k, w) in [(-1i64, 1.0), (0, -2.0), (1, 1.0)] {
                sys.push(row, col(GridIndet::V, i + k, j), -w / (re * h * h));
            }
        } else {
            let t: i64 = if i == 0 { 1 } else { -1 };
            for (k, w) in [(0i64, 2.0), (1, -5.0), (2, 4.0), (3, -1.0)] {
                sys.push(row, col(GridIndet::V, i + t * k, j), -w / (re * h * h));
            }
        }
        sys.add_rhs(row, f2v);
    }
}

/// Extract the solution fields from the coupled solution vector.
fn fields_from_solution(grid: &GridSpec, x: &[f64], mask: &[bool]) -> GridField {
    let mut f = GridField::zeros(grid.nx, grid.ny);
    for n in 0..grid.nx * grid.ny {
        f.u[n] = x[3 * n];
        f.v[n] = x[3 * n + 1];
        f.p[n] = x[3 * n + 2];
        f.mask[n] = mask[n];
    }
    f
}

fn divergence_residual(grid: &GridSpec, f: &GridField) -> f64 {
    let h = grid.h();
    let mut worst = 0.0f64;
    for j in 1..grid.ny - 1 {
        for i in 1..grid.nx - 1 {
            if f.mask[grid.idx(i, j)] {
                continue;
            }
            let div = (f.u[grid.idx(i + 1, j)] - f.u[grid.idx(i - 1, j)]) / (2.0 * h)
                + (f.v[grid.idx(i, j + 1)] - f.v[grid.idx(i, j - 1)]) / (2.0 * h);
            worst = worst.max(div.abs());
        }
    }
    worst
}

/// Solve one case with the derived scheme.
pub fn solve_case(spec: &CaseSpec) -> Result<GridField> {
    spec.validate()?;
    let case = ManufacturedCase {
        case: spec.manufactured()?,
        re: spec.re,
    };
    let mask = vec![false; spec.grid.nx * spec.grid.ny];
    match spec.solver_mode()? {
        SolverMode::Coupled => solve_coupled(&spec.grid, &case, spec.re, &mask, spec.tol),
        SolverMode::PressurePoisson => solve_pressure_poisson(&spec.grid, &case, spec.re, spec.tol),
    }
}

pub fn solve_coupled(
    grid: &GridSpec,
    data: &dyn CaseData,
    re: f64,
    mask: &[bool],
    tol: f64,
) -> Result<GridField> {
    let sys = assemble(grid, data, re, mask)?;
    let x = sys.solve(tol)?;
    let mut f = fields_from_solution(grid, &x, mask);
    f.divergence_residual = Some(divergence_residual(grid, &f));
    Ok(f)
}

/// Pressure-Poisson mode: solve the wide pressure equation first (compact
/// variant on the first interior ring, one-sided momentum closure with exact
/// velocity Laplacians on the boundary), then the two momentum Poisson
/// problems; the divergence is evaluated as a diagnostic only.
pub fn solve_pressure_poisson(
    grid: &GridSpec,
    data: &dyn CaseData,
    re: f64,
    tol: f64,
) -> Result<GridField> {
    grid.validate()?;
    let h = grid.h();
    let (nx, ny) = (grid.nx, grid.ny);
    let nn = nx * ny;
    let scheme = s_consistent_scheme();
    let wide = extract_stencil(&scheme[3], (2, 2), re, h)?;
    let compact = extract_stencil(&compact_poisson_variant(), (1, 1), re, h)?;

    // --- pressure solve -----------------------------------------------------
    let mut psys = SparseSystem::new(nn, "node-major, pressure only");
    for j in 0..ny {
        for i in 0..nx {
            let n = grid.idx(i, j);
            let (x, y) = (grid.x(i), grid.y(j));
            let boundary = i == 0 || j == 0 || i + 1 == nx || j + 1 == ny;
            let deep = i >= 2 && j >= 2 && i + 2 < nx && j + 2 < ny;
            if n == 0 {
                let pv = data
                    .pressure(x, y)
                    .ok_or_else(|| Error::InvalidCase("gauge needs a pressure value".into()))?;
                psys.push(n, n, 1.0);
                psys.add_rhs(n, pv);
                continue;
            }
            if boundary {
                // one-sided momentum closure with the exact velocity Laplacian
                let (lu, lv) = data.velocity_laplacian(x, y).ok_or_else(|| {
                    Error::InvalidCase("pressure-poisson mode needs exact velocity data".into())
                })?;
                let (f1v, f2v) = data.forcing(x, y);
                let vertical = i == 0 || i + 1 == nx;
                if vertical {
                    let s: i64 = if i == 0 { 1 } else { -1 };
                    for (k, w) in [(0i64, -3.0), (1, 4.0), (2, -1.0)] {
                        let m = grid.idx((i as i64 + s * k) as usize, j);
                        psys.push(n, m, s as f64 * w / (2.0 * h));
                    }
                    psys.add_rhs(n, f1v + lu / re);
                } else {
                    let s: i64 = if j == 0 { 1 } else { -1 };
                    for (k, w) in [(0i64, -3.0), (1, 4.0), (2, -1.0)] {
                        let m = grid.idx(i, (j as i64 + s * k) as usize);
                        psys.push(n, m, s as f64 * w / (2.0 * h));
                    }
                    psys.add_rhs(n, f2v + lv / re);
                }
                continue;
            }
            let st = if deep { &wide } else { &compact };
            for &(kind, di, dj, w) in &st.unknowns {
                debug_assert_eq!(kind, GridIndet::P);
                let m = grid.idx((i as i64 + di) as usize, (j as i64 + dj) as usize);
                psys.push(n, m, w);
            }
            for &(kind, di, dj, w) in &st.forcing {
                let (xs, ys) = (x + di as f64 * h, y + dj as f64 * h);
                let (f1v, f2v) = data.forcing(xs, ys);
                let f = match kind {
                    GridIndet::F1 => f1v,
                    GridIndet::F2 => f2v,
                    _ => unreachable!(),
                };
                psys.add_rhs(n, -w * f);
            }
        }
    }
    let p = psys.solve(tol)?;

    // --- velocity solves ------------------------------------------------------
    let mut f = GridField::zeros(nx, ny);
    f.p = p.clone();
    for (component, stencil) in [(0usize, &scheme[1]), (1, &scheme[2])] {
        let st = extract_stencil(stencil, (1, 1), re, h)?;
        let mut vsys = SparseSystem::new(nn, "node-major, one velocity component");
        for j in 0..ny {
            for i in 0..nx {
                let n = grid.idx(i, j);
                let (x, y) = (grid.x(i), grid.y(j));
                let boundary = i == 0 || j == 0 || i + 1 == nx || j + 1 == ny;
                if boundary {
                    let (ub, vb) = data.velocity(x, y);
                    vsys.push(n, n, 1.0);
                    vsys.add_rhs(n, if component == 0 { ub } else { vb });
                    continue;
                }
                let (f1v, f2v) = data.forcing(x, y);
                for &(kind, di, dj, w) in &st.unknowns {
                    let m = grid.idx((i as i64 + di) as usize, (j as i64 + dj) as usize);
                    match kind {
                        GridIndet::U | GridIndet::V => vsys.push(n, m, w),
                        GridIndet::P => vsys.add_rhs(n, -w * p[m]),
                        _ => unreachable!(),
                    }
                }
                for &(kind, _, _, w) in &st.forcing {
                    let fv = match kind {
                        GridIndet::F1 => f1v,
                        GridIndet::F2 => f2v,
                        _ => unreachable!(),
                    };
                    vsys.add_rhs(n, -w * fv);
                }
            }
        }
        let sol = vsys.solve(tol)?;
        if component == 0 {
            f.u = sol;
        } else {
            f.v = sol;
        }
    }
    f.divergence_residual = Some(divergence_residual(grid, &f));
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coupled_dimension_on_nine_by_nine() {
        let grid = GridSpec::unit_square(9);
        let case = ManufacturedCase { case: Manufactured::Zero, re: 1.0 };
        let mask = vec![false; 81];
        let sys = assemble(&grid, &case, 1.0, &mask).unwrap();
        assert_eq!(sys.n, 243);
    }

    #[test]
    fn zero_case_is_reproduced_exactly() {
        let grid = GridSpec::unit_square(9);
        let spec = CaseSpec {
            grid,
            re: 1.0,
            case: "zero".into(),
            mode: "coupled".into(),
            tol: 1e-10,
            obstacles: vec![],
        };
        let f = solve_case(&spec).unwrap();
        for n in 0..81 {
            assert!(f.u[n].abs() < 1e-11);
            assert!(f.v[n].abs() < 1e-11);
            assert!((f.p[n] - 1.0).abs() < 1e-9);
        }
    }
}
