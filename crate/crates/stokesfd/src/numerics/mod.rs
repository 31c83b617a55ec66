//! Floating-point validation of the derived scheme: assembly of the discrete
//! systems from the symbolic stencils, direct sparse solution, a staggered
//! marker-and-cell baseline, manufactured-solution convergence studies, and a
//! qualitative porous-media demonstration.

pub mod assemble;
pub mod io;
pub mod mac;
pub mod mms;
pub mod porous;
pub mod solver;
pub mod study;

pub use assemble::{assemble, solve_case, SolverMode};
pub use mms::{eval_diff_poly, eval_diffnce_poly, Manufactured};
pub use solver::SparseSystem;

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A uniform grid with square cells on a rectangle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSpec {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    /// Unit square with `n` nodes per direction.
    pub fn unit_square(n: usize) -> Self {
        GridSpec { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0, nx: n, ny: n }
    }

    pub fn h(&self) -> f64 {
        (self.x1 - self.x0) / (self.nx - 1) as f64
    }

    pub fn validate(&self) -> Result<()> {
        const MIN_NODES: usize = 5; // widest stencil spans five nodes
        if self.nx < MIN_NODES || self.ny < MIN_NODES {
            return Err(Error::GridTooSmall { need: MIN_NODES, got: self.nx.min(self.ny) });
        }
        let dx = (self.x1 - self.x0) / (self.nx - 1) as f64;
        let dy = (self.y1 - self.y0) / (self.ny - 1) as f64;
        if (dx - dy).abs() > 1e-12 * dx.abs().max(dy.abs()) {
            return Err(Error::NonSquareCells { dx, dy });
        }
        Ok(())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + self.h() * i as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + self.h() * j as f64
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }
}

/// Collocated velocity and pressure fields, row-major with the x-index
/// fastest; masked nodes carry zero velocity.
#[derive(Debug, Clone)]
pub struct GridField {
    pub nx: usize,
    pub ny: usize,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub p: Vec<f64>,
    pub mask: Vec<bool>,
    /// Max-norm of the discrete divergence, when evaluated as a diagnostic.
    pub divergence_residual: Option<f64>,
}

impl GridField {
    pub fn zeros(nx: usize, ny: usize) -> Self {
        GridField {
            nx,
            ny,
            u: vec![0.0; nx * ny],
            v: vec![0.0; nx * ny],
            p: vec![0.0; nx * ny],
            mask: vec![false; nx * ny],
            divergence_residual: None,
        }
    }

    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn all_finite(&self) -> bool {
        self.u.iter().chain(&self.v).chain(&self.p).all(|v| v.is_finite())
    }
}

/// Circular obstacle for the porous demo.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Obstacle {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

/// Everything needed to run one case: Reynolds number, exact fields or demo
/// layout, solver mode and tolerance.  Velocity boundary conditions are
/// Dirichlet on all sides; the pressure is gauged by pinning one node.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CaseSpec {
    pub grid: GridSpec,
    pub re: f64,
    /// `trig`, `zero`, or `porous`.
    pub case: String,
    #[serde(default = "default_mode")]
    pub mode: String,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default)]
    pub obstacles: Vec<Obstacle>,
}

fn default_mode() -> String {
    "coupled".into()
}

fn default_tol() -> f64 {
    1e-10
}

impl CaseSpec {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if !(self.re > 0.0) {
            return Err(Error::InvalidCase("Re must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidCase("tolerance must be positive".into()));
        }
        Ok(())
    }

    pub fn manufactured(&self) -> Result<Manufactured> {
        Manufactured::from_name(&self.case)
    }

    pub fn solver_mode(&self) -> Result<SolverMode> {
        match self.mode.as_str() {
            "coupled" => Ok(SolverMode::Coupled),
            "poisson" | "pressure-poisson" => Ok(SolverMode::PressurePoisson),
            other => Err(Error::InvalidCase(format!("unknown mode `{other}`"))),
        }
    }
}
