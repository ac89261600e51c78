//! Sod shock tube driver and error measures against the exact solution.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::limiter::LimiterParams;

use super::exact::{right_shock_speed, star_state, StarState};
use super::{exact, EulerSolver, EulerState, GasParams, Primitive, SpatialOrder};

pub const SOD_LEFT: Primitive = Primitive {
    rho: 1.0,
    u: 0.0,
    p: 1.0,
};
pub const SOD_RIGHT: Primitive = Primitive {
    rho: 0.125,
    u: 0.0,
    p: 0.1,
};

/// Shock tube on `[0, 1]` with the diaphragm at `x = 0.5`.
#[derive(Debug, Clone, Copy)]
pub struct ShockTube {
    pub left: Primitive,
    pub right: Primitive,
    pub cells: usize,
    pub t_end: f64,
    pub cfl: f64,
    pub order: SpatialOrder,
    pub gas: GasParams,
}

impl ShockTube {
    pub const DIAPHRAGM: f64 = 0.5;

    /// Sod's problem with 384 cells, `T = 0.23`, CFL 0.25 and a Sweby limiter with `beta = 1.5`.
    pub fn sod() -> Self {
        Self {
            left: SOD_LEFT,
            right: SOD_RIGHT,
            cells: 384,
            t_end: 0.23,
            cfl: 0.25,
            order: SpatialOrder::Muscl(LimiterParams { beta: 1.5 }),
            gas: GasParams::default(),
        }
    }

    pub fn with_cells(mut self, cells: usize) -> Self {
        self.cells = cells;
        self
    }

    pub fn grid(&self) -> Result<Grid2D> {
        Grid2D::line(self.cells, 0.0, 1.0)
    }

    pub fn initial_states(&self) -> Result<Vec<EulerState>> {
        let grid = self.grid()?;
        Ok((0..grid.nx)
            .map(|i| {
                let w = if grid.xc(i) < Self::DIAPHRAGM {
                    self.left
                } else {
                    self.right
                };
                EulerState::from_primitive(w, self.gas)
            })
            .collect())
    }

    pub fn run(&self) -> Result<TubeResult> {
        let grid = self.grid()?;
        let solver = EulerSolver::new(grid, self.gas, self.order, self.cfl);
        let mut states = self.initial_states()?;
        let steps = solver.advance_to(&mut states, self.t_end)?;
        let x = (0..grid.nx).map(|i| grid.xc(i)).collect();
        let prims = states.iter().map(|s| s.to_primitive(self.gas)).collect();
        Ok(TubeResult { x, prims, steps })
    }

    /// Exact solution sampled at the cell centers at `t_end`.
    pub fn exact(&self, x: &[f64]) -> Result<Vec<Primitive>> {
        let s: Vec<f64> = x.iter().map(|&x| (x - Self::DIAPHRAGM) / self.t_end).collect();
        exact::exact_riemann_oracle(&self.left, &self.right, self.gas, &s)
    }

    pub fn star(&self) -> Result<StarState> {
        star_state(&self.left, &self.right, self.gas)
    }

    /// Location of the right-running shock at `t_end`.
    pub fn shock_position(&self) -> Result<f64> {
        let star = self.star()?;
        Ok(Self::DIAPHRAGM + right_shock_speed(&self.right, star, self.gas) * self.t_end)
    }

    /// Runs the tube and measures it against the exact solution.
    pub fn report(&self) -> Result<SodReport> {
        let result = self.run()?;
        let exact = self.exact(&result.x)?;
        let shock = self.shock_position()?;
        let post = self.exact(&[shock - 1e-9])?[0].rho;
        let dx = 1.0 / self.cells as f64;
        Ok(SodReport {
            cells: self.cells,
            steps: result.steps,
            l1_density: result.l1_density_error(&exact),
            shock_spread: result.shock_spread(shock, 10.0 * dx, self.right.rho, post),
            result,
        })
    }
}

#[derive(Debug, Clone)]
pub struct SodReport {
    pub cells: usize,
    pub steps: usize,
    pub l1_density: f64,
    /// Cells inside the numerical shock layer.
    pub shock_spread: usize,
    pub result: TubeResult,
}

#[derive(Debug, Clone)]
pub struct TubeResult {
    pub x: Vec<f64>,
    pub prims: Vec<Primitive>,
    pub steps: usize,
}

impl TubeResult {
    /// `sum |rho - rho_exact| dx` over the tube.
    pub fn l1_density_error(&self, exact: &[Primitive]) -> f64 {
        let dx = if self.x.len() > 1 { self.x[1] - self.x[0] } else { 1.0 };
        self.prims
            .iter()
            .zip(exact)
            .map(|(a, b)| (a.rho - b.rho).abs())
            .sum::<f64>()
            * dx
    }

    /// Number of cells inside the window `[shock - width, shock + width]`
    /// whose density sits strictly between the pre- and post-shock values,
    /// excluding a 5% margin of the jump on each side.
    pub fn shock_spread(&self, shock: f64, width: f64, pre: f64, post: f64) -> usize {
        let (lo, hi) = (pre.min(post), pre.max(post));
        let margin = 0.05 * (hi - lo);
        self.x
            .iter()
            .zip(&self.prims)
            .filter(|(&x, w)| (x - shock).abs() <= width && w.rho > lo + margin && w.rho < hi - margin)
            .count()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        write_profile_csv(path, &self.x, &self.prims)
    }
}

/// Writes a 1D profile as `x,rho,u,p` rows with 17 significant digits.
pub fn write_profile_csv(path: &Path, x: &[f64], prims: &[Primitive]) -> Result<()> {
    let io = |e| Error::io(path, e);
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(out, "x,rho,u,p").map_err(io)?;
    for (x, w) in x.iter().zip(prims) {
        writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", x, w.rho, w.u, w.p).map_err(io)?;
    }
    out.flush().map_err(io)
}
