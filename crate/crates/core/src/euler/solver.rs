use crate::error::{Error, Result};
use crate::grid::{Axis, Boundaries, BoundaryKind, CellField, FaceLayout, Grid2D, Side};
use crate::limiter::{muscl_reconstruct, LimiterParams};
use crate::time::{compute_dt_cfl, heun_advance, DEFAULT_DT_MAX};

use super::{check_primitive, euler_numerical_flux, EulerState, GasParams, Primitive};

/// Spatial accuracy of the face reconstruction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpatialOrder {
    /// Piecewise-constant states (all slopes forced to zero).
    First,
    /// MUSCL reconstruction of `(rho, u, p)` with a Sweby limiter.
    Muscl(LimiterParams),
}

/// Settings of the 1D Euler Lagrange-flux solver.
#[derive(Debug, Clone, Copy)]
pub struct EulerSolver {
    pub grid: Grid2D,
    pub gas: GasParams,
    pub order: SpatialOrder,
    pub cfl: f64,
    pub bcs: Boundaries,
}

impl EulerSolver {
    pub fn new(grid: Grid2D, gas: GasParams, order: SpatialOrder, cfl: f64) -> Self {
        Self {
            grid,
            gas,
            order,
            cfl,
            bcs: Boundaries::uniform(BoundaryKind::Transmissive),
        }
    }

    pub fn with_boundaries(mut self, bcs: Boundaries) -> Self {
        self.bcs = bcs;
        self
    }

    pub fn max_signal_speed(&self, states: &[EulerState]) -> Result<f64> {
        let mut smax = 0.0f64;
        for (k, s) in states.iter().enumerate() {
            let w = s.to_primitive(self.gas);
            check_primitive(&w, k)?;
            smax = smax.max(w.u.abs() + w.sound_speed(self.gas));
        }
        Ok(smax)
    }

    pub fn stable_dt(&self, states: &[EulerState]) -> Result<f64> {
        compute_dt_cfl(self.max_signal_speed(states)?, &self.grid, self.cfl, DEFAULT_DT_MAX)
    }

    /// Semi-discrete right-hand side `-(Phi_{j+1/2} - Phi_{j-1/2}) / dx`.
    pub fn rhs(&self, states: &[EulerState]) -> Result<Vec<EulerState>> {
        let grid = &self.grid;
        if states.len() != grid.nx || grid.ny != 1 {
            return Err(Error::DimensionMismatch {
                expected: format!("{} cells on a 1D grid", grid.nx),
                found: format!("{} cells, ny = {}", states.len(), grid.ny),
            });
        }
        let prims = states
            .iter()
            .enumerate()
            .map(|(k, s)| {
                let w = s.to_primitive(self.gas);
                check_primitive(&w, k).map(|_| w)
            })
            .collect::<Result<Vec<_>>>()?;

        let slopes = match self.order {
            SpatialOrder::First => None,
            SpatialOrder::Muscl(params) => {
                let field = |f: fn(&Primitive) -> f64| {
                    let values = prims.iter().map(f).collect();
                    muscl_reconstruct(&CellField { grid: *grid, values }, Axis::X, params).values
                };
                Some([field(|w| w.rho), field(|w| w.u), field(|w| w.p)])
            }
        };
        let half = 0.5 * grid.dx;
        let face_value = |k: usize, sign: f64| -> Primitive {
            let w = prims[k];
            match &slopes {
                None => w,
                Some([sr, su, sp]) => Primitive {
                    rho: w.rho + sign * half * sr[k],
                    u: w.u + sign * half * su[k],
                    p: w.p + sign * half * sp[k],
                },
            }
        };

        let layout = FaceLayout::new(grid, Axis::X);
        let mut fluxes = Vec::with_capacity(layout.per_line);
        for f in 0..layout.per_line {
            let (left, right) = layout.sides(grid, &self.bcs, 0, f);
            let wl = side_state(
                left,
                face_value(left.source(), if left.cell().is_some() { 1.0 } else { -1.0 }),
            );
            let wr = side_state(
                right,
                face_value(right.source(), if right.cell().is_some() { -1.0 } else { 1.0 }),
            );
            fluxes.push(euler_numerical_flux(&wl, &wr, self.gas));
        }

        let inv_dx = 1.0 / grid.dx;
        Ok((0..grid.nx)
            .map(|j| {
                let (lo, hi) = (fluxes[j], fluxes[j + 1]);
                EulerState {
                    rho: -(hi[0] - lo[0]) * inv_dx,
                    mom: -(hi[1] - lo[1]) * inv_dx,
                    ene: -(hi[2] - lo[2]) * inv_dx,
                }
            })
            .collect())
    }

    /// Heun predictor/corrector step with a prescribed time step.
    pub fn step_dt(&self, states: &[EulerState], dt: f64) -> Result<Vec<EulerState>> {
        let next = heun_advance(&states.to_vec(), dt, |u| self.rhs(u))?;
        for (k, s) in next.iter().enumerate() {
            check_primitive(&s.to_primitive(self.gas), k)?;
        }
        Ok(next)
    }

    /// One CFL-limited step; returns the new states and the step used.
    pub fn step(&self, states: &[EulerState]) -> Result<(Vec<EulerState>, f64)> {
        let dt = self.stable_dt(states)?;
        Ok((self.step_dt(states, dt)?, dt))
    }

    /// Advance to `t_end`, shortening the last step to land on it exactly.
    /// Returns the number of steps taken.
    pub fn advance_to(&self, states: &mut Vec<EulerState>, t_end: f64) -> Result<usize> {
        let mut t = 0.0;
        let mut steps = 0;
        while t < t_end {
            let dt = self.stable_dt(states)?.min(t_end - t);
            *states = self.step_dt(states, dt)?;
            t = if t_end - t <= dt { t_end } else { t + dt };
            steps += 1;
        }
        Ok(steps)
    }
}

/// Ghost states: the wall mirror flips the velocity, outflow copies.
fn side_state(side: Side, w: Primitive) -> Primitive {
    if side.is_wall() {
        Primitive { u: -w.u, ..w }
    } else {
        w
    }
}

/// One CFL-limited Lagrange-flux step on a transmissive 1D domain.
pub fn euler_step(
    states: &[EulerState],
    grid: &Grid2D,
    gas: GasParams,
    limiter: LimiterParams,
    cfl: f64,
) -> Result<(Vec<EulerState>, f64)> {
    EulerSolver::new(*grid, gas, SpatialOrder::Muscl(limiter), cfl).step(states)
}

/// As [`euler_step`], with a caller-chosen time step.
pub fn euler_step_dt(
    states: &[EulerState],
    grid: &Grid2D,
    gas: GasParams,
    limiter: LimiterParams,
    dt: f64,
) -> Result<Vec<EulerState>> {
    EulerSolver::new(*grid, gas, SpatialOrder::Muscl(limiter), 1.0).step_dt(states, dt)
}
