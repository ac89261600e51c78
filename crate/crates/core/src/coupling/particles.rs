use serde::{Deserialize, Serialize};

use crate::debris::DebrisState;
use crate::grid::Grid2D;

/// Time integrator for particle trajectories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParticleScheme {
    Euler,
    #[default]
    Heun,
}

/// Visualisation tracers carried by the debris velocity.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParticleSet {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub active: Vec<bool>,
}

impl ParticleSet {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let active = vec![true; x.len()];
        Self { x, y, active }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    /// `count` particles spread over the cells in proportion to their
    /// debris mass. Placement is deterministic: particle `p` sits at the
    /// `(p + 1/2) / count` quantile of the cumulative mass, offset inside
    /// its cell by the fractional part of that quantile.
    pub fn seed(debris: &DebrisState, count: usize) -> Self {
        let grid = debris.grid;
        let total: f64 = debris.rho.iter().sum();
        if count == 0 || total.is_nan() || total <= 0.0 {
            return Self::default();
        }
        let mut cum = Vec::with_capacity(debris.rho.len());
        let mut acc = 0.0;
        for &r in &debris.rho {
            acc += r.max(0.0);
            cum.push(acc);
        }
        let (mut x, mut y) = (Vec::with_capacity(count), Vec::with_capacity(count));
        for p in 0..count {
            let q = (p as f64 + 0.5) / count as f64 * total;
            let k = cum.partition_point(|&c| c <= q).min(cum.len() - 1);
            let below = if k == 0 { 0.0 } else { cum[k - 1] };
            let frac = ((q - below) / debris.rho[k]).clamp(0.0, 1.0);
            let (i, j) = (k % grid.nx, k / grid.nx);
            x.push(grid.x0 + (i as f64 + frac) * grid.dx);
            y.push(grid.yc(j));
        }
        Self::new(x, y)
    }
}

/// Bilinear interpolation of a cell-centred field, constant beyond the
/// outermost cell centres.
pub fn bilinear(grid: &Grid2D, f: &[f64], x: f64, y: f64) -> f64 {
    let locate = |s: f64, n: usize| -> (usize, usize, f64) {
        if n == 1 || s <= 0.0 {
            return (0, 0, 0.0);
        }
        let top = (n - 1) as f64;
        if s >= top {
            return (n - 1, n - 1, 0.0);
        }
        let lo = s.floor() as usize;
        (lo, lo + 1, s - lo as f64)
    };
    let (i0, i1, tx) = locate((x - grid.x0) / grid.dx - 0.5, grid.nx);
    let (j0, j1, ty) = locate((y - grid.y0) / grid.dy - 0.5, grid.ny);
    let a = f[grid.idx(i0, j0)] * (1.0 - tx) + f[grid.idx(i1, j0)] * tx;
    let b = f[grid.idx(i0, j1)] * (1.0 - tx) + f[grid.idx(i1, j1)] * tx;
    a * (1.0 - ty) + b * ty
}

/// Moves every active particle along the cell-centred velocity field;
/// particles leaving the domain are deactivated.
pub fn particle_advect(
    particles: &mut ParticleSet,
    grid: &Grid2D,
    vx: &[f64],
    vy: &[f64],
    dt: f64,
    scheme: ParticleScheme,
) {
    let vel = |x: f64, y: f64| (bilinear(grid, vx, x, y), bilinear(grid, vy, x, y));
    for p in 0..particles.len() {
        if !particles.active[p] {
            continue;
        }
        let (x, y) = (particles.x[p], particles.y[p]);
        let (u0, v0) = vel(x, y);
        let (nx, ny) = match scheme {
            ParticleScheme::Euler => (x + dt * u0, y + dt * v0),
            ParticleScheme::Heun => {
                let (u1, v1) = vel(x + dt * u0, y + dt * v0);
                (x + 0.5 * dt * (u0 + u1), y + 0.5 * dt * (v0 + v1))
            }
        };
        particles.x[p] = nx;
        particles.y[p] = ny;
        if !(nx.is_finite() && ny.is_finite() && grid.contains(nx, ny)) {
            particles.active[p] = false;
        }
    }
}
