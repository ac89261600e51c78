//! Eulerian debris transport driven by the water flow, with drag, ground
//! friction and a neighbour interaction term, plus the particle
//! (car-following) system it is derived from.

mod discrete;
mod transport;

pub use discrete::{density_from_spacing, Anticipation, DiscreteDebris};
pub use transport::{debris_convective_step, debris_general_step_1d, interaction_term_2d, interface_velocity};

use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::swe::blend_velocity;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DebrisParams {
    /// Interaction strength in `[0, 1]`.
    pub lambda: f64,
    /// Drag relaxation time.
    pub tau_d: f64,
    /// Ground friction time.
    pub tau_f: f64,
    /// Plunge depth below which debris touches the ground.
    pub h_f: f64,
    pub beta_f: f64,
    /// Maximum packing density.
    pub rho0: f64,
    /// Characteristic debris length.
    pub ell: f64,
}

impl Default for DebrisParams {
    fn default() -> Self {
        Self {
            lambda: 1.0,
            tau_d: 0.5,
            tau_f: 0.05,
            h_f: 0.05,
            beta_f: 1.0,
            rho0: 4.0,
            ell: 0.01,
        }
    }
}

impl DebrisParams {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, key: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::validation(key, format!("must be positive and finite, got {v}")))
            }
        };
        positive(self.tau_d, "debris.tau_d")?;
        positive(self.tau_f, "debris.tau_f")?;
        positive(self.h_f, "debris.h_f")?;
        positive(self.beta_f, "debris.beta_f")?;
        positive(self.rho0, "debris.rho0")?;
        positive(self.ell, "debris.ell")?;
        if !(0.0..=1.0).contains(&self.lambda) {
            return Err(Error::validation(
                "debris.lambda",
                format!("must lie in [0, 1], got {}", self.lambda),
            ));
        }
        Ok(())
    }
}

/// Ground friction rate `(1/tau_F) max(1, h_f/h) max(0, 1 - h/h_f)^beta`.
///
/// Zero for `h >= h_f`; `h` is clamped to `1e-12 h_f` so that a dry bed
/// gives a huge but finite rate.
pub fn friction_rate(h: f64, params: &DebrisParams) -> f64 {
    let h_f = params.h_f;
    if h >= h_f {
        return 0.0;
    }
    let h = h.max(1e-12 * h_f);
    (h_f / h).max(1.0) * (1.0 - h / h_f).powf(params.beta_f) / params.tau_f
}

/// Exact solution over `dt` of `dv/dt = (u - v)/tau_D - friction_rate(h) v`
/// with `u` and `h` frozen.
pub fn debris_source_update(v: f64, u: f64, h: f64, dt: f64, params: &DebrisParams) -> f64 {
    let r = 1.0 / params.tau_d + friction_rate(h, params);
    let decay = (-r * dt).exp();
    v * decay + (1.0 - decay) * u / (params.tau_d * r)
}

/// Debris density and the conserved momentum-like field `rho^2 v`.
#[derive(Debug, Clone, PartialEq)]
pub struct DebrisState {
    pub grid: Grid2D,
    pub rho: Vec<f64>,
    pub mx: Vec<f64>,
    pub my: Vec<f64>,
}

/// Weight of the vacuum blend used to recover `v` from `rho^2 v`, in units of `rho^4`.
pub const VACUUM_EPS: f64 = 1e-16;

impl DebrisState {
    pub fn empty(grid: Grid2D) -> Self {
        let n = grid.len();
        Self {
            grid,
            rho: vec![0.0; n],
            mx: vec![0.0; n],
            my: vec![0.0; n],
        }
    }

    pub fn from_velocity(grid: Grid2D, rho: Vec<f64>, vx: &[f64], vy: &[f64]) -> Result<Self> {
        let n = grid.len();
        if rho.len() != n || vx.len() != n || vy.len() != n {
            return Err(Error::DimensionMismatch {
                expected: format!("{n} debris cells"),
                found: format!("{}, {}, {}", rho.len(), vx.len(), vy.len()),
            });
        }
        let mx = rho.iter().zip(vx).map(|(r, v)| r * r * v).collect();
        let my = rho.iter().zip(vy).map(|(r, v)| r * r * v).collect();
        Ok(Self { grid, rho, mx, my })
    }

    /// Velocity of cell `k`; empty cells are at rest.
    #[inline]
    pub fn velocity_at(&self, k: usize) -> (f64, f64) {
        let r2 = self.rho[k] * self.rho[k];
        (
            blend_velocity(r2, self.mx[k], 0.0, VACUUM_EPS),
            blend_velocity(r2, self.my[k], 0.0, VACUUM_EPS),
        )
    }

    pub fn velocities(&self) -> (Vec<f64>, Vec<f64>) {
        (0..self.rho.len()).map(|k| self.velocity_at(k)).unzip()
    }

    pub fn set_velocity(&mut self, k: usize, vx: f64, vy: f64) {
        let r2 = self.rho[k] * self.rho[k];
        self.mx[k] = r2 * vx;
        self.my[k] = r2 * vy;
    }

    /// Total mass `sum rho |K|`.
    pub fn mass(&self) -> f64 {
        self.rho.iter().sum::<f64>() * self.grid.cell_area()
    }

    pub fn max_speed(&self) -> f64 {
        (0..self.rho.len())
            .map(|k| {
                let (vx, vy) = self.velocity_at(k);
                vx.abs().max(vy.abs())
            })
            .fold(0.0, f64::max)
    }

    /// Applies [`debris_source_update`] cell by cell with the given water
    /// velocity and depth.
    pub fn apply_sources(&mut self, u: &[f64], v: &[f64], h: &[f64], dt: f64, params: &DebrisParams) {
        for k in 0..self.rho.len() {
            if self.rho[k] == 0.0 {
                continue;
            }
            let (vx, vy) = self.velocity_at(k);
            let vx = debris_source_update(vx, u[k], h[k], dt, params);
            let vy = debris_source_update(vy, v[k], h[k], dt, params);
            self.set_velocity(k, vx, vy);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn friction_examples() {
        let p = DebrisParams {
            tau_f: 0.1,
            beta_f: 1.0,
            h_f: 0.2,
            ..Default::default()
        };
        assert_eq!(friction_rate(0.2, &p), 0.0);
        assert_eq!(friction_rate(0.4, &p), 0.0);
        assert_relative_eq!(friction_rate(0.1, &p), 10.0, max_relative = 1e-14);
        assert!(friction_rate(0.0, &p).is_finite());
        let mut last = 0.0;
        for k in 1..50 {
            let r = friction_rate(0.2 * (1.0 - k as f64 / 50.0), &p);
            assert!(r > last);
            last = r;
        }
    }

    #[test]
    fn source_examples() {
        let p = DebrisParams {
            tau_d: 0.5,
            ..Default::default()
        };
        assert_eq!(debris_source_update(0.7, 0.7, 1.0, 0.3, &p), 0.7);
        assert!((debris_source_update(0.0, 1.0, 1.0, 1e6, &p) - 1.0).abs() < 1e-15);
        let v = debris_source_update(0.0, 1.0, 1.0, 0.5, &p);
        assert!((v - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        // dry ground stops debris within a step
        assert!(debris_source_update(3.0, 0.0, 0.0, 1e-3, &p).abs() < 1e-100);
    }

    #[test]
    fn params_reject_out_of_range() {
        assert!(DebrisParams::default().validate().is_ok());
        assert!(DebrisParams {
            lambda: 1.5,
            ..Default::default()
        }
        .validate()
        .is_err());
        assert!(DebrisParams {
            tau_d: 0.0,
            ..Default::default()
        }
        .validate()
        .is_err());
    }

    #[test]
    fn velocity_round_trip_and_vacuum() {
        let grid = Grid2D::line(3, 0.0, 1.0).unwrap();
        let s = DebrisState::from_velocity(grid, vec![2.0, 0.0, 1e-9], &[1.5, 3.0, 2.0], &[0.0; 3]).unwrap();
        assert!((s.velocity_at(0).0 - 1.5).abs() < 1e-12);
        assert_eq!(s.velocity_at(1), (0.0, 0.0));
        assert!(s.velocity_at(2).0.abs() < 1e-12);
    }
}
