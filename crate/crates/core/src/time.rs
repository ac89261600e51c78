//! Time-step control and the two-stage Heun driver.

use crate::error::{Error, Result};
use crate::grid::Grid2D;

/// Default time step used when nothing moves.
pub const DEFAULT_DT_MAX: f64 = 1e-3;

/// `dt = cfl * min(dx, dy) / max_signal_speed`, or `dt_max` for a quiescent state.
pub fn compute_dt_cfl(max_signal_speed: f64, grid: &Grid2D, cfl: f64, dt_max: f64) -> Result<f64> {
    if !max_signal_speed.is_finite() {
        return Err(Error::NonFiniteState {
            what: "max signal speed",
            index: 0,
        });
    }
    if !(cfl > 0.0 && cfl <= 1.0) {
        return Err(Error::validation("cfl", format!("must lie in (0, 1], got {cfl}")));
    }
    if !(dt_max > 0.0 && dt_max.is_finite()) {
        return Err(Error::validation("dt_max", format!("must be positive, got {dt_max}")));
    }
    let speed = max_signal_speed.abs();
    if speed == 0.0 {
        return Ok(dt_max);
    }
    let dt = cfl * grid.min_spacing() / speed;
    Ok(if dt > 0.0 { dt } else { dt_max })
}

/// States that can be combined linearly by the Heun driver.
pub trait StateVector: Clone {
    /// `self += a * other`
    fn axpy(&mut self, a: f64, other: &Self);
}

impl StateVector for f64 {
    fn axpy(&mut self, a: f64, other: &Self) {
        *self += a * other;
    }
}

impl<T: StateVector> StateVector for Vec<T> {
    fn axpy(&mut self, a: f64, other: &Self) {
        debug_assert_eq!(self.len(), other.len());
        for (s, o) in self.iter_mut().zip(other) {
            s.axpy(a, o);
        }
    }
}

impl<const N: usize> StateVector for [f64; N] {
    fn axpy(&mut self, a: f64, other: &Self) {
        for (s, o) in self.iter_mut().zip(other) {
            *s += a * o;
        }
    }
}

/// One Heun step: `U* = U + dt F(U)`, `U' = U + dt (F(U) + F(U*)) / 2`.
pub fn heun_advance<S, E, F>(state: &S, dt: f64, mut rhs: F) -> Result<S, E>
where
    S: StateVector,
    F: FnMut(&S) -> Result<S, E>,
{
    let k1 = rhs(state)?;
    let mut predicted = state.clone();
    predicted.axpy(dt, &k1);
    let k2 = rhs(&predicted)?;
    let mut next = state.clone();
    next.axpy(0.5 * dt, &k1);
    next.axpy(0.5 * dt, &k2);
    Ok(next)
}
