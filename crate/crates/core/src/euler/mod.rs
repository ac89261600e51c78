//! One-dimensional compressible Euler equations solved with the Lagrange-flux
//! scheme: a Lagrangian HLL contact solver supplies interface pressure and
//! velocity, convective fluxes are upwinded on the contact velocity.

pub mod exact;
pub mod sod;
mod solver;

pub use solver::{euler_step, euler_step_dt, EulerSolver, SpatialOrder};

use crate::error::{Error, Result};
use crate::time::StateVector;

/// Perfect-gas parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasParams {
    pub gamma: f64,
}

impl GasParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 1.0 && gamma <= 3.0) {
            return Err(Error::validation("gamma", format!("must lie in (1, 3], got {gamma}")));
        }
        Ok(Self { gamma })
    }
}

impl Default for GasParams {
    fn default() -> Self {
        Self { gamma: 1.4 }
    }
}

/// Conservative state `(rho, rho u, rho E)` of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EulerState {
    pub rho: f64,
    pub mom: f64,
    pub ene: f64,
}

/// Primitive state `(rho, u, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl EulerState {
    pub fn from_primitive(w: Primitive, gas: GasParams) -> Self {
        Self {
            rho: w.rho,
            mom: w.rho * w.u,
            ene: w.p / (gas.gamma - 1.0) + 0.5 * w.rho * w.u * w.u,
        }
    }

    #[inline]
    pub fn velocity(&self) -> f64 {
        self.mom / self.rho
    }

    pub fn to_primitive(&self, gas: GasParams) -> Primitive {
        let u = self.mom / self.rho;
        Primitive {
            rho: self.rho,
            u,
            p: (gas.gamma - 1.0) * (self.ene - 0.5 * self.rho * u * u),
        }
    }

    /// Physical flux `(rho u, rho u^2 + p, (rho E + p) u)`.
    pub fn flux(&self, gas: GasParams) -> [f64; 3] {
        let w = self.to_primitive(gas);
        [self.mom, self.mom * w.u + w.p, (self.ene + w.p) * w.u]
    }

    #[inline]
    pub fn as_array(&self) -> [f64; 3] {
        [self.rho, self.mom, self.ene]
    }

    #[inline]
    pub fn from_array(a: [f64; 3]) -> Self {
        Self {
            rho: a[0],
            mom: a[1],
            ene: a[2],
        }
    }
}

impl StateVector for EulerState {
    fn axpy(&mut self, a: f64, other: &Self) {
        self.rho += a * other.rho;
        self.mom += a * other.mom;
        self.ene += a * other.ene;
    }
}

impl Primitive {
    #[inline]
    pub fn sound_speed(&self, gas: GasParams) -> f64 {
        (gas.gamma * self.p / self.rho).sqrt()
    }
}

/// Pressure and sound speed of a conservative state.
pub fn eos_pressure(state: &EulerState, gas: GasParams) -> Result<(f64, f64)> {
    let w = state.to_primitive(gas);
    check_primitive(&w, 0)?;
    Ok((w.p, w.sound_speed(gas)))
}

pub(crate) fn check_primitive(w: &Primitive, index: usize) -> Result<()> {
    if !(w.rho.is_finite() && w.u.is_finite() && w.p.is_finite()) {
        return Err(Error::NonFiniteState {
            what: "euler state",
            index,
        });
    }
    if w.rho <= 0.0 || w.p <= 0.0 {
        return Err(Error::NonPhysicalState {
            index,
            detail: format!("rho = {}, p = {} (CFL too large?)", w.rho, w.p),
        });
    }
    Ok(())
}

/// Interface pressure and normal velocity from the Lagrangian HLL solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactValues {
    pub p_star: f64,
    pub u_star: f64,
}

/// Lagrangian HLL contact solve on primitive states.
pub fn hll_contact_primitive(left: &Primitive, right: &Primitive, gas: GasParams) -> ContactValues {
    let c = left.sound_speed(gas).max(right.sound_speed(gas));
    let rho_sum = left.rho + right.rho;
    let p_star =
        (right.rho * left.p + left.rho * right.p) / rho_sum - left.rho * right.rho / rho_sum * c * (right.u - left.u);
    let u_star = (left.rho * left.u + right.rho * right.u) / rho_sum - (right.p - left.p) / (rho_sum * c);
    ContactValues { p_star, u_star }
}

/// Lagrangian HLL contact solve on conservative states.
pub fn hll_lagrange_contact(left: &EulerState, right: &EulerState, gas: GasParams) -> Result<ContactValues> {
    let wl = left.to_primitive(gas);
    let wr = right.to_primitive(gas);
    check_primitive(&wl, 0)?;
    check_primitive(&wr, 1)?;
    Ok(hll_contact_primitive(&wl, &wr, gas))
}

/// Lagrange-flux numerical flux from the reconstructed states on either side
/// of an interface: `U_upwind u* + (0, p*, p* u*)`.
pub fn euler_numerical_flux(left: &Primitive, right: &Primitive, gas: GasParams) -> [f64; 3] {
    let contact = hll_contact_primitive(left, right, gas);
    let upwind = if contact.u_star >= 0.0 { left } else { right };
    let u = EulerState::from_primitive(*upwind, gas);
    let (p, us) = (contact.p_star, contact.u_star);
    [u.rho * us, u.mom * us + p, u.ene * us + p * us]
}
