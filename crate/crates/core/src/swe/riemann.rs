//! Lagrangian approximate Riemann solver for the Saint-Venant equations,
//! written with the pseudo-pressure `Pi = g (h+z)^2/2 - g z* (h+z)` so that
//! lake-at-rest data produce a zero contact velocity.

use crate::error::{Error, Result};

/// One side of a face: depth, normal velocity and bed elevation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceSide {
    pub h: f64,
    pub u: f64,
    pub z: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweRiemannResult {
    pub u_star: f64,
    pub h_star: f64,
    pub p_star: f64,
    pub z_star: f64,
}

/// Sub-characteristic speed `max(c_L, c_R, -(u_R - u_L)_-)`.
///
/// The compression term keeps `1 + (u_R - u_L) / (2 sigma) >= 1/2`.
pub fn sigma_subcharacteristic(left: &FaceSide, right: &FaceSide, g: f64) -> f64 {
    let cl = (g * left.h.max(0.0)).sqrt();
    let cr = (g * right.h.max(0.0)).sqrt();
    let compression = (left.u - right.u).max(0.0);
    cl.max(cr).max(compression)
}

/// Wet-wet contact state.
pub fn swe_riemann_wet(left: &FaceSide, right: &FaceSide, g: f64, sigma: f64) -> Result<SweRiemannResult> {
    let kappa = 1.0 + (right.u - left.u) / (2.0 * sigma);
    if kappa.is_nan() || kappa <= 0.0 {
        return Err(Error::DegenerateRiemann { kappa });
    }
    let h_sum = left.h + right.h;
    let u_star =
        (left.h * left.u + right.h * right.u) / h_sum - g * ((right.h + right.z) - (left.h + left.z)) / (2.0 * sigma);
    let h_star = 0.5 * h_sum / kappa;
    Ok(SweRiemannResult {
        u_star,
        h_star,
        p_star: 0.5 * g * h_star * h_star,
        z_star: 0.5 * (left.z + right.z),
    })
}

/// Dry-dry contact velocity: depths are neglected and only the bed slope
/// drives the interface.
pub fn swe_riemann_dry(left: &FaceSide, right: &FaceSide, g: f64, sigma: f64) -> f64 {
    0.5 * (left.u + right.u) - g * (right.z - left.z) / (2.0 * sigma)
}
