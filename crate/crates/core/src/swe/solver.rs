use crate::error::{Error, Result};
use crate::grid::{donor, outflow_limiter, Axis, FaceLayout};
use crate::time::compute_dt_cfl;

use super::riemann::{sigma_subcharacteristic, swe_riemann_dry, swe_riemann_wet, FaceSide};
use super::wetdry::{blend_velocity, dry_velocity_advance, relax_dry_velocity};
use super::{DryVelocityField, SweParams, SweState, Topography};

/// Interface quantities entering the momentum balance of one cell along
/// one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaceValues {
    /// Convective momentum flux `(hu)_upwind u*`.
    pub conv: f64,
    pub p_star: f64,
    pub h_star: f64,
    pub z_edge: f64,
}

/// Normal-momentum update of one cell from its low and high faces:
/// `hu - dt/dx (dPhi + dp* + g hbar dz)` with `hbar` the mean of the two
/// interface depths. Lake-at-rest data give a zero increment.
pub fn well_balanced_momentum_update(hu: f64, lo: &FaceValues, hi: &FaceValues, g: f64, dt: f64, dx: f64) -> f64 {
    hu - dt / dx * momentum_divergence(lo, hi, g)
}

#[inline]
fn momentum_divergence(lo: &FaceValues, hi: &FaceValues, g: f64) -> f64 {
    let h_bar = 0.5 * (lo.h_star + hi.h_star);
    (hi.conv - lo.conv) + (hi.p_star - lo.p_star) + g * h_bar * (hi.z_edge - lo.z_edge)
}

/// Face fluxes normal to one axis.
struct AxisFluxes {
    layout: FaceLayout,
    mass: Vec<f64>,
    /// Convective flux of the momentum component normal to the faces.
    mom_n: Vec<f64>,
    /// Convective flux of the tangential momentum component.
    mom_t: Vec<f64>,
    p_star: Vec<f64>,
    h_star: Vec<f64>,
    /// Bed height used by the gravity source at each face.
    z_edge: Vec<f64>,
}

fn sweep(
    axis: Axis,
    state: &SweState,
    vel: (&[f64], &[f64]),
    topo: &Topography,
    params: &SweParams,
) -> Result<AxisFluxes> {
    let grid = state.grid;
    let layout = FaceLayout::new(&grid, axis);
    let g = params.gravity;
    let h_wet = params.wet_dry.h_wet;
    let h_wet2 = 2.0 * h_wet;
    let (sigma_floor, sigma_dry_floor) = (params.sigma_floor(), params.sigma_dry_floor());
    let (un, _) = match axis {
        Axis::X => vel,
        Axis::Y => (vel.1, vel.0),
    };
    let (qn, qt) = match axis {
        Axis::X => (&state.hu, &state.hv),
        Axis::Y => (&state.hv, &state.hu),
    };
    let n = layout.len();
    let mut out = AxisFluxes {
        layout,
        mass: vec![0.0; n],
        mom_n: vec![0.0; n],
        mom_t: vec![0.0; n],
        p_star: vec![0.0; n],
        h_star: vec![0.0; n],
        z_edge: topo.edges(axis).to_vec(),
    };
    for line in 0..layout.lines {
        for f in 0..layout.per_line {
            let (l, r) = layout.sides(&grid, &params.bcs, line, f);
            let (kl, kr) = (l.source(), r.source());
            let flip = |wall: bool, v: f64| if wall { -v } else { v };
            let mut left = FaceSide {
                h: state.h[kl],
                u: flip(l.is_wall(), un[kl]),
                z: topo.z.values[kl],
            };
            let mut right = FaceSide {
                h: state.h[kr],
                u: flip(r.is_wall(), un[kr]),
                z: topo.z.values[kr],
            };
            let face = layout.face(line, f);
            // a dry cell whose bed rises above the neighbouring free surface
            // acts as a wall for this step
            let emerged = |wet: &FaceSide, dry: &FaceSide| wet.h >= h_wet && dry.h < h_wet && dry.z > wet.h + wet.z;
            if emerged(&left, &right) {
                right = FaceSide {
                    h: left.h,
                    u: -left.u,
                    z: left.z,
                };
                out.z_edge[face] = left.z;
            } else if emerged(&right, &left) {
                left = FaceSide {
                    h: right.h,
                    u: -right.u,
                    z: right.z,
                };
                out.z_edge[face] = right.z;
            }
            let sigma = sigma_subcharacteristic(&left, &right, g);
            let (u_star, h_star) = if left.h + right.h >= h_wet2 {
                let res = swe_riemann_wet(&left, &right, g, sigma.max(sigma_floor))?;
                (res.u_star, res.h_star)
            } else {
                let sigma = sigma.max(sigma_dry_floor);
                let kappa = 1.0 + (right.u - left.u) / (2.0 * sigma);
                (
                    swe_riemann_dry(&left, &right, g, sigma),
                    0.5 * (left.h + right.h) / kappa,
                )
            };
            let (k, side, h_up) = if u_star >= 0.0 {
                (kl, l, left.h)
            } else {
                (kr, r, right.h)
            };
            out.mass[face] = h_up * u_star;
            out.mom_n[face] = flip(side.is_wall(), qn[k]) * u_star;
            out.mom_t[face] = qt[k] * u_star;
            out.h_star[face] = h_star;
            out.p_star[face] = 0.5 * g * h_star * h_star;
        }
    }
    Ok(out)
}

/// Velocity seen by the scheme: the Tykhonov blend of `hu / h` and the dry velocity.
fn blended_velocities(state: &SweState, dry: &DryVelocityField, eps: f64) -> (Vec<f64>, Vec<f64>) {
    let n = state.h.len();
    let mut u = Vec::with_capacity(n);
    let mut v = Vec::with_capacity(n);
    for k in 0..n {
        u.push(blend_velocity(state.h[k], state.hu[k], dry.u[k], eps));
        v.push(blend_velocity(state.h[k], state.hv[k], dry.v[k], eps));
    }
    (u, v)
}

/// Largest `|u| + sqrt(g h)` over the cells, with `u` the blended velocity.
pub fn max_signal_speed(state: &SweState, dry: &DryVelocityField, params: &SweParams) -> f64 {
    let eps = params.wet_dry.eps(&state.grid);
    let g = params.gravity;
    (0..state.h.len())
        .map(|k| {
            let h = state.h[k].max(0.0);
            let u = blend_velocity(h, state.hu[k], dry.u[k], eps);
            let v = blend_velocity(h, state.hv[k], dry.v[k], eps);
            u.hypot(v) + (g * h).sqrt()
        })
        .fold(0.0, f64::max)
}

pub fn stable_dt(state: &SweState, dry: &DryVelocityField, params: &SweParams) -> Result<f64> {
    compute_dt_cfl(
        max_signal_speed(state, dry, params),
        &state.grid,
        params.cfl,
        params.dt_max,
    )
}

/// One explicit first-order Lagrange-flux step of the shallow-water system.
///
/// Phases, in order: blended velocities, face Riemann solves (wet or dry
/// branch on `h_L + h_R`), outflow limiting, conservative update with the
/// well-balanced gravity source, momentum cleanup in dry cells, dry-velocity
/// transport and relaxation.
pub fn swe_step(
    state: &mut SweState,
    topo: &Topography,
    dry: &mut DryVelocityField,
    params: &SweParams,
    dt: f64,
) -> Result<()> {
    let grid = state.grid;
    if topo.grid() != grid || dry.u.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("fields on a {}x{} grid", grid.nx, grid.ny),
            found: "topography or dry velocity of another size".into(),
        });
    }
    let g = params.gravity;
    let eps = params.wet_dry.eps(&grid);
    let (u, v) = blended_velocities(state, dry, eps);

    let mut fx = sweep(Axis::X, state, (&u, &v), topo, params)?;
    let mut fy = sweep(Axis::Y, state, (&u, &v), topo, params)?;

    let theta = outflow_limiter(&grid, &params.bcs, &state.h, [&fx.mass, &fy.mass], dt);
    for fl in [&mut fx, &mut fy] {
        let layout = fl.layout;
        for line in 0..layout.lines {
            for f in 0..layout.per_line {
                let face = layout.face(line, f);
                let (l, r) = layout.sides(&grid, &params.bcs, line, f);
                if let Some(k) = donor(l, r, fl.mass[face]) {
                    if theta[k] < 1.0 {
                        fl.mass[face] *= theta[k];
                        fl.mom_n[face] *= theta[k];
                        fl.mom_t[face] *= theta[k];
                    }
                }
            }
        }
    }

    let (rx, ry) = (dt / grid.dx, dt / grid.dy);
    let h_wet = params.wet_dry.h_wet;
    for k in 0..grid.len() {
        let (xl, xh) = fx.layout.faces_of(&grid, k);
        let (yl, yh) = fy.layout.faces_of(&grid, k);
        let mut h = state.h[k] - rx * (fx.mass[xh] - fx.mass[xl]) - ry * (fy.mass[yh] - fy.mass[yl]);
        if h < 0.0 {
            // the outflow limiter bounds the loss by h up to rounding
            if h < -1e-13 * params.reference_depth {
                return Err(Error::NegativeDepth { index: k, value: h });
            }
            h = 0.0;
        }
        let face = |fl: &AxisFluxes, i: usize| FaceValues {
            conv: fl.mom_n[i],
            p_star: fl.p_star[i],
            h_star: fl.h_star[i],
            z_edge: fl.z_edge[i],
        };
        let (x_lo, x_hi) = (face(&fx, xl), face(&fx, xh));
        let (y_lo, y_hi) = (face(&fy, yl), face(&fy, yh));
        let mut hu = state.hu[k] - rx * momentum_divergence(&x_lo, &x_hi, g) - ry * (fy.mom_t[yh] - fy.mom_t[yl]);
        let mut hv = state.hv[k] - ry * momentum_divergence(&y_lo, &y_hi, g) - rx * (fx.mom_t[xh] - fx.mom_t[xl]);
        if !(h.is_finite() && hu.is_finite() && hv.is_finite()) {
            return Err(Error::NonFiniteState {
                what: "water state",
                index: k,
            });
        }
        if h < h_wet {
            hu = 0.0;
            hv = 0.0;
        }
        state.h[k] = h;
        state.hu[k] = hu;
        state.hv[k] = hv;
    }

    dry.reset(&u, &v);
    dry_velocity_advance(dry, None, topo, params, dt)?;
    let (target_u, target_v) = blended_velocities(state, dry, eps);
    relax_dry_velocity(dry, &target_u, &target_v, params.wet_dry.mu_relax, dt);
    Ok(())
}
