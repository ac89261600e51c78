use crate::error::{Error, Result};
use crate::grid::{donor, outflow_limiter, Axis, FaceLayout};

use super::riemann::{swe_riemann_dry, FaceSide};
use super::{DryVelocityField, SweParams, Topography};

/// Regularized velocity `(h (hu) + eps u_dry) / (h^2 + eps)`.
///
/// This is the minimizer of `|hu - h w|^2 + eps |w - u_dry|^2`: it returns
/// `u_dry` exactly for `h = 0` and `hu / h` up to `O(eps / h^2)` for wet cells.
#[inline]
pub fn blend_velocity(h: f64, hu: f64, u_dry: f64, eps: f64) -> f64 {
    if h == 0.0 {
        return u_dry;
    }
    (h * hu + eps * u_dry) / (h * h + eps)
}

/// Transports the dry velocity with the Lagrange-flux scheme applied to
/// `d_t eta + div(eta u) = 0`, `d_t (eta u) + div(eta u (x) u) = -g eta grad z`,
/// then relaxes it towards `u_actual` when given. The transported speed is
/// capped at [`SweParams::dry_speed_cap`].
///
/// On entry `dry.u`, `dry.v` hold the projected velocity of the current
/// step and `dry.eta` the auxiliary density (normally reset to 1).
pub fn dry_velocity_advance(
    dry: &mut DryVelocityField,
    u_actual: Option<(&[f64], &[f64])>,
    topo: &Topography,
    params: &SweParams,
    dt: f64,
) -> Result<()> {
    let grid = topo.grid();
    let g = params.gravity;
    let bcs = params.bcs;
    let sigma_floor = params.sigma_dry_floor();
    let cap = params.dry_speed_cap();

    let mut axes = Vec::with_capacity(2);
    for axis in [Axis::X, Axis::Y] {
        let layout = FaceLayout::new(&grid, axis);
        let (un, ut) = match axis {
            Axis::X => (&dry.u, &dry.v),
            Axis::Y => (&dry.v, &dry.u),
        };
        let mut mass = vec![0.0; layout.len()];
        let mut mom_n = vec![0.0; layout.len()];
        let mut mom_t = vec![0.0; layout.len()];
        for line in 0..layout.lines {
            for f in 0..layout.per_line {
                let (l, r) = layout.sides(&grid, &bcs, line, f);
                let (kl, kr) = (l.source(), r.source());
                let ul = if l.is_wall() { -un[kl] } else { un[kl] };
                let ur = if r.is_wall() { -un[kr] } else { un[kr] };
                let left = FaceSide {
                    h: 0.0,
                    u: ul,
                    z: topo.z.values[kl],
                };
                let right = FaceSide {
                    h: 0.0,
                    u: ur,
                    z: topo.z.values[kr],
                };
                let sigma = (ul - ur).max(0.0).max(sigma_floor);
                let u_star = swe_riemann_dry(&left, &right, g, sigma);
                let (k, un_up) = if u_star >= 0.0 { (kl, ul) } else { (kr, ur) };
                let face = layout.face(line, f);
                let eta = dry.eta[k];
                mass[face] = eta * u_star;
                mom_n[face] = eta * un_up * u_star;
                mom_t[face] = eta * ut[k] * u_star;
            }
        }
        axes.push((layout, mass, mom_n, mom_t));
    }

    let theta = outflow_limiter(&grid, &bcs, &dry.eta, [&axes[0].1, &axes[1].1], dt);
    for (layout, mass, mom_n, mom_t) in axes.iter_mut() {
        for line in 0..layout.lines {
            for f in 0..layout.per_line {
                let face = layout.face(line, f);
                let (l, r) = layout.sides(&grid, &bcs, line, f);
                if let Some(k) = donor(l, r, mass[face]) {
                    mass[face] *= theta[k];
                    mom_n[face] *= theta[k];
                    mom_t[face] *= theta[k];
                }
            }
        }
    }

    let (x, y) = (&axes[0], &axes[1]);
    let (lx, ly) = (&x.0, &y.0);
    let (rx, ry) = (dt / grid.dx, dt / grid.dy);
    for k in 0..grid.len() {
        let (xl, xh) = lx.faces_of(&grid, k);
        let (yl, yh) = ly.faces_of(&grid, k);
        let eta0 = dry.eta[k];
        let eta = eta0 - rx * (x.1[xh] - x.1[xl]) - ry * (y.1[yh] - y.1[yl]);
        let gx = g * eta0 * (topo.z_edge_x[xh] - topo.z_edge_x[xl]);
        let gy = g * eta0 * (topo.z_edge_y[yh] - topo.z_edge_y[yl]);
        let eu = eta0 * dry.u[k] - rx * (x.2[xh] - x.2[xl] + gx) - ry * (y.3[yh] - y.3[yl]);
        let ev = eta0 * dry.v[k] - rx * (x.3[xh] - x.3[xl]) - ry * (y.2[yh] - y.2[yl] + gy);
        if !(eta.is_finite() && eu.is_finite() && ev.is_finite()) {
            return Err(Error::NonFiniteState {
                what: "dry velocity",
                index: k,
            });
        }
        // a fully drained cell keeps its projected velocity
        if eta > 1e-12 {
            dry.u[k] = eu / eta;
            dry.v[k] = ev / eta;
        }
        let speed = dry.u[k].hypot(dry.v[k]);
        if speed > cap {
            dry.u[k] *= cap / speed;
            dry.v[k] *= cap / speed;
        }
        dry.eta[k] = eta.max(0.0);
    }

    if let Some((ua, va)) = u_actual {
        relax_dry_velocity(dry, ua, va, params.wet_dry.mu_relax, dt);
    }
    Ok(())
}

/// Exact integration of `d_t u_dry = (u - u_dry) / mu` over `dt` with `u` frozen.
pub fn relax_dry_velocity(dry: &mut DryVelocityField, u: &[f64], v: &[f64], mu: f64, dt: f64) {
    let decay = (-dt / mu).exp();
    for k in 0..dry.u.len() {
        dry.u[k] = u[k] + (dry.u[k] - u[k]) * decay;
        dry.v[k] = v[k] + (dry.v[k] - v[k]) * decay;
    }
}
