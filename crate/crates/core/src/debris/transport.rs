use crate::error::{Error, Result};
use crate::grid::{donor, outflow_limiter, Axis, Boundaries, BoundaryKind, FaceLayout, Grid2D, Side};
use crate::swe::blend_velocity;

use super::{DebrisState, VACUUM_EPS};

/// Density-weighted mean of the normal velocities; zero between empty cells.
#[inline]
pub fn interface_velocity(rho_l: f64, v_l: f64, rho_r: f64, v_r: f64) -> f64 {
    let m = rho_l + rho_r;
    if m > 0.0 {
        (rho_l * v_l + rho_r * v_r) / m
    } else {
        0.0
    }
}

struct Fluxes {
    layout: FaceLayout,
    mass: Vec<f64>,
    mom: [Vec<f64>; 2],
}

/// Upwind face fluxes of `rho` and of each `carried` field along `axis`.
/// `carried[0]` must be the normal component, which walls mirror.
fn face_fluxes(grid: &Grid2D, bcs: &Boundaries, axis: Axis, rho: &[f64], vn: &[f64], carried: [&[f64]; 2]) -> Fluxes {
    let layout = FaceLayout::new(grid, axis);
    let n = layout.len();
    let mut out = Fluxes {
        layout,
        mass: vec![0.0; n],
        mom: [vec![0.0; n], vec![0.0; n]],
    };
    for line in 0..layout.lines {
        for f in 0..layout.per_line {
            let (l, r) = layout.sides(grid, bcs, line, f);
            let sign = |s: Side| if s.is_wall() { -1.0 } else { 1.0 };
            let (kl, kr) = (l.source(), r.source());
            let v_star = interface_velocity(rho[kl], sign(l) * vn[kl], rho[kr], sign(r) * vn[kr]);
            if v_star == 0.0 {
                continue;
            }
            let (k, s) = if v_star > 0.0 { (kl, l) } else { (kr, r) };
            let face = layout.face(line, f);
            out.mass[face] = rho[k] * v_star;
            out.mom[0][face] = sign(s) * carried[0][k] * v_star;
            out.mom[1][face] = carried[1][k] * v_star;
        }
    }
    out
}

fn limit(grid: &Grid2D, bcs: &Boundaries, rho: &[f64], fx: &mut Fluxes, fy: &mut Fluxes, dt: f64) {
    let theta = outflow_limiter(grid, bcs, rho, [&fx.mass, &fy.mass], dt);
    for fl in [fx, fy] {
        let layout = fl.layout;
        for line in 0..layout.lines {
            for f in 0..layout.per_line {
                let face = layout.face(line, f);
                let (l, r) = layout.sides(grid, bcs, line, f);
                if let Some(k) = donor(l, r, fl.mass[face]) {
                    if theta[k] < 1.0 {
                        fl.mass[face] *= theta[k];
                        fl.mom[0][face] *= theta[k];
                        fl.mom[1][face] *= theta[k];
                    }
                }
            }
        }
    }
}

/// One upwind Lagrange-flux step of `d_t rho + div(rho v) = 0`,
/// `d_t (rho^2 v) + div(rho^2 v (x) v) = 0`. Sources are applied separately.
pub fn debris_convective_step(state: &mut DebrisState, bcs: &Boundaries, dt: f64) -> Result<()> {
    let grid = state.grid;
    let (vx, vy) = state.velocities();
    let mut fx = face_fluxes(&grid, bcs, Axis::X, &state.rho, &vx, [&state.mx, &state.my]);
    let mut fy = face_fluxes(&grid, bcs, Axis::Y, &state.rho, &vy, [&state.my, &state.mx]);
    limit(&grid, bcs, &state.rho, &mut fx, &mut fy, dt);

    let (rx, ry) = (dt / grid.dx, dt / grid.dy);
    for k in 0..grid.len() {
        let (xl, xh) = fx.layout.faces_of(&grid, k);
        let (yl, yh) = fy.layout.faces_of(&grid, k);
        let mut rho = state.rho[k] - rx * (fx.mass[xh] - fx.mass[xl]) - ry * (fy.mass[yh] - fy.mass[yl]);
        let mut mx = state.mx[k] - rx * (fx.mom[0][xh] - fx.mom[0][xl]) - ry * (fy.mom[1][yh] - fy.mom[1][yl]);
        let mut my = state.my[k] - rx * (fx.mom[1][xh] - fx.mom[1][xl]) - ry * (fy.mom[0][yh] - fy.mom[0][yl]);
        if !(rho.is_finite() && mx.is_finite() && my.is_finite()) {
            return Err(Error::NonFiniteState {
                what: "debris state",
                index: k,
            });
        }
        if rho <= 0.0 {
            rho = 0.0;
            mx = 0.0;
            my = 0.0;
        } else {
            let ((lo_x, hi_x), (lo_y, hi_y)) = neighbour_bounds(&grid, &state.rho, &vx, &vy, k);
            let r2 = rho * rho;
            let (ux, uy) = (
                blend_velocity(r2, mx, 0.0, VACUUM_EPS),
                blend_velocity(r2, my, 0.0, VACUUM_EPS),
            );
            if ux < lo_x || ux > hi_x {
                mx = r2 * ux.clamp(lo_x, hi_x);
            }
            if uy < lo_y || uy > hi_y {
                my = r2 * uy.clamp(lo_y, hi_y);
            }
        }
        state.rho[k] = rho;
        state.mx[k] = mx;
        state.my[k] = my;
    }
    Ok(())
}

/// Range of the velocity components over cell `k` and its occupied edge
/// neighbours. Recovering `v = m / rho^2` in a cell that has just received
/// a sliver of mass can otherwise amplify the donor velocity by the inverse
/// of the Courant number.
fn neighbour_bounds(grid: &Grid2D, rho: &[f64], vx: &[f64], vy: &[f64], k: usize) -> ((f64, f64), (f64, f64)) {
    let (i, j) = (k % grid.nx, k / grid.nx);
    let mut bx = (f64::INFINITY, f64::NEG_INFINITY);
    let mut by = bx;
    let mut take = |c: usize| {
        if rho[c] > 0.0 || c == k {
            bx = (bx.0.min(vx[c]), bx.1.max(vx[c]));
            by = (by.0.min(vy[c]), by.1.max(vy[c]));
        }
    };
    take(k);
    if i > 0 {
        take(k - 1);
    }
    if i + 1 < grid.nx {
        take(k + 1);
    }
    if j > 0 {
        take(k - grid.nx);
    }
    if j + 1 < grid.ny {
        take(k + grid.nx);
    }
    (bx, by)
}

/// Derivative of `f` along `axis` at cell `k`: centred inside, one-sided
/// at non-periodic edges, zero on a single-cell axis.
fn derivative(grid: &Grid2D, bcs: &Boundaries, axis: Axis, f: &[f64], k: usize) -> f64 {
    let n = grid.count(axis);
    if n < 2 {
        return 0.0;
    }
    let (i, j) = (k % grid.nx, k / grid.nx);
    let (p, periodic) = match axis {
        Axis::X => (i, bcs.left == BoundaryKind::Periodic),
        Axis::Y => (j, bcs.bottom == BoundaryKind::Periodic),
    };
    let at = |q: usize| match axis {
        Axis::X => f[grid.idx(q, j)],
        Axis::Y => f[grid.idx(i, q)],
    };
    let h = grid.spacing(axis);
    let (lo, hi, span) = if p == 0 {
        if periodic {
            (n - 1, 1, 2.0)
        } else {
            (0, 1, 1.0)
        }
    } else if p == n - 1 {
        if periodic {
            (n - 2, 0, 2.0)
        } else {
            (n - 2, n - 1, 1.0)
        }
    } else {
        (p - 1, p + 1, 2.0)
    };
    (at(hi) - at(lo)) / (span * h)
}

/// Interaction term `I = -lambda rho (div v) v`, one vector per cell.
pub fn interaction_term_2d(
    grid: &Grid2D,
    bcs: &Boundaries,
    rho: &[f64],
    vx: &[f64],
    vy: &[f64],
    lambda: f64,
) -> (Vec<f64>, Vec<f64>) {
    let n = grid.len();
    let (mut ix, mut iy) = (vec![0.0; n], vec![0.0; n]);
    if lambda == 0.0 {
        return (ix, iy);
    }
    for k in 0..n {
        let div = derivative(grid, bcs, Axis::X, vx, k) + derivative(grid, bcs, Axis::Y, vy, k);
        let c = -lambda * rho[k] * div;
        ix[k] = c * vx[k];
        iy[k] = c * vy[k];
    }
    (ix, iy)
}

/// One step of the 1D debris model for arbitrary `lambda` in the
/// non-conservative form `d_t (rho v) + d_x (rho v^2) + I = 0`: upwind
/// transport of `(rho, rho v)` with an explicit interaction term.
/// `lambda = 0` is pressureless gas dynamics.
pub fn debris_general_step_1d(
    grid: &Grid2D,
    bcs: &Boundaries,
    rho: &mut [f64],
    rv: &mut [f64],
    lambda: f64,
    dt: f64,
) -> Result<()> {
    if grid.ny != 1 || rho.len() != grid.nx || rv.len() != grid.nx {
        return Err(Error::DimensionMismatch {
            expected: format!("a line of {} cells", grid.nx),
            found: format!("{}x{} grid with {} values", grid.nx, grid.ny, rho.len()),
        });
    }
    let v: Vec<f64> = rho
        .iter()
        .zip(rv.iter())
        .map(|(&r, &q)| blend_velocity(r, q, 0.0, VACUUM_EPS))
        .collect();
    let zeros = vec![0.0; grid.nx];
    let (ix, _) = interaction_term_2d(grid, bcs, rho, &v, &zeros, lambda);
    let mut fx = face_fluxes(grid, bcs, Axis::X, rho, &v, [rv, &zeros]);
    let mut fy = face_fluxes(grid, bcs, Axis::Y, rho, &zeros, [&zeros, &zeros]);
    limit(grid, bcs, rho, &mut fx, &mut fy, dt);
    let r = dt / grid.dx;
    for k in 0..grid.nx {
        let (lo, hi) = fx.layout.faces_of(grid, k);
        let new_rho = rho[k] - r * (fx.mass[hi] - fx.mass[lo]);
        let new_rv = rv[k] - r * (fx.mom[0][hi] - fx.mom[0][lo]) - dt * ix[k];
        if !(new_rho.is_finite() && new_rv.is_finite()) {
            return Err(Error::NonFiniteState {
                what: "debris state",
                index: k,
            });
        }
        if new_rho <= 0.0 {
            rho[k] = 0.0;
            rv[k] = 0.0;
        } else {
            rho[k] = new_rho;
            rv[k] = new_rv;
        }
    }
    Ok(())
}
