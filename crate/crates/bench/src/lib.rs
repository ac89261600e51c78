//! Fixtures shared by the kernel benchmarks.

use lagflux_core::coupling::{CoupledParams, CouplingKind, CouplingMode, ParticleScheme, SimulationState};
use lagflux_core::debris::{DebrisParams, DebrisState};
use lagflux_core::euler::sod::ShockTube;
use lagflux_core::euler::EulerState;
use lagflux_core::swe::{SweParams, SweState, Topography};
use lagflux_core::{Boundaries, CellField, Grid2D};

pub const GRAVITY: f64 = 9.81;

/// Sod's initial data on `cells` cells.
pub fn sod_states(cells: usize) -> (ShockTube, Grid2D, Vec<EulerState>) {
    let tube = ShockTube::sod().with_cells(cells);
    let grid = tube.grid().expect("grid");
    let states = tube.initial_states().expect("states");
    (tube, grid, states)
}

/// Dam break in a walled unit square over a bump that emerges from the
/// low side.
pub fn dam_break(nx: usize, ny: usize) -> (SweState, Topography, SweParams) {
    let grid = Grid2D::new(nx, ny, 0.0, 1.0, 0.0, 1.0).expect("grid");
    let bed = CellField::from_fn(grid, |x, y| {
        0.8 * (-((x - 0.7).powi(2) + (y - 0.5).powi(2)) / 0.01).exp()
    });
    let params = SweParams::new(GRAVITY, 1.0);
    let topo = Topography::new(bed, &Boundaries::default()).expect("topography");
    let mut water = SweState::dry(grid);
    for k in 0..grid.len() {
        let level = if grid.center(k).0 < 0.3 { 1.0 } else { 0.5 };
        water.h[k] = (level - topo.z.values[k]).max(0.0);
    }
    (water, topo, params)
}

/// A moving debris strip with a velocity shear.
pub fn debris_strip(grid: Grid2D) -> DebrisState {
    let n = grid.len();
    let mut rho = vec![0.0; n];
    let (mut vx, mut vy) = (vec![0.0; n], vec![0.0; n]);
    for k in 0..n {
        let (x, y) = grid.center(k);
        if (0.35..0.55).contains(&x) && (0.2..0.8).contains(&y) {
            rho[k] = 2.0;
            vx[k] = 0.5 + 0.2 * y;
            vy[k] = 0.1 * (x - 0.45);
        }
    }
    DebrisState::from_velocity(grid, rho, &vx, &vy).expect("debris")
}

/// Two-way coupled dam break with a debris strip and `particles` tracers.
pub fn coupled(nx: usize, ny: usize, particles: usize) -> (SimulationState, Topography, CoupledParams) {
    let (water, topo, swe) = dam_break(nx, ny);
    let debris = debris_strip(water.grid);
    let params = CoupledParams {
        swe,
        debris: DebrisParams::default(),
        mode: CouplingMode {
            kind: CouplingKind::TwoWay,
            mu_debris: 0.01,
        },
        particle_scheme: ParticleScheme::Heun,
    };
    let state = SimulationState::new(water, debris, particles).expect("state");
    (state, topo, params)
}
