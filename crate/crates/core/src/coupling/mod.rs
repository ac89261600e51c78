//! Coupled water/debris time loop, damage accumulation and tracer particles.

mod particles;

pub use particles::{bilinear, particle_advect, ParticleScheme, ParticleSet};

use serde::{Deserialize, Serialize};

use crate::debris::{debris_convective_step, DebrisParams, DebrisState};
use crate::error::{Error, Result};
use crate::swe::{self, blend_velocity, swe_step, DryVelocityField, SweParams, SweState, Topography};
use crate::time::compute_dt_cfl;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CouplingKind {
    /// Debris follow the water; the water ignores the debris.
    #[default]
    OneWay,
    /// Debris raise the bed seen by the water by `mu_debris * rho`.
    TwoWay,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CouplingMode {
    pub kind: CouplingKind,
    pub mu_debris: f64,
}

/// Accumulated debris momentum magnitude `int rho |v| dt`, plus its vector
/// counterpart when enabled.
#[derive(Debug, Clone, PartialEq)]
pub struct DamageField {
    pub d: Vec<f64>,
    pub vector: Option<(Vec<f64>, Vec<f64>)>,
}

impl DamageField {
    pub fn zeros(n: usize, with_vector: bool) -> Self {
        Self {
            d: vec![0.0; n],
            vector: with_vector.then(|| (vec![0.0; n], vec![0.0; n])),
        }
    }

    /// Index and value of the largest accumulated damage.
    pub fn argmax(&self) -> Option<(usize, f64)> {
        self.d
            .iter()
            .copied()
            .enumerate()
            .fold(None, |best, (k, v)| match best {
                Some((_, b)) if b >= v => best,
                _ => Some((k, v)),
            })
    }
}

/// `D += rho |v| dt` with the given debris state held over the interval.
pub fn damage_accumulate(damage: &mut DamageField, debris: &DebrisState, dt: f64) {
    for k in 0..damage.d.len() {
        let rho = debris.rho[k];
        if rho == 0.0 {
            continue;
        }
        let (vx, vy) = debris.velocity_at(k);
        damage.d[k] += rho * vx.hypot(vy) * dt;
        if let Some((dx, dy)) = damage.vector.as_mut() {
            dx[k] += rho * vx * dt;
            dy[k] += rho * vy * dt;
        }
    }
}

/// Parameters of the coupled step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledParams {
    pub swe: SweParams,
    pub debris: DebrisParams,
    pub mode: CouplingMode,
    pub particle_scheme: ParticleScheme,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    pub water: SweState,
    pub debris: DebrisState,
    pub dry: DryVelocityField,
    pub damage: DamageField,
    pub particles: ParticleSet,
    pub t: f64,
    pub step: u64,
}

impl SimulationState {
    pub fn new(water: SweState, debris: DebrisState, particles: usize) -> Result<Self> {
        if water.grid != debris.grid {
            return Err(Error::DimensionMismatch {
                expected: format!("debris on the {}x{} water grid", water.grid.nx, water.grid.ny),
                found: format!("{}x{}", debris.grid.nx, debris.grid.ny),
            });
        }
        let n = water.grid.len();
        let particles = ParticleSet::seed(&debris, particles);
        Ok(Self {
            water,
            debris,
            dry: DryVelocityField::zeros(n),
            damage: DamageField::zeros(n, false),
            particles,
            t: 0.0,
            step: 0,
        })
    }

    /// Water velocity as seen by the debris: the blended velocity.
    pub fn water_velocity(&self, params: &SweParams) -> (Vec<f64>, Vec<f64>) {
        let eps = params.wet_dry.eps(&self.water.grid);
        let w = &self.water;
        (0..w.h.len())
            .map(|k| {
                (
                    blend_velocity(w.h[k], w.hu[k], self.dry.u[k], eps),
                    blend_velocity(w.h[k], w.hv[k], self.dry.v[k], eps),
                )
            })
            .unzip()
    }
}

/// Bed seen by the water for the current debris density.
pub fn effective_topography(
    topo: &Topography,
    debris: &DebrisState,
    params: &CoupledParams,
) -> Result<Option<Topography>> {
    match params.mode.kind {
        CouplingKind::TwoWay if params.mode.mu_debris != 0.0 => topo
            .raised(params.mode.mu_debris, &debris.rho, &params.swe.bcs)
            .map(Some),
        _ => Ok(None),
    }
}

/// Shared time step: the CFL bound for the faster of water and debris.
pub fn stable_dt(state: &SimulationState, params: &CoupledParams) -> Result<f64> {
    let water = swe::max_signal_speed(&state.water, &state.dry, &params.swe);
    let debris = state.debris.max_speed();
    compute_dt_cfl(water.max(debris), &state.water.grid, params.swe.cfl, params.swe.dt_max)
}

/// One coupled step: water on the effective bed, debris transport, drag and
/// friction with the updated water, damage, then tracers.
pub fn coupled_step(state: &mut SimulationState, topo: &Topography, params: &CoupledParams, dt: f64) -> Result<()> {
    let at = |step: u64, time: f64| {
        move |e: Error| Error::Step {
            step,
            time,
            source: Box::new(e),
        }
    };
    let ctx = at(state.step, state.t);

    let raised = effective_topography(topo, &state.debris, params).map_err(ctx)?;
    let z_eff = raised.as_ref().unwrap_or(topo);
    swe_step(&mut state.water, z_eff, &mut state.dry, &params.swe, dt).map_err(ctx)?;

    debris_convective_step(&mut state.debris, &params.swe.bcs, dt).map_err(ctx)?;
    let (u, v) = state.water_velocity(&params.swe);
    state.debris.apply_sources(&u, &v, &state.water.h, dt, &params.debris);

    damage_accumulate(&mut state.damage, &state.debris, dt);
    if !state.particles.is_empty() {
        let (vx, vy) = state.debris.velocities();
        particle_advect(
            &mut state.particles,
            &state.water.grid,
            &vx,
            &vy,
            dt,
            params.particle_scheme,
        );
    }
    state.t += dt;
    state.step += 1;
    Ok(())
}

/// Runs until `t_end`, handing the initial state, every `every`-th state and
/// the final state to `sink`. Returns the number of frames emitted.
pub fn run(
    state: &mut SimulationState,
    topo: &Topography,
    params: &CoupledParams,
    t_end: f64,
    every: u64,
    mut sink: impl FnMut(&SimulationState) -> Result<()>,
) -> Result<usize> {
    let mut frames = 0;
    sink(state)?;
    frames += 1;
    let mut last_emitted = state.step;
    while state.t < t_end {
        let remaining = t_end - state.t;
        let dt = stable_dt(state, params).map_err(|e| Error::Step {
            step: state.step,
            time: state.t,
            source: Box::new(e),
        })?;
        // the final step lands on t_end; a negligible remainder is merged
        let dt = if remaining <= dt * (1.0 + 1e-9) { remaining } else { dt };
        coupled_step(state, topo, params, dt)?;
        if remaining <= dt {
            state.t = t_end;
        }
        if every > 0 && state.step % every == 0 {
            sink(state)?;
            frames += 1;
            last_emitted = state.step;
        }
    }
    if last_emitted != state.step {
        sink(state)?;
        frames += 1;
    }
    Ok(frames)
}
