//! Turns a [`SimConfig`] into initial fields and parameters and drives the
//! coupled run, writing frames as configured.

use std::path::{Path, PathBuf};

use crate::coupling::{self, CoupledParams, CouplingMode, SimulationState};
use crate::debris::DebrisState;
use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::swe::{self, SweParams, SweState, Topography, WetDryParams};

use super::config::{OutputFormat, SimConfig};
use super::output::{write_frame_csv, write_frame_vtk, OutputFrame};
use super::topography::load_topography;

pub struct Scenario {
    pub config: SimConfig,
    pub grid: Grid2D,
    pub topo: Topography,
    pub params: CoupledParams,
    pub state: SimulationState,
}

impl Scenario {
    pub fn from_config(config: &SimConfig) -> Result<Self> {
        config.validate()?;
        let grid = config.grid()?;
        let bcs = config.boundaries;
        let topo = load_topography(&config.topography.input(), grid, &bcs)?;

        let w = &config.water;
        let mut water = SweState::dry(grid);
        for k in 0..grid.len() {
            let (x, y) = grid.center(k);
            let (mut level, mut u, mut v) = (w.level, w.u, w.v);
            for r in w.region.iter().filter(|r| r.bounds().contains(x, y)) {
                (level, u, v) = (r.level, r.u, r.v);
            }
            let h = (level - topo.z.values[k]).max(0.0);
            water.h[k] = h;
            water.hu[k] = h * u;
            water.hv[k] = h * v;
        }

        let n = grid.len();
        let (mut rho, mut vx, mut vy) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
        for k in 0..n {
            let (x, y) = grid.center(k);
            for r in config.debris.region.iter().filter(|r| r.bounds().contains(x, y)) {
                (rho[k], vx[k], vy[k]) = (r.rho, r.vx, r.vy);
            }
        }
        let debris = DebrisState::from_velocity(grid, rho, &vx, &vy)?;

        let num = &config.numerics;
        let h_max = water.h.iter().copied().fold(0.0, f64::max);
        let reference_depth = num.reference_depth.unwrap_or(if h_max > 0.0 { h_max } else { 1.0 });
        let mut wet_dry = WetDryParams::for_depth(reference_depth);
        let wd = &config.wet_dry;
        wet_dry.h_wet = wd.h_wet.unwrap_or(wet_dry.h_wet);
        wet_dry.eps_blend = wd.eps_blend.unwrap_or(wet_dry.eps_blend);
        wet_dry.mu_relax = wd.mu_relax.unwrap_or(wet_dry.mu_relax);
        wet_dry.eps_mode = wd.eps_mode;
        let mut swe = SweParams::new(num.gravity, reference_depth).with_boundaries(bcs);
        swe.cfl = num.cfl;
        swe.dt_max = num.dt_max;
        swe.wet_dry = wet_dry;

        let c = &config.coupling;
        let params = CoupledParams {
            swe,
            debris: config.debris.params(),
            mode: CouplingMode {
                kind: c.kind,
                mu_debris: c.mu_debris,
            },
            particle_scheme: c.particle_scheme,
        };
        let mut state = SimulationState::new(water, debris, c.particles)?;
        if c.damage_vector {
            state.damage = coupling::DamageField::zeros(n, true);
        }
        Ok(Self {
            config: config.clone(),
            grid,
            topo,
            params,
            state,
        })
    }

    pub fn frame(&self) -> OutputFrame {
        OutputFrame::from_state(&self.state, &self.topo, &self.params.swe)
    }

    /// Runs to `t_end`, handing every emitted frame to `sink`.
    pub fn run_with(&mut self, every: u64, mut sink: impl FnMut(&OutputFrame) -> Result<()>) -> Result<usize> {
        let (topo, params) = (&self.topo, &self.params);
        coupling::run(&mut self.state, topo, params, self.config.t_end, every, |s| {
            sink(&OutputFrame::from_state(s, topo, &params.swe))
        })
    }
}

type WriteFn = fn(&OutputFrame, &Path) -> Result<()>;

/// Writes frames into `dir` as `<name>_<index>.csv` / `.vtk`.
pub struct FrameWriter {
    pub dir: PathBuf,
    pub name: String,
    pub formats: Vec<OutputFormat>,
    pub written: Vec<PathBuf>,
    index: usize,
}

impl FrameWriter {
    pub fn new(dir: &Path, name: &str, formats: &[OutputFormat]) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let name: String = name
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                    c
                } else {
                    '_'
                }
            })
            .collect();
        Ok(Self {
            dir: dir.to_path_buf(),
            name,
            formats: formats.to_vec(),
            written: Vec::new(),
            index: 0,
        })
    }

    pub fn write(&mut self, frame: &OutputFrame) -> Result<()> {
        for format in &self.formats {
            let (ext, write): (&str, WriteFn) = match format {
                OutputFormat::Csv => ("csv", write_frame_csv),
                OutputFormat::Vtk => ("vtk", write_frame_vtk),
            };
            let path = self.dir.join(format!("{}_{:05}.{ext}", self.name, self.index));
            write(frame, &path)?;
            self.written.push(path);
        }
        self.index += 1;
        Ok(())
    }
}

/// Builds the scenario of `config` and runs it, writing frames to
/// `output.dir` every `output.every` steps. Returns the final state.
pub fn run_simulation(config: &SimConfig) -> Result<Scenario> {
    let mut scenario = Scenario::from_config(config)?;
    let out = &config.output;
    let mut writer = FrameWriter::new(&out.dir, &config.name, &out.formats)?;
    scenario.run_with(out.every, |f| writer.write(f))?;
    Ok(scenario)
}

/// Largest departures from the lake at rest after a number of water steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LakeReport {
    pub steps: usize,
    pub t: f64,
    /// `max |h + z - level|` over wet cells.
    pub level_deviation: f64,
    pub max_discharge: f64,
    pub wet_cells: usize,
}

/// Starts from the still surface `water.level` over the configured bed and
/// runs `steps` shallow-water steps; regions and debris are ignored.
pub fn lake_at_rest_check(config: &SimConfig, steps: usize) -> Result<LakeReport> {
    let mut calm = config.clone();
    calm.water.region.clear();
    calm.water.u = 0.0;
    calm.water.v = 0.0;
    calm.debris.region.clear();
    let mut s = Scenario::from_config(&calm)?;
    let level = calm.water.level;
    let params = s.params.swe;
    let water = &mut s.state.water;
    let dry = &mut s.state.dry;
    let mut t = 0.0;
    for step in 0..steps {
        let dt = swe::stable_dt(water, dry, &params)?;
        swe::swe_step(water, &s.topo, dry, &params, dt).map_err(|e| Error::Step {
            step: step as u64,
            time: t,
            source: Box::new(e),
        })?;
        t += dt;
    }
    let wet = |k: &usize| water.h[*k] > params.wet_dry.h_wet;
    let n = water.h.len();
    let level_deviation = (0..n)
        .filter(wet)
        .map(|k| (water.h[k] + s.topo.z.values[k] - level).abs())
        .fold(0.0, f64::max);
    let max_discharge = (0..n)
        .map(|k| water.hu[k].abs().max(water.hv[k].abs()))
        .fold(0.0, f64::max);
    Ok(LakeReport {
        steps,
        t,
        level_deviation,
        max_discharge,
        wet_cells: (0..n).filter(wet).count(),
    })
}
