//! Two-dimensional Saint-Venant solver: well-balanced Lagrange-flux scheme
//! with wet/dry front capturing through an auxiliary dry velocity.

mod energy;
pub mod riemann;
mod solver;
mod wetdry;

pub use energy::{energy_diagnostic, EnergyReport};
pub use riemann::{sigma_subcharacteristic, swe_riemann_dry, swe_riemann_wet, FaceSide, SweRiemannResult};
pub use solver::{max_signal_speed, stable_dt, swe_step, well_balanced_momentum_update, FaceValues};
pub use wetdry::{blend_velocity, dry_velocity_advance, relax_dry_velocity};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Axis, Boundaries, BoundaryKind, CellField, FaceLayout, Grid2D};

/// Water depth and depth-momentum per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweState {
    pub grid: Grid2D,
    pub h: Vec<f64>,
    pub hu: Vec<f64>,
    pub hv: Vec<f64>,
}

impl SweState {
    pub fn dry(grid: Grid2D) -> Self {
        let n = grid.len();
        Self {
            grid,
            h: vec![0.0; n],
            hu: vec![0.0; n],
            hv: vec![0.0; n],
        }
    }

    /// Still water with free-surface elevation `level` over `topo`.
    pub fn lake_at_rest(topo: &Topography, level: f64) -> Self {
        let mut s = Self::dry(topo.grid());
        for (h, &z) in s.h.iter_mut().zip(&topo.z.values) {
            *h = (level - z).max(0.0);
        }
        s
    }

    /// Total water volume `sum h |K|`.
    pub fn volume(&self) -> f64 {
        self.h.iter().sum::<f64>() * self.grid.cell_area()
    }

    pub fn check(&self) -> Result<()> {
        for (k, ((&h, &hu), &hv)) in self.h.iter().zip(&self.hu).zip(&self.hv).enumerate() {
            if !(h.is_finite() && hu.is_finite() && hv.is_finite()) {
                return Err(Error::NonFiniteState {
                    what: "water state",
                    index: k,
                });
            }
            if h < 0.0 {
                return Err(Error::NegativeDepth { index: k, value: h });
            }
        }
        Ok(())
    }
}

/// Bed elevation at cell centers plus its face values `(z_j + z_{j+1}) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Topography {
    pub z: CellField,
    /// Faces normal to x, laid out as [`FaceLayout`] for [`Axis::X`].
    pub z_edge_x: Vec<f64>,
    /// Faces normal to y, laid out as [`FaceLayout`] for [`Axis::Y`].
    pub z_edge_y: Vec<f64>,
}

impl Topography {
    pub fn new(z: CellField, bcs: &Boundaries) -> Result<Self> {
        if let Some(k) = z.first_non_finite() {
            return Err(Error::NonFiniteValue {
                source_name: "topography".into(),
                index: k,
            });
        }
        let grid = z.grid;
        let edges = |axis| {
            let layout = FaceLayout::new(&grid, axis);
            let mut out = vec![0.0; layout.len()];
            for line in 0..layout.lines {
                for f in 0..layout.per_line {
                    let (l, r) = layout.sides(&grid, bcs, line, f);
                    out[layout.face(line, f)] = 0.5 * (z.values[l.source()] + z.values[r.source()]);
                }
            }
            out
        };
        let z_edge_x = edges(Axis::X);
        let z_edge_y = edges(Axis::Y);
        Ok(Self { z, z_edge_x, z_edge_y })
    }

    pub fn flat(grid: Grid2D) -> Self {
        Self::new(CellField::zeros(grid), &Boundaries::default()).expect("flat bed is finite")
    }

    #[inline]
    pub fn grid(&self) -> Grid2D {
        self.z.grid
    }

    pub fn edges(&self, axis: Axis) -> &[f64] {
        match axis {
            Axis::X => &self.z_edge_x,
            Axis::Y => &self.z_edge_y,
        }
    }

    /// Same topography raised by `mu * rho` (debris hills).
    pub fn raised(&self, mu: f64, rho: &[f64], bcs: &Boundaries) -> Result<Self> {
        let mut z = self.z.clone();
        for (z, &r) in z.values.iter_mut().zip(rho) {
            *z += mu * r;
        }
        Self::new(z, bcs)
    }
}

/// How the blending weight `eps` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EpsMode {
    /// The configured `eps_blend` everywhere.
    #[default]
    Fixed,
    /// `max(eps_blend, dx^4)`.
    CellSize,
}

/// Wet/dry machinery parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WetDryParams {
    /// Depth below which a cell counts as dry; the dry Riemann branch is
    /// used when `h_L + h_R < 2 h_wet`.
    pub h_wet: f64,
    /// Tykhonov weight of the velocity blend (length^2).
    pub eps_blend: f64,
    /// Relaxation time of the dry velocity towards the actual velocity.
    pub mu_relax: f64,
    pub eps_mode: EpsMode,
}

impl WetDryParams {
    pub fn for_depth(reference_depth: f64) -> Self {
        Self {
            h_wet: 1e-6 * reference_depth,
            eps_blend: 1e-8 * reference_depth * reference_depth,
            mu_relax: 1e-4,
            eps_mode: EpsMode::Fixed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64, key: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::validation(key, format!("must be positive and finite, got {v}")))
            }
        };
        positive(self.h_wet, "wet_dry.h_wet")?;
        positive(self.eps_blend, "wet_dry.eps_blend")?;
        positive(self.mu_relax, "wet_dry.mu_relax")
    }

    pub fn eps(&self, grid: &Grid2D) -> f64 {
        match self.eps_mode {
            EpsMode::Fixed => self.eps_blend,
            EpsMode::CellSize => self.eps_blend.max(grid.min_spacing().powi(4)),
        }
    }
}

/// Everything the shallow-water step needs besides the fields.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweParams {
    pub gravity: f64,
    pub cfl: f64,
    pub dt_max: f64,
    /// Typical water depth; scales the wet threshold and the speed floors.
    pub reference_depth: f64,
    pub wet_dry: WetDryParams,
    pub bcs: Boundaries,
}

impl SweParams {
    pub fn new(gravity: f64, reference_depth: f64) -> Self {
        Self {
            gravity,
            cfl: 0.25,
            dt_max: crate::time::DEFAULT_DT_MAX,
            reference_depth,
            wet_dry: WetDryParams::for_depth(reference_depth),
            bcs: Boundaries::uniform(BoundaryKind::Wall),
        }
    }

    pub fn with_boundaries(mut self, bcs: Boundaries) -> Self {
        self.bcs = bcs;
        self
    }

    /// Lower bound on the acoustic speed at wet faces.
    pub fn sigma_floor(&self) -> f64 {
        1e-8 * (self.gravity * self.reference_depth).sqrt()
    }

    /// Lower bound on the speed used by the dry Riemann branch and the dry
    /// velocity transport.
    pub fn sigma_dry_floor(&self) -> f64 {
        (self.gravity * self.reference_depth).sqrt()
    }

    /// Bound on the dry velocity: the front speed `2 sqrt(g h_ref)` of a
    /// dam break onto a dry bed. Without it the dry velocity accelerates
    /// without limit on exposed slopes.
    pub fn dry_speed_cap(&self) -> f64 {
        2.0 * (self.gravity * self.reference_depth).sqrt()
    }
}

/// Auxiliary density and dry velocity per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct DryVelocityField {
    pub eta: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl DryVelocityField {
    pub fn zeros(n: usize) -> Self {
        Self {
            eta: vec![1.0; n],
            u: vec![0.0; n],
            v: vec![0.0; n],
        }
    }

    /// Start of a step: `eta = 1` and the dry velocity projected onto the
    /// current velocity field.
    pub fn reset(&mut self, u: &[f64], v: &[f64]) {
        self.eta.iter_mut().for_each(|e| *e = 1.0);
        self.u.copy_from_slice(u);
        self.v.copy_from_slice(v);
    }
}
