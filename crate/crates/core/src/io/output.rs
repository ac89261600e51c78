//! Frame snapshots and their CSV and legacy VTK writers.

use std::fmt::Write as _;
use std::path::Path;

use crate::coupling::SimulationState;
use crate::error::{Error, Result};
use crate::grid::Grid2D;
use crate::swe::{SweParams, Topography};

pub const CSV_HEADER: &str = "x,y,h,hu,hv,z,rho_d,vdx,vdy,D";

/// Per-cell fields at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputFrame {
    pub grid: Grid2D,
    pub t: f64,
    pub step: u64,
    pub h: Vec<f64>,
    pub hu: Vec<f64>,
    pub hv: Vec<f64>,
    pub z: Vec<f64>,
    pub rho_d: Vec<f64>,
    pub vdx: Vec<f64>,
    pub vdy: Vec<f64>,
    pub damage: Vec<f64>,
    /// Water velocity (blended with the dry velocity in dry cells).
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

impl OutputFrame {
    pub fn zeros(grid: Grid2D) -> Self {
        let n = grid.len();
        Self {
            grid,
            t: 0.0,
            step: 0,
            h: vec![0.0; n],
            hu: vec![0.0; n],
            hv: vec![0.0; n],
            z: vec![0.0; n],
            rho_d: vec![0.0; n],
            vdx: vec![0.0; n],
            vdy: vec![0.0; n],
            damage: vec![0.0; n],
            u: vec![0.0; n],
            v: vec![0.0; n],
        }
    }

    pub fn from_state(state: &SimulationState, topo: &Topography, params: &SweParams) -> Self {
        let (u, v) = state.water_velocity(params);
        let (vdx, vdy) = state.debris.velocities();
        Self {
            grid: state.water.grid,
            t: state.t,
            step: state.step,
            h: state.water.h.clone(),
            hu: state.water.hu.clone(),
            hv: state.water.hv.clone(),
            z: topo.z.values.clone(),
            rho_d: state.debris.rho.clone(),
            vdx,
            vdy,
            damage: state.damage.d.clone(),
            u,
            v,
        }
    }

    fn check(&self) -> Result<()> {
        let n = self.grid.len();
        let fields = [
            ("h", &self.h),
            ("hu", &self.hu),
            ("hv", &self.hv),
            ("z", &self.z),
            ("rho_d", &self.rho_d),
            ("vdx", &self.vdx),
            ("vdy", &self.vdy),
            ("D", &self.damage),
            ("u", &self.u),
            ("v", &self.v),
        ];
        for (name, f) in fields {
            if f.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: format!("{n} values of {name}"),
                    found: f.len().to_string(),
                });
            }
        }
        Ok(())
    }
}

/// One CSV row: the columns of [`CSV_HEADER`].
pub type CsvRow = [f64; 10];

pub fn format_frame_csv(frame: &OutputFrame) -> Result<String> {
    frame.check()?;
    let g = frame.grid;
    let mut out = String::with_capacity(g.len() * 10 * 25);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for k in 0..g.len() {
        let (x, y) = g.center(k);
        let row = [
            x,
            y,
            frame.h[k],
            frame.hu[k],
            frame.hv[k],
            frame.z[k],
            frame.rho_d[k],
            frame.vdx[k],
            frame.vdy[k],
            frame.damage[k],
        ];
        for (c, v) in row.iter().enumerate() {
            if c > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v:.16e}");
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn write_frame_csv(frame: &OutputFrame, path: &Path) -> Result<()> {
    let text = format_frame_csv(frame)?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn parse_frame_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => {
            return Err(Error::InvalidInput(format!(
                "expected CSV header `{CSV_HEADER}`, found `{}`",
                other.unwrap_or("")
            )))
        }
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(r, line)| {
            let mut row = [0.0; 10];
            let mut cols = line.split(',');
            for (c, slot) in row.iter_mut().enumerate() {
                let tok = cols
                    .next()
                    .ok_or_else(|| Error::InvalidInput(format!("row {}: missing column {}", r + 1, c + 1)))?;
                *slot = tok
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("row {}: cannot parse `{tok}`", r + 1)))?;
            }
            if cols.next().is_some() {
                return Err(Error::InvalidInput(format!("row {}: too many columns", r + 1)));
            }
            Ok(row)
        })
        .collect()
}

pub fn read_frame_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_frame_csv(&text)
}

pub fn format_frame_vtk(frame: &OutputFrame, title: &str) -> Result<String> {
    frame.check()?;
    let g = frame.grid;
    let n = g.len();
    let mut out = String::with_capacity(n * 6 * 25);
    let title: String = title.chars().filter(|c| *c != '\n').take(255).collect();
    let _ = write!(
        out,
        "# vtk DataFile Version 3.0\n{title} t={:.16e} step={}\nASCII\nDATASET STRUCTURED_POINTS\n\
         DIMENSIONS {} {} 1\nORIGIN {:.16e} {:.16e} 0\nSPACING {:.16e} {:.16e} 1\nCELL_DATA {n}\n",
        frame.t,
        frame.step,
        g.nx + 1,
        g.ny + 1,
        g.x0,
        g.y0,
        g.dx,
        g.dy,
    );
    for (name, f) in [
        ("h", &frame.h),
        ("z", &frame.z),
        ("rho_d", &frame.rho_d),
        ("D", &frame.damage),
    ] {
        let _ = writeln!(out, "SCALARS {name} double 1\nLOOKUP_TABLE default");
        for v in f.iter() {
            let _ = writeln!(out, "{v:.16e}");
        }
    }
    for (name, a, b) in [
        ("water_velocity", &frame.u, &frame.v),
        ("debris_velocity", &frame.vdx, &frame.vdy),
        ("discharge", &frame.hu, &frame.hv),
    ] {
        let _ = writeln!(out, "VECTORS {name} double");
        for (x, y) in a.iter().zip(b.iter()) {
            let _ = writeln!(out, "{x:.16e} {y:.16e} 0");
        }
    }
    Ok(out)
}

pub fn write_frame_vtk(frame: &OutputFrame, path: &Path) -> Result<()> {
    let text = format_frame_vtk(frame, "lagflux frame")?;
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}
