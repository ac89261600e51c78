//! Simulation configuration: a sectioned key-value document (TOML syntax),
//! fully validated on load. The grammar is documented in `docs/formats.md`.

use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::coupling::{CouplingKind, ParticleScheme};
use crate::debris::DebrisParams;
use crate::error::{Error, Result};
use crate::grid::{Boundaries, Grid2D};
use crate::swe::EpsMode;

use super::topography::{Hill, Ramp, TopographyInput};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub name: String,
    pub t_end: f64,
    pub grid: GridConfig,
    pub numerics: NumericsConfig,
    pub boundaries: Boundaries,
    pub topography: TopographyConfig,
    pub water: WaterConfig,
    pub debris: DebrisConfig,
    pub wet_dry: WetDryConfig,
    pub coupling: CouplingConfig,
    pub output: OutputConfig,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            name: "simulation".into(),
            t_end: 1.0,
            grid: GridConfig::default(),
            numerics: NumericsConfig::default(),
            boundaries: Boundaries::default(),
            topography: TopographyConfig::default(),
            water: WaterConfig::default(),
            debris: DebrisConfig::default(),
            wet_dry: WetDryConfig::default(),
            coupling: CouplingConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            nx: 100,
            ny: 100,
            x0: 0.0,
            x1: 1.0,
            y0: 0.0,
            y1: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NumericsConfig {
    pub gravity: f64,
    pub cfl: f64,
    pub dt_max: f64,
    /// Typical depth used to scale the wet/dry thresholds; defaults to the
    /// largest initial depth.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_depth: Option<f64>,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            gravity: 9.81,
            cfl: 0.25,
            dt_max: crate::time::DEFAULT_DT_MAX,
            reference_depth: None,
        }
    }
}

/// Bed elevation: either a gridded file or `base` plus ramps and hills.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TopographyConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub file: Option<PathBuf>,
    pub base: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ramp: Vec<Ramp>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub hill: Vec<Hill>,
}

impl TopographyConfig {
    pub fn input(&self) -> TopographyInput {
        match &self.file {
            Some(path) => TopographyInput::Gridded { path: path.clone() },
            None => TopographyInput::Analytic {
                base: self.base,
                ramps: self.ramp.clone(),
                hills: self.hill.clone(),
            },
        }
    }
}

/// Axis-aligned box `[x0, x1) x [y0, y1)` tested at cell centers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Region {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Region {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x < self.x1 && y >= self.y0 && y < self.y1
    }

    fn validate(&self, key: &str) -> Result<()> {
        let finite = [self.x0, self.x1, self.y0, self.y1].iter().all(|v| v.is_finite());
        if !finite || self.x0 >= self.x1 || self.y0 >= self.y1 {
            return Err(Error::validation(
                key,
                format!(
                    "region must be finite with x0 < x1 and y0 < y1, got [{}, {}] x [{}, {}]",
                    self.x0, self.x1, self.y0, self.y1
                ),
            ));
        }
        Ok(())
    }
}

/// Initial free surface: `level` everywhere, overridden inside regions
/// (later regions win). Depth is `max(level - z, 0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WaterConfig {
    pub level: f64,
    pub u: f64,
    pub v: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub region: Vec<WaterRegion>,
}

impl Default for WaterConfig {
    fn default() -> Self {
        Self {
            level: 1.0,
            u: 0.0,
            v: 0.0,
            region: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaterRegion {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub level: f64,
    #[serde(default)]
    pub u: f64,
    #[serde(default)]
    pub v: f64,
}

impl WaterRegion {
    pub fn bounds(&self) -> Region {
        Region {
            x0: self.x0,
            x1: self.x1,
            y0: self.y0,
            y1: self.y1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DebrisConfig {
    pub lambda: f64,
    pub tau_d: f64,
    pub tau_f: f64,
    pub h_f: f64,
    pub beta_f: f64,
    pub rho0: f64,
    pub ell: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub region: Vec<DebrisRegion>,
}

impl Default for DebrisConfig {
    fn default() -> Self {
        let p = DebrisParams::default();
        Self {
            lambda: p.lambda,
            tau_d: p.tau_d,
            tau_f: p.tau_f,
            h_f: p.h_f,
            beta_f: p.beta_f,
            rho0: p.rho0,
            ell: p.ell,
            region: Vec::new(),
        }
    }
}

impl DebrisConfig {
    pub fn params(&self) -> DebrisParams {
        DebrisParams {
            lambda: self.lambda,
            tau_d: self.tau_d,
            tau_f: self.tau_f,
            h_f: self.h_f,
            beta_f: self.beta_f,
            rho0: self.rho0,
            ell: self.ell,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DebrisRegion {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub rho: f64,
    #[serde(default)]
    pub vx: f64,
    #[serde(default)]
    pub vy: f64,
}

impl DebrisRegion {
    pub fn bounds(&self) -> Region {
        Region {
            x0: self.x0,
            x1: self.x1,
            y0: self.y0,
            y1: self.y1,
        }
    }
}

/// Wet/dry thresholds; unset values scale with the reference depth.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WetDryConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h_wet: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_blend: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu_relax: Option<f64>,
    pub eps_mode: EpsMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CouplingConfig {
    pub kind: CouplingKind,
    pub mu_debris: f64,
    /// Number of tracer particles seeded from the initial debris.
    pub particles: usize,
    pub particle_scheme: ParticleScheme,
    /// Also accumulate the vector damage `int rho v dt`.
    pub damage_vector: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Vtk,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: PathBuf,
    /// Frame cadence in steps; 0 writes only the initial and final frames.
    pub every: u64,
    pub formats: Vec<OutputFormat>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("output"),
            every: 0,
            formats: vec![OutputFormat::Csv, OutputFormat::Vtk],
        }
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let config: SimConfig = toml::from_str(text).map_err(|e| de_error(text, &e))?;
    config.validate().map_err(|e| with_line(text, e))?;
    Ok(config)
}

impl SimConfig {
    /// Reads a configuration file; a relative topography file is resolved
    /// against the directory of the configuration.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = parse_config(&text)?;
        if let Some(file) = &config.topography.file {
            if file.is_relative() {
                let base = path.parent().unwrap_or_else(|| Path::new(""));
                config.topography.file = Some(base.join(file));
            }
        }
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration values are always representable")
    }

    pub fn grid(&self) -> Result<Grid2D> {
        let g = &self.grid;
        Grid2D::new(g.nx, g.ny, g.x0, g.x1, g.y0, g.y1)
    }

    pub fn validate(&self) -> Result<()> {
        positive_finite(self.t_end, "t_end")?;
        self.grid().map_err(|e| Error::validation("grid", e.to_string()))?;

        let n = &self.numerics;
        positive_finite(n.gravity, "numerics.gravity")?;
        if !(n.cfl > 0.0 && n.cfl <= 1.0) {
            return Err(Error::validation(
                "numerics.cfl",
                format!("must lie in (0, 1], got {}", n.cfl),
            ));
        }
        positive_finite(n.dt_max, "numerics.dt_max")?;
        if let Some(h) = n.reference_depth {
            positive_finite(h, "numerics.reference_depth")?;
        }

        self.boundaries.validate().map_err(|e| match e {
            Error::Validation { key, constraint, .. } => {
                Error::validation(&key.replace("boundary.", "boundaries."), constraint)
            }
            other => other,
        })?;

        let t = &self.topography;
        if t.file.is_some() && (!t.hill.is_empty() || !t.ramp.is_empty()) {
            return Err(Error::validation(
                "topography.file",
                "a gridded file excludes analytic hills and ramps",
            ));
        }
        finite(t.base, "topography.base")?;
        for (i, r) in t.ramp.iter().enumerate() {
            finite(r.start, &format!("topography.ramp[{i}].start"))?;
            finite(r.slope, &format!("topography.ramp[{i}].slope"))?;
        }
        for (i, h) in t.hill.iter().enumerate() {
            finite(h.x, &format!("topography.hill[{i}].x"))?;
            finite(h.y, &format!("topography.hill[{i}].y"))?;
            finite(h.height, &format!("topography.hill[{i}].height"))?;
            positive_finite(h.width, &format!("topography.hill[{i}].width"))?;
        }

        let w = &self.water;
        finite(w.level, "water.level")?;
        finite(w.u, "water.u")?;
        finite(w.v, "water.v")?;
        for (i, r) in w.region.iter().enumerate() {
            r.bounds().validate(&format!("water.region[{i}]"))?;
            finite(r.level, &format!("water.region[{i}].level"))?;
            finite(r.u, &format!("water.region[{i}].u"))?;
            finite(r.v, &format!("water.region[{i}].v"))?;
        }

        self.debris.params().validate()?;
        if self.debris.lambda != 1.0 {
            return Err(Error::validation(
                "debris.lambda",
                format!(
                    "the 2D debris model supports only lambda = 1, got {}",
                    self.debris.lambda
                ),
            ));
        }
        for (i, r) in self.debris.region.iter().enumerate() {
            r.bounds().validate(&format!("debris.region[{i}]"))?;
            if !(r.rho >= 0.0 && r.rho.is_finite()) {
                return Err(Error::validation(
                    &format!("debris.region[{i}].rho"),
                    format!("must be non-negative and finite, got {}", r.rho),
                ));
            }
            finite(r.vx, &format!("debris.region[{i}].vx"))?;
            finite(r.vy, &format!("debris.region[{i}].vy"))?;
        }

        let wd = &self.wet_dry;
        for (v, key) in [
            (wd.h_wet, "wet_dry.h_wet"),
            (wd.eps_blend, "wet_dry.eps_blend"),
            (wd.mu_relax, "wet_dry.mu_relax"),
        ] {
            if let Some(v) = v {
                positive_finite(v, key)?;
            }
        }

        let c = &self.coupling;
        if !(c.mu_debris >= 0.0 && c.mu_debris.is_finite()) {
            return Err(Error::validation(
                "coupling.mu_debris",
                format!("must be non-negative and finite, got {}", c.mu_debris),
            ));
        }
        Ok(())
    }
}

fn finite(v: f64, key: &str) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(key, format!("must be finite, got {v}")))
    }
}

fn positive_finite(v: f64, key: &str) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(key, format!("must be positive and finite, got {v}")))
    }
}

fn line_at(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Table header (`a.b` for `[a.b]` or `[[a.b]]`) in force at `line`.
fn section_at(text: &str, line: usize) -> String {
    let mut section = String::new();
    for l in text.lines().take(line) {
        if let Some(name) = header(l) {
            section = name.to_string();
        }
    }
    section
}

fn header(line: &str) -> Option<&str> {
    let l = line.trim();
    let inner = l.strip_prefix("[[").and_then(|s| s.split("]]").next());
    let inner = inner.or_else(|| l.strip_prefix('[').and_then(|s| s.split(']').next()));
    inner.map(str::trim)
}

fn de_error(text: &str, e: &toml::de::Error) -> Error {
    let message = e.message().trim().to_string();
    let line = e.span().map(|Range { start, .. }| line_at(text, start));
    if let Some(rest) = message.strip_prefix("unknown field `") {
        let field = rest.split('`').next().unwrap_or_default();
        let section = line.map(|l| section_at(text, l)).unwrap_or_default();
        let key = if section.is_empty() {
            field.to_string()
        } else {
            format!("{section}.{field}")
        };
        return Error::UnknownKey { key, line };
    }
    Error::Parse {
        line: line.unwrap_or(1),
        message,
    }
}

/// Attaches the line of the offending key to a validation error.
fn with_line(text: &str, e: Error) -> Error {
    match e {
        Error::Validation {
            key,
            line: None,
            constraint,
        } => {
            let line = locate_key(text, &key);
            Error::Validation { key, line, constraint }
        }
        other => other,
    }
}

/// Line of a dotted key such as `numerics.cfl` or `debris.region[1].rho`.
/// Falls back to the table header when the key itself is absent.
fn locate_key(text: &str, key: &str) -> Option<usize> {
    let (table, leaf) = match key.rsplit_once('.') {
        Some((t, l)) => (t.to_string(), l.to_string()),
        None => (String::new(), key.to_string()),
    };
    // `water.region[1]` names the second `[[water.region]]` table
    let (table, index, leaf) = if let Some((t, i)) = leaf.strip_suffix(']').and_then(|l| l.split_once('[')) {
        let full = if table.is_empty() {
            t.to_string()
        } else {
            format!("{table}.{t}")
        };
        (full, i.parse::<usize>().ok(), None)
    } else if let Some((t, i)) = table.strip_suffix(']').and_then(|t| t.split_once('[')) {
        (t.to_string(), i.parse::<usize>().ok(), Some(leaf))
    } else {
        (table, None, Some(leaf))
    };

    let mut current = String::new();
    let mut seen = 0usize;
    let mut header_line = None;
    for (n, l) in text.lines().enumerate() {
        if let Some(name) = header(l) {
            current = name.to_string();
            if current == table {
                if index.is_none_or(|i| i == seen) {
                    header_line = Some(n + 1);
                }
                seen += 1;
            }
            continue;
        }
        let in_table = current == table && index.is_none_or(|i| seen == i + 1);
        if let (true, Some(leaf)) = (in_table, &leaf) {
            let l = l.trim_start();
            if let Some(rest) = l.strip_prefix(leaf.as_str()) {
                if rest.trim_start().starts_with('=') {
                    return Some(n + 1);
                }
            }
        }
    }
    header_line
}
