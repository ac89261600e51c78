//! Bed elevation from analytic hills and ramps or from a gridded text file.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Axis, Boundaries, CellField, Grid2D};
use crate::swe::Topography;

/// Gaussian hill `height * exp(-r^2 / (2 width^2))` centered at `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Hill {
    pub x: f64,
    pub y: f64,
    pub height: f64,
    pub width: f64,
}

impl Hill {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let r2 = (x - self.x).powi(2) + (y - self.y).powi(2);
        self.height * (-r2 / (2.0 * self.width * self.width)).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RampAxis {
    X,
    Y,
}

/// Linear rise `slope * max(s - start, 0)` along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ramp {
    pub axis: RampAxis,
    #[serde(default)]
    pub start: f64,
    pub slope: f64,
}

impl Ramp {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let s = match self.axis {
            RampAxis::X => x,
            RampAxis::Y => y,
        };
        self.slope * (s - self.start).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TopographyInput {
    Analytic {
        base: f64,
        ramps: Vec<Ramp>,
        hills: Vec<Hill>,
    },
    /// Text file: `nx ny`, then `x0 x1 y0 y1`, then `nx * ny` values in
    /// row-major order. `#` starts a comment.
    Gridded { path: PathBuf },
}

impl TopographyInput {
    pub fn flat() -> Self {
        TopographyInput::Analytic {
            base: 0.0,
            ramps: Vec::new(),
            hills: Vec::new(),
        }
    }
}

/// Evaluates the analytic bed at every cell center.
pub fn analytic_field(grid: Grid2D, base: f64, ramps: &[Ramp], hills: &[Hill]) -> CellField {
    CellField::from_fn(grid, |x, y| {
        let r: f64 = ramps.iter().map(|r| r.eval(x, y)).sum();
        let h: f64 = hills.iter().map(|h| h.eval(x, y)).sum();
        base + r + h
    })
}

pub fn load_topography(input: &TopographyInput, grid: Grid2D, bcs: &Boundaries) -> Result<Topography> {
    let z = match input {
        TopographyInput::Analytic { base, ramps, hills } => analytic_field(grid, *base, ramps, hills),
        TopographyInput::Gridded { path } => read_gridded(path, grid)?,
    };
    let topo = Topography::new(z, bcs)?;
    check_edges(&topo);
    Ok(topo)
}

fn check_edges(topo: &Topography) {
    let g = topo.grid();
    for axis in [Axis::X, Axis::Y] {
        let layout = crate::grid::FaceLayout::new(&g, axis);
        for line in 0..layout.lines {
            for f in 1..layout.per_line - 1 {
                let l = layout.cell(&g, line, f - 1);
                let r = layout.cell(&g, line, f);
                let mid = 0.5 * (topo.z.values[l] + topo.z.values[r]);
                debug_assert_eq!(topo.edges(axis)[layout.face(line, f)], mid);
            }
        }
    }
}

pub fn read_gridded(path: &Path, grid: Grid2D) -> Result<CellField> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_gridded(&text, grid, &path.display().to_string())
}

pub fn parse_gridded(text: &str, grid: Grid2D, source_name: &str) -> Result<CellField> {
    let mut tokens = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    let mut header = |what: &str| {
        tokens.next().ok_or_else(|| Error::DimensionMismatch {
            expected: format!("a header with {what}"),
            found: "end of file".into(),
        })
    };
    let bad = |tok: &str| Error::InvalidInput(format!("{source_name}: cannot parse `{tok}` in header"));
    let nx_tok = header("nx")?;
    let nx: usize = nx_tok.parse().map_err(|_| bad(nx_tok))?;
    let ny_tok = header("ny")?;
    let ny: usize = ny_tok.parse().map_err(|_| bad(ny_tok))?;
    let mut bounds = [0.0; 4];
    for b in &mut bounds {
        let tok = header("bounds x0 x1 y0 y1")?;
        *b = tok.parse().map_err(|_| bad(tok))?;
    }
    if (nx, ny) != (grid.nx, grid.ny) {
        return Err(Error::DimensionMismatch {
            expected: format!("{}x{} cells", grid.nx, grid.ny),
            found: format!("{nx}x{ny} cells in {source_name}"),
        });
    }
    let expected = [grid.x0, grid.x1, grid.y0, grid.y1];
    let scale = (grid.x1 - grid.x0).abs().max((grid.y1 - grid.y0).abs());
    if bounds.iter().zip(&expected).any(|(a, b)| (a - b).abs() > 1e-12 * scale) {
        return Err(Error::DimensionMismatch {
            expected: format!("bounds {expected:?}"),
            found: format!("bounds {bounds:?} in {source_name}"),
        });
    }
    let mut values = Vec::with_capacity(grid.len());
    for (index, tok) in tokens.enumerate() {
        let v: f64 = tok.parse().map_err(|_| Error::NonFiniteValue {
            source_name: source_name.to_string(),
            index,
        })?;
        if !v.is_finite() {
            return Err(Error::NonFiniteValue {
                source_name: source_name.to_string(),
                index,
            });
        }
        values.push(v);
    }
    if values.len() != grid.len() {
        return Err(Error::DimensionMismatch {
            expected: format!("{} elevation values", grid.len()),
            found: format!("{} in {source_name}", values.len()),
        });
    }
    CellField::from_values(grid, values)
}

/// Text in the gridded format, with 17 significant digits per value.
pub fn format_gridded(z: &CellField) -> String {
    let g = z.grid;
    let mut out = format!(
        "{} {}\n{:.16e} {:.16e} {:.16e} {:.16e}\n",
        g.nx, g.ny, g.x0, g.x1, g.y0, g.y1
    );
    for row in z.values.chunks(g.nx) {
        let line: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn write_gridded(z: &CellField, path: &Path) -> Result<()> {
    std::fs::write(path, format_gridded(z)).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid2D {
        Grid2D::new(8, 4, 0.0, 2.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn flat_bed_is_zero() {
        let t = load_topography(&TopographyInput::flat(), grid(), &Boundaries::default()).unwrap();
        assert!(t
            .z
            .values
            .iter()
            .chain(&t.z_edge_x)
            .chain(&t.z_edge_y)
            .all(|&v| v == 0.0));
    }

    #[test]
    fn ramp_edges_sit_midway() {
        let input = TopographyInput::Analytic {
            base: 0.0,
            ramps: vec![Ramp {
                axis: RampAxis::X,
                start: -1.0,
                slope: 1.0,
            }],
            hills: vec![],
        };
        let g = grid();
        let t = load_topography(&input, g, &Boundaries::default()).unwrap();
        let layout = crate::grid::FaceLayout::new(&g, Axis::X);
        for line in 0..g.ny {
            for f in 1..g.nx {
                let x = g.x0 + f as f64 * g.dx;
                assert!((t.z_edge_x[layout.face(line, f)] - (x + 1.0)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn gridded_round_trip_matches_analytic() {
        let hills: Vec<Hill> = [0.2, 0.5, 0.8]
            .iter()
            .map(|&y| Hill {
                x: 1.3,
                y,
                height: 1.0,
                width: 0.05,
            })
            .collect();
        let g = grid();
        let z = analytic_field(g, 0.0, &[], &hills);
        let back = parse_gridded(&format_gridded(&z), g, "mem").unwrap();
        assert_eq!(back.values, z.values);
    }

    #[test]
    fn gridded_errors() {
        let g = grid();
        let short = "8 4\n0 2 0 1\n1 2 3\n";
        assert!(matches!(
            parse_gridded(short, g, "f"),
            Err(Error::DimensionMismatch { .. })
        ));
        let wrong = "4 4\n0 2 0 1\n";
        assert!(matches!(
            parse_gridded(wrong, g, "f"),
            Err(Error::DimensionMismatch { .. })
        ));
        let mut text = String::from("8 4\n0 2 0 1\n");
        for k in 0..32 {
            text += if k == 5 { "nan " } else { "0.5 " };
        }
        match parse_gridded(&text, g, "f") {
            Err(Error::NonFiniteValue { index, .. }) => assert_eq!(index, 5),
            other => panic!("unexpected {other:?}"),
        }
    }
}
