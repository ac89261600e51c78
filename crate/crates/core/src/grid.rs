//! Structured cell-centered grids, scalar cell fields and ghost-cell
//! boundary handling.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform axis-aligned grid of `nx * ny` cells covering `[x0,x1] x [y0,y1]`.
///
/// One-dimensional problems use `ny = 1`. Cells are stored row-major with
/// `i` (x index) running fastest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
    pub dx: f64,
    pub dy: f64,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidInput(format!(
                "grid needs at least one cell per axis, got {nx}x{ny}"
            )));
        }
        if !(x0.is_finite() && x1.is_finite() && y0.is_finite() && y1.is_finite()) {
            return Err(Error::InvalidInput("grid bounds must be finite".into()));
        }
        let dx = (x1 - x0) / nx as f64;
        let dy = (y1 - y0) / ny as f64;
        if !(dx > 0.0 && dy > 0.0) {
            return Err(Error::InvalidInput(format!(
                "grid bounds must satisfy x0 < x1 and y0 < y1, got [{x0},{x1}]x[{y0},{y1}]"
            )));
        }
        Ok(Self {
            nx,
            ny,
            x0,
            y0,
            x1,
            y1,
            dx,
            dy,
        })
    }

    /// A 1D grid of `n` cells on `[x0, x1]`, with a unit-width transverse direction.
    pub fn line(n: usize, x0: f64, x1: f64) -> Result<Self> {
        Self::new(n, 1, x0, x1, 0.0, 1.0)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    #[inline]
    pub fn cell_area(&self) -> f64 {
        self.dx * self.dy
    }

    #[inline]
    pub fn xc(&self, i: usize) -> f64 {
        self.x0 + (i as f64 + 0.5) * self.dx
    }

    #[inline]
    pub fn yc(&self, j: usize) -> f64 {
        self.y0 + (j as f64 + 0.5) * self.dy
    }

    #[inline]
    pub fn center(&self, index: usize) -> (f64, f64) {
        (self.xc(index % self.nx), self.yc(index / self.nx))
    }

    pub fn spacing(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.dx,
            Axis::Y => self.dy,
        }
    }

    pub fn count(&self, axis: Axis) -> usize {
        match axis {
            Axis::X => self.nx,
            Axis::Y => self.ny,
        }
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 && x <= self.x1 && y >= self.y0 && y <= self.y1
    }

    /// Smallest cell size among the axes that actually carry more than one
    /// cell; a 1D grid is governed by `dx` alone.
    pub fn min_spacing(&self) -> f64 {
        if self.ny == 1 {
            self.dx
        } else if self.nx == 1 {
            self.dy
        } else {
            self.dx.min(self.dy)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

/// One scalar per cell of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CellField {
    pub grid: Grid2D,
    pub values: Vec<f64>,
}

impl CellField {
    pub fn zeros(grid: Grid2D) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid2D, value: f64) -> Self {
        Self {
            grid,
            values: vec![value; grid.len()],
        }
    }

    pub fn from_fn(grid: Grid2D, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                values.push(f(grid.xc(i), grid.yc(j)));
            }
        }
        Self { grid, values }
    }

    pub fn from_values(grid: Grid2D, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: format!("{} values", grid.len()),
                found: format!("{} values", values.len()),
            });
        }
        Ok(Self { grid, values })
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.idx(i, j)]
    }

    /// Index of the first NaN/Inf entry, if any.
    pub fn first_non_finite(&self) -> Option<usize> {
        self.values.iter().position(|v| !v.is_finite())
    }

    /// Sum of `value * |K|` over all cells.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.cell_area()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Ghost-cell treatment at one domain edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    /// Reflective wall: ghost mirrors the cell with the normal velocity negated.
    #[default]
    Wall,
    /// Zero-gradient outflow: ghost copies the adjacent cell.
    Transmissive,
    /// Wrap-around to the opposite edge.
    Periodic,
}

/// Boundary kinds for the four domain edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct Boundaries {
    #[serde(default)]
    pub left: BoundaryKind,
    #[serde(default)]
    pub right: BoundaryKind,
    #[serde(default)]
    pub bottom: BoundaryKind,
    #[serde(default)]
    pub top: BoundaryKind,
}

impl Boundaries {
    pub fn uniform(kind: BoundaryKind) -> Self {
        Self {
            left: kind,
            right: kind,
            bottom: kind,
            top: kind,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pair = |a: BoundaryKind, b: BoundaryKind, name: &str| {
            if (a == BoundaryKind::Periodic) != (b == BoundaryKind::Periodic) {
                Err(Error::validation(
                    name,
                    "periodic boundaries must be set on both opposite edges",
                ))
            } else {
                Ok(())
            }
        };
        pair(self.left, self.right, "boundary.left")?;
        pair(self.bottom, self.top, "boundary.bottom")
    }
}

/// What sits on one side of a face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// An interior (or periodically wrapped) cell.
    Cell(usize),
    /// A ghost built from the given interior cell.
    Ghost { source: usize, kind: BoundaryKind },
}

impl Side {
    /// The cell whose data the side is built from.
    #[inline]
    pub fn source(self) -> usize {
        match self {
            Side::Cell(k) => k,
            Side::Ghost { source, .. } => source,
        }
    }

    #[inline]
    pub fn is_wall(self) -> bool {
        matches!(
            self,
            Side::Ghost {
                kind: BoundaryKind::Wall,
                ..
            }
        )
    }

    #[inline]
    pub fn cell(self) -> Option<usize> {
        match self {
            Side::Cell(k) => Some(k),
            Side::Ghost { .. } => None,
        }
    }
}

/// Faces normal to `axis`. Face `f` of line `l` sits between cell `f - 1`
/// and cell `f` along the axis, so there are `n + 1` faces per line.
#[derive(Debug, Clone, Copy)]
pub struct FaceLayout {
    pub axis: Axis,
    /// Faces per line (`n + 1`).
    pub per_line: usize,
    /// Number of lines (cells along the other axis).
    pub lines: usize,
}

impl FaceLayout {
    pub fn new(grid: &Grid2D, axis: Axis) -> Self {
        match axis {
            Axis::X => Self {
                axis,
                per_line: grid.nx + 1,
                lines: grid.ny,
            },
            Axis::Y => Self {
                axis,
                per_line: grid.ny + 1,
                lines: grid.nx,
            },
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.per_line * self.lines
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn face(&self, line: usize, f: usize) -> usize {
        line * self.per_line + f
    }

    /// Cell index of position `p` along the axis in line `line`.
    #[inline]
    pub fn cell(&self, grid: &Grid2D, line: usize, p: usize) -> usize {
        match self.axis {
            Axis::X => grid.idx(p, line),
            Axis::Y => grid.idx(line, p),
        }
    }

    /// Face indices on the low and high side of a cell.
    #[inline]
    pub fn faces_of(&self, grid: &Grid2D, cell: usize) -> (usize, usize) {
        let (i, j) = (cell % grid.nx, cell / grid.nx);
        let (line, p) = match self.axis {
            Axis::X => (j, i),
            Axis::Y => (i, j),
        };
        (self.face(line, p), self.face(line, p + 1))
    }

    /// Left/right sides of face `f` in line `line`.
    pub fn sides(&self, grid: &Grid2D, bcs: &Boundaries, line: usize, f: usize) -> (Side, Side) {
        let n = self.per_line - 1;
        let (lo, hi) = match self.axis {
            Axis::X => (bcs.left, bcs.right),
            Axis::Y => (bcs.bottom, bcs.top),
        };
        let left = if f == 0 {
            match lo {
                BoundaryKind::Periodic => Side::Cell(self.cell(grid, line, n - 1)),
                kind => Side::Ghost {
                    source: self.cell(grid, line, 0),
                    kind,
                },
            }
        } else {
            Side::Cell(self.cell(grid, line, f - 1))
        };
        let right = if f == n {
            match hi {
                BoundaryKind::Periodic => Side::Cell(self.cell(grid, line, 0)),
                kind => Side::Ghost {
                    source: self.cell(grid, line, n - 1),
                    kind,
                },
            }
        } else {
            Side::Cell(self.cell(grid, line, f))
        };
        (left, right)
    }
}

/// Per-cell outflow limiter: returns the factor `theta_K` in `[0, 1]` by
/// which every flux leaving cell `K` must be scaled so that the cell does
/// not export more than `avail_K` (a per-area amount) within `dt`.
///
/// `fluxes[a]` holds the signed face fluxes normal to each axis (positive
/// along the axis); the donor of a positive flux is the left side.
pub fn outflow_limiter(grid: &Grid2D, bcs: &Boundaries, avail: &[f64], fluxes: [&[f64]; 2], dt: f64) -> Vec<f64> {
    let mut out = vec![0.0; grid.len()];
    for (axis, flux) in [Axis::X, Axis::Y].into_iter().zip(fluxes) {
        let layout = FaceLayout::new(grid, axis);
        let inv_h = 1.0 / grid.spacing(axis);
        for line in 0..layout.lines {
            for f in 0..layout.per_line {
                let phi = flux[layout.face(line, f)];
                if phi == 0.0 {
                    continue;
                }
                let (left, right) = layout.sides(grid, bcs, line, f);
                let donor = if phi > 0.0 { left } else { right };
                if let Side::Cell(k) = donor {
                    out[k] += phi.abs() * dt * inv_h;
                }
            }
        }
    }
    avail
        .iter()
        .zip(&out)
        .map(|(&a, &o)| if o > a { (a / o).clamp(0.0, 1.0) } else { 1.0 })
        .collect()
}

/// Donor cell of a signed face flux, if it is an interior cell.
#[inline]
pub fn donor(left: Side, right: Side, phi: f64) -> Option<usize> {
    if phi > 0.0 {
        left.cell()
    } else if phi < 0.0 {
        right.cell()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_degenerate_input() {
        assert!(Grid2D::new(0, 1, 0.0, 1.0, 0.0, 1.0).is_err());
        assert!(Grid2D::new(2, 2, 1.0, 1.0, 0.0, 1.0).is_err());
        assert!(Grid2D::new(2, 2, 0.0, 1.0, 1.0, 0.0).is_err());
        let g = Grid2D::new(4, 2, 0.0, 2.0, 0.0, 1.0).unwrap();
        assert_eq!(g.dx, 0.5);
        assert_eq!(g.dy, 0.5);
        assert_eq!(g.idx(3, 1), 7);
        assert_eq!(g.center(5), (0.75, 0.75));
    }

    #[test]
    fn face_sides_respect_boundary_kinds() {
        let g = Grid2D::line(3, 0.0, 1.0).unwrap();
        let layout = FaceLayout::new(&g, Axis::X);
        let walls = Boundaries::uniform(BoundaryKind::Wall);
        let (l, r) = layout.sides(&g, &walls, 0, 0);
        assert!(l.is_wall());
        assert_eq!(r, Side::Cell(0));
        let (l, r) = layout.sides(&g, &walls, 0, 3);
        assert_eq!(l, Side::Cell(2));
        assert_eq!(r.source(), 2);

        let periodic = Boundaries::uniform(BoundaryKind::Periodic);
        let (l, _) = layout.sides(&g, &periodic, 0, 0);
        assert_eq!(l, Side::Cell(2));
        let (_, r) = layout.sides(&g, &periodic, 0, 3);
        assert_eq!(r, Side::Cell(0));
    }

    #[test]
    fn periodic_needs_both_edges() {
        let mut b = Boundaries::uniform(BoundaryKind::Wall);
        b.left = BoundaryKind::Periodic;
        assert!(b.validate().is_err());
        b.right = BoundaryKind::Periodic;
        assert!(b.validate().is_ok());
    }

    #[test]
    fn outflow_limiter_caps_export() {
        let g = Grid2D::line(2, 0.0, 2.0).unwrap();
        let b = Boundaries::uniform(BoundaryKind::Wall);
        // flux 2 out of cell 0 during dt = 1 with dx = 1, only 0.5 available
        let fx = [0.0, 2.0, 0.0];
        let fy = [0.0; 4];
        let theta = outflow_limiter(&g, &b, &[0.5, 1.0], [&fx, &fy], 1.0);
        assert_eq!(theta, vec![0.25, 1.0]);
    }
}
