//! Sweby slope limiter and MUSCL slope reconstruction.

use crate::error::{Error, Result};
use crate::grid::{Axis, CellField};

/// Coefficient of the Sweby limiter family; `beta = 1` is minmod and
/// `beta = 2` is superbee.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimiterParams {
    pub beta: f64,
}

impl LimiterParams {
    pub fn new(beta: f64) -> Result<Self> {
        if !(1.0..=2.0).contains(&beta) {
            return Err(Error::validation(
                "limiter_beta",
                format!("must lie in [1, 2], got {beta}"),
            ));
        }
        Ok(Self { beta })
    }
}

impl Default for LimiterParams {
    fn default() -> Self {
        Self { beta: 1.5 }
    }
}

/// `phi(a, b) = [ab > 0] sign(a) max(min(|a|, beta |b|), min(beta |a|, |b|))`.
#[inline]
pub fn sweby_limiter(a: f64, b: f64, beta: f64) -> f64 {
    if a * b <= 0.0 {
        return 0.0;
    }
    let (aa, ab) = (a.abs(), b.abs());
    let mag = aa.min(beta * ab).max((beta * aa).min(ab));
    mag.copysign(a)
}

/// Limited slope of `field` along `axis` in every cell, in field units per
/// length. Cells on the domain edge (and every cell when the axis has fewer
/// than three cells) get a zero slope.
pub fn muscl_reconstruct(field: &CellField, axis: Axis, params: LimiterParams) -> CellField {
    let grid = field.grid;
    let mut slopes = CellField::zeros(grid);
    let n = grid.count(axis);
    if n < 3 {
        return slopes;
    }
    let h = grid.spacing(axis);
    let lines = match axis {
        Axis::X => grid.ny,
        Axis::Y => grid.nx,
    };
    let at = |line: usize, p: usize| match axis {
        Axis::X => grid.idx(p, line),
        Axis::Y => grid.idx(line, p),
    };
    for line in 0..lines {
        for p in 1..n - 1 {
            let c = field.values[at(line, p)];
            let back = c - field.values[at(line, p - 1)];
            let fwd = field.values[at(line, p + 1)] - c;
            slopes.values[at(line, p)] = sweby_limiter(fwd, back, params.beta) / h;
        }
    }
    slopes
}
