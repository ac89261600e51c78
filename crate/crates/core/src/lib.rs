//! Lagrange-flux finite-volume solvers for the compressible Euler and
//! shallow-water equations, coupled to an Eulerian debris transport model
//! with damage accumulation.

pub mod coupling;
pub mod debris;
pub mod error;
pub mod euler;
pub mod grid;
pub mod io;
pub mod limiter;
pub mod swe;
pub mod time;

pub use error::{Error, ErrorKind, Result};
pub use grid::{Axis, Boundaries, BoundaryKind, CellField, Grid2D};
pub use limiter::{muscl_reconstruct, sweby_limiter, LimiterParams};
pub use time::{compute_dt_cfl, heun_advance, StateVector};
