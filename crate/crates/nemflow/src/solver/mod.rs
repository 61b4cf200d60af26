//! Grid solution of the anisotropic Stokes system around the unit sphere:
//! MAC discretization on a box, multigrid-preconditioned MINRES for the
//! isotropic solves, Picard iteration for the anisotropic terms, drag
//! extraction and profile sampling.

mod field;
mod grid;
mod mg;
mod picard;
mod post;
mod stokes;

pub use field::{FaceField, FlowField};
pub use grid::{build_grid, CellKind, Grid, Stagger, MIN_CELLS, MIN_CELLS_ACROSS, MIN_HALF_WIDTH, SPHERE_RADIUS};
pub use mg::THETA_MIN;
pub use picard::*;
pub use post::*;
pub use stokes::{iso_stokes_solve, LinearOptions, StokesSystem};
