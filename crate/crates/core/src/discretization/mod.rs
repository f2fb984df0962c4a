//! Angular quadrature, graded radial grids, the polar disk grid and the
//! discrete averages and norms built on them.

mod angular;
mod disk_grid;
mod norms;
pub(crate) mod radial;

pub use angular::AngularQuadrature;
pub use disk_grid::DiskGrid;
pub(crate) use disk_grid::periodic_cubic;
pub use norms::{l2_norm, sup_norm};
pub use radial::{RadialGrid, Stencil, STENCIL_POINTS};
