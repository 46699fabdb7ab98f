//! Geodesic ball packings of S²×R under screw-motion space groups.
//!
//! The crate computes the packing radius and density of the orbit of a
//! kernel point, and maximizes the density over the kernel and the lattice
//! parameter for each catalogued group.

pub mod error;
pub mod geometry;
pub mod groups;
pub mod isometry;
pub mod mesh;
pub mod optimize;
pub mod packing;
pub mod quadrature;
pub mod report;

pub use error::{Error, Result};
pub use geometry::{ball_volume, ball_volume_series, distance, S2RPoint};
pub use groups::{GroupName, SpaceGroupSpec};
pub use isometry::Isometry;
pub use optimize::{optimize, SearchParams};
pub use packing::{density, packing_radius, PackingConfiguration};
