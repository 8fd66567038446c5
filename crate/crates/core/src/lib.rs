//! Volume manipulation, analysis and rendering for structured and
//! hierarchical (AMR) 3D grids.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! at the crate root fix it to `f64`, which is what the CLI uses.

pub mod amr;
pub mod any_volume;
pub mod error;
pub mod exec;
pub mod format;
pub mod geom;
pub mod io;
pub mod lut;
pub mod managed;
pub mod ops;
pub mod render;
pub mod scalar;
pub mod volume;

pub use amr::{HierarchicalVolume, Subgrid, SubgridInfo};
pub use any_volume::{Volume, VolumeMut, VolumeRef};
pub use error::{Result, VktError};
pub use exec::{get_execution_policy, set_execution_policy, with_execution_policy, Device, ExecutionPolicy};
pub use format::{DataFormat, VoxelMapping};
pub use geom::{Aabb, Box3i, Vec3, Vec3i};
pub use lut::{resolve_lookup_table, ColorFormat, LookupTable};
pub use managed::{ManagedBuffer, ResourceHandle};
pub use scalar::Scalar;
pub use volume::StructuredVolume;

pub type Vec3f = Vec3<f64>;
pub type Vec3f32 = Vec3<f32>;
pub type StructuredVolumeF64 = StructuredVolume<f64>;
pub type StructuredVolumeF32 = StructuredVolume<f32>;
pub type HierarchicalVolumeF64 = HierarchicalVolume<f64>;
pub type HierarchicalVolumeF32 = HierarchicalVolume<f32>;
