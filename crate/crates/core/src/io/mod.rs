//! Data sources, volume streams and file formats.

pub mod native;
pub mod raw;
pub mod source;

pub use native::{
    from_bytes, read_header, read_range, read_volume, to_bytes, write_range, write_volume, VolumeHeader,
};
pub use raw::load_raw;
pub use source::DataSource;

use std::path::Path;

use crate::any_volume::{Volume, VolumeRef};
use crate::error::Result;
use crate::scalar::Scalar;

/// Reads a native volume file.
pub fn load<T: Scalar>(path: impl AsRef<Path>) -> Result<Volume<T>> {
    read_volume(&mut DataSource::open(path)?)
}

/// Writes a native volume file.
pub fn save<'a, T: Scalar>(path: impl AsRef<Path>, v: impl Into<VolumeRef<'a, T>>) -> Result<()> {
    write_volume(&mut DataSource::create(path)?, v)
}
