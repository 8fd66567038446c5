//! Headerless raw volume ingestion.

use crate::error::{Result, VktError};
use crate::format::{DataFormat, VoxelMapping};
use crate::geom::{Vec3, Vec3i};
use crate::io::source::DataSource;
use crate::scalar::Scalar;
use crate::volume::StructuredVolume;

/// Wraps a raw x-fastest little-endian payload whose length must match `dims` and `format` exactly.
pub fn load_raw<T: Scalar>(
    src: &mut DataSource,
    dims: Vec3i,
    format: DataFormat,
    cell_size: Vec3<T>,
    mapping: VoxelMapping<T>,
) -> Result<StructuredVolume<T>> {
    let expected = dims.volume() as u64 * format.bytes_per_cell() as u64;
    let bytes = match src.len() {
        Some(total) => {
            let actual = total.saturating_sub(src.position());
            if actual != expected {
                return Err(VktError::SizeMismatch { expected, actual });
            }
            let mut buf = vec![0u8; expected as usize];
            src.read(&mut buf)?;
            buf
        }
        None => {
            // one extra byte detects oversize streams without reading them whole
            let mut buf = vec![0u8; expected as usize + 1];
            let n = src.read(&mut buf)? as u64;
            if n != expected {
                return Err(VktError::SizeMismatch { expected, actual: n });
            }
            buf.truncate(expected as usize);
            buf
        }
    };
    StructuredVolume::from_bytes(dims, format, cell_size, mapping, bytes)
}
