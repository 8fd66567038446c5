//! Dense structured volumes.

use rayon::prelude::*;

use crate::error::{Result, VktError};
use crate::exec::Device;
use crate::format::{DataFormat, VoxelMapping};
use crate::geom::{Aabb, Box3i, Vec3, Vec3i};
use crate::managed::{ManagedBuffer, ResourceHandle};
use crate::scalar::Scalar;

/// Dense grid of cells stored x-fastest, then y, then z.
///
/// `T` is the real type used for mapped values, cell sizes and sampling;
/// the storage format is independent of it.
#[derive(Debug)]
pub struct StructuredVolume<T: Scalar = f64> {
    dims: Vec3i,
    format: DataFormat,
    cell_size: Vec3<T>,
    mapping: VoxelMapping<T>,
    data: ManagedBuffer,
}

fn validate<T: Scalar>(dims: Vec3i, cell_size: Vec3<T>, mapping: &VoxelMapping<T>) -> Result<()> {
    if !dims.all_positive() {
        return Err(VktError::invalid(format!("dims must be >= 1 per axis, got {dims:?}")));
    }
    if !(cell_size.is_finite() && cell_size.min_component() > T::zero()) {
        return Err(VktError::invalid(format!("cell size must be > 0, got {cell_size:?}")));
    }
    VoxelMapping::new(mapping.lo, mapping.hi).map(|_| ())
}

impl<T: Scalar> StructuredVolume<T> {
    /// Zero-filled volume allocated in the current policy's memory space.
    pub fn new(dims: Vec3i, format: DataFormat, cell_size: Vec3<T>, mapping: VoxelMapping<T>) -> Result<Self> {
        validate(dims, cell_size, &mapping)?;
        let data = ManagedBuffer::new(dims.volume() * format.bytes_per_cell())?;
        Ok(Self { dims, format, cell_size, mapping, data })
    }

    /// Unit cell size and `[0, 1]` mapping.
    pub fn with_dims(dims: Vec3i, format: DataFormat) -> Result<Self> {
        Self::new(dims, format, Vec3::splat(T::one()), VoxelMapping::unit())
    }

    /// Wraps raw little-endian cell bytes.
    pub fn from_bytes(
        dims: Vec3i,
        format: DataFormat,
        cell_size: Vec3<T>,
        mapping: VoxelMapping<T>,
        bytes: Vec<u8>,
    ) -> Result<Self> {
        validate(dims, cell_size, &mapping)?;
        let expected = dims.volume() * format.bytes_per_cell();
        if bytes.len() != expected {
            return Err(VktError::SizeMismatch { expected: expected as u64, actual: bytes.len() as u64 });
        }
        let data = ManagedBuffer::from_vec(bytes)?;
        Ok(Self { dims, format, cell_size, mapping, data })
    }

    /// Same geometry and format as `self`, zero-filled.
    pub fn new_like(&self) -> Result<Self> {
        Self::new(self.dims, self.format, self.cell_size, self.mapping)
    }

    pub fn try_clone(&self) -> Result<Self> {
        Ok(Self {
            dims: self.dims,
            format: self.format,
            cell_size: self.cell_size,
            mapping: self.mapping,
            data: self.data.try_clone()?,
        })
    }

    pub fn dims(&self) -> Vec3i {
        self.dims
    }

    pub fn format(&self) -> DataFormat {
        self.format
    }

    pub fn cell_size(&self) -> Vec3<T> {
        self.cell_size
    }

    pub fn mapping(&self) -> VoxelMapping<T> {
        self.mapping
    }

    pub fn cell_count(&self) -> usize {
        self.dims.volume()
    }

    pub fn bounds(&self) -> Box3i {
        Box3i::from_dims(self.dims)
    }

    /// `[0, dims * cellSize]` with the origin at the corner.
    pub fn world_bounds(&self) -> Aabb<T> {
        Aabb::new(Vec3::splat(T::zero()), self.dims.cast::<T>() * self.cell_size)
    }

    pub fn buffer(&self) -> &ManagedBuffer {
        &self.data
    }

    pub fn handle(&self) -> ResourceHandle {
        self.data.handle()
    }

    pub fn residency(&self) -> Device {
        self.data.residency()
    }

    pub fn migrate(&self) -> Result<()> {
        self.data.migrate()
    }

    pub fn bytes(&self) -> parking_lot::MappedRwLockReadGuard<'_, [u8]> {
        self.data.bytes()
    }

    pub fn bytes_mut(&mut self) -> &mut [u8] {
        self.data.bytes_mut()
    }

    #[inline]
    pub fn linear_index(&self, idx: Vec3i) -> usize {
        (idx.x + self.dims.x * (idx.y + self.dims.y * idx.z)) as usize
    }

    fn check_index(&self, idx: Vec3i) -> Result<usize> {
        if self.bounds().contains(idx) {
            Ok(self.linear_index(idx))
        } else {
            Err(VktError::IndexOutOfRange { index: idx, dims: self.dims })
        }
    }

    pub fn get_value(&self, idx: Vec3i) -> Result<T> {
        let lin = self.check_index(idx)?;
        let bpc = self.format.bytes_per_cell();
        Ok(self.mapping.decode(self.format, &self.bytes()[lin * bpc..]))
    }

    pub fn set_value(&mut self, idx: Vec3i, value: T) -> Result<()> {
        let lin = self.check_index(idx)?;
        let bpc = self.format.bytes_per_cell();
        let (format, mapping) = (self.format, self.mapping);
        mapping.encode(format, value, &mut self.bytes_mut()[lin * bpc..]);
        Ok(())
    }

    /// Trilinear sample at world position `p`, cell-centered, clamp-to-edge.
    pub fn sample_linear(&self, p: Vec3<T>) -> T {
        let bytes = self.bytes();
        CellView::new(self, &bytes).sample_world(p)
    }

    /// Mapped values of all cells in storage order.
    pub fn mapped_values(&self) -> Vec<T> {
        let bytes = self.bytes();
        let view = CellView::new(self, &bytes);
        (0..self.cell_count()).into_par_iter().map(|i| view.get(i)).collect()
    }

    /// Replaces the mapping without touching stored cells.
    pub fn set_mapping(&mut self, mapping: VoxelMapping<T>) -> Result<()> {
        self.mapping = VoxelMapping::new(mapping.lo, mapping.hi)?;
        Ok(())
    }

    /// Stores `f(index)` (through the voxel mapping) into every cell of `roi`.
    ///
    /// Rows are processed in parallel on the ambient rayon pool; `f` must be pure.
    pub(crate) fn par_store_roi(&mut self, roi: Box3i, f: impl Fn(Vec3i) -> T + Sync) {
        let roi = roi.intersect(&self.bounds());
        if roi.is_empty() {
            return;
        }
        let (dims, format, mapping) = (self.dims, self.format, self.mapping);
        let bpc = format.bytes_per_cell();
        let row_len = dims.x as usize * bpc;
        self.bytes_mut().par_chunks_mut(row_len).enumerate().for_each(|(r, row)| {
            let y = r as i64 % dims.y;
            let z = r as i64 / dims.y;
            if y < roi.lower.y || y >= roi.upper.y || z < roi.lower.z || z >= roi.upper.z {
                return;
            }
            for x in roi.lower.x..roi.upper.x {
                let o = x as usize * bpc;
                mapping.encode(format, f(Vec3::new(x, y, z)), &mut row[o..o + bpc]);
            }
        });
    }
}

impl<T: Scalar> StructuredVolume<T> {
    /// Replaces every cell `c` of `roi` with `f(c, old mapped value)`.
    pub(crate) fn par_update_roi(&mut self, roi: Box3i, f: impl Fn(Vec3i, T) -> T + Sync) {
        let roi = roi.intersect(&self.bounds());
        if roi.is_empty() {
            return;
        }
        let (dims, format, mapping) = (self.dims, self.format, self.mapping);
        let bpc = format.bytes_per_cell();
        let row_len = dims.x as usize * bpc;
        self.bytes_mut().par_chunks_mut(row_len).enumerate().for_each(|(r, row)| {
            let y = r as i64 % dims.y;
            let z = r as i64 / dims.y;
            if y < roi.lower.y || y >= roi.upper.y || z < roi.lower.z || z >= roi.upper.z {
                return;
            }
            for x in roi.lower.x..roi.upper.x {
                let cell = &mut row[x as usize * bpc..(x as usize + 1) * bpc];
                let old = mapping.decode(format, cell);
                mapping.encode(format, f(Vec3::new(x, y, z), old), cell);
            }
        });
    }
}

/// Read-only decoding view over a volume's bytes.
#[derive(Clone, Copy)]
pub struct CellView<'a, T: Scalar> {
    pub(crate) bytes: &'a [u8],
    pub(crate) dims: Vec3i,
    pub(crate) format: DataFormat,
    pub(crate) mapping: VoxelMapping<T>,
    pub(crate) cell_size: Vec3<T>,
}

impl<'a, T: Scalar> CellView<'a, T> {
    pub fn new(vol: &StructuredVolume<T>, bytes: &'a [u8]) -> Self {
        Self {
            bytes,
            dims: vol.dims,
            format: vol.format,
            mapping: vol.mapping,
            cell_size: vol.cell_size,
        }
    }

    #[inline]
    pub fn get(&self, lin: usize) -> T {
        let bpc = self.format.bytes_per_cell();
        self.mapping.decode(self.format, &self.bytes[lin * bpc..lin * bpc + bpc])
    }

    #[inline]
    pub fn get3(&self, x: i64, y: i64, z: i64) -> T {
        self.get((x + self.dims.x * (y + self.dims.y * z)) as usize)
    }

    /// Value at an index clamped into the grid.
    #[inline]
    pub fn get_clamped(&self, x: i64, y: i64, z: i64) -> T {
        self.get3(
            x.clamp(0, self.dims.x - 1),
            y.clamp(0, self.dims.y - 1),
            z.clamp(0, self.dims.z - 1),
        )
    }

    #[inline]
    pub fn sample_world(&self, p: Vec3<T>) -> T {
        let half = T::lit(0.5);
        self.sample_index(Vec3::new(
            p.x / self.cell_size.x - half,
            p.y / self.cell_size.y - half,
            p.z / self.cell_size.z - half,
        ))
    }

    /// Trilinear sample at continuous index `u`, where integer `u` is a cell center.
    pub fn sample_index(&self, u: Vec3<T>) -> T {
        let mut i0 = [0i64; 3];
        let mut i1 = [0i64; 3];
        let mut f = [T::zero(); 3];
        for a in 0..3 {
            let hi = T::lit((self.dims[a] - 1) as f64);
            let c = if u[a].is_nan() { T::zero() } else { u[a].max(T::zero()).min(hi) };
            let fl = c.floor();
            i0[a] = fl.to_i64().unwrap_or(0);
            i1[a] = (i0[a] + 1).min(self.dims[a] - 1);
            f[a] = c - fl;
        }
        let lerp = |a: T, b: T, t: T| a + t * (b - a);
        let c00 = lerp(self.get3(i0[0], i0[1], i0[2]), self.get3(i1[0], i0[1], i0[2]), f[0]);
        let c10 = lerp(self.get3(i0[0], i1[1], i0[2]), self.get3(i1[0], i1[1], i0[2]), f[0]);
        let c01 = lerp(self.get3(i0[0], i0[1], i1[2]), self.get3(i1[0], i0[1], i1[2]), f[0]);
        let c11 = lerp(self.get3(i0[0], i1[1], i1[2]), self.get3(i1[0], i1[1], i1[2]), f[0]);
        lerp(lerp(c00, c10, f[1]), lerp(c01, c11, f[1]), f[2])
    }
}
