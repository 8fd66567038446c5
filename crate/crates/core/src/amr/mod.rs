//! Hierarchical (AMR) volumes: leveled subgrids on a logical grid, sampled
//! with normalized hat-basis interpolation through a BVH over the subgrids'
//! active brick regions.

pub mod bvh;

use std::sync::OnceLock;

use crate::error::{Result, VktError};
use crate::exec::Device;
use crate::format::VoxelMapping;
use crate::geom::{Aabb, Box3i, Vec3, Vec3i};
use crate::managed::{ManagedBuffer, ResourceHandle};
use crate::scalar::Scalar;

pub use bvh::Bvh;

/// Input description of one subgrid. `data` is x-fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgrid {
    pub level: u32,
    pub lower: Vec3i,
    pub dims: Vec3i,
    pub data: Vec<f32>,
}

/// Geometry of a stored subgrid; values live in the volume's buffer starting at `offset` cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubgridInfo {
    pub level: u32,
    pub lower: Vec3i,
    pub dims: Vec3i,
    pub offset: usize,
}

impl SubgridInfo {
    /// `2^level` logical units per cell.
    pub fn cell_width(&self) -> i64 {
        1i64 << self.level
    }

    pub fn cell_count(&self) -> usize {
        self.dims.volume()
    }

    pub fn logical_box(&self) -> Box3i {
        Box3i::new(self.lower, self.lower + self.dims.map(|d| d * self.cell_width()))
    }

    /// Logical box of cell `c` (local index).
    pub fn cell_box(&self, c: Vec3i) -> Box3i {
        let w = self.cell_width();
        let lo = self.lower + c.map(|v| v * w);
        Box3i::new(lo, lo + Vec3::splat(w))
    }

    pub fn cell_center<T: Scalar>(&self, c: Vec3i) -> Vec3<T> {
        let w = T::lit(self.cell_width() as f64);
        self.lower.cast::<T>() + (c.cast::<T>() + Vec3::splat(T::lit(0.5))).scale(w)
    }

    /// Logical box grown by half a cell on every face: the union of its cells' hat supports.
    pub fn active_region<T: Scalar>(&self) -> Aabb<T> {
        let half = T::lit(self.cell_width() as f64 * 0.5);
        let b = self.logical_box();
        Aabb::new(
            b.lower.cast::<T>() - Vec3::splat(half),
            b.upper.cast::<T>() + Vec3::splat(half),
        )
    }

    /// Local index box of the cells whose logical box lies entirely inside `roi`.
    pub fn contained_cells(&self, roi: &Box3i) -> Box3i {
        let w = self.cell_width();
        let mut lo = Vec3::splat(0);
        let mut hi = Vec3::splat(0);
        for a in 0..3 {
            let rel_lo = roi.lower[a] - self.lower[a];
            let rel_hi = roi.upper[a] - self.lower[a];
            lo[a] = (-((-rel_lo).div_euclid(w))).max(0);
            hi[a] = rel_hi.div_euclid(w).min(self.dims[a]);
        }
        Box3i::new(lo, hi)
    }

    #[inline]
    pub fn local_linear(&self, c: Vec3i) -> usize {
        (c.x + self.dims.x * (c.y + self.dims.y * c.z)) as usize
    }
}

/// AMR volume holding only leaf subgrids (no hierarchy). Cell values are
/// Float32, stored little-endian and concatenated in subgrid order.
#[derive(Debug)]
pub struct HierarchicalVolume<T: Scalar = f64> {
    subgrids: Vec<SubgridInfo>,
    logical_dims: Vec3i,
    mapping: VoxelMapping<T>,
    data: ManagedBuffer,
    bvh: OnceLock<Bvh<T>>,
}

fn validate_geometry(level: u32, lower: Vec3i, dims: Vec3i) -> Result<()> {
    if level > 30 {
        return Err(VktError::invalid(format!("subgrid level {level} too deep")));
    }
    if !dims.all_positive() {
        return Err(VktError::invalid(format!("subgrid dims must be >= 1, got {dims:?}")));
    }
    let w = 1i64 << level;
    if (0..3).any(|a| lower[a] < 0 || lower[a] % w != 0) {
        return Err(VktError::invalid(format!(
            "subgrid corner {lower:?} not aligned to level-{level} cell width {w}"
        )));
    }
    Ok(())
}

impl<T: Scalar> HierarchicalVolume<T> {
    pub fn new(subgrids: Vec<Subgrid>, mapping: VoxelMapping<T>) -> Result<Self> {
        let mut infos = Vec::with_capacity(subgrids.len());
        let mut bytes = Vec::new();
        for sg in &subgrids {
            validate_geometry(sg.level, sg.lower, sg.dims)?;
            if sg.data.len() != sg.dims.volume() {
                return Err(VktError::SizeMismatch {
                    expected: sg.dims.volume() as u64 * 4,
                    actual: sg.data.len() as u64 * 4,
                });
            }
            infos.push(SubgridInfo { level: sg.level, lower: sg.lower, dims: sg.dims, offset: bytes.len() / 4 });
            bytes.extend(sg.data.iter().flat_map(|v| v.to_le_bytes()));
        }
        Self::from_parts(infos, mapping, bytes)
    }

    /// Builds from subgrid geometry plus the concatenated little-endian f32 payload.
    /// `offset` fields are recomputed from the order of `infos`.
    pub fn from_parts(mut infos: Vec<SubgridInfo>, mapping: VoxelMapping<T>, bytes: Vec<u8>) -> Result<Self> {
        let mapping = VoxelMapping::new(mapping.lo, mapping.hi)?;
        let mut offset = 0;
        let mut logical_dims = Vec3::splat(0);
        for info in &mut infos {
            validate_geometry(info.level, info.lower, info.dims)?;
            info.offset = offset;
            offset += info.cell_count();
            logical_dims = logical_dims.zip(info.logical_box().upper, i64::max);
        }
        if bytes.len() != offset * 4 {
            return Err(VktError::SizeMismatch { expected: offset as u64 * 4, actual: bytes.len() as u64 });
        }
        Ok(Self {
            subgrids: infos,
            logical_dims,
            mapping,
            data: ManagedBuffer::from_vec(bytes)?,
            bvh: OnceLock::new(),
        })
    }

    pub fn try_clone(&self) -> Result<Self> {
        Ok(Self {
            subgrids: self.subgrids.clone(),
            logical_dims: self.logical_dims,
            mapping: self.mapping,
            data: self.data.try_clone()?,
            bvh: self.bvh.clone(),
        })
    }

    pub fn subgrids(&self) -> &[SubgridInfo] {
        &self.subgrids
    }

    pub fn is_empty(&self) -> bool {
        self.subgrids.is_empty()
    }

    pub fn logical_dims(&self) -> Vec3i {
        self.logical_dims
    }

    pub fn logical_bounds(&self) -> Box3i {
        Box3i::from_dims(self.logical_dims)
    }

    pub fn mapping(&self) -> VoxelMapping<T> {
        self.mapping
    }

    pub fn total_cells(&self) -> usize {
        self.subgrids.iter().map(SubgridInfo::cell_count).sum()
    }

    pub fn max_level(&self) -> u32 {
        self.subgrids.iter().map(|s| s.level).max().unwrap_or(0)
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

    /// Raw values of subgrid `i`.
    pub fn subgrid_values(&self, i: usize) -> Vec<f32> {
        let sg = &self.subgrids[i];
        let bytes = self.bytes();
        bytes[sg.offset * 4..(sg.offset + sg.cell_count()) * 4]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect()
    }

    pub fn active_regions(&self) -> Vec<Aabb<T>> {
        self.subgrids.iter().map(SubgridInfo::active_region).collect()
    }

    /// The BVH, built on first use. Concurrent first callers wait for one build.
    pub fn bvh(&self) -> Result<&Bvh<T>> {
        if self.is_empty() {
            return Err(VktError::EmptyVolume);
        }
        Ok(self.bvh.get_or_init(|| Bvh::build(&self.active_regions())))
    }

    pub fn bvh_is_built(&self) -> bool {
        self.bvh.get().is_some()
    }

    /// Basis-interpolated value at logical position `p`.
    pub fn sample_basis(&self, p: Vec3<T>) -> T {
        let bytes = self.bytes();
        match BasisSampler::new(self, &bytes) {
            Ok(s) => s.sample(p),
            Err(_) => T::zero(),
        }
    }

    /// Same as [`Self::sample_basis`] but tests every subgrid instead of walking the BVH.
    pub fn sample_basis_linear_scan(&self, p: Vec3<T>) -> T {
        let bytes = self.bytes();
        let mut acc = HatSum::default();
        for sg in &self.subgrids {
            if sg.active_region::<T>().contains(p) {
                accumulate(sg, &bytes, p, &mut acc);
            }
        }
        acc.value()
    }
}

/// Weighted mean accumulated relative to the first contributing value, so a
/// region of equal values reproduces that value exactly.
#[derive(Default)]
struct HatSum<T> {
    base: Option<T>,
    num: T,
    den: T,
}

impl<T: Scalar> HatSum<T> {
    #[inline]
    fn add(&mut self, h: T, v: T) {
        let base = *self.base.get_or_insert(v);
        self.num += h * (v - base);
        self.den += h;
    }

    fn value(&self) -> T {
        match self.base {
            Some(b) if self.den > T::zero() => b + self.num / self.den,
            _ => T::zero(),
        }
    }
}

#[inline]
fn cell_value<T: Scalar>(bytes: &[u8], cell: usize) -> T {
    T::lit(f32::from_le_bytes(bytes[cell * 4..cell * 4 + 4].try_into().unwrap()) as f64)
}

/// Adds the hat-weighted contributions of the (at most 2x2x2) cells of `sg` whose support holds `p`.
#[inline]
fn accumulate<T: Scalar>(sg: &SubgridInfo, bytes: &[u8], p: Vec3<T>, acc: &mut HatSum<T>) {
    let w = T::lit(sg.cell_width() as f64);
    let half = T::lit(0.5);
    let mut idx = [[0i64; 2]; 3];
    let mut wt = [[T::zero(); 2]; 3];
    for a in 0..3 {
        let q = (p[a] - T::lit(sg.lower[a] as f64)) / w - half;
        let i0 = q.floor().to_i64().unwrap_or(i64::MIN / 2);
        for (k, i) in [i0, i0 + 1].into_iter().enumerate() {
            idx[a][k] = i;
            wt[a][k] = if i >= 0 && i < sg.dims[a] {
                (T::one() - (q - T::lit(i as f64)).abs()).max(T::zero())
            } else {
                T::zero()
            };
        }
    }
    for kz in 0..2 {
        for ky in 0..2 {
            let wyz = wt[1][ky] * wt[2][kz];
            if wyz == T::zero() {
                continue;
            }
            for kx in 0..2 {
                let h = wt[0][kx] * wyz;
                if h == T::zero() {
                    continue;
                }
                let lin = sg.local_linear(Vec3::new(idx[0][kx], idx[1][ky], idx[2][kz]));
                acc.add(h, cell_value::<T>(bytes, sg.offset + lin));
            }
        }
    }
}

/// Point sampler that holds the volume's bytes and BVH for repeated queries.
pub struct BasisSampler<'a, T: Scalar> {
    subgrids: &'a [SubgridInfo],
    bytes: &'a [u8],
    bvh: &'a Bvh<T>,
}

impl<'a, T: Scalar> BasisSampler<'a, T> {
    pub fn new(vol: &'a HierarchicalVolume<T>, bytes: &'a [u8]) -> Result<Self> {
        Ok(Self { subgrids: &vol.subgrids, bytes, bvh: vol.bvh()? })
    }

    /// Indices of subgrids whose active region contains `p`, ascending.
    pub fn covering_subgrids(&self, p: Vec3<T>) -> Vec<usize> {
        let mut out = Vec::new();
        self.bvh.for_each_candidate(p, |i| {
            if self.subgrids[i].active_region::<T>().contains(p) {
                out.push(i);
            }
        });
        out.sort_unstable();
        out
    }

    pub fn sample(&self, p: Vec3<T>) -> T {
        let mut buf = [0usize; 32];
        let mut n = 0;
        let mut overflow: Vec<usize> = Vec::new();
        self.bvh.for_each_candidate(p, |i| {
            if self.subgrids[i].active_region::<T>().contains(p) {
                if n < buf.len() {
                    buf[n] = i;
                    n += 1;
                } else {
                    overflow.push(i);
                }
            }
        });
        let mut acc = HatSum::default();
        if overflow.is_empty() {
            let hits = &mut buf[..n];
            hits.sort_unstable();
            for &i in hits.iter() {
                accumulate(&self.subgrids[i], self.bytes, p, &mut acc);
            }
        } else {
            overflow.extend_from_slice(&buf);
            overflow.sort_unstable();
            for &i in &overflow {
                accumulate(&self.subgrids[i], self.bytes, p, &mut acc);
            }
        }
        acc.value()
    }
}
