//! Fill, Crop, Delete, Transform, Resample and voxel-wise arithmetic.

use rayon::prelude::*;

use crate::amr::{BasisSampler, HierarchicalVolume, SubgridInfo};
use crate::any_volume::{VolumeMut, VolumeRef};
use crate::error::{Result, VktError};
use crate::exec;
use crate::format::{DataFormat, VoxelMapping};
use crate::geom::{Box3i, Vec3, Vec3i};
use crate::scalar::Scalar;
use crate::volume::{CellView, StructuredVolume};

/// Sets every cell inside `roi` to `value`.
///
/// Hierarchical volumes interpret `roi` in logical-grid coordinates and only
/// touch cells whose logical box lies entirely inside it.
pub fn fill_range<'a, T: Scalar>(v: impl Into<VolumeMut<'a, T>>, roi: Box3i, value: T) -> Result<()> {
    match v.into() {
        VolumeMut::Structured(s) => {
            s.migrate()?;
            let roi = roi.intersect(&s.bounds());
            if roi.is_empty() {
                return Ok(());
            }
            let (dims, format, mapping) = (s.dims(), s.format(), s.mapping());
            let bpc = format.bytes_per_cell();
            let mut cell = [0u8; 4];
            mapping.encode(format, value, &mut cell);
            let pattern: Vec<u8> = cell[..bpc].repeat((roi.upper.x - roi.lower.x) as usize);
            let row_len = dims.x as usize * bpc;
            let (x0, x1) = (roi.lower.x as usize * bpc, roi.upper.x as usize * bpc);
            exec::run("FillRange", || {
                s.bytes_mut().par_chunks_mut(row_len).enumerate().for_each(|(r, row)| {
                    let (y, z) = (r as i64 % dims.y, r as i64 / dims.y);
                    if y >= roi.lower.y && y < roi.upper.y && z >= roi.lower.z && z < roi.upper.z {
                        row[x0..x1].copy_from_slice(&pattern);
                    }
                })
            });
            Ok(())
        }
        VolumeMut::Hierarchical(h) => {
            h.migrate()?;
            let subgrids: Vec<SubgridInfo> = h.subgrids().to_vec();
            let word = value.as_f32().to_le_bytes();
            let bytes = h.bytes_mut();
            exec::run("FillRange", || {
                for sg in &subgrids {
                    let cells = sg.contained_cells(&roi);
                    if cells.is_empty() {
                        continue;
                    }
                    let chunk = &mut bytes[sg.offset * 4..(sg.offset + sg.cell_count()) * 4];
                    for z in cells.lower.z..cells.upper.z {
                        for y in cells.lower.y..cells.upper.y {
                            for x in cells.lower.x..cells.upper.x {
                                let i = sg.local_linear(Vec3::new(x, y, z)) * 4;
                                chunk[i..i + 4].copy_from_slice(&word);
                            }
                        }
                    }
                }
            });
            Ok(())
        }
    }
}

/// [`fill_range`] over the whole volume.
pub fn fill<'a, T: Scalar>(v: impl Into<VolumeMut<'a, T>>, value: T) -> Result<()> {
    let full = Box3i::new(Vec3::splat(i64::MIN / 4), Vec3::splat(i64::MAX / 4));
    fill_range(v, full, value)
}

fn copy_box<T: Scalar>(src: &StructuredVolume<T>, roi: Box3i) -> Result<StructuredVolume<T>> {
    let mut out = StructuredVolume::new(roi.size(), src.format(), src.cell_size(), src.mapping())?;
    let bpc = src.format().bytes_per_cell();
    let (sd, od) = (src.dims(), out.dims());
    let row = od.x as usize * bpc;
    let bytes = src.bytes();
    out.bytes_mut().par_chunks_mut(row).enumerate().for_each(|(r, dst)| {
        let (y, z) = (r as i64 % od.y + roi.lower.y, r as i64 / od.y + roi.lower.z);
        let s = (roi.lower.x + sd.x * (y + sd.y * z)) as usize * bpc;
        dst.copy_from_slice(&bytes[s..s + row]);
    });
    Ok(out)
}

/// Copies the cells of `roi` into a new volume; stored bytes are preserved exactly.
pub fn crop<T: Scalar>(v: &StructuredVolume<T>, roi: Box3i) -> Result<StructuredVolume<T>> {
    if roi.is_empty() {
        return Err(VktError::EmptyRange);
    }
    if !v.bounds().contains_box(&roi) {
        return Err(VktError::RangeOutOfBounds { roi, dims: v.dims() });
    }
    v.migrate()?;
    exec::run("Crop", || copy_box(v, roi))
}

/// Logical-grid origin of [`crop_hierarchical`]'s result: `roi.lower` rounded
/// down to a multiple of the coarsest cell width, which keeps every re-anchored
/// subgrid corner aligned to its level.
pub fn hierarchical_crop_origin<T: Scalar>(h: &HierarchicalVolume<T>, roi: &Box3i) -> Vec3i {
    let w = 1i64 << h.max_level();
    roi.lower.map(|c| c.max(0).div_euclid(w) * w)
}

/// Keeps the subgrid cells fully inside `roi` (logical-grid coordinates),
/// re-anchored at [`hierarchical_crop_origin`].
pub fn crop_hierarchical<T: Scalar>(h: &HierarchicalVolume<T>, roi: Box3i) -> Result<HierarchicalVolume<T>> {
    if roi.is_empty() {
        return Err(VktError::EmptyRange);
    }
    h.migrate()?;
    let origin = hierarchical_crop_origin(h, &roi);
    exec::run("Crop", || {
        let bytes = h.bytes();
        let mut infos = Vec::new();
        let mut payload = Vec::new();
        for sg in h.subgrids() {
            let cells = sg.contained_cells(&roi);
            if cells.is_empty() {
                continue;
            }
            let w = sg.cell_width();
            for z in cells.lower.z..cells.upper.z {
                for y in cells.lower.y..cells.upper.y {
                    let s = (sg.offset + sg.local_linear(Vec3::new(cells.lower.x, y, z))) * 4;
                    let n = (cells.upper.x - cells.lower.x) as usize * 4;
                    payload.extend_from_slice(&bytes[s..s + n]);
                }
            }
            infos.push(SubgridInfo {
                level: sg.level,
                lower: sg.lower + cells.lower.map(|c| c * w) - origin,
                dims: cells.size(),
                offset: 0,
            });
        }
        if infos.is_empty() {
            return Err(VktError::EmptyRange);
        }
        HierarchicalVolume::from_parts(infos, h.mapping(), payload)
    })
}

/// Removes a slab: `roi` must span the full extent of exactly two axes.
/// The remaining parts are concatenated along the third axis.
pub fn delete<T: Scalar>(v: &StructuredVolume<T>, roi: Box3i) -> Result<StructuredVolume<T>> {
    let dims = v.dims();
    let full: Vec<bool> = (0..3).map(|a| roi.lower[a] == 0 && roi.upper[a] == dims[a]).collect();
    let spanned = full.iter().filter(|&&f| f).count();
    if spanned == 3 {
        return Err(VktError::EmptyRange);
    }
    if spanned != 2 {
        return Err(VktError::NotASlab(roi));
    }
    let axis = full.iter().position(|&f| !f).unwrap();
    let (s0, s1) = (roi.lower[axis], roi.upper[axis]);
    if s0 >= s1 {
        return Err(VktError::EmptyRange);
    }
    if s0 < 0 || s1 > dims[axis] {
        return Err(VktError::RangeOutOfBounds { roi, dims });
    }
    v.migrate()?;
    let thickness = s1 - s0;
    let mut out_dims = dims;
    out_dims[axis] -= thickness;
    exec::run("Delete", || {
        let mut out = StructuredVolume::new(out_dims, v.format(), v.cell_size(), v.mapping())?;
        let bpc = v.format().bytes_per_cell();
        let src = v.bytes();
        let src_of = |d: i64| if d < s0 { d } else { d + thickness };
        let row = out_dims.x as usize * bpc;
        out.bytes_mut().par_chunks_mut(row).enumerate().for_each(|(r, dst)| {
            let (mut y, mut z) = (r as i64 % out_dims.y, r as i64 / out_dims.y);
            match axis {
                0 => {
                    let sr = (dims.x * (y + dims.y * z)) as usize * bpc;
                    for x in 0..out_dims.x {
                        let s = sr + src_of(x) as usize * bpc;
                        let d = x as usize * bpc;
                        dst[d..d + bpc].copy_from_slice(&src[s..s + bpc]);
                    }
                    return;
                }
                1 => y = src_of(y),
                _ => z = src_of(z),
            }
            let s = (dims.x * (y + dims.y * z)) as usize * bpc;
            dst.copy_from_slice(&src[s..s + row]);
        });
        Ok(out)
    })
}

/// Replaces each cell `c` in `roi` with `f(c, mapped value)`. Cells are
/// visited exactly once, in unspecified order, possibly concurrently.
pub fn transform_range<T: Scalar>(
    v: &mut StructuredVolume<T>,
    roi: Box3i,
    f: impl Fn(Vec3i, T) -> T + Sync + Send,
) -> Result<()> {
    v.migrate()?;
    exec::run("Transform", || v.par_update_roi(roi, f));
    Ok(())
}

pub fn transform<T: Scalar>(v: &mut StructuredVolume<T>, f: impl Fn(Vec3i, T) -> T + Sync + Send) -> Result<()> {
    let roi = v.bounds();
    transform_range(v, roi, f)
}

/// Resamples onto a new structured grid covering the same extent.
///
/// Destination cell centers map uniformly into the source extent; structured
/// sources are sampled trilinearly, hierarchical ones by basis interpolation
/// in logical coordinates.
pub fn resample<'a, T: Scalar>(
    src: impl Into<VolumeRef<'a, T>>,
    dst_dims: Vec3i,
    dst_format: DataFormat,
    dst_mapping: VoxelMapping<T>,
) -> Result<StructuredVolume<T>> {
    if !dst_dims.all_positive() {
        return Err(VktError::invalid(format!("resample target dims must be >= 1, got {dst_dims:?}")));
    }
    let src = src.into();
    src.migrate()?;
    match src {
        VolumeRef::Structured(s) => {
            let extent = s.dims().cast::<T>() * s.cell_size();
            let cell_size = extent / dst_dims.cast::<T>();
            let mut out = StructuredVolume::new(dst_dims, dst_format, cell_size, dst_mapping)?;
            if dst_dims == s.dims() && dst_format == s.format() && dst_mapping == s.mapping() {
                out.bytes_mut().copy_from_slice(&s.bytes());
                return Ok(out);
            }
            let bytes = s.bytes();
            let view = CellView::new(s, &bytes);
            let ratio = s.dims().cast::<T>() / dst_dims.cast::<T>();
            let half = T::lit(0.5);
            exec::run("Resample", || {
                out.par_store_roi(Box3i::from_dims(dst_dims), |c| {
                    let u = (c.cast::<T>() + Vec3::splat(half)) * ratio - Vec3::splat(half);
                    view.sample_index(u)
                })
            });
            Ok(out)
        }
        VolumeRef::Hierarchical(h) => {
            let bytes = h.bytes();
            let sampler = BasisSampler::new(h, &bytes)?;
            let extent = h.logical_dims().cast::<T>();
            let cell_size = extent / dst_dims.cast::<T>();
            let mut out = StructuredVolume::new(dst_dims, dst_format, cell_size, dst_mapping)?;
            let half = T::lit(0.5);
            exec::run("Resample", || {
                out.par_store_roi(Box3i::from_dims(dst_dims), |c| {
                    sampler.sample((c.cast::<T>() + Vec3::splat(half)) * cell_size)
                })
            });
            Ok(out)
        }
    }
}

/// Grid dims with about `cells` cells and the aspect ratio of `extent`:
/// each axis is `max(1, round(extent * s))` with `s = cbrt(cells / volume(extent))`.
pub fn budget_dims(extent: Vec3i, cells: u64) -> Result<Vec3i> {
    if !extent.all_positive() || cells == 0 {
        return Err(VktError::invalid("cell budget and extent must be positive"));
    }
    let s = (cells as f64 / extent.volume() as f64).cbrt();
    Ok(extent.map(|l| ((l as f64 * s).round() as i64).max(1)))
}

/// Crops `h` to `roi` (logical coordinates) and resamples the result onto a
/// Float32 structured grid of roughly `cells` cells.
pub fn zoom<T: Scalar>(h: &HierarchicalVolume<T>, roi: Box3i, cells: u64) -> Result<StructuredVolume<T>> {
    let cropped = crop_hierarchical(h, roi)?;
    let dims = budget_dims(cropped.logical_dims(), cells)?;
    resample(&cropped, dims, DataFormat::Float32, cropped.mapping())
}

/// Voxel-wise binary operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithmeticOp {
    Sum,
    Diff,
    Prod,
    /// Division by zero yields 0.
    Quot,
    AbsDiff,
}

impl ArithmeticOp {
    pub fn apply<T: Scalar>(self, a: T, b: T) -> T {
        match self {
            ArithmeticOp::Sum => a + b,
            ArithmeticOp::Diff => a - b,
            ArithmeticOp::Prod => a * b,
            ArithmeticOp::Quot => {
                if b == T::zero() {
                    T::zero()
                } else {
                    a / b
                }
            }
            ArithmeticOp::AbsDiff => (a - b).abs(),
        }
    }
}

impl std::str::FromStr for ArithmeticOp {
    type Err = VktError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sum" => Ok(ArithmeticOp::Sum),
            "diff" => Ok(ArithmeticOp::Diff),
            "prod" => Ok(ArithmeticOp::Prod),
            "quot" => Ok(ArithmeticOp::Quot),
            "absdiff" => Ok(ArithmeticOp::AbsDiff),
            _ => Err(VktError::invalid(format!("unknown arithmetic op '{s}'"))),
        }
    }
}

/// `dest(c) = op(a(c), b(c))` for cells `c` in `roi`, in mapped-value space.
pub fn arithmetic_range<T: Scalar>(
    op: ArithmeticOp,
    dest: &mut StructuredVolume<T>,
    a: &StructuredVolume<T>,
    b: &StructuredVolume<T>,
    roi: Box3i,
) -> Result<()> {
    for other in [a, b] {
        if other.dims() != dest.dims() {
            return Err(VktError::DimsMismatch(dest.dims(), other.dims()));
        }
        if other.mapping() != dest.mapping() {
            return Err(VktError::invalid("arithmetic operands must share the voxel mapping"));
        }
    }
    dest.migrate()?;
    a.migrate()?;
    b.migrate()?;
    let (ab, bb) = (a.bytes(), b.bytes());
    let (av, bv) = (CellView::new(a, &ab), CellView::new(b, &bb));
    let dims = dest.dims();
    exec::run("Arithmetic", || {
        dest.par_store_roi(roi, |c| {
            let lin = (c.x + dims.x * (c.y + dims.y * c.z)) as usize;
            op.apply(av.get(lin), bv.get(lin))
        })
    });
    Ok(())
}

pub fn arithmetic<T: Scalar>(
    op: ArithmeticOp,
    dest: &mut StructuredVolume<T>,
    a: &StructuredVolume<T>,
    b: &StructuredVolume<T>,
) -> Result<()> {
    let roi = dest.bounds();
    arithmetic_range(op, dest, a, b, roi)
}
