//! Aggregates, histograms and brick decomposition.

use rayon::prelude::*;

use crate::amr::HierarchicalVolume;
use crate::any_volume::VolumeRef;
use crate::error::{Result, VktError};
use crate::exec::{self, pairwise, REDUCE_BLOCK};
use crate::format::VoxelMapping;
use crate::geom::{Box3i, Vec3, Vec3i};
use crate::ops::clahe::bin_of;
use crate::scalar::Scalar;
use crate::volume::{CellView, StructuredVolume};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregates<T: Scalar = f64> {
    pub min: T,
    pub max: T,
    pub argmin: Vec3i,
    pub argmax: Vec3i,
    pub mean: T,
    /// Population standard deviation.
    pub stddev: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Histogram<T: Scalar = f64> {
    pub num_bins: usize,
    pub counts: Vec<u64>,
    pub range: VoxelMapping<T>,
}

impl<T: Scalar> Histogram<T> {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// A flat, ordered sequence of cells: structured roi rows or hierarchical
/// subgrid cells.
trait CellSeq<T: Scalar>: Sync {
    fn len(&self) -> usize;
    fn value(&self, i: usize) -> T;
    fn coord(&self, i: usize) -> Vec3i;
}

struct RoiSeq<'a, T: Scalar> {
    view: CellView<'a, T>,
    roi: Box3i,
    size: Vec3i,
}

impl<'a, T: Scalar> RoiSeq<'a, T> {
    fn new(view: CellView<'a, T>, roi: Box3i) -> Self {
        Self { view, roi, size: roi.size() }
    }
}

impl<T: Scalar> CellSeq<T> for RoiSeq<'_, T> {
    fn len(&self) -> usize {
        self.roi.cell_count()
    }
    fn value(&self, i: usize) -> T {
        let c = self.coord(i);
        self.view.get3(c.x, c.y, c.z)
    }
    fn coord(&self, i: usize) -> Vec3i {
        let i = i as i64;
        let s = self.size;
        self.roi.lower + Vec3::new(i % s.x, (i / s.x) % s.y, i / (s.x * s.y))
    }
}

/// Cells of a hierarchical volume fully inside a roi; subgrid order, then x-fastest.
struct AmrSeq<'a> {
    bytes: &'a [u8],
    parts: Vec<(usize, Box3i, usize)>, // subgrid, contained local box, first flat index
    subgrids: &'a [crate::amr::SubgridInfo],
    len: usize,
}

impl<'a> AmrSeq<'a> {
    fn new<T: Scalar>(h: &'a HierarchicalVolume<T>, bytes: &'a [u8], roi: &Box3i) -> Self {
        let mut parts = Vec::new();
        let mut len = 0;
        for (i, sg) in h.subgrids().iter().enumerate() {
            let b = sg.contained_cells(roi);
            if !b.is_empty() {
                parts.push((i, b, len));
                len += b.cell_count();
            }
        }
        Self { bytes, parts, subgrids: h.subgrids(), len }
    }

    fn locate(&self, i: usize) -> (usize, Vec3i) {
        let p = self.parts.partition_point(|&(_, _, first)| first <= i) - 1;
        let (sg, b, first) = self.parts[p];
        let j = (i - first) as i64;
        let s = b.size();
        (sg, b.lower + Vec3::new(j % s.x, (j / s.x) % s.y, j / (s.x * s.y)))
    }
}

impl<T: Scalar> CellSeq<T> for AmrSeq<'_> {
    fn len(&self) -> usize {
        self.len
    }
    fn value(&self, i: usize) -> T {
        let (sg, c) = self.locate(i);
        let info = &self.subgrids[sg];
        let o = (info.offset + info.local_linear(c)) * 4;
        T::lit(f32::from_le_bytes(self.bytes[o..o + 4].try_into().unwrap()) as f64)
    }
    fn coord(&self, i: usize) -> Vec3i {
        let (sg, c) = self.locate(i);
        let info = &self.subgrids[sg];
        info.lower + c.map(|v| v * info.cell_width())
    }
}

#[derive(Clone, Copy)]
struct Extremes<T> {
    min: T,
    min_at: usize,
    max: T,
    max_at: usize,
    sum: T,
}

fn blocks(n: usize) -> Vec<(usize, usize)> {
    (0..n.div_ceil(REDUCE_BLOCK)).map(|b| (b * REDUCE_BLOCK, ((b + 1) * REDUCE_BLOCK).min(n))).collect()
}

fn aggregate_seq<T: Scalar>(seq: &impl CellSeq<T>) -> Result<Aggregates<T>> {
    let n = seq.len();
    if n == 0 {
        return Err(VktError::EmptyRange);
    }
    let bl = blocks(n);
    let parts: Vec<Extremes<T>> = bl
        .par_iter()
        .map(|&(s, e)| {
            let v0 = seq.value(s);
            let mut p = Extremes { min: v0, min_at: s, max: v0, max_at: s, sum: v0 };
            for i in s + 1..e {
                let v = seq.value(i);
                if v < p.min {
                    p.min = v;
                    p.min_at = i;
                }
                if v > p.max {
                    p.max = v;
                    p.max_at = i;
                }
                p.sum += v;
            }
            p
        })
        .collect();
    let total = pairwise(&parts, &|a: &Extremes<T>, b: &Extremes<T>| Extremes {
        min: if b.min < a.min { b.min } else { a.min },
        min_at: if b.min < a.min { b.min_at } else { a.min_at },
        max: if b.max > a.max { b.max } else { a.max },
        max_at: if b.max > a.max { b.max_at } else { a.max_at },
        sum: a.sum + b.sum,
    })
    .unwrap();
    let count = T::lit(n as f64);
    let mean = (total.sum / count).max(total.min).min(total.max);
    let sq: Vec<T> = bl
        .par_iter()
        .map(|&(s, e)| {
            let mut acc = T::zero();
            for i in s..e {
                let d = seq.value(i) - mean;
                acc += d * d;
            }
            acc
        })
        .collect();
    let ss = pairwise(&sq, &|a: &T, b: &T| *a + *b).unwrap();
    Ok(Aggregates {
        min: total.min,
        max: total.max,
        argmin: seq.coord(total.min_at),
        argmax: seq.coord(total.max_at),
        mean,
        stddev: (ss / count).sqrt(),
    })
}

fn histogram_seq<T: Scalar>(seq: &impl CellSeq<T>, num_bins: usize, range: VoxelMapping<T>) -> Result<Histogram<T>> {
    if num_bins == 0 {
        return Err(VktError::invalid("histogram needs at least one bin"));
    }
    if seq.len() == 0 {
        return Err(VktError::EmptyRange);
    }
    let counts = blocks(seq.len())
        .into_par_iter()
        .fold(
            || vec![0u64; num_bins],
            |mut h, (s, e)| {
                for i in s..e {
                    h[bin_of(range.normalize(seq.value(i)), num_bins)] += 1;
                }
                h
            },
        )
        .reduce(
            || vec![0u64; num_bins],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(Histogram { num_bins, counts, range })
}

/// Min, max (first occurrence in scan order), mean and population stddev of
/// the mapped values in `roi`. Hierarchical volumes interpret `roi` in logical
/// coordinates, count each fully contained cell once and report its logical
/// lower corner as argmin/argmax.
pub fn compute_aggregates_range<'a, T: Scalar>(v: impl Into<VolumeRef<'a, T>>, roi: Box3i) -> Result<Aggregates<T>> {
    let v = v.into();
    v.migrate()?;
    match v {
        VolumeRef::Structured(s) => {
            let roi = roi.intersect(&s.bounds());
            let bytes = s.bytes();
            let seq = RoiSeq::new(CellView::new(s, &bytes), roi);
            exec::run("ComputeAggregates", || aggregate_seq(&seq))
        }
        VolumeRef::Hierarchical(h) => {
            let bytes = h.bytes();
            let seq = AmrSeq::new(h, &bytes, &roi);
            exec::run("ComputeAggregates", || aggregate_seq::<T>(&seq))
        }
    }
}

pub fn compute_aggregates<'a, T: Scalar>(v: impl Into<VolumeRef<'a, T>>) -> Result<Aggregates<T>> {
    let v = v.into();
    let roi = whole(&v);
    compute_aggregates_range(v, roi)
}

fn whole<T: Scalar>(v: &VolumeRef<'_, T>) -> Box3i {
    match v {
        VolumeRef::Structured(s) => s.bounds(),
        VolumeRef::Hierarchical(h) => h.logical_bounds(),
    }
}

/// Histogram of normalized values over `num_bins` equal bins of `range`
/// (the volume's mapping when `None`).
pub fn compute_histogram_range<'a, T: Scalar>(
    v: impl Into<VolumeRef<'a, T>>,
    roi: Box3i,
    num_bins: usize,
    range: Option<VoxelMapping<T>>,
) -> Result<Histogram<T>> {
    let v = v.into();
    v.migrate()?;
    match v {
        VolumeRef::Structured(s) => {
            let roi = roi.intersect(&s.bounds());
            let bytes = s.bytes();
            let seq = RoiSeq::new(CellView::new(s, &bytes), roi);
            let range = range.unwrap_or(s.mapping());
            exec::run("ComputeHistogram", || histogram_seq(&seq, num_bins, range))
        }
        VolumeRef::Hierarchical(h) => {
            let bytes = h.bytes();
            let seq = AmrSeq::new(h, &bytes, &roi);
            let range = range.unwrap_or(h.mapping());
            exec::run("ComputeHistogram", || histogram_seq::<T>(&seq, num_bins, range))
        }
    }
}

pub fn compute_histogram<'a, T: Scalar>(
    v: impl Into<VolumeRef<'a, T>>,
    num_bins: usize,
    range: Option<VoxelMapping<T>>,
) -> Result<Histogram<T>> {
    let v = v.into();
    let roi = whole(&v);
    compute_histogram_range(v, roi, num_bins, range)
}

/// One piece of a [`brick_decompose`] result.
#[derive(Debug)]
pub struct Brick<T: Scalar = f64> {
    /// Lower corner of the brick's core in source coordinates.
    pub offset: Vec3i,
    pub core_dims: Vec3i,
    pub volume: StructuredVolume<T>,
}

/// Tiles `v` into bricks of `brick_size` (the last ones per axis may be
/// smaller), each padded with clamp-to-edge ghost cells.
pub fn brick_decompose<T: Scalar>(
    v: &StructuredVolume<T>,
    brick_size: Vec3i,
    halo_low: Vec3i,
    halo_high: Vec3i,
) -> Result<Vec<Brick<T>>> {
    if !brick_size.all_positive() {
        return Err(VktError::invalid(format!("brick size must be >= 1, got {brick_size:?}")));
    }
    if halo_low.x < 0 || halo_low.y < 0 || halo_low.z < 0 || halo_high.x < 0 || halo_high.y < 0 || halo_high.z < 0 {
        return Err(VktError::invalid("halo widths must be >= 0"));
    }
    v.migrate()?;
    let dims = v.dims();
    let counts = dims.zip(brick_size, |d, b| (d + b - 1) / b);
    let bpc = v.format().bytes_per_cell();
    let src = v.bytes();
    exec::run("BrickDecompose", || {
        let pieces: Vec<(Vec3i, Vec3i, Vec3i, Vec<u8>)> = (0..counts.volume())
            .into_par_iter()
            .map(|b| {
                let b = b as i64;
                let bi = Vec3::new(b % counts.x, (b / counts.x) % counts.y, b / (counts.x * counts.y));
                let offset = bi * brick_size;
                let core = (dims - offset).zip(brick_size, |r, s| r.min(s));
                let bd = core + halo_low + halo_high;
                let mut out = Vec::with_capacity(bd.volume() * bpc);
                for z in 0..bd.z {
                    let sz = (offset.z + z - halo_low.z).clamp(0, dims.z - 1);
                    for y in 0..bd.y {
                        let sy = (offset.y + y - halo_low.y).clamp(0, dims.y - 1);
                        for x in 0..bd.x {
                            let sx = (offset.x + x - halo_low.x).clamp(0, dims.x - 1);
                            let s = (sx + dims.x * (sy + dims.y * sz)) as usize * bpc;
                            out.extend_from_slice(&src[s..s + bpc]);
                        }
                    }
                }
                (offset, core, bd, out)
            })
            .collect();
        pieces
            .into_iter()
            .map(|(offset, core_dims, bd, bytes)| {
                let volume = StructuredVolume::from_bytes(bd, v.format(), v.cell_size(), v.mapping(), bytes)?;
                Ok(Brick { offset, core_dims, volume })
            })
            .collect()
    })
}
