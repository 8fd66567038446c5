//! Contrast limited adaptive histogram equalization in 3D.

use rayon::prelude::*;

use crate::error::{Result, VktError};
use crate::exec;
use crate::geom::{Vec3, Vec3i};
use crate::scalar::Scalar;
use crate::volume::{CellView, StructuredVolume};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClaheParams {
    pub brick_counts: Vec3i,
    pub num_bins: usize,
    /// Multiple of the uniform bin height; `f64::INFINITY` disables clipping.
    pub clip_limit: f64,
}

impl Default for ClaheParams {
    fn default() -> Self {
        Self { brick_counts: Vec3::splat(1), num_bins: 256, clip_limit: f64::INFINITY }
    }
}

impl ClaheParams {
    fn validate(&self, dims: Vec3i) -> Result<()> {
        if self.num_bins < 2 {
            return Err(VktError::invalid(format!("CLAHE needs at least 2 bins, got {}", self.num_bins)));
        }
        if !self.brick_counts.all_positive() {
            return Err(VktError::invalid("CLAHE brick counts must be >= 1"));
        }
        if (0..3).any(|a| self.brick_counts[a] > dims[a]) {
            return Err(VktError::invalid(format!(
                "CLAHE brick counts {:?} exceed volume dims {:?}",
                self.brick_counts, dims
            )));
        }
        if self.clip_limit.is_nan() || self.clip_limit < 1.0 {
            return Err(VktError::invalid("CLAHE clip limit must be >= 1"));
        }
        Ok(())
    }
}

/// Splits `len` cells into `n` runs; the first `len % n` runs get one extra cell.
/// Returns `(start, size)` per run.
pub fn even_split(len: i64, n: i64) -> Vec<(i64, i64)> {
    let (base, rem) = (len / n, len % n);
    let mut start = 0;
    (0..n)
        .map(|i| {
            let size = base + i64::from(i < rem);
            let run = (start, size);
            start += size;
            run
        })
        .collect()
}

/// Bin of a normalized value.
pub fn bin_of<T: Scalar>(t: T, num_bins: usize) -> usize {
    let b = (t.clamp01() * T::lit(num_bins as f64)).floor().to_usize().unwrap_or(0);
    b.min(num_bins - 1)
}

/// Clips every bin to `limit` and redistributes the excess evenly; the
/// remainder goes one count each to the leading bins. Mass is conserved.
pub fn clip_histogram(counts: &mut [u64], limit: u64) {
    let mut excess = 0u64;
    for c in counts.iter_mut() {
        if *c > limit {
            excess += *c - limit;
            *c = limit;
        }
    }
    let n = counts.len() as u64;
    let (each, rem) = (excess / n, excess % n);
    for (i, c) in counts.iter_mut().enumerate() {
        *c += each + u64::from((i as u64) < rem);
    }
}

/// Clip threshold in counts for a brick of `cells` cells.
pub fn clip_threshold(clip_limit: f64, cells: u64, num_bins: usize) -> Option<u64> {
    if clip_limit.is_infinite() {
        return None;
    }
    Some(((clip_limit * cells as f64 / num_bins as f64).round() as u64).max(1))
}

/// Cumulative mapping `cdf(bin) / cells`, monotone non-decreasing and ending at 1.
pub fn cdf_mapping<T: Scalar>(counts: &[u64]) -> Vec<T> {
    let total: u64 = counts.iter().sum();
    let mut acc = 0u64;
    counts
        .iter()
        .map(|&c| {
            acc += c;
            T::lit(acc as f64) / T::lit(total.max(1) as f64)
        })
        .collect()
}

/// Per-brick mapping tables in x-fastest brick order.
pub fn clahe_mappings<T: Scalar>(v: &StructuredVolume<T>, params: &ClaheParams) -> Result<Vec<Vec<T>>> {
    let dims = v.dims();
    params.validate(dims)?;
    v.migrate()?;
    let bc = params.brick_counts;
    let splits: Vec<Vec<(i64, i64)>> = (0..3).map(|a| even_split(dims[a], bc[a])).collect();
    let bytes = v.bytes();
    let view = CellView::new(v, &bytes);
    let mapping = v.mapping();
    let nb = params.num_bins;
    Ok(exec::run("ClaheHistograms", || {
        (0..bc.volume())
            .into_par_iter()
            .map(|b| {
                let b = b as i64;
                let (ix, iy, iz) = (b % bc.x, (b / bc.x) % bc.y, b / (bc.x * bc.y));
                let (x0, sx) = splits[0][ix as usize];
                let (y0, sy) = splits[1][iy as usize];
                let (z0, sz) = splits[2][iz as usize];
                let mut counts = vec![0u64; nb];
                for z in z0..z0 + sz {
                    for y in y0..y0 + sy {
                        for x in x0..x0 + sx {
                            counts[bin_of(mapping.normalize(view.get3(x, y, z)), nb)] += 1;
                        }
                    }
                }
                let cells = (sx * sy * sz) as u64;
                if let Some(limit) = clip_threshold(params.clip_limit, cells, nb) {
                    clip_histogram(&mut counts, limit);
                }
                cdf_mapping(&counts)
            })
            .collect()
    }))
}

/// Interpolation pair and weight of the far neighbor along one axis.
fn blend_axis<T: Scalar>(centers: &[T], p: T) -> (usize, usize, T) {
    let last = centers.len() - 1;
    if p <= centers[0] {
        return (0, 0, T::zero());
    }
    if p >= centers[last] {
        return (last, last, T::zero());
    }
    let k0 = centers.partition_point(|&c| c <= p) - 1;
    let f = (p - centers[k0]) / (centers[k0 + 1] - centers[k0]);
    (k0, k0 + 1, f)
}

/// Equalizes `v` in place with per-brick contrast-limited mappings blended trilinearly.
pub fn clahe_equalize<T: Scalar>(v: &mut StructuredVolume<T>, params: &ClaheParams) -> Result<()> {
    let maps = clahe_mappings(v, params)?;
    let dims = v.dims();
    let bc = params.brick_counts;
    let half = T::lit(0.5);
    let centers: Vec<Vec<T>> = (0..3)
        .map(|a| {
            even_split(dims[a], bc[a])
                .into_iter()
                .map(|(s, n)| T::lit(s as f64) + T::lit(n as f64) * half)
                .collect()
        })
        .collect();
    let mapping = v.mapping();
    let nb = params.num_bins;
    exec::run("ClaheBlend", || {
        v.par_update_roi(v.bounds(), |c, value| {
            let bin = bin_of(mapping.normalize(value), nb);
            let ax: Vec<(usize, usize, T)> =
                (0..3).map(|a| blend_axis(&centers[a], T::lit(c[a] as f64) + half)).collect();
            let mut t = T::zero();
            for kz in 0..2 {
                let (iz, wz) = if kz == 0 { (ax[2].0, T::one() - ax[2].2) } else { (ax[2].1, ax[2].2) };
                if wz == T::zero() {
                    continue;
                }
                for ky in 0..2 {
                    let (iy, wy) = if ky == 0 { (ax[1].0, T::one() - ax[1].2) } else { (ax[1].1, ax[1].2) };
                    if wy == T::zero() {
                        continue;
                    }
                    for kx in 0..2 {
                        let (ix, wx) = if kx == 0 { (ax[0].0, T::one() - ax[0].2) } else { (ax[0].1, ax[0].2) };
                        if wx == T::zero() {
                            continue;
                        }
                        let brick = ix + bc.x as usize * (iy + bc.y as usize * iz);
                        t += wx * wy * wz * maps[brick][bin];
                    }
                }
            }
            mapping.denormalize(t.clamp01())
        })
    });
    Ok(())
}
