//! Fixtures and brute-force reference implementations shared by the
//! integration tests. Oracles deliberately avoid the library's samplers and
//! reductions: they decode bytes themselves and loop in the plainest order.
#![allow(dead_code)]

pub mod catalog;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vkt_core::{DataFormat, HierarchicalVolume, StructuredVolume, Subgrid, Vec3, Vec3i, VoxelMapping};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_dims(r: &mut ChaCha8Rng, max: i64) -> Vec3i {
    Vec3::new(r.random_range(1..=max), r.random_range(1..=max), r.random_range(1..=max))
}

pub fn random_format(r: &mut ChaCha8Rng) -> DataFormat {
    [DataFormat::UInt8, DataFormat::UInt16, DataFormat::Float32][r.random_range(0..3)]
}

/// Random stored bytes (finite floats in `[-2, 3)` for Float32) and a random mapping.
/// Mapping bounds are f32-representable so files round-trip them exactly.
pub fn random_structured(r: &mut ChaCha8Rng, dims: Vec3i, format: DataFormat) -> StructuredVolume<f64> {
    let lo = r.random_range(-2.0f32..1.0) as f64;
    let hi = (lo as f32 + r.random_range(0.5f32..3.0)) as f64;
    let n = dims.volume();
    let bytes: Vec<u8> = match format {
        DataFormat::UInt8 => (0..n).map(|_| r.random::<u8>()).collect(),
        DataFormat::UInt16 => (0..n).flat_map(|_| r.random::<u16>().to_le_bytes()).collect(),
        DataFormat::Float32 => (0..n).flat_map(|_| r.random_range(-2.0f32..3.0).to_le_bytes()).collect(),
    };
    StructuredVolume::from_bytes(dims, format, Vec3::splat(1.0), VoxelMapping::new(lo, hi).unwrap(), bytes).unwrap()
}

/// Up to `max` subgrids of levels 0..=2 with aligned, possibly overlapping corners.
pub fn random_amr(r: &mut ChaCha8Rng, max: usize) -> HierarchicalVolume<f64> {
    let n = r.random_range(1..=max);
    let subgrids = (0..n)
        .map(|_| {
            let level = r.random_range(0..=2u32);
            let w = 1i64 << level;
            let lower = Vec3::new(r.random_range(0..6), r.random_range(0..6), r.random_range(0..6)).map(|c| c * w);
            let dims = Vec3::new(r.random_range(1..=5), r.random_range(1..=5), r.random_range(1..=5));
            let data = (0..dims.volume()).map(|_| r.random_range(-1.0f32..2.0)).collect();
            Subgrid { level, lower, dims, data }
        })
        .collect();
    HierarchicalVolume::new(subgrids, VoxelMapping::new(-1.0, 2.0).unwrap()).unwrap()
}

/// Mapped value of cell `i`, decoded from raw bytes.
pub fn decode(v: &StructuredVolume<f64>, i: usize) -> f64 {
    let b = v.bytes();
    let m = v.mapping();
    match v.format() {
        DataFormat::UInt8 => m.lo + b[i] as f64 / 255.0 * (m.hi - m.lo),
        DataFormat::UInt16 => m.lo + u16::from_le_bytes([b[2 * i], b[2 * i + 1]]) as f64 / 65535.0 * (m.hi - m.lo),
        DataFormat::Float32 => f32::from_le_bytes(b[4 * i..4 * i + 4].try_into().unwrap()) as f64,
    }
}

pub fn all_values(v: &StructuredVolume<f64>) -> Vec<f64> {
    (0..v.cell_count()).map(|i| decode(v, i)).collect()
}

pub fn index(dims: Vec3i, x: i64, y: i64, z: i64) -> usize {
    (x + dims.x * (y + dims.y * z)) as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefAggregates {
    pub min: f64,
    pub max: f64,
    pub argmin: Vec3i,
    pub argmax: Vec3i,
    pub mean: f64,
    pub stddev: f64,
}

/// Scalar-loop aggregates over `(value, coordinate)` pairs in scan order.
pub fn ref_aggregates(cells: &[(f64, Vec3i)]) -> RefAggregates {
    let (mut min, mut argmin) = cells[0];
    let (mut max, mut argmax) = cells[0];
    let mut sum = 0.0;
    for &(v, c) in cells {
        if v < min {
            min = v;
            argmin = c;
        }
        if v > max {
            max = v;
            argmax = c;
        }
        sum += v;
    }
    let mean = sum / cells.len() as f64;
    let var = cells.iter().map(|&(v, _)| (v - mean) * (v - mean)).sum::<f64>() / cells.len() as f64;
    RefAggregates { min, max, argmin, argmax, mean, stddev: var.sqrt() }
}

pub fn structured_cells(v: &StructuredVolume<f64>, lo: Vec3i, hi: Vec3i) -> Vec<(f64, Vec3i)> {
    let d = v.dims();
    let mut out = Vec::new();
    for z in lo.z..hi.z {
        for y in lo.y..hi.y {
            for x in lo.x..hi.x {
                out.push((decode(v, index(d, x, y, z)), Vec3::new(x, y, z)));
            }
        }
    }
    out
}

/// Hierarchical cells with logical boxes inside `[lo, hi)`: subgrid order, then x-fastest.
pub fn amr_cells(h: &HierarchicalVolume<f64>, lo: Vec3i, hi: Vec3i) -> Vec<(f64, Vec3i)> {
    let mut out = Vec::new();
    for (i, sg) in h.subgrids().iter().enumerate() {
        let vals = h.subgrid_values(i);
        let w = 1i64 << sg.level;
        for z in 0..sg.dims.z {
            for y in 0..sg.dims.y {
                for x in 0..sg.dims.x {
                    let c0 = sg.lower + Vec3::new(x, y, z).map(|c| c * w);
                    let c1 = c0 + Vec3::splat(w);
                    if (0..3).all(|a| c0[a] >= lo[a] && c1[a] <= hi[a]) {
                        out.push((vals[index(sg.dims, x, y, z)] as f64, c0));
                    }
                }
            }
        }
    }
    out
}

pub fn ref_histogram(values: &[f64], bins: usize, lo: f64, hi: f64) -> Vec<u64> {
    let mut h = vec![0u64; bins];
    for &v in values {
        let t = ((v - lo) / (hi - lo)).clamp(0.0, 1.0);
        let b = ((t * bins as f64).floor() as usize).min(bins - 1);
        h[b] += 1;
    }
    h
}

/// Direct correlation with clamp-to-edge.
pub fn ref_filter(values: &[f64], dims: Vec3i, kdims: Vec3i, weights: &[f64]) -> Vec<f64> {
    let r = kdims.map(|k| k / 2);
    let mut out = vec![0.0; values.len()];
    for z in 0..dims.z {
        for y in 0..dims.y {
            for x in 0..dims.x {
                let mut acc = 0.0;
                for kz in 0..kdims.z {
                    for ky in 0..kdims.y {
                        for kx in 0..kdims.x {
                            let sx = (x + kx - r.x).clamp(0, dims.x - 1);
                            let sy = (y + ky - r.y).clamp(0, dims.y - 1);
                            let sz = (z + kz - r.z).clamp(0, dims.z - 1);
                            acc += weights[index(kdims, kx, ky, kz)] * values[index(dims, sx, sy, sz)];
                        }
                    }
                }
                out[index(dims, x, y, z)] = acc;
            }
        }
    }
    out
}

/// Normalized hat-basis sum over every cell of every subgrid.
pub fn ref_sample_basis(h: &HierarchicalVolume<f64>, p: Vec3<f64>) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for (i, sg) in h.subgrids().iter().enumerate() {
        let vals = h.subgrid_values(i);
        let w = (1i64 << sg.level) as f64;
        for z in 0..sg.dims.z {
            for y in 0..sg.dims.y {
                for x in 0..sg.dims.x {
                    let c = [x, y, z];
                    let mut hat = 1.0;
                    for a in 0..3 {
                        let center = sg.lower[a] as f64 + (c[a] as f64 + 0.5) * w;
                        hat *= (1.0 - (p[a] - center).abs() / w).max(0.0);
                    }
                    if hat > 0.0 {
                        num += hat * vals[index(sg.dims, x, y, z)] as f64;
                        den += hat;
                    }
                }
            }
        }
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// Global histogram equalization of an 8-bit volume with `[lo, hi]` mapping
/// and 256 bins: each byte becomes `round(255 * cdf(byte) / N)`.
pub fn ref_global_equalization(bytes: &[u8]) -> Vec<u8> {
    let mut counts = [0u64; 256];
    for &b in bytes {
        counts[b as usize] += 1;
    }
    let mut cdf = [0u64; 256];
    let mut acc = 0;
    for i in 0..256 {
        acc += counts[i];
        cdf[i] = acc;
    }
    let n = bytes.len() as f64;
    bytes.iter().map(|&b| (255.0 * (cdf[b as usize] as f64 / n)).round() as u8).collect()
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300) || a == b
}
