//! Wall-clock comparison of serial and parallel runs on synthetic data.

use std::fmt::Write;
use std::time::Instant;

use vkt_core::ops::{self, Axis, Kernel};
use vkt_core::{
    with_execution_policy, Box3i, DataFormat, Device, ExecutionPolicy, HierarchicalVolume, Result, StructuredVolume,
    Subgrid, Vec3, VoxelMapping,
};

/// Smooth test pattern in `[0, 1]`.
pub fn synthetic_structured(n: i64) -> Result<StructuredVolume<f64>> {
    let mut v = StructuredVolume::with_dims(Vec3::splat(n), DataFormat::UInt8)?;
    let s = std::f64::consts::TAU / n as f64;
    ops::transform(&mut v, |c, _| {
        0.5 + 0.5 * ((c.x as f64 * s).sin() * (c.y as f64 * s * 2.0).cos() * (c.z as f64 * s * 0.5).sin())
    })?;
    Ok(v)
}

/// `count` subgrids on a cubic block layout, alternating between level 0 and 1.
pub fn synthetic_amr(count: usize) -> Result<HierarchicalVolume<f64>> {
    let side = (count as f64).cbrt().ceil() as i64;
    let block = 16i64;
    let subgrids = (0..count as i64)
        .map(|i| {
            let b = Vec3::new(i % side, (i / side) % side, i / (side * side));
            let level = (i % 2) as u32;
            let dims = Vec3::splat(block >> level);
            let lower = b.map(|c| c * block);
            let data = (0..dims.volume()).map(|k| ((k as f32) * 0.01 + i as f32).sin() * 0.5 + 0.5).collect();
            Subgrid { level, lower, dims, data }
        })
        .collect();
    HierarchicalVolume::new(subgrids, VoxelMapping::unit())
}

/// Fastest of `reps` runs of `op`, in milliseconds; `prep` is untimed.
fn time_min<S>(policy: ExecutionPolicy, reps: usize, prep: impl Fn() -> Result<S>, op: impl Fn(S) -> Result<()>) -> Result<f64> {
    with_execution_policy(policy, || {
        let mut best = f64::INFINITY;
        for _ in 0..reps {
            let state = prep()?;
            let t = Instant::now();
            op(state)?;
            best = best.min(t.elapsed().as_secs_f64() * 1e3);
        }
        Ok(best)
    })
}

pub fn run(size: i64, subgrids: usize, reps: usize, workers: usize, device: Device) -> Result<String> {
    let vol = synthetic_structured(size)?;
    let amr = synthetic_amr(subgrids)?;
    amr.bvh()?;
    let dims = vol.dims();
    let serial = ExecutionPolicy::serial().with_device(device);
    let parallel = ExecutionPolicy::default().with_device(device).with_workers(workers);

    let mut report = String::new();
    let _ = writeln!(report, "volume: {}x{}x{} u8", dims.x, dims.y, dims.z);
    let _ = writeln!(report, "amr_subgrids: {}", amr.subgrids().len());
    let _ = writeln!(report, "parallel_workers: {workers}");

    let mut line = |name: &str, s: f64, p: f64| {
        let _ = writeln!(report, "{name}.serial_ms: {s:.3}");
        let _ = writeln!(report, "{name}.parallel_ms: {p:.3}");
    };

    let half = dims.map(|d| (d / 2).max(1));
    let both = |f: &dyn Fn(ExecutionPolicy) -> Result<f64>| -> Result<(f64, f64)> { Ok((f(serial)?, f(parallel)?)) };

    let (s, p) = both(&|pol| {
        time_min(pol, reps, || Ok(()), |_| ops::resample(&vol, half, DataFormat::UInt8, vol.mapping()).map(drop))
    })?;
    line("resample_down2", s, p);

    let interior = Box3i::new(Vec3::splat(1), dims - Vec3::splat(1));
    let (s, p) = both(&|pol| time_min(pol, reps, || vol.try_clone(), |mut v| ops::fill_range(&mut v, interior, 1.0)))?;
    line("fill_range", s, p);

    let kernel = Kernel::gaussian(Vec3::splat(3), 1.0)?;
    let (s, p) = both(&|pol| time_min(pol, reps, || vol.try_clone(), |mut v| ops::apply_filter(&mut v, &kernel)))?;
    line("gaussian_filter", s, p);
    let gaussian = (s, p);

    for pct in [20, 40, 60, 80] {
        let extent = dims.map(|d| (d * pct / 100).max(1));
        let (s, p) = both(&|pol| {
            time_min(pol, reps, || Ok(()), |_| {
                // slide the window along the diagonal in four steps
                for k in 0..4 {
                    let lo = (dims - extent).map(|r| r * k / 3);
                    ops::crop(&vol, Box3i::new(lo, lo + extent))?;
                }
                Ok(())
            })
        })?;
        line(&format!("crop_{pct}pct"), s, p);
    }

    let axis = match vkt_core::geom::longest_axis(dims) {
        0 => Axis::X,
        1 => Axis::Y,
        _ => Axis::Z,
    };
    let (s, p) = both(&|pol| time_min(pol, reps, || vol.try_clone(), |mut v| ops::flip(&mut v, axis)))?;
    line("flip_longest_axis", s, p);

    let target = amr.logical_dims().map(|d| (d / 2).max(1));
    let (s, p) = both(&|pol| {
        time_min(pol, reps, || Ok(()), |_| ops::resample(&amr, target, DataFormat::Float32, amr.mapping()).map(drop))
    })?;
    line("amr_resample", s, p);

    let (gs, gp) = gaussian;
    let _ = writeln!(report, "gaussian_speedup: {:.3}", gs / gp);
    let _ = writeln!(report, "gaussian_parallel_le_serial: {}", gp <= gs);
    Ok(report)
}
