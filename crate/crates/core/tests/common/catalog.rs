//! The whole operation catalog run once, with every output captured as bytes.

use super::*;
use vkt_core::ops::{self, ArithmeticOp, Axis, ClaheParams, Kernel};
use vkt_core::render::{self, Camera, RenderAlgo, RenderState};
use vkt_core::{io, Box3i, DataFormat, Device, ExecutionPolicy, LookupTable, StructuredVolume, Vec3};

pub fn policies() -> Vec<ExecutionPolicy> {
    vec![
        ExecutionPolicy::serial(),
        ExecutionPolicy::default().with_workers(8),
        ExecutionPolicy::serial().with_device(Device::EmulatedDevice),
        ExecutionPolicy::default().with_workers(8).with_device(Device::EmulatedDevice),
    ]
}

pub fn vol(seed: u64, format: DataFormat) -> StructuredVolume<f64> {
    random_structured(&mut rng(seed), Vec3::new(23, 17, 19), format)
}

pub fn image_bits(img: &render::ImageRGBA) -> Vec<u8> {
    img.pixels.iter().flatten().flat_map(|c| c.to_le_bytes()).collect()
}

/// Runs the whole operation catalog and returns every output as bytes.
pub fn outputs() -> Vec<(&'static str, Vec<u8>)> {
    let mut out = Vec::new();
    let roi = Box3i::from_coords([2, 3, 1], [19, 15, 17]);
    for format in [DataFormat::UInt8, DataFormat::UInt16, DataFormat::Float32] {
        let mut v = vol(1, format);
        ops::fill_range(&mut v, roi, 0.3).unwrap();
        out.push(("fill", v.bytes().to_vec()));
        out.push(("crop", ops::crop(&vol(1, format), roi).unwrap().bytes().to_vec()));
        let slab = Box3i::from_coords([0, 4, 0], [23, 9, 19]);
        out.push(("delete", ops::delete(&vol(1, format), slab).unwrap().bytes().to_vec()));
        let mut v = vol(1, format);
        ops::transform(&mut v, |c, x| x * 0.5 + c.x as f64 * 0.01).unwrap();
        out.push(("transform", v.bytes().to_vec()));
        let r = ops::resample(&vol(1, format), Vec3::new(11, 31, 7), format, vol(1, format).mapping()).unwrap();
        out.push(("resample", r.bytes().to_vec()));
        let a = vol(1, format);
        let mut b = vol(2, format);
        b.set_mapping(a.mapping()).unwrap();
        let mut d = a.new_like().unwrap();
        ops::arithmetic(ArithmeticOp::Quot, &mut d, &a, &b).unwrap();
        out.push(("arith", d.bytes().to_vec()));
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let mut v = vol(1, format);
            ops::flip(&mut v, axis).unwrap();
            out.push(("flip", v.bytes().to_vec()));
        }
        let mut v = vol(1, format);
        ops::rotate_range(&mut v, roi, Vec3::new(0.6, 0.0, 0.8), 0.7, Vec3::splat(9.0)).unwrap();
        out.push(("rotate", v.bytes().to_vec()));
        let mut v = vol(1, format);
        ops::scale_range(&mut v, roi, Vec3::new(1.5, 0.7, 2.0), Vec3::splat(9.0)).unwrap();
        out.push(("scale", v.bytes().to_vec()));
        let mut v = vol(1, format);
        ops::apply_filter(&mut v, &Kernel::gaussian(Vec3::new(5, 3, 3), 1.3).unwrap()).unwrap();
        out.push(("filter_separable", v.bytes().to_vec()));
        let mut v = vol(1, format);
        let w: Vec<f64> = (0..27).map(|i| ((i * 7) % 5) as f64 - 2.0).collect();
        ops::apply_filter(&mut v, &Kernel::new(Vec3::splat(3), w).unwrap()).unwrap();
        out.push(("filter_dense", v.bytes().to_vec()));
        let mut v = vol(1, format);
        let p = ClaheParams { brick_counts: Vec3::new(3, 2, 2), num_bins: 64, clip_limit: 2.5 };
        ops::clahe_equalize(&mut v, &p).unwrap();
        out.push(("clahe", v.bytes().to_vec()));
        let a = ops::compute_aggregates_range(&vol(1, format), roi).unwrap();
        out.push(("aggregates", format!("{:?}", (a.min.to_bits(), a.max.to_bits(), a.argmin, a.argmax, a.mean.to_bits(), a.stddev.to_bits())).into_bytes()));
        let h = ops::compute_histogram_range(&vol(1, format), roi, 37, None).unwrap();
        out.push(("histogram", format!("{:?}", h.counts).into_bytes()));
        for b in ops::brick_decompose(&vol(1, format), Vec3::new(5, 4, 6), Vec3::splat(1), Vec3::new(0, 2, 1)).unwrap() {
            out.push(("decompose", b.volume.bytes().to_vec()));
        }
        out.push(("io", io::to_bytes(&vol(1, format)).unwrap()));
    }
    let big = random_structured(&mut rng(9), Vec3::splat(64), DataFormat::UInt8);
    let a = ops::compute_aggregates(&big).unwrap();
    out.push(("aggregates_multi_block", format!("{:?}", (a.mean.to_bits(), a.stddev.to_bits())).into_bytes()));

    let h = random_amr(&mut rng(3), 32);
    out.push(("amr_resample", ops::resample(&h, Vec3::new(13, 9, 11), DataFormat::Float32, h.mapping()).unwrap().bytes().to_vec()));
    let hr = Box3i::from_coords([1, 0, 2], [20, 20, 20]);
    if let Ok(c) = ops::crop_hierarchical(&h, hr) {
        out.push(("amr_crop", io::to_bytes(&c).unwrap()));
    }
    let a = ops::compute_aggregates(&h).unwrap();
    out.push(("amr_aggregates", format!("{:?}", (a.mean.to_bits(), a.stddev.to_bits(), a.argmin, a.argmax)).into_bytes()));
    let mut hm = h.try_clone().unwrap();
    ops::fill_range(&mut hm, hr, 0.25).unwrap();
    out.push(("amr_fill", hm.bytes().to_vec()));

    let lut = LookupTable::from_entries(&[[0.0, 0.2, 0.9, 0.0], [1.0, 0.8, 0.1, 0.6], [0.5, 1.0, 0.5, 1.0]]).unwrap();
    let v = vol(1, DataFormat::UInt8);
    let cam = Camera::new(Vec3::new(30.0, 20.0, 45.0), Vec3::new(11.5, 8.5, 9.5), Vec3::new(0.0, 1.0, 0.0), 40.0, 24, 18).unwrap();
    for algo in [RenderAlgo::RayMarching, RenderAlgo::ImplicitIso, RenderAlgo::MultiScattering] {
        let state = RenderState {
            algo,
            lut: lut.handle(),
            dt_rate: 0.5,
            iso_values: vec![0.4, 0.6],
            samples_per_pixel: 4,
            density_scale: 0.3,
            seed: 77,
            ..RenderState::default()
        };
        out.push(("render", image_bits(&render::render(&v, &cam, &state).unwrap())));
        out.push(("render_amr", image_bits(&render::render(&h, &cam, &state).unwrap())));
    }
    out
}
