//! Library results against brute-force reference implementations.

mod common;

use common::*;
use rand::Rng;
use vkt_core::ops::{self, ArithmeticOp, ClaheParams, Kernel};
use vkt_core::{Box3i, DataFormat, StructuredVolume, Vec3, VoxelMapping};

#[test]
fn aggregates_match_scalar_loop() {
    let mut r = rng(1);
    for _ in 0..40 {
        let dims = random_dims(&mut r, 32);
        let format = random_format(&mut r);
        let v = random_structured(&mut r, dims, format);
        let lo = Vec3::new(r.random_range(0..dims.x), r.random_range(0..dims.y), r.random_range(0..dims.z));
        let hi = Vec3::new(
            r.random_range(lo.x + 1..=dims.x),
            r.random_range(lo.y + 1..=dims.y),
            r.random_range(lo.z + 1..=dims.z),
        );
        let got = ops::compute_aggregates_range(&v, Box3i::new(lo, hi)).unwrap();
        let want = ref_aggregates(&structured_cells(&v, lo, hi));
        assert_eq!((got.min, got.max, got.argmin, got.argmax), (want.min, want.max, want.argmin, want.argmax));
        assert!(rel_close(got.mean, want.mean, 1e-6), "{} vs {}", got.mean, want.mean);
        assert!(rel_close(got.stddev, want.stddev, 1e-6) || (got.stddev - want.stddev).abs() < 1e-12);
    }
}

#[test]
fn hierarchical_aggregates_match_scalar_loop() {
    let mut r = rng(2);
    for _ in 0..40 {
        let h = random_amr(&mut r, 32);
        let d = h.logical_dims();
        let lo = Vec3::new(r.random_range(0..d.x), r.random_range(0..d.y), r.random_range(0..d.z));
        let hi = d;
        let cells = amr_cells(&h, lo, hi);
        let got = ops::compute_aggregates_range(&h, Box3i::new(lo, hi));
        if cells.is_empty() {
            assert!(got.is_err());
            continue;
        }
        let got = got.unwrap();
        let want = ref_aggregates(&cells);
        assert_eq!((got.min, got.max, got.argmin, got.argmax), (want.min, want.max, want.argmin, want.argmax));
        assert!(rel_close(got.mean, want.mean, 1e-6));
        assert!(rel_close(got.stddev, want.stddev, 1e-6) || (got.stddev - want.stddev).abs() < 1e-12);
    }
}

#[test]
fn histograms_match_scalar_loop() {
    let mut r = rng(3);
    for _ in 0..40 {
        let dims = random_dims(&mut r, 32);
        let format = random_format(&mut r);
        let v = random_structured(&mut r, dims, format);
        let bins = r.random_range(1..300);
        let got = ops::compute_histogram(&v, bins, None).unwrap();
        let m = v.mapping();
        assert_eq!(got.counts, ref_histogram(&all_values(&v), bins, m.lo, m.hi));
    }
    for _ in 0..20 {
        let h = random_amr(&mut r, 32);
        let cells: Vec<f64> = amr_cells(&h, Vec3::splat(0), h.logical_dims()).iter().map(|c| c.0).collect();
        let got = ops::compute_histogram(&h, 17, None).unwrap();
        assert_eq!(got.counts, ref_histogram(&cells, 17, -1.0, 2.0));
    }
}

#[test]
fn uint8_ramp_fills_bins_evenly() {
    let mut v = StructuredVolume::<f64>::with_dims(Vec3::new(16, 16, 4), DataFormat::UInt8).unwrap();
    for (i, b) in v.bytes_mut().iter_mut().enumerate() {
        *b = (i % 256) as u8;
    }
    let h = ops::compute_histogram(&v, 256, None).unwrap();
    assert!(h.counts.iter().all(|&c| c == 4));
}

#[test]
fn filters_match_direct_convolution() {
    let mut r = rng(4);
    for _ in 0..12 {
        let dims = random_dims(&mut r, 20);
        let mut v = random_structured(&mut r, dims, DataFormat::Float32);
        let input = all_values(&v);
        let kd = Vec3::new(2 * r.random_range(0..3) + 1, 2 * r.random_range(0..3) + 1, 2 * r.random_range(0..3) + 1);
        let k = match r.random_range(0..3) {
            0 => Kernel::gaussian(kd, r.random_range(0.5..2.0)).unwrap(),
            1 => Kernel::box_filter(kd).unwrap(),
            _ => Kernel::new(kd, (0..kd.volume()).map(|_| r.random_range(-1.0..1.0)).collect()).unwrap(),
        };
        let want = ref_filter(&input, dims, kd, k.weights());
        ops::apply_filter(&mut v, &k).unwrap();
        for (g, w) in all_values(&v).iter().zip(&want) {
            assert!((g - w).abs() <= 1e-5, "{g} vs {w}");
        }
    }
}

#[test]
fn gaussian_on_random_8_cubed() {
    let mut r = rng(5);
    let mut v = random_structured(&mut r, Vec3::splat(8), DataFormat::Float32);
    let input = all_values(&v);
    let k = Kernel::gaussian(Vec3::splat(3), 1.0).unwrap();
    // independent normalized Gaussian weights
    let mut w = Vec::new();
    for z in -1i32..=1 {
        for y in -1i32..=1 {
            for x in -1i32..=1 {
                w.push((-((x * x + y * y + z * z) as f64) / 2.0).exp());
            }
        }
    }
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    let want = ref_filter(&input, Vec3::splat(8), Vec3::splat(3), &w);
    ops::apply_filter(&mut v, &k).unwrap();
    for (g, w) in all_values(&v).iter().zip(&want) {
        assert!((g - w).abs() <= 1e-5);
    }
}

#[test]
fn arithmetic_matches_scalar_loop() {
    let mut r = rng(6);
    let opsl = [ArithmeticOp::Sum, ArithmeticOp::Diff, ArithmeticOp::Prod, ArithmeticOp::Quot, ArithmeticOp::AbsDiff];
    for _ in 0..25 {
        let dims = random_dims(&mut r, 16);
        let format = random_format(&mut r);
        let a = random_structured(&mut r, dims, format);
        let mut b = random_structured(&mut r, dims, format);
        b.set_mapping(a.mapping()).unwrap();
        let op = opsl[r.random_range(0..5)];
        let mut dest = a.new_like().unwrap();
        ops::arithmetic(op, &mut dest, &a, &b).unwrap();
        let mut want = a.new_like().unwrap();
        for i in 0..a.cell_count() {
            let (x, y) = (decode(&a, i), decode(&b, i));
            let v = match op {
                ArithmeticOp::Sum => x + y,
                ArithmeticOp::Diff => x - y,
                ArithmeticOp::Prod => x * y,
                ArithmeticOp::Quot => {
                    if y == 0.0 {
                        0.0
                    } else {
                        x / y
                    }
                }
                ArithmeticOp::AbsDiff => (x - y).abs(),
            };
            let d = dims;
            let c = Vec3::new(i as i64 % d.x, (i as i64 / d.x) % d.y, i as i64 / (d.x * d.y));
            want.set_value(c, v).unwrap();
        }
        assert_eq!(&*dest.bytes(), &*want.bytes(), "{op:?} {format:?}");
    }
}

#[test]
fn sample_basis_matches_brute_force() {
    let mut r = rng(7);
    for _ in 0..30 {
        let h = random_amr(&mut r, 32);
        let ext = h.logical_dims().cast::<f64>();
        for _ in 0..200 {
            let p = Vec3::new(
                r.random_range(-1.0..ext.x + 1.0),
                r.random_range(-1.0..ext.y + 1.0),
                r.random_range(-1.0..ext.z + 1.0),
            );
            let got = h.sample_basis(p);
            let want = ref_sample_basis(&h, p);
            assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0), "{p:?}: {got} vs {want}");
            assert_eq!(got.to_bits(), h.sample_basis_linear_scan(p).to_bits());
        }
    }
}

#[test]
fn sample_basis_reproduces_cell_values_without_overlap() {
    let mut r = rng(8);
    let data: Vec<f32> = (0..27).map(|_| r.random()).collect();
    let h = vkt_core::HierarchicalVolume::<f64>::new(
        vec![vkt_core::Subgrid { level: 1, lower: Vec3::splat(2), dims: Vec3::splat(3), data: data.clone() }],
        VoxelMapping::unit(),
    )
    .unwrap();
    for z in 0..3 {
        for y in 0..3 {
            for x in 0..3 {
                let p = Vec3::new(x, y, z).map(|c| 2.0 + 2.0 * c as f64 + 1.0);
                assert_eq!(h.sample_basis(p), data[index(Vec3::splat(3), x, y, z)] as f64);
            }
        }
    }
}

#[test]
fn clahe_single_brick_is_global_equalization() {
    let mut r = rng(9);
    let bytes: Vec<u8> = (0..32 * 32 * 32).map(|_| r.random()).collect();
    let mut v = StructuredVolume::<f64>::from_bytes(
        Vec3::splat(32),
        DataFormat::UInt8,
        Vec3::splat(1.0),
        VoxelMapping::unit(),
        bytes.clone(),
    )
    .unwrap();
    ops::clahe_equalize(&mut v, &ClaheParams::default()).unwrap();
    assert_eq!(&*v.bytes(), &ref_global_equalization(&bytes)[..]);
}

#[test]
fn clahe_mappings_monotone_on_sweeps() {
    let mut r = rng(10);
    for _ in 0..20 {
        let dims = random_dims(&mut r, 24).map(|d| d.max(2));
        let format = random_format(&mut r);
        let v = random_structured(&mut r, dims, format);
        let params = ClaheParams {
            brick_counts: Vec3::new(r.random_range(1..=dims.x.min(4)), r.random_range(1..=dims.y.min(4)), r.random_range(1..=dims.z.min(4))),
            num_bins: r.random_range(2..300),
            clip_limit: if r.random_bool(0.3) { f64::INFINITY } else { r.random_range(1.0..8.0) },
        };
        for m in ops::clahe::clahe_mappings(&v, &params).unwrap() {
            assert!(m.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(*m.last().unwrap(), 1.0);
        }
        let mut out = v.try_clone().unwrap();
        ops::clahe_equalize(&mut out, &params).unwrap();
        let mp = out.mapping();
        assert!(all_values(&out).iter().all(|&x| x >= mp.lo - 1e-6 && x <= mp.hi + 1e-6));
    }
}

#[test]
fn fill_range_interior_and_shell_counts() {
    let mut v = StructuredVolume::<f64>::with_dims(Vec3::splat(64), DataFormat::UInt8).unwrap();
    ops::fill_range(&mut v, Box3i::from_coords([1, 1, 1], [63, 63, 63]), 1.0).unwrap();
    let vals = all_values(&v);
    assert_eq!(vals.iter().filter(|&&x| x == 1.0).count(), 238_328);
    assert_eq!(vals.iter().filter(|&&x| x == 0.0).count(), 23_816);
}

#[test]
fn aggregates_of_constant_half_u8() {
    let mut v = StructuredVolume::<f64>::with_dims(Vec3::splat(8), DataFormat::UInt8).unwrap();
    ops::fill(&mut v, 0.5).unwrap();
    let a = ops::compute_aggregates(&v).unwrap();
    assert!((a.mean - 0.501961).abs() < 1e-6);
    assert_eq!((a.min, a.max, a.stddev), (a.mean, a.mean, 0.0));
}

#[test]
fn scale_probes_match_inverse_mapping() {
    // centered 4^3 box of ones in a 16^3 volume, doubled about the center
    let mut v = StructuredVolume::<f64>::with_dims(Vec3::splat(16), DataFormat::Float32).unwrap();
    ops::fill_range(&mut v, Box3i::from_coords([6, 6, 6], [10, 10, 10]), 1.0).unwrap();
    let src = all_values(&v);
    ops::scale(&mut v, Vec3::splat(2.0), Vec3::splat(8.0)).unwrap();
    // hand-computed trilinear value at the inverse-mapped position
    let tri = |p: [f64; 3]| {
        let u: Vec<f64> = p.iter().map(|c| (c - 0.5).clamp(0.0, 15.0)).collect();
        let mut acc = 0.0;
        for corner in 0..8 {
            let mut w = 1.0;
            let mut idx = [0i64; 3];
            for a in 0..3 {
                let f = u[a] - u[a].floor();
                let bit = (corner >> a) & 1;
                idx[a] = (u[a].floor() as i64 + bit as i64).min(15);
                w *= if bit == 1 { f } else { 1.0 - f };
            }
            acc += w * src[index(Vec3::splat(16), idx[0], idx[1], idx[2])];
        }
        acc
    };
    let probes = [
        [8, 8, 8], [4, 8, 8], [3, 8, 8], [11, 8, 8], [12, 8, 8], [4, 4, 4], [11, 11, 11], [2, 2, 2],
        [13, 13, 13], [5, 10, 7], [8, 3, 8], [8, 12, 8], [0, 0, 0], [15, 15, 15], [6, 9, 12], [10, 5, 4],
    ];
    for p in probes {
        let c = Vec3::new(p[0], p[1], p[2]);
        let q = c.cast::<f64>().map(|x| (x + 0.5 - 8.0) / 2.0 + 8.0);
        let want = tri([q.x, q.y, q.z]);
        assert!((v.get_value(c).unwrap() - want).abs() < 1e-6, "{p:?}");
    }
    // the box now spans cells 4..12 along each axis
    assert_eq!(v.get_value(Vec3::splat(8)).unwrap(), 1.0);
    assert_eq!(v.get_value(Vec3::new(2, 8, 8)).unwrap(), 0.0);
}

#[test]
fn decompose_ghosts_match_stamp() {
    let d = Vec3::new(6, 5, 4);
    let mut v = StructuredVolume::<f64>::with_dims(d, DataFormat::Float32).unwrap();
    ops::transform(&mut v, |c, _| index(d, c.x, c.y, c.z) as f64).unwrap();
    let bricks = ops::brick_decompose(&v, Vec3::splat(2), Vec3::splat(1), Vec3::splat(1)).unwrap();
    assert_eq!(bricks.len(), 3 * 3 * 2);
    for b in &bricks {
        let bd = b.volume.dims();
        for z in 0..bd.z {
            for y in 0..bd.y {
                for x in 0..bd.x {
                    let s = b.offset + Vec3::new(x, y, z) - Vec3::splat(1);
                    let s = Vec3::new(s.x.clamp(0, d.x - 1), s.y.clamp(0, d.y - 1), s.z.clamp(0, d.z - 1));
                    assert_eq!(b.volume.get_value(Vec3::new(x, y, z)).unwrap(), index(d, s.x, s.y, s.z) as f64);
                }
            }
        }
    }
}

#[test]
fn resample_downscale_matches_box_average_on_aligned_grid() {
    // halving with cell-centered sampling lands midway between two source cells
    let mut r = rng(11);
    let v = random_structured(&mut r, Vec3::splat(8), DataFormat::Float32);
    let out = ops::resample(&v, Vec3::splat(4), DataFormat::Float32, v.mapping()).unwrap();
    let src = all_values(&v);
    for z in 0..4 {
        for y in 0..4 {
            for x in 0..4 {
                let mut acc = 0.0;
                for dz in 0..2 {
                    for dy in 0..2 {
                        for dx in 0..2 {
                            acc += src[index(Vec3::splat(8), 2 * x + dx, 2 * y + dy, 2 * z + dz)];
                        }
                    }
                }
                let got = out.get_value(Vec3::new(x, y, z)).unwrap();
                assert!((got - acc / 8.0).abs() < 1e-6);
            }
        }
    }
    assert_eq!(out.cell_size(), Vec3::splat(2.0));
}
