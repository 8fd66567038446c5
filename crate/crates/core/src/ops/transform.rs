//! Flip, rotate and scale with trilinear resampling.

use rayon::prelude::*;

use crate::error::{Result, VktError};
use crate::exec;
use crate::geom::{Box3i, Vec3};
use crate::scalar::Scalar;
use crate::volume::{CellView, StructuredVolume};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn index(self) -> usize {
        self as usize
    }
}

impl std::str::FromStr for Axis {
    type Err = VktError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Axis::X),
            "y" => Ok(Axis::Y),
            "z" => Ok(Axis::Z),
            _ => Err(VktError::invalid(format!("unknown axis '{s}'"))),
        }
    }
}

/// Mirrors the stored cells along `axis`. Bit-exact.
pub fn flip<T: Scalar>(v: &mut StructuredVolume<T>, axis: Axis) -> Result<()> {
    v.migrate()?;
    let dims = v.dims();
    let bpc = v.format().bytes_per_cell();
    let row = dims.x as usize * bpc;
    let nx = dims.x as usize;
    exec::run("Flip", || match axis {
        Axis::X => v.bytes_mut().par_chunks_mut(row).for_each(|r| {
            for i in 0..nx / 2 {
                let j = nx - 1 - i;
                for b in 0..bpc {
                    r.swap(i * bpc + b, j * bpc + b);
                }
            }
        }),
        Axis::Y | Axis::Z => {
            let src = v.bytes().to_vec();
            v.bytes_mut().par_chunks_mut(row).enumerate().for_each(|(r, dst)| {
                let (mut y, mut z) = (r as i64 % dims.y, r as i64 / dims.y);
                if axis == Axis::Y {
                    y = dims.y - 1 - y;
                } else {
                    z = dims.z - 1 - z;
                }
                let s = (dims.x * (y + dims.y * z)) as usize * bpc;
                dst.copy_from_slice(&src[s..s + row]);
            });
        }
    });
    Ok(())
}

/// Rotates `p` about the unit vector `k` by `angle` radians (Rodrigues).
pub fn rotate_vector<T: Scalar>(p: Vec3<T>, k: Vec3<T>, angle: T) -> Vec3<T> {
    let (s, c) = angle.sin_cos();
    p.scale(c) + k.cross(p).scale(s) + k.scale(k.dot(p) * (T::one() - c))
}

/// Rotates the content of `roi` by `angle` radians about `axis` through
/// `center` (world space). Cells outside `roi` are untouched; dims are kept.
pub fn rotate_range<T: Scalar>(
    v: &mut StructuredVolume<T>,
    roi: Box3i,
    axis: Vec3<T>,
    angle: T,
    center: Vec3<T>,
) -> Result<()> {
    if !axis.is_finite() || (axis.length() - T::one()).abs() > T::lit(1e-6) || !angle.is_finite() || !center.is_finite() {
        return Err(VktError::invalid("rotation axis must be a unit vector"));
    }
    v.migrate()?;
    let snapshot = v.bytes().to_vec();
    let view = CellView::new(v, &snapshot);
    let cs = v.cell_size();
    let half = Vec3::splat(T::lit(0.5));
    exec::run("RotateRange", || {
        v.par_store_roi(roi, |c| {
            let p = (c.cast::<T>() + half) * cs;
            view.sample_world(rotate_vector(p - center, axis, -angle) + center)
        })
    });
    Ok(())
}

pub fn rotate<T: Scalar>(v: &mut StructuredVolume<T>, axis: Vec3<T>, angle: T, center: Vec3<T>) -> Result<()> {
    let roi = v.bounds();
    rotate_range(v, roi, axis, angle, center)
}

/// Scales the content of `roi` by `factors` about `center` (world space).
pub fn scale_range<T: Scalar>(v: &mut StructuredVolume<T>, roi: Box3i, factors: Vec3<T>, center: Vec3<T>) -> Result<()> {
    if !(factors.x > T::zero() && factors.y > T::zero() && factors.z > T::zero()) || !factors.is_finite() {
        return Err(VktError::invalid(format!("scale factors must be > 0, got {factors:?}")));
    }
    if !center.is_finite() {
        return Err(VktError::invalid("scale center must be finite"));
    }
    v.migrate()?;
    let snapshot = v.bytes().to_vec();
    let view = CellView::new(v, &snapshot);
    let cs = v.cell_size();
    let half = Vec3::splat(T::lit(0.5));
    exec::run("ScaleRange", || {
        v.par_store_roi(roi, |c| {
            let p = (c.cast::<T>() + half) * cs;
            view.sample_world((p - center) / factors + center)
        })
    });
    Ok(())
}

pub fn scale<T: Scalar>(v: &mut StructuredVolume<T>, factors: Vec3<T>, center: Vec3<T>) -> Result<()> {
    let roi = v.bounds();
    scale_range(v, roi, factors, center)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::DataFormat;

    type Sv = StructuredVolume<f64>;

    fn random_u8(dims: [i64; 3]) -> Sv {
        let mut v = Sv::with_dims(Vec3::from_array(dims), DataFormat::UInt8).unwrap();
        let mut s = 12345u32;
        for b in v.bytes_mut() {
            s = s.wrapping_mul(1664525).wrapping_add(1013904223);
            *b = (s >> 24) as u8;
        }
        v
    }

    #[test]
    fn flip_is_involution_and_permutation() {
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let mut v = random_u8([5, 4, 3]);
            let orig = v.try_clone().unwrap();
            flip(&mut v, axis).unwrap();
            let d = v.dims();
            for z in 0..d.z {
                for y in 0..d.y {
                    for x in 0..d.x {
                        let mut m = Vec3::new(x, y, z);
                        m[axis.index()] = d[axis.index()] - 1 - m[axis.index()];
                        assert_eq!(v.get_value(Vec3::new(x, y, z)).unwrap(), orig.get_value(m).unwrap());
                    }
                }
            }
            flip(&mut v, axis).unwrap();
            assert_eq!(&*v.bytes(), &*orig.bytes());
        }
    }

    #[test]
    fn rotate_zero_is_fixed_point() {
        let mut v = random_u8([6, 6, 6]);
        let orig = v.bytes().to_vec();
        rotate(&mut v, Vec3::new(0.0, 0.0, 1.0), 0.0, Vec3::splat(3.0)).unwrap();
        assert_eq!(&*v.bytes(), &orig[..]);
    }

    #[test]
    fn rotate_90_about_z_is_permutation() {
        let mut v = random_u8([6, 6, 6]);
        let orig = v.try_clone().unwrap();
        rotate(&mut v, Vec3::new(0.0, 0.0, 1.0), std::f64::consts::FRAC_PI_2, Vec3::splat(3.0)).unwrap();
        // out(x,y) samples R(-90)(p - c) + c: (x,y) -> (y, 5-x) in index space
        for z in 0..6 {
            for y in 0..6 {
                for x in 0..6 {
                    let a = v.get_value(Vec3::new(x, y, z)).unwrap();
                    let b = orig.get_value(Vec3::new(y, 5 - x, z)).unwrap();
                    assert!((a - b).abs() <= 1.0 / 255.0 + 1e-12);
                }
            }
        }
    }

    #[test]
    fn rotate_rejects_non_unit_axis() {
        let mut v = random_u8([2, 2, 2]);
        assert!(rotate(&mut v, Vec3::new(0.0, 0.0, 2.0), 1.0, Vec3::splat(1.0)).is_err());
    }

    #[test]
    fn scale_identity_and_errors() {
        let mut v = random_u8([4, 5, 6]);
        let orig = v.bytes().to_vec();
        scale(&mut v, Vec3::splat(1.0), Vec3::splat(2.0)).unwrap();
        assert_eq!(&*v.bytes(), &orig[..]);
        assert!(scale(&mut v, Vec3::new(1.0, 0.0, 1.0), Vec3::splat(0.0)).is_err());
    }
}
