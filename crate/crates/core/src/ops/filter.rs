//! Convolution filtering.

use rayon::prelude::*;

use crate::error::{Result, VktError};
use crate::exec;
use crate::geom::{Vec3, Vec3i};
use crate::scalar::Scalar;
use crate::volume::StructuredVolume;

/// Dense 3D filter kernel with odd dimensions, weights stored x-fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel<T: Scalar = f64> {
    dims: Vec3i,
    weights: Vec<T>,
    /// Per-axis factors when `weights` is their outer product.
    factors: Option<[Vec<T>; 3]>,
}

impl<T: Scalar> Kernel<T> {
    pub fn new(dims: Vec3i, weights: Vec<T>) -> Result<Self> {
        if !dims.all_positive() || dims.x % 2 == 0 || dims.y % 2 == 0 || dims.z % 2 == 0 {
            return Err(VktError::EvenKernelDims(dims));
        }
        if weights.len() != dims.volume() {
            return Err(VktError::SizeMismatch { expected: dims.volume() as u64, actual: weights.len() as u64 });
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(VktError::invalid("kernel weights must be finite"));
        }
        Ok(Self { dims, weights, factors: None })
    }

    /// Outer product of three 1D kernels; filtered in three separable passes.
    pub fn separable(fx: Vec<T>, fy: Vec<T>, fz: Vec<T>) -> Result<Self> {
        let dims = Vec3::new(fx.len() as i64, fy.len() as i64, fz.len() as i64);
        let mut weights = Vec::with_capacity(dims.volume());
        for &wz in &fz {
            for &wy in &fy {
                for &wx in &fx {
                    weights.push(wx * wy * wz);
                }
            }
        }
        let mut k = Self::new(dims, weights)?;
        k.factors = Some([fx, fy, fz]);
        Ok(k)
    }

    /// Identity kernel.
    pub fn delta(dims: Vec3i) -> Result<Self> {
        let mut k = Self::new(dims, vec![T::zero(); dims.volume()])?;
        let c = k.radius();
        let i = k.linear(c);
        k.weights[i] = T::one();
        Ok(k)
    }

    /// Normalized box filter.
    pub fn box_filter(dims: Vec3i) -> Result<Self> {
        if !dims.all_positive() {
            return Err(VktError::EvenKernelDims(dims));
        }
        let f = |n: i64| vec![T::one() / T::lit(n as f64); n as usize];
        Self::separable(f(dims.x), f(dims.y), f(dims.z))
    }

    /// Normalized Gaussian with standard deviation `sigma` in cells.
    pub fn gaussian(dims: Vec3i, sigma: T) -> Result<Self> {
        if !(sigma.is_finite() && sigma > T::zero()) {
            return Err(VktError::invalid("gaussian sigma must be > 0"));
        }
        if !dims.all_positive() {
            return Err(VktError::EvenKernelDims(dims));
        }
        let two_s2 = T::lit(2.0) * sigma * sigma;
        let f = |n: i64| {
            let r = n / 2;
            let w: Vec<T> = (0..n).map(|i| (-T::lit(((i - r) * (i - r)) as f64) / two_s2).exp()).collect();
            let sum: T = w.iter().copied().sum();
            w.into_iter().map(|x| x / sum).collect::<Vec<T>>()
        };
        Self::separable(f(dims.x), f(dims.y), f(dims.z))
    }

    pub fn dims(&self) -> Vec3i {
        self.dims
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn radius(&self) -> Vec3i {
        self.dims.map(|d| d / 2)
    }

    pub fn weight(&self, o: Vec3i) -> T {
        self.weights[self.linear(o)]
    }

    fn linear(&self, o: Vec3i) -> usize {
        (o.x + self.dims.x * (o.y + self.dims.y * o.z)) as usize
    }
}

/// Correlates `v` with `k` in mapped-value space, clamping at the borders.
pub fn apply_filter<T: Scalar>(v: &mut StructuredVolume<T>, k: &Kernel<T>) -> Result<()> {
    v.migrate()?;
    let input = v.mapped_values();
    let dims = v.dims();
    let roi = v.bounds();
    exec::run("ApplyFilter", || match &k.factors {
        Some(f) => {
            let mut a = input;
            let mut b = vec![T::zero(); a.len()];
            for (axis, taps) in f.iter().enumerate() {
                correlate_axis(&a, &mut b, dims, axis, taps);
                std::mem::swap(&mut a, &mut b);
            }
            v.par_store_roi(roi, |c| a[(c.x + dims.x * (c.y + dims.y * c.z)) as usize]);
        }
        None => {
            let r = k.radius();
            let kd = k.dims;
            let at = |x: i64, y: i64, z: i64| {
                let x = x.clamp(0, dims.x - 1);
                let y = y.clamp(0, dims.y - 1);
                let z = z.clamp(0, dims.z - 1);
                input[(x + dims.x * (y + dims.y * z)) as usize]
            };
            v.par_store_roi(roi, |c| {
                let mut acc = T::zero();
                let mut wi = 0;
                for oz in 0..kd.z {
                    for oy in 0..kd.y {
                        for ox in 0..kd.x {
                            let w = k.weights[wi];
                            wi += 1;
                            if w != T::zero() {
                                acc += w * at(c.x + ox - r.x, c.y + oy - r.y, c.z + oz - r.z);
                            }
                        }
                    }
                }
                acc
            })
        }
    });
    Ok(())
}

/// One separable pass along `axis` with clamp-to-edge.
fn correlate_axis<T: Scalar>(src: &[T], dst: &mut [T], dims: Vec3i, axis: usize, taps: &[T]) {
    let r = (taps.len() / 2) as i64;
    let n = dims[axis];
    let stride = match axis {
        0 => 1,
        1 => dims.x,
        _ => dims.x * dims.y,
    } as usize;
    let row = dims.x as usize;
    dst.par_chunks_mut(row).enumerate().for_each(|(ri, out)| {
        let base = ri * row;
        let (y, z) = (ri as i64 % dims.y, ri as i64 / dims.y);
        for (x, o) in out.iter_mut().enumerate() {
            let pos = [x as i64, y, z][axis];
            let lin = base + x;
            let mut acc = T::zero();
            for (t, &w) in taps.iter().enumerate() {
                let q = (pos + t as i64 - r).clamp(0, n - 1);
                acc += w * src[lin - pos as usize * stride + q as usize * stride];
            }
            *o = acc;
        }
    });
}
