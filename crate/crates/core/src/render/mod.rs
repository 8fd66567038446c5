//! Headless volume rendering: emission-absorption ray marching, implicit
//! iso-surfaces and a multiple-scattering path tracer.

mod field;
mod image;

pub use field::{Classifier, ScalarField};
pub use image::{decode_pfm, encode_gamma, read_pfm, write_image, ImageFormat, ImageRGBA};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::any_volume::VolumeRef;
use crate::error::{Result, VktError};
use crate::exec;
use crate::format::VoxelMapping;
use crate::geom::Vec3;
use crate::lut::resolve_lookup_table;
use crate::managed::ResourceHandle;
use crate::scalar::Scalar;
use crate::volume::CellView;

/// Ray-marched opacity above which a ray stops.
pub const EARLY_TERMINATION: f64 = 0.999;
/// Bisection steps used to refine an iso-surface crossing.
pub const ISO_REFINE_STEPS: usize = 8;
/// Path-tracer bounce from which Russian roulette kicks in.
pub const ROULETTE_START: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderAlgo {
    RayMarching,
    ImplicitIso,
    MultiScattering,
}

impl std::str::FromStr for RenderAlgo {
    type Err = VktError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "raymarch" | "raymarching" => Ok(RenderAlgo::RayMarching),
            "iso" | "implicitiso" => Ok(RenderAlgo::ImplicitIso),
            "pathtrace" | "multiscattering" => Ok(RenderAlgo::MultiScattering),
            _ => Err(VktError::invalid(format!("unknown render algorithm '{s}'"))),
        }
    }
}

/// Pinhole camera.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Camera<T: Scalar = f64> {
    pub eye: Vec3<T>,
    pub center: Vec3<T>,
    pub up: Vec3<T>,
    pub fovy_degrees: T,
    pub width: usize,
    pub height: usize,
}

struct Frame<T: Scalar> {
    eye: Vec3<T>,
    forward: Vec3<T>,
    right: Vec3<T>,
    up: Vec3<T>,
    tan_half: T,
    aspect: T,
    width: usize,
    height: usize,
}

impl<T: Scalar> Camera<T> {
    pub fn new(eye: Vec3<T>, center: Vec3<T>, up: Vec3<T>, fovy_degrees: T, width: usize, height: usize) -> Result<Self> {
        let cam = Self { eye, center, up, fovy_degrees, width, height };
        cam.frame()?;
        Ok(cam)
    }

    fn frame(&self) -> Result<Frame<T>> {
        if self.width == 0 || self.height == 0 {
            return Err(VktError::invalid("image size must be >= 1"));
        }
        if !(self.fovy_degrees > T::zero() && self.fovy_degrees < T::lit(180.0)) {
            return Err(VktError::invalid("fovy must lie in (0, 180) degrees"));
        }
        let forward = (self.center - self.eye)
            .normalized()
            .ok_or_else(|| VktError::invalid("camera eye and center coincide"))?;
        let right = forward
            .cross(self.up)
            .normalized()
            .filter(|r| r.is_finite())
            .ok_or_else(|| VktError::invalid("camera up is parallel to the view direction"))?;
        Ok(Frame {
            eye: self.eye,
            forward,
            right,
            up: right.cross(forward),
            tan_half: (self.fovy_degrees.to_radians() * T::lit(0.5)).tan(),
            aspect: T::lit(self.width as f64) / T::lit(self.height as f64),
            width: self.width,
            height: self.height,
        })
    }
}

impl<T: Scalar> Frame<T> {
    /// Unit direction through image position `(px + jx, py + jy)`.
    fn ray(&self, px: usize, py: usize, jx: T, jy: T) -> Vec3<T> {
        let two = T::lit(2.0);
        let sx = (two * (T::lit(px as f64) + jx) / T::lit(self.width as f64) - T::one()) * self.tan_half * self.aspect;
        let sy = (T::one() - two * (T::lit(py as f64) + jy) / T::lit(self.height as f64)) * self.tan_half;
        (self.forward + self.right.scale(sx) + self.up.scale(sy)).normalized().unwrap_or(self.forward)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderState<T: Scalar = f64> {
    pub algo: RenderAlgo,
    pub lut: ResourceHandle,
    /// Step length as a multiple of the smallest cell size.
    pub dt_rate: T,
    /// Iso values in mapped units.
    pub iso_values: Vec<T>,
    pub samples_per_pixel: u32,
    pub max_bounces: u32,
    /// Extinction per world unit at alpha 1.
    pub density_scale: T,
    pub background: [T; 3],
    pub seed: u64,
    /// Normalization for classification; the volume's mapping when `None`.
    pub value_range: Option<VoxelMapping<T>>,
}

impl<T: Scalar> Default for RenderState<T> {
    fn default() -> Self {
        Self {
            algo: RenderAlgo::RayMarching,
            lut: ResourceHandle::INVALID,
            dt_rate: T::one(),
            iso_values: Vec::new(),
            samples_per_pixel: 1,
            max_bounces: 10,
            density_scale: T::one(),
            background: [T::one(); 3],
            seed: 0,
            value_range: None,
        }
    }
}

impl<T: Scalar> RenderState<T> {
    fn validate(&self) -> Result<()> {
        if !(self.dt_rate.is_finite() && self.dt_rate > T::zero()) {
            return Err(VktError::invalid("dt rate must be > 0"));
        }
        if self.samples_per_pixel == 0 || self.max_bounces == 0 {
            return Err(VktError::invalid("samples per pixel and max bounces must be >= 1"));
        }
        if !(self.density_scale.is_finite() && self.density_scale > T::zero()) {
            return Err(VktError::invalid("density scale must be > 0"));
        }
        if self.background.iter().any(|&b| !(b.is_finite() && b >= T::zero())) {
            return Err(VktError::invalid("background radiance must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Renders `vol` with the integrator selected by `state.algo`.
///
/// The volume and lookup table are migrated to the current policy's device first.
pub fn render<'a, T: Scalar>(vol: impl Into<VolumeRef<'a, T>>, cam: &Camera<T>, state: &RenderState<T>) -> Result<ImageRGBA> {
    match state.algo {
        RenderAlgo::RayMarching => render_ray_marching(vol, cam, state),
        RenderAlgo::ImplicitIso => render_implicit_iso(vol, cam, state),
        RenderAlgo::MultiScattering => render_multi_scattering(vol, cam, state),
    }
}

pub fn render_ray_marching<'a, T: Scalar>(
    vol: impl Into<VolumeRef<'a, T>>,
    cam: &Camera<T>,
    state: &RenderState<T>,
) -> Result<ImageRGBA> {
    with_scene(vol.into(), cam, state, "RenderRayMarching", |s, frame| {
        ray_march_pixels(s, frame, state)
    })
}

pub fn render_implicit_iso<'a, T: Scalar>(
    vol: impl Into<VolumeRef<'a, T>>,
    cam: &Camera<T>,
    state: &RenderState<T>,
) -> Result<ImageRGBA> {
    if state.iso_values.is_empty() {
        return Err(VktError::NoIsoValues);
    }
    with_scene(vol.into(), cam, state, "RenderImplicitIso", |s, frame| iso_pixels(s, frame, state))
}

pub fn render_multi_scattering<'a, T: Scalar>(
    vol: impl Into<VolumeRef<'a, T>>,
    cam: &Camera<T>,
    state: &RenderState<T>,
) -> Result<ImageRGBA> {
    with_scene(vol.into(), cam, state, "RenderMultiScattering", |s, frame| {
        path_trace_pixels(s, frame, state)
    })
}

struct Scene<'a, T: Scalar> {
    field: ScalarField<'a, T>,
    classifier: Classifier<'a, T>,
}

fn with_scene<T: Scalar>(
    vol: VolumeRef<'_, T>,
    cam: &Camera<T>,
    state: &RenderState<T>,
    name: &str,
    body: impl Fn(&Scene<'_, T>, &Frame<T>) -> ImageRGBA + Send + Sync,
) -> Result<ImageRGBA> {
    state.validate()?;
    let frame = cam.frame()?;
    let lut = resolve_lookup_table(state.lut)?;
    if lut.is_empty() {
        return Err(VktError::UnresolvedLut(state.lut.0));
    }
    lut.buffer().migrate()?;
    vol.migrate()?;
    let entries = lut.entries();
    match vol {
        VolumeRef::Structured(s) => {
            let bytes = s.bytes();
            let scene = Scene {
                field: ScalarField::structured(CellView::new(s, &bytes)),
                classifier: Classifier { entries: &entries, range: state.value_range.unwrap_or(s.mapping()) },
            };
            Ok(exec::run(name, || body(&scene, &frame)))
        }
        VolumeRef::Hierarchical(h) => {
            let bytes = h.bytes();
            let scene = Scene {
                field: ScalarField::hierarchical(h, &bytes)?,
                classifier: Classifier { entries: &entries, range: state.value_range.unwrap_or(h.mapping()) },
            };
            Ok(exec::run(name, || body(&scene, &frame)))
        }
    }
}

fn for_each_pixel<T: Scalar>(frame: &Frame<T>, f: impl Fn(usize, usize) -> [T; 4] + Sync) -> ImageRGBA {
    let mut img = ImageRGBA::new(frame.width, frame.height);
    img.pixels.par_chunks_mut(frame.width).enumerate().for_each(|(y, row)| {
        for (x, px) in row.iter_mut().enumerate() {
            *px = f(x, y).map(|c| c.as_f32());
        }
    });
    img
}

fn ray_march_pixels<T: Scalar>(s: &Scene<'_, T>, frame: &Frame<T>, state: &RenderState<T>) -> ImageRGBA {
    let bounds = s.field.bounds();
    let unit = s.field.min_cell_size();
    let dt = state.dt_rate * unit;
    let half = T::lit(0.5);
    let stop = T::lit(EARLY_TERMINATION);
    let bg = state.background;
    for_each_pixel(frame, |x, y| {
        let dir = frame.ray(x, y, half, half);
        let mut color = [T::zero(); 3];
        let mut alpha = T::zero();
        if let Some((t0, t1)) = bounds.intersect_ray(frame.eye, dir) {
            let mut t = t0;
            while t < t1 && alpha <= stop {
                let seg = dt.min(t1 - t);
                let p = frame.eye + dir.scale(t + seg * half);
                let [r, g, b, a] = s.classifier.classify(s.field.sample(p));
                if a > T::zero() {
                    let a = T::one() - (T::one() - a).powf(seg / unit);
                    let w = (T::one() - alpha) * a;
                    color[0] += w * r;
                    color[1] += w * g;
                    color[2] += w * b;
                    alpha += w;
                }
                t += seg;
            }
        }
        let rest = T::one() - alpha;
        [color[0] + rest * bg[0], color[1] + rest * bg[1], color[2] + rest * bg[2], alpha]
    })
}

fn iso_pixels<T: Scalar>(s: &Scene<'_, T>, frame: &Frame<T>, state: &RenderState<T>) -> ImageRGBA {
    let bounds = s.field.bounds();
    let dt = state.dt_rate * s.field.min_cell_size();
    let half = T::lit(0.5);
    let bg = state.background;
    // Fully transparent iso values cannot be seen and are skipped.
    let isos: Vec<(T, [T; 4])> = state
        .iso_values
        .iter()
        .map(|&v| (v, s.classifier.classify(v)))
        .filter(|(_, c)| c[3] > T::zero())
        .collect();
    for_each_pixel(frame, |x, y| {
        let dir = frame.ray(x, y, half, half);
        let miss = [bg[0], bg[1], bg[2], T::zero()];
        let Some((t0, t1)) = bounds.intersect_ray(frame.eye, dir) else {
            return miss;
        };
        if isos.is_empty() {
            return miss;
        }
        let at = |t: T| s.field.sample(frame.eye + dir.scale(t));
        let mut ta = t0;
        let mut va = at(ta);
        while ta < t1 {
            let tb = (ta + dt).min(t1);
            let vb = at(tb);
            let mut best: Option<(T, usize)> = None;
            for (k, &(iso, _)) in isos.iter().enumerate() {
                if (va >= iso) == (vb >= iso) {
                    continue;
                }
                let (mut lo, mut hi) = (ta, tb);
                let side = va >= iso;
                for _ in 0..ISO_REFINE_STEPS {
                    let mid = (lo + hi) * half;
                    if (at(mid) >= iso) == side {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let th = (lo + hi) * half;
                if best.is_none_or(|(bt, _)| th < bt) {
                    best = Some((th, k));
                }
            }
            if let Some((th, k)) = best {
                let p = frame.eye + dir.scale(th);
                let shade = s.field.gradient(p).normalized().map_or(T::one(), |n| n.dot(-dir).abs());
                let c = isos[k].1;
                return [shade * c[0], shade * c[1], shade * c[2], T::one()];
            }
            ta = tb;
            va = vb;
        }
        miss
    })
}

/// Uniform direction on the unit sphere.
fn sample_sphere<T: Scalar>(rng: &mut ChaCha8Rng) -> Vec3<T> {
    let z = T::lit(1.0 - 2.0 * rng.random::<f64>());
    let phi = T::lit(2.0 * std::f64::consts::PI * rng.random::<f64>());
    let r = (T::one() - z * z).max(T::zero()).sqrt();
    Vec3::new(r * phi.cos(), r * phi.sin(), z)
}

/// Stream of random numbers for one path; depends only on seed, pixel and sample.
pub fn path_rng(seed: u64, pixel: u64, sample: u64, spp: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(pixel * spp + sample);
    rng
}

fn path_trace_pixels<T: Scalar>(s: &Scene<'_, T>, frame: &Frame<T>, state: &RenderState<T>) -> ImageRGBA {
    let bounds = s.field.bounds();
    let majorant = state.density_scale;
    let spp = state.samples_per_pixel as u64;
    let bg = state.background;
    for_each_pixel(frame, |x, y| {
        let pixel = (y * frame.width + x) as u64;
        let mut sum = [T::zero(); 3];
        for sample in 0..spp {
            let mut rng = path_rng(state.seed, pixel, sample, spp);
            let jx = T::lit(rng.random::<f64>());
            let jy = T::lit(rng.random::<f64>());
            let mut origin = frame.eye;
            let mut dir = frame.ray(x, y, jx, jy);
            let mut beta = [T::one(); 3];
            let mut bounces = 0u32;
            let escaped = loop {
                let Some((t0, t1)) = bounds.intersect_ray(origin, dir) else {
                    break true;
                };
                let mut t = t0;
                let mut hit = None;
                loop {
                    t -= T::lit((1.0 - rng.random::<f64>()).ln()) / majorant;
                    if t >= t1 {
                        break;
                    }
                    let p = origin + dir.scale(t);
                    let c = s.classifier.classify(s.field.sample(p));
                    if T::lit(rng.random::<f64>()) * majorant < state.density_scale * c[3] {
                        hit = Some((p, c));
                        break;
                    }
                }
                let Some((p, c)) = hit else {
                    break true;
                };
                for k in 0..3 {
                    beta[k] *= c[k].max(T::zero());
                }
                bounces += 1;
                if bounces >= state.max_bounces || beta.iter().all(|&b| b == T::zero()) {
                    break false;
                }
                if bounces >= ROULETTE_START {
                    let q = beta.iter().fold(T::zero(), |m, &b| m.max(b)).max(T::lit(0.05)).min(T::lit(0.95));
                    if T::lit(rng.random::<f64>()) >= q {
                        break false;
                    }
                    for b in &mut beta {
                        *b /= q;
                    }
                }
                origin = p;
                dir = sample_sphere(&mut rng);
            };
            if escaped {
                for k in 0..3 {
                    sum[k] += beta[k];
                }
            }
        }
        let n = T::lit(spp as f64);
        [sum[0] / n * bg[0], sum[1] / n * bg[1], sum[2] / n * bg[2], T::one()]
    })
}
