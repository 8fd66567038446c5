//! Uniform point-sampling interface over both volume kinds.

use crate::amr::BasisSampler;
use crate::error::Result;
use crate::format::VoxelMapping;
use crate::geom::{Aabb, Vec3};
use crate::scalar::Scalar;
use crate::volume::CellView;

/// A continuous scalar field in world space.
pub enum ScalarField<'a, T: Scalar> {
    Structured(CellView<'a, T>),
    /// Sampled in logical coordinates; a level-0 cell is one world unit wide.
    Hierarchical { sampler: BasisSampler<'a, T>, bounds: Aabb<T>, min_cell: T },
}

impl<'a, T: Scalar> ScalarField<'a, T> {
    pub fn structured(view: CellView<'a, T>) -> Self {
        ScalarField::Structured(view)
    }

    pub fn hierarchical(h: &'a crate::amr::HierarchicalVolume<T>, bytes: &'a [u8]) -> Result<Self> {
        let sampler = BasisSampler::new(h, bytes)?;
        let min_level = h.subgrids().iter().map(|s| s.level).min().unwrap_or(0);
        Ok(ScalarField::Hierarchical {
            sampler,
            bounds: Aabb::new(Vec3::splat(T::zero()), h.logical_dims().cast()),
            min_cell: T::lit((1u64 << min_level) as f64),
        })
    }

    /// Mapped value at world position `p`.
    #[inline]
    pub fn sample(&self, p: Vec3<T>) -> T {
        match self {
            ScalarField::Structured(v) => v.sample_world(p),
            ScalarField::Hierarchical { sampler, .. } => sampler.sample(p),
        }
    }

    pub fn bounds(&self) -> Aabb<T> {
        match self {
            ScalarField::Structured(v) => Aabb::new(Vec3::splat(T::zero()), v.dims.cast::<T>() * v.cell_size),
            ScalarField::Hierarchical { bounds, .. } => *bounds,
        }
    }

    pub fn min_cell_size(&self) -> T {
        match self {
            ScalarField::Structured(v) => v.cell_size.min_component(),
            ScalarField::Hierarchical { min_cell, .. } => *min_cell,
        }
    }

    /// Finite-difference step per axis: one cell.
    pub fn gradient_step(&self) -> Vec3<T> {
        match self {
            ScalarField::Structured(v) => v.cell_size,
            ScalarField::Hierarchical { min_cell, .. } => Vec3::splat(*min_cell),
        }
    }

    /// Central-difference gradient of the mapped values.
    pub fn gradient(&self, p: Vec3<T>) -> Vec3<T> {
        let h = self.gradient_step();
        let mut g = Vec3::splat(T::zero());
        for a in 0..3 {
            let mut d = Vec3::splat(T::zero());
            d[a] = h[a];
            g[a] = (self.sample(p + d) - self.sample(p - d)) / (h[a] + h[a]);
        }
        g
    }
}

/// Normalization used for classification.
#[derive(Debug, Clone, Copy)]
pub struct Classifier<'a, T: Scalar> {
    pub entries: &'a [[f32; 4]],
    pub range: VoxelMapping<T>,
}

impl<T: Scalar> Classifier<'_, T> {
    /// RGBA with alpha clamped to `[0, 1]`.
    #[inline]
    pub fn classify(&self, value: T) -> [T; 4] {
        let mut c = crate::lut::classify_entries(self.entries, self.range.normalize(value));
        c[3] = c[3].clamp01();
        c
    }
}
