//! Small vector and box types shared by all modules.

use std::ops::{Add, Div, Index, IndexMut, Mul, Neg, Sub};

use crate::scalar::Scalar;

/// Three-component vector, used for both cell indices and world positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Vec3<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

/// Integer cell coordinates.
pub type Vec3i = Vec3<i64>;

impl<T> Vec3<T> {
    pub const fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }
}

impl<T: Copy> Vec3<T> {
    pub fn splat(v: T) -> Self {
        Self::new(v, v, v)
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn map<U>(self, f: impl Fn(T) -> U) -> Vec3<U> {
        Vec3::new(f(self.x), f(self.y), f(self.z))
    }

    pub fn zip<U: Copy, R>(self, o: Vec3<U>, f: impl Fn(T, U) -> R) -> Vec3<R> {
        Vec3::new(f(self.x, o.x), f(self.y, o.y), f(self.z, o.z))
    }
}

impl<T> Index<usize> for Vec3<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        match i {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

impl<T> IndexMut<usize> for Vec3<T> {
    fn index_mut(&mut self, i: usize) -> &mut T {
        match i {
            0 => &mut self.x,
            1 => &mut self.y,
            2 => &mut self.z,
            _ => panic!("Vec3 index {i} out of range"),
        }
    }
}

macro_rules! vec3_binop {
    ($tr:ident, $f:ident) => {
        impl<T: $tr<Output = T>> $tr for Vec3<T> {
            type Output = Vec3<T>;
            fn $f(self, o: Self) -> Self {
                Vec3::new(self.x.$f(o.x), self.y.$f(o.y), self.z.$f(o.z))
            }
        }
    };
}

vec3_binop!(Add, add);
vec3_binop!(Sub, sub);
vec3_binop!(Mul, mul);
vec3_binop!(Div, div);

impl<T: Neg<Output = T>> Neg for Vec3<T> {
    type Output = Vec3<T>;
    fn neg(self) -> Self {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Vec3i {
    /// Number of cells in a grid of these dimensions; 0 if any axis is non-positive.
    pub fn volume(self) -> usize {
        if self.x <= 0 || self.y <= 0 || self.z <= 0 {
            0
        } else {
            (self.x * self.y * self.z) as usize
        }
    }

    pub fn all_positive(self) -> bool {
        self.x > 0 && self.y > 0 && self.z > 0
    }

    pub fn cast<T: Scalar>(self) -> Vec3<T> {
        self.map(|c| T::lit(c as f64))
    }
}

impl<T: Scalar> Vec3<T> {
    pub fn scale(self, s: T) -> Self {
        self.map(|c| c * s)
    }

    pub fn dot(self, o: Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn length(self) -> T {
        self.dot(self).sqrt()
    }

    /// Unit vector, or `None` for a zero or non-finite vector.
    pub fn normalized(self) -> Option<Self> {
        let l = self.length();
        if l > T::zero() && l.is_finite() {
            Some(self.scale(T::one() / l))
        } else {
            None
        }
    }

    pub fn min_component(self) -> T {
        self.x.min(self.y).min(self.z)
    }

    pub fn max_component(self) -> T {
        self.x.max(self.y).max(self.z)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

/// Half-open integer box `[lower, upper)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Box3i {
    pub lower: Vec3i,
    pub upper: Vec3i,
}

impl Box3i {
    pub const fn new(lower: Vec3i, upper: Vec3i) -> Self {
        Self { lower, upper }
    }

    pub fn from_coords(lo: [i64; 3], hi: [i64; 3]) -> Self {
        Self::new(Vec3::from_array(lo), Vec3::from_array(hi))
    }

    /// The box `[0, dims)`.
    pub fn from_dims(dims: Vec3i) -> Self {
        Self::new(Vec3::splat(0), dims)
    }

    pub fn is_empty(&self) -> bool {
        !(self.lower.x < self.upper.x && self.lower.y < self.upper.y && self.lower.z < self.upper.z)
    }

    pub fn size(&self) -> Vec3i {
        if self.is_empty() {
            Vec3::splat(0)
        } else {
            self.upper - self.lower
        }
    }

    pub fn cell_count(&self) -> usize {
        self.size().volume()
    }

    pub fn intersect(&self, o: &Box3i) -> Box3i {
        Box3i::new(
            self.lower.zip(o.lower, i64::max),
            self.upper.zip(o.upper, i64::min),
        )
    }

    /// True when `o` lies completely inside `self`. Empty boxes are contained nowhere.
    pub fn contains_box(&self, o: &Box3i) -> bool {
        !o.is_empty()
            && (0..3).all(|a| o.lower[a] >= self.lower[a] && o.upper[a] <= self.upper[a])
    }

    pub fn contains(&self, p: Vec3i) -> bool {
        (0..3).all(|a| p[a] >= self.lower[a] && p[a] < self.upper[a])
    }
}

/// Closed axis-aligned real box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb<T> {
    pub min: Vec3<T>,
    pub max: Vec3<T>,
}

impl<T: Scalar> Aabb<T> {
    pub fn new(min: Vec3<T>, max: Vec3<T>) -> Self {
        Self { min, max }
    }

    /// An inverted box that acts as the identity for [`Aabb::union`].
    pub fn empty() -> Self {
        Self::new(Vec3::splat(T::infinity()), Vec3::splat(T::neg_infinity()))
    }

    pub fn union(&self, o: &Self) -> Self {
        Self::new(
            self.min.zip(o.min, |a, b| a.min(b)),
            self.max.zip(o.max, |a, b| a.max(b)),
        )
    }

    pub fn grow(&self, p: Vec3<T>) -> Self {
        Self::new(self.min.zip(p, |a, b| a.min(b)), self.max.zip(p, |a, b| a.max(b)))
    }

    pub fn extent(&self) -> Vec3<T> {
        self.max - self.min
    }

    pub fn center(&self) -> Vec3<T> {
        (self.min + self.max).scale(T::lit(0.5))
    }

    pub fn contains(&self, p: Vec3<T>) -> bool {
        (0..3).all(|a| p[a] >= self.min[a] && p[a] <= self.max[a])
    }

    pub fn contains_aabb(&self, o: &Self) -> bool {
        (0..3).all(|a| o.min[a] >= self.min[a] && o.max[a] <= self.max[a])
    }

    pub fn intersects(&self, o: &Self) -> bool {
        (0..3).all(|a| o.min[a] <= self.max[a] && o.max[a] >= self.min[a])
    }

    /// Slab test. Returns the parametric entry/exit distances clipped to `t >= 0`.
    pub fn intersect_ray(&self, origin: Vec3<T>, dir: Vec3<T>) -> Option<(T, T)> {
        let mut t0 = T::zero();
        let mut t1 = T::infinity();
        for a in 0..3 {
            let inv = T::one() / dir[a];
            let mut tn = (self.min[a] - origin[a]) * inv;
            let mut tf = (self.max[a] - origin[a]) * inv;
            if tn > tf {
                std::mem::swap(&mut tn, &mut tf);
            }
            // NaN from 0 * inf (origin on a slab plane, parallel ray) must not poison the interval
            if !tn.is_nan() {
                t0 = t0.max(tn);
            }
            if !tf.is_nan() {
                t1 = t1.min(tf);
            }
            if t0 > t1 {
                return None;
            }
        }
        Some((t0, t1))
    }
}

/// Axis with the largest extent; ties resolve to the lowest axis index.
pub fn longest_axis<T: PartialOrd + Copy>(v: Vec3<T>) -> usize {
    let mut best = 0;
    for a in 1..3 {
        if v[a] > v[best] {
            best = a;
        }
    }
    best
}
