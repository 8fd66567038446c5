//! RGBA transfer-function lookup tables.

use std::sync::Arc;

use crate::error::{Result, VktError};
use crate::managed::{self, ManagedBuffer, ResourceHandle};
use crate::scalar::Scalar;

/// Only RGBA32F tables exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorFormat {
    Rgba32F,
}

/// Table storage shared between the owning [`LookupTable`] and handle resolvers.
#[derive(Debug)]
pub struct LutData {
    len: usize,
    buffer: ManagedBuffer,
}

impl LutData {
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn buffer(&self) -> &ManagedBuffer {
        &self.buffer
    }

    pub fn entries(&self) -> Vec<[f32; 4]> {
        self.buffer
            .bytes()
            .chunks_exact(16)
            .map(|c| std::array::from_fn(|k| f32::from_le_bytes(c[4 * k..4 * k + 4].try_into().unwrap())))
            .collect()
    }

    /// Piecewise-linear lookup at `clamp(t, 0, 1) * (n - 1)`.
    pub fn classify<T: Scalar>(&self, t: T) -> [T; 4] {
        classify_entries(&self.entries(), t)
    }
}

/// [`LutData::classify`] over already decoded entries.
pub fn classify_entries<T: Scalar>(entries: &[[f32; 4]], t: T) -> [T; 4] {
    let n = entries.len();
    let get = |i: usize| entries[i].map(|c| T::lit(c as f64));
    if n == 1 {
        return get(0);
    }
    let t = if t.is_nan() { T::zero() } else { t.clamp01() };
    let pos = t * T::from_usize_exact(n - 1);
    let i0 = pos.floor().to_usize().unwrap_or(0).min(n - 1);
    let i1 = (i0 + 1).min(n - 1);
    let f = pos - T::from_usize_exact(i0);
    let (a, b) = (get(i0), get(i1));
    if f == T::zero() {
        return a;
    }
    std::array::from_fn(|k| (T::one() - f) * a[k] + f * b[k])
}

/// Owned RGBA lookup table of shape `(n, 1, 1)`, resolvable through its handle while alive.
#[derive(Debug)]
pub struct LookupTable {
    data: Arc<LutData>,
}

impl LookupTable {
    /// Zero-filled table; `dims` must be `(n, 1, 1)` with `n >= 1`.
    pub fn new(dims: [i64; 3], format: ColorFormat) -> Result<Self> {
        let ColorFormat::Rgba32F = format;
        if dims[0] < 1 || dims[1] != 1 || dims[2] != 1 {
            return Err(VktError::invalid(format!("lookup tables must be (n,1,1), got {dims:?}")));
        }
        let len = dims[0] as usize;
        let data = Arc::new(LutData { len, buffer: ManagedBuffer::new(len * 16)? });
        managed::register(data.buffer.handle(), &data);
        Ok(Self { data })
    }

    pub fn from_entries(entries: &[[f32; 4]]) -> Result<Self> {
        let lut = Self::new([entries.len() as i64, 1, 1], ColorFormat::Rgba32F)?;
        lut.set_data(&entries.iter().flatten().copied().collect::<Vec<_>>())?;
        Ok(lut)
    }

    /// Replaces all RGBA tuples; `rgba.len()` must be `4 n`.
    pub fn set_data(&self, rgba: &[f32]) -> Result<()> {
        if rgba.len() != 4 * self.data.len {
            return Err(VktError::invalid(format!(
                "expected {} floats for {} RGBA tuples, got {}",
                4 * self.data.len,
                self.data.len,
                rgba.len()
            )));
        }
        if rgba.iter().any(|c| !c.is_finite()) {
            return Err(VktError::invalid("lookup table components must be finite"));
        }
        let mut bytes = self.data.buffer.bytes_write();
        for (dst, c) in bytes.chunks_exact_mut(4).zip(rgba) {
            dst.copy_from_slice(&c.to_le_bytes());
        }
        Ok(())
    }

    pub fn handle(&self) -> ResourceHandle {
        self.data.buffer.handle()
    }

    pub fn data(&self) -> &Arc<LutData> {
        &self.data
    }

    pub fn classify<T: Scalar>(&self, t: T) -> [T; 4] {
        self.data.classify(t)
    }
}

impl Drop for LookupTable {
    fn drop(&mut self) {
        managed::unregister(self.handle());
    }
}

/// Resolves a lookup-table handle, failing with `UnresolvedLut`.
pub fn resolve_lookup_table(handle: ResourceHandle) -> Result<Arc<LutData>> {
    managed::resolve::<LutData>(handle).map_err(|_| VktError::UnresolvedLut(handle.0))
}
