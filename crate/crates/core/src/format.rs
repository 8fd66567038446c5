use crate::error::{Result, VktError};
use crate::scalar::Scalar;

/// Cell storage type. Discriminants are the on-disk codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum DataFormat {
    UInt8 = 1,
    UInt16 = 2,
    Float32 = 3,
}

impl DataFormat {
    pub fn bytes_per_cell(self) -> usize {
        match self {
            DataFormat::UInt8 => 1,
            DataFormat::UInt16 => 2,
            DataFormat::Float32 => 4,
        }
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Result<Self> {
        match code {
            1 => Ok(DataFormat::UInt8),
            2 => Ok(DataFormat::UInt16),
            3 => Ok(DataFormat::Float32),
            c => Err(VktError::UnknownFormatCode(c)),
        }
    }

    /// Largest stored integer for integer formats.
    pub fn max_int(self) -> Option<u32> {
        match self {
            DataFormat::UInt8 => Some(255),
            DataFormat::UInt16 => Some(65535),
            DataFormat::Float32 => None,
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            DataFormat::UInt8 => "u8",
            DataFormat::UInt16 => "u16",
            DataFormat::Float32 => "f32",
        }
    }
}

impl std::str::FromStr for DataFormat {
    type Err = VktError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "u8" | "uint8" => Ok(DataFormat::UInt8),
            "u16" | "uint16" => Ok(DataFormat::UInt16),
            "f32" | "float32" => Ok(DataFormat::Float32),
            _ => Err(VktError::invalid(format!("unknown data format '{s}'"))),
        }
    }
}

/// Linear map between stored cells and application values `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoxelMapping<T> {
    pub lo: T,
    pub hi: T,
}

impl<T: Scalar> VoxelMapping<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(VktError::invalid(format!("degenerate voxel mapping [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn unit() -> Self {
        Self { lo: T::zero(), hi: T::one() }
    }

    /// `clamp((v - lo) / (hi - lo), 0, 1)`.
    #[inline]
    pub fn normalize(&self, v: T) -> T {
        ((v - self.lo) / (self.hi - self.lo)).clamp01()
    }

    #[inline]
    pub fn denormalize(&self, t: T) -> T {
        self.lo + t * (self.hi - self.lo)
    }

    /// Stored representation of `v` in `format`, little-endian, written to `out`.
    #[inline]
    pub fn encode(&self, format: DataFormat, v: T, out: &mut [u8]) {
        match format {
            DataFormat::UInt8 => out[0] = self.quantize(v, 255.0) as u8,
            DataFormat::UInt16 => out[..2].copy_from_slice(&(self.quantize(v, 65535.0) as u16).to_le_bytes()),
            DataFormat::Float32 => out[..4].copy_from_slice(&v.as_f32().to_le_bytes()),
        }
    }

    #[inline]
    fn quantize(&self, v: T, max_int: f64) -> u32 {
        // round() rounds half away from zero
        (self.normalize(v) * T::lit(max_int)).round().to_u32().unwrap_or(0)
    }

    /// Mapped value of the stored cell at the start of `bytes`.
    #[inline]
    pub fn decode(&self, format: DataFormat, bytes: &[u8]) -> T {
        match format {
            DataFormat::UInt8 => self.lo + T::lit(bytes[0] as f64) / T::lit(255.0) * (self.hi - self.lo),
            DataFormat::UInt16 => {
                let s = u16::from_le_bytes([bytes[0], bytes[1]]);
                self.lo + T::lit(s as f64) / T::lit(65535.0) * (self.hi - self.lo)
            }
            DataFormat::Float32 => T::lit(f32::from_le_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]) as f64),
        }
    }

    pub fn cast<U: Scalar>(&self) -> VoxelMapping<U> {
        VoxelMapping { lo: U::lit(self.lo.as_f64()), hi: U::lit(self.hi.as_f64()) }
    }
}
