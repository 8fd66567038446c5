use thiserror::Error;

use crate::geom::{Box3i, Vec3i};

pub type Result<T, E = VktError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum VktError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cell index {index:?} out of range for dims {dims:?}")]
    IndexOutOfRange { index: Vec3i, dims: Vec3i },
    #[error("allocation of {requested} bytes failed ({available} bytes available in device space)")]
    AllocationFailure { requested: usize, available: usize },
    #[error("volume has no subgrids")]
    EmptyVolume,
    #[error("bad magic, not a native volume file")]
    BadMagic,
    #[error("payload truncated: expected {expected} bytes, got {actual}")]
    TruncatedPayload { expected: u64, actual: u64 },
    #[error("unknown data format code {0}")]
    UnknownFormatCode(u8),
    #[error("i/o failure: {0}")]
    IoFailure(#[from] std::io::Error),
    #[error("range {roi:?} out of bounds for dims {dims:?}")]
    RangeOutOfBounds { roi: Box3i, dims: Vec3i },
    #[error("data source is not seekable")]
    NotSeekable,
    #[error("size mismatch: expected {expected} bytes, got {actual}")]
    SizeMismatch { expected: u64, actual: u64 },
    #[error("range selects no cells")]
    EmptyRange,
    #[error("range {0:?} is not a slab spanning exactly two axes")]
    NotASlab(Box3i),
    #[error("dimension mismatch: {0:?} vs {1:?}")]
    DimsMismatch(Vec3i, Vec3i),
    #[error("kernel dims {0:?} must be odd on every axis")]
    EvenKernelDims(Vec3i),
    #[error("lookup table handle {0} does not resolve")]
    UnresolvedLut(u64),
    #[error("resource handle {0} does not resolve")]
    UnresolvedHandle(u64),
    #[error("iso-surface rendering needs at least one iso value")]
    NoIsoValues,
}

impl VktError {
    /// Stable variant name, used for error reports and by foreign bindings.
    pub fn name(&self) -> &'static str {
        match self {
            VktError::InvalidArgument(_) => "InvalidArgument",
            VktError::IndexOutOfRange { .. } => "IndexOutOfRange",
            VktError::AllocationFailure { .. } => "AllocationFailure",
            VktError::EmptyVolume => "EmptyVolume",
            VktError::BadMagic => "BadMagic",
            VktError::TruncatedPayload { .. } => "TruncatedPayload",
            VktError::UnknownFormatCode(_) => "UnknownFormatCode",
            VktError::IoFailure(_) => "IoFailure",
            VktError::RangeOutOfBounds { .. } => "RangeOutOfBounds",
            VktError::NotSeekable => "NotSeekable",
            VktError::SizeMismatch { .. } => "SizeMismatch",
            VktError::EmptyRange => "EmptyRange",
            VktError::NotASlab(_) => "NotASlab",
            VktError::DimsMismatch(..) => "DimsMismatch",
            VktError::EvenKernelDims(_) => "EvenKernelDims",
            VktError::UnresolvedLut(_) => "UnresolvedLut",
            VktError::UnresolvedHandle(_) => "UnresolvedHandle",
            VktError::NoIsoValues => "NoIsoValues",
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        VktError::InvalidArgument(msg.into())
    }
}
