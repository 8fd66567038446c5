//! Volume manipulation and analysis algorithms.
//!
//! Every algorithm migrates its inputs to the device of the calling thread's
//! [`ExecutionPolicy`](crate::ExecutionPolicy) and runs on the matching worker pool.

pub mod analysis;
pub mod clahe;
pub mod core;
pub mod filter;
pub mod transform;

pub use self::analysis::{
    brick_decompose, compute_aggregates, compute_aggregates_range, compute_histogram, compute_histogram_range,
    Aggregates, Brick, Histogram,
};
pub use self::clahe::{clahe_equalize, ClaheParams};
pub use self::core::{
    arithmetic, arithmetic_range, budget_dims, crop, crop_hierarchical, delete, fill, fill_range, resample, transform,
    transform_range, zoom, ArithmeticOp,
};
pub use self::filter::{apply_filter, Kernel};
pub use self::transform::{flip, rotate, rotate_range, scale, scale_range, Axis};
