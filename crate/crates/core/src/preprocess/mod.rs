//! Raw quarterly levels to stationary, outlier-clamped model inputs.

mod frame;
mod hampel;
mod period;
mod transform;

pub use frame::{build_frame, RawColumn, RawTable, SeriesFrame};
pub use hampel::{hampel_filter, Filtered, HampelConfig};
pub use period::Period;
pub use transform::{apply_transform, TransformKind, TransformSpec};
