//! Executes chart queries against in-memory databases.
//!
//! [`execute`] runs a parsed query through join, filter, bin, group,
//! aggregate, and sort stages and returns a [`VisData`]: the chart
//! type, the x values, the numeric y values, an optional series label
//! per point, and whether the query fixed the point order.
//!
//! [`exec_equal`] compares two results the way a chart reader would:
//! positionally when either side ordered its points, as multisets
//! otherwise, with a small relative tolerance on y.

mod binning;
mod engine;
mod error;
mod visdata;

pub use binning::bin_label;
pub use engine::execute;
pub use error::ExecError;
pub use visdata::{exec_equal, ChartTypeTag, VisData, Y_RELATIVE_TOLERANCE};
