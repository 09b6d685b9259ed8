//! IO, file formats and the batch pipeline around `famedkit-core`: parsing
//! gluing-table documents, JSON reports, the census runner and everything
//! the `famedkit` binary does.

pub mod census;
pub mod formats;
pub mod pipeline;
pub mod report;

pub use formats::{parse_triangulation, write_triangulation, FormatError};
pub use pipeline::{analyze, Analysis, CheckOptions};
pub use report::{GeometricStatus, ResultRecord};
