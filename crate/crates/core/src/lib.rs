//! Statevector simulation of classical-to-quantum feature maps, a data
//! re-uploading variational classifier, and a benchmark harness around them.

pub mod bench;
pub mod data;
pub mod encoding;
mod error;
pub mod metrics;
pub mod model;
mod parallel;
pub mod statevector;
pub mod train;

pub use error::{Error, Result};
