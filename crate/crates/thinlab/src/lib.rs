//! File formats, configuration, parallel drivers and rendering for the
//! `thinlab` command line. The mathematics lives in `thinlab_core`.

pub mod config;
pub mod encode;
pub mod json;
pub mod pipeline;
pub mod report;
pub mod scan;
pub mod svg;

pub use config::{PslMode, RunConfig};
