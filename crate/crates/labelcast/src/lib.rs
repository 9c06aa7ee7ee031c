//! File formats, body-area-network channel data, the `labelcast` command line
//! and the generated-instance self-test, on top of `labelcast-core`.

pub mod cli;
pub mod formats;
pub mod ingestion;
pub mod selftest;

pub use labelcast_core as core;
