//! File formats, parallel census, random star-sets and plotting on top of
//! `kmarc-core`.

pub mod error;
pub mod format;
pub mod parallel;
pub mod sample;
pub mod svg;

pub use error::{CliError, CliResult};
