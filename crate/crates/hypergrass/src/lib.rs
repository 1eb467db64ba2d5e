//! IO, formats, parallel drivers and the command line for `hypergrass-core`.

pub mod cli;
pub mod formats;
pub mod par;
