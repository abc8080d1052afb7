//! File formats, threaded drivers and the command-line interface for
//! `circplane-core`.

pub mod cli;
pub mod formats;
pub mod parallel;
