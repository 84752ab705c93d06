//! Parameter scans and the command-line front end for two-photon
//! beam-splitter interference.
//!
//! The numerics live in [`biphoton_core`], re-exported here as [`core`].

pub use biphoton_core as core;

pub mod cli;
pub mod format;
pub mod scans;
pub mod validation;
