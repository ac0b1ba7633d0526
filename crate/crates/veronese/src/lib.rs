//! Parallel driver, data files and command line on top of `veronese-core`.

#![forbid(unsafe_code)]

pub mod checks;
pub mod cli;
pub mod runner;
pub mod store;

pub use veronese_core as core;
