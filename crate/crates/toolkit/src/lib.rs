//! Scenario files, exports, the `pursuit` command line and the live arena.

pub mod arena;
pub mod cli;
pub mod export;
pub mod scenario;
