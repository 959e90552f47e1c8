//! Command implementations behind the `loadfpca` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod model;
