//! Command-line driver for `allmach-core`: run files, snapshots and the
//! analysis subcommands.
//!
//! The binary is a thin layer over [`commands`]; everything it writes goes
//! through [`output`] and [`snapshot`], so the same files can be produced
//! from library code.

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;
pub mod snapshot;

pub use config::{load_config, parse_config, parse_config_with, RunConfig, RunFile};
pub use output::{Header, BUILD_ID, OUTPUT_ROOT_VAR};
pub use snapshot::{write_snapshot, Snapshot, SnapshotFormat};
