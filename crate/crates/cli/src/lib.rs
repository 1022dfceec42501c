//! Library side of the `wittbox` command: instance-file parsing and the
//! command implementations, kept separate from argument handling so tests
//! can drive them directly.

pub mod commands;
pub mod error;
pub mod instance;

pub use commands::Output;
pub use error::CliError;
pub use instance::{parse_instance, render_instance, InstanceFile};
