//! File formats, parallel sweeps and the `contentcast` command line on top
//! of [`contentcast_core`].

pub mod cli;
pub mod crowd_io;
pub mod error;
pub mod experiment;
pub mod fig7;
pub mod files;
pub mod pet_io;
pub mod scenario;
pub mod sim;
pub mod sweep;

pub use error::{CliError, Result};
