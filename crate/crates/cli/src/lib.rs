//! Front end for the strobe tools: configuration, figure presets,
//! CSV/JSON/SVG output and the acceptance suite.

pub mod acceptance;
pub mod config;
pub mod emit;
pub mod presets;
pub mod run;
pub mod svg;

pub use config::{Cli, ExperimentConfig, Format, Mode, Settings};
pub use run::{run, CliError, Status};
