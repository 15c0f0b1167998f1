//! Command-line front end: instance files, result bundles, SVG rendering and
//! random instance generation.

pub mod bundle;
pub mod commands;
pub mod generate;
pub mod instance_file;
pub mod render;

pub use bundle::ResultBundle;
pub use commands::{run, Cli};
pub use instance_file::InstanceFile;
