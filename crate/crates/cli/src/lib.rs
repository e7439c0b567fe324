//! Scenario parsing and execution for the `vcosmos` binary.

pub mod bundled;
pub mod runner;
pub mod scenario;

pub use runner::{run, Options};
pub use scenario::Scenario;
