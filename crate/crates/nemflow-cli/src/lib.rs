//! Scenario configuration, orchestration of solves and data export for
//! the `nemflow` command line tool.

pub mod config;
pub mod error;
pub mod export;
pub mod run;
pub mod validate;

pub use config::ScenarioConfig;
pub use error::{CliError, Result};
