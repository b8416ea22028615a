//! `lvlab`: scenario runner and report writer for the Lotka-Volterra
//! discretization experiments in `lv-core`.
//!
//! A [`scenario::Scenario`] is built either from command-line flags or from a
//! named [`scenario::Preset`], then [`run::run_scenario`] simulates every start,
//! runs the requested analyses and writes a CSV per trajectory, a JSON report
//! and an SVG phase portrait.

pub mod csv_io;
pub mod error;
pub mod report;
pub mod run;
pub mod scenario;
pub mod svg;

pub use error::{ConfigError, RunError};
