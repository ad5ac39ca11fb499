//! Command-line workbench for `gaussapprox`: body specs, JSONL records, CSV
//! export and the acceptance suite.

pub mod acceptance;
pub mod app;
pub mod body_spec;
pub mod config;
pub mod export;
pub mod record;

pub use app::run;
