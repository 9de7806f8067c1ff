//! Command-line harness around `opdc-core`: flat config files, the shared
//! CSV schema, and order-preserving parallel grid execution.

pub mod config;
pub mod csvout;
pub mod run;
