//! Command-line, JSON and fixture layer over `refbloch-core`.

pub mod catalog;
pub mod checks;
pub mod cli;
pub mod fixtures;
pub mod json;
pub mod parse;
pub mod samples;
pub mod suite;
