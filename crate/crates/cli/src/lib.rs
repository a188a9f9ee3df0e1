//! Library side of the command-line crate: configuration, the JSON
//! schema and the check suites, shared by the binary and its tests.

pub mod checks;
pub mod config;
pub mod json;
