//! Command-line front end for the argmine pipeline.

pub mod commands;
pub mod docs;
pub mod fetch;
pub mod serve;
