//! Front end for `cycletrace`: family files, subcommands and reports.

pub mod args;
pub mod commands;
pub mod corpus;
pub mod family;
pub mod report;

pub use args::{execute, Cli};
