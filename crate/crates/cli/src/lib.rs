//! Library surface of the `consult` binary: the problem-document schema,
//! CSV exporters, and the subcommand implementations.

pub mod commands;
pub mod document;
pub mod export;
