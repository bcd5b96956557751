//! Command-line front end: native text formats, solver dispatch,
//! certificate checking, generators, benchmarks and renders.

pub mod format;
pub mod render;
pub mod run;

pub use format::{parse_instance, write_instance, EmbeddingFile, Metadata, ParseError};
pub use run::{solve, CliError, Mode, SolveOptions};
