//! Text format, CSV output and command-line front end for `nsbound-core`.

pub mod cli;
pub mod csv_out;
pub mod example;
pub mod input;
pub mod report;
pub mod text;

pub use input::{load, parse_input};
pub use text::{format_matrix, format_poly, parse_matrix, parse_poly, ParseError, ParseErrorKind, SourceSpan};
