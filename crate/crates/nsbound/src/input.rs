//! Reading `.mat` and `.poly` files.

use std::path::{Path, PathBuf};

use nsbound_core::PolyMatrix;

use crate::text::{looks_like_matrix, parse_matrix, parse_poly, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}:{error}", path.display())]
    Parse { path: PathBuf, text: String, error: ParseError },
}

impl InputError {
    /// The message plus, for parse errors, the offending line with a caret under the span.
    pub fn render(&self) -> String {
        match self {
            InputError::Io { .. } => self.to_string(),
            InputError::Parse { text, error, .. } => {
                let line = text.lines().nth(error.span.line - 1).unwrap_or("");
                let width = text[error.span.start..error.span.end].chars().count().max(1);
                format!("{self}\n  {line}\n  {}{}", " ".repeat(error.span.column - 1), "^".repeat(width))
            }
        }
    }
}

/// Parses text holding either a matrix or a single polynomial (read as a `1×1` matrix).
pub fn parse_input(text: &str) -> Result<PolyMatrix, ParseError> {
    if looks_like_matrix(text) {
        parse_matrix(text)
    } else {
        parse_poly(text, None).map(PolyMatrix::scalar)
    }
}

pub fn load(path: &Path) -> Result<PolyMatrix, InputError> {
    let text = std::fs::read_to_string(path).map_err(|source| InputError::Io { path: path.into(), source })?;
    parse_input(&text).map_err(|error| InputError::Parse { path: path.into(), text, error })
}
