//! Plain-text file formats: edge lists, formulas, separations, label files
//! and JSON-lines traces. Every parser reports the 1-based line it choked on.

mod edge_list;
mod formula;
mod labels;
mod separation;
mod trace;

pub use edge_list::{parse_edge_list, write_edge_list};
pub use formula::{parse_formula, write_formula};
pub use labels::{parse_labels, write_labels};
pub use separation::{parse_separation, write_separation};
pub use trace::{trace_records, trace_to_jsonl};

use labelcast_core::graph::GraphError;
use labelcast_core::labelling::LabelError;
use labelcast_core::separability::FormulaError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {error}")]
    Graph { line: usize, error: GraphError },
    #[error("line {line}: {error}")]
    Formula { line: usize, error: FormulaError },
    #[error("line {line}: {error}")]
    Labels { line: usize, error: LabelError },
    #[error("empty input: expected a header line")]
    Empty,
}

pub(crate) fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// Non-blank lines with `#` comments stripped, paired with their line number.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

pub(crate) fn parse_num<T: std::str::FromStr>(
    line: usize,
    token: &str,
    what: &str,
) -> Result<T, FormatError> {
    token
        .parse()
        .map_err(|_| syntax(line, format!("expected {what}, found {token:?}")))
}
