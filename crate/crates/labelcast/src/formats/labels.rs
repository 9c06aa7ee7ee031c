use std::fmt::Write;

use labelcast_core::graph::NodeId;
use labelcast_core::labelling::{Label, LabelSet, Scheme};

use super::{content_lines, parse_num, syntax, FormatError};

/// `scheme <name>` then `<id> <bits>` per node, bits most significant first.
pub fn write_labels(labels: &LabelSet) -> String {
    let mut out = format!("scheme {}\n", labels.scheme());
    for u in 0..labels.len() {
        writeln!(out, "{u} {}", labels.bits(u)).unwrap();
    }
    out
}

/// Parses a label file; every node `0..n` must appear once with exactly the
/// scheme's bit width.
pub fn parse_labels(text: &str) -> Result<LabelSet, FormatError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or(FormatError::Empty)?;
    let scheme: Scheme = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["scheme", name] => {
            name.parse()
                .map_err(|e: labelcast_core::labelling::UnknownScheme| {
                    syntax(header_line, e.to_string())
                })?
        }
        _ => return Err(syntax(header_line, "expected `scheme <OACK3|LS1|LSACK2>`")),
    };
    let width = scheme.width();

    let mut entries: Vec<Option<Label>> = Vec::new();
    for (line, content) in lines {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [id, bits] = tokens.as_slice() else {
            return Err(syntax(line, "expected `<id> <bits>`"));
        };
        let id: NodeId = parse_num(line, id, "a node id")?;
        if bits.len() != width {
            return Err(syntax(
                line,
                format!("{scheme} labels have {width} bit(s), found {bits:?}"),
            ));
        }
        let label = Label::parse_bits(bits)
            .ok_or_else(|| syntax(line, format!("invalid bit string {bits:?}")))?;
        if entries.len() <= id {
            entries.resize(id + 1, None);
        }
        if entries[id].replace(label).is_some() {
            return Err(syntax(line, format!("node {id} labelled twice")));
        }
    }
    let labels = entries
        .into_iter()
        .enumerate()
        .map(|(u, l)| l.ok_or_else(|| syntax(header_line, format!("node {u} has no label"))))
        .collect::<Result<Vec<_>, _>>()?;
    LabelSet::new(scheme, labels).map_err(|error| FormatError::Labels {
        line: header_line,
        error,
    })
}
