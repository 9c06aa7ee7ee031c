use std::fmt::Write;

use labelcast_core::graph::NodeId;
use labelcast_core::separability::Separation;

use super::{content_lines, parse_num, syntax, FormatError};

/// One line per level: `level <i> part1: <ids> part2: <ids>`.
pub fn write_separation(sep: &Separation) -> String {
    let mut out = String::new();
    let join = |ids: &[NodeId]| ids.iter().map(|u| format!(" {u}")).collect::<String>();
    for (i, p) in sep.levels() {
        writeln!(
            out,
            "level {i} part1:{} part2:{}",
            join(&p.first),
            join(&p.second)
        )
        .unwrap();
    }
    out
}

pub fn parse_separation(text: &str) -> Result<Separation, FormatError> {
    let mut parts = Vec::new();
    for (line, content) in content_lines(text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let (Some(&"level"), Some(level)) = (tokens.first(), tokens.get(1)) else {
            return Err(syntax(
                line,
                "expected `level <i> part1: <ids> part2: <ids>`",
            ));
        };
        let level: usize = parse_num(line, level, "a level number")?;
        if level != parts.len() + 1 {
            return Err(syntax(
                line,
                format!("expected level {}, found {level}", parts.len() + 1),
            ));
        }
        let rest = &tokens[2..];
        let split = rest.iter().position(|&t| t == "part2:");
        let (Some(&"part1:"), Some(split)) = (rest.first(), split) else {
            return Err(syntax(line, "expected `part1:` then `part2:`"));
        };
        let ids = |toks: &[&str]| -> Result<Vec<NodeId>, FormatError> {
            toks.iter()
                .map(|t| parse_num(line, t, "a node id"))
                .collect()
        };
        parts.push((ids(&rest[1..split])?, ids(&rest[split + 1..])?));
    }
    Ok(Separation::new(parts))
}
