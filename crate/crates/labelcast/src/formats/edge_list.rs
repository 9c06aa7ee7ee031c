use std::fmt::Write;

use labelcast_core::graph::{Graph, GraphError, NodeId};

use super::{content_lines, parse_num, syntax, FormatError};

/// Parses `n <count> source <id>` followed by one `u v` pair per line.
pub fn parse_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines.next().ok_or(FormatError::Empty)?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let (n, source) = match tokens.as_slice() {
        ["n", count, "source", src] => (
            parse_num::<usize>(header_line, count, "a node count")?,
            parse_num::<NodeId>(header_line, src, "a source id")?,
        ),
        _ => {
            return Err(syntax(
                header_line,
                format!("unknown header {header:?}, expected `n <count> source <id>`"),
            ))
        }
    };
    let graph_err = |line, error| FormatError::Graph { line, error };
    if n == 0 {
        return Err(graph_err(header_line, GraphError::Empty));
    }
    if source >= n {
        return Err(graph_err(
            header_line,
            GraphError::SourceOutOfRange {
                node: source,
                node_count: n,
            },
        ));
    }

    let mut edges = Vec::new();
    for (line, content) in lines {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let [a, b] = tokens.as_slice() else {
            return Err(syntax(line, format!("expected `u v`, found {content:?}")));
        };
        let u: NodeId = parse_num(line, a, "a node id")?;
        let v: NodeId = parse_num(line, b, "a node id")?;
        if u >= n || v >= n {
            return Err(graph_err(
                line,
                GraphError::EndpointOutOfRange {
                    u,
                    v,
                    node_count: n,
                },
            ));
        }
        if u == v {
            return Err(graph_err(line, GraphError::SelfLoop(u)));
        }
        edges.push((u, v));
    }
    Graph::new(n, edges, source).map_err(|e| graph_err(header_line, e))
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {} source {}\n", g.node_count(), g.source());
    for &(u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
