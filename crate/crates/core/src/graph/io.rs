//! Text interchange format for coupling graphs.
//!
//! ```text
//! kind: aggregation
//! nodes:
//! com.acme.A
//! com.acme.B
//! edges:
//! com.acme.A -> com.acme.B
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. A transposed graph
//! carries a `reversed` suffix on the kind line (`kind: aggregation reversed`).

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{CouplingGraph, CouplingKind, GraphError, NodeId};

enum Section {
    Header,
    Nodes,
    Edges,
}

pub fn parse_graph(text: &str) -> Result<CouplingGraph, GraphError> {
    let mut kind = None;
    let mut reversed = false;
    let mut section = Section::Header;
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut declared = std::collections::BTreeSet::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| GraphError::Parse {
            line: line_no,
            message,
        };

        match section {
            Section::Header => {
                if kind.is_none() {
                    let rest = line
                        .strip_prefix("kind:")
                        .ok_or_else(|| parse_err("expected `kind: <kind>`".into()))?;
                    let mut words = rest.split_whitespace();
                    let name = words
                        .next()
                        .ok_or_else(|| parse_err("missing coupling kind".into()))?;
                    kind = Some(name.parse::<CouplingKind>()?);
                    match words.next() {
                        None => {}
                        Some("reversed") => reversed = true,
                        Some(other) => {
                            return Err(parse_err(format!("unexpected token {other:?}")))
                        }
                    }
                    if words.next().is_some() {
                        return Err(parse_err("trailing tokens after kind".into()));
                    }
                } else if line == "nodes:" {
                    section = Section::Nodes;
                } else {
                    return Err(parse_err("expected `nodes:`".into()));
                }
            }
            Section::Nodes => {
                if line == "edges:" {
                    section = Section::Edges;
                    continue;
                }
                let id = NodeId::new(line).map_err(|e| parse_err(e.to_string()))?;
                declared.insert(id.clone());
                nodes.push(id);
            }
            Section::Edges => {
                let (src, dst) = line
                    .split_once("->")
                    .ok_or_else(|| parse_err("expected `<src> -> <dst>`".into()))?;
                let src = NodeId::new(src.trim()).map_err(|e| parse_err(e.to_string()))?;
                let dst = NodeId::new(dst.trim()).map_err(|e| parse_err(e.to_string()))?;
                for end in [&src, &dst] {
                    if !declared.contains(end) {
                        return Err(parse_err(format!("undeclared node {end}")));
                    }
                }
                edges.push((src, dst));
            }
        }
    }

    let kind = kind.ok_or(GraphError::Parse {
        line: 1,
        message: "missing `kind:` header".into(),
    })?;
    if matches!(section, Section::Header) {
        return Err(GraphError::Parse {
            line: text.lines().count().max(1),
            message: "missing `nodes:` section".into(),
        });
    }
    Ok(CouplingGraph::build(kind, nodes, edges)?.with_reversed(reversed))
}

pub fn format_graph(g: &CouplingGraph) -> String {
    let mut out = String::new();
    let suffix = if g.is_reversed() { " reversed" } else { "" };
    let _ = writeln!(out, "kind: {}{}", g.kind(), suffix);
    out.push_str("nodes:\n");
    for n in g.nodes() {
        let _ = writeln!(out, "{n}");
    }
    out.push_str("edges:\n");
    for (s, d) in g.edges() {
        let _ = writeln!(out, "{s} -> {d}");
    }
    out
}

pub fn read_graph_file(path: impl AsRef<Path>) -> Result<CouplingGraph, GraphError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| GraphError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_graph(&text)
}

pub fn write_graph_file(g: &CouplingGraph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    let path = path.as_ref();
    fs::write(path, format_graph(g)).map_err(|e| GraphError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
