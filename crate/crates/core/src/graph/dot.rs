use std::fmt::Write as _;

use super::CouplingGraph;

/// Graphviz export carrying the same nodes and edges as the text format.
pub fn to_dot(g: &CouplingGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", g.label());
    for n in g.nodes() {
        let _ = writeln!(out, "  \"{}\";", escape(n.as_str()));
    }
    for (s, d) in g.edges() {
        let _ = writeln!(
            out,
            "  \"{}\" -> \"{}\";",
            escape(s.as_str()),
            escape(d.as_str())
        );
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CouplingKind;

    #[test]
    fn dot_lists_nodes_and_edges() {
        let g =
            CouplingGraph::from_names(CouplingKind::Inheritance, &["A", "B", "C"], &[("A", "B")])
                .unwrap();
        let dot = to_dot(&g);
        assert!(dot.starts_with("digraph \"inheritance\" {"));
        assert!(dot.contains("  \"C\";\n"));
        assert!(dot.contains("  \"A\" -> \"B\";\n"));
        assert!(dot.ends_with("}\n"));
    }
}
