//! Directed simple graphs over class identifiers.
//!
//! A [`CouplingGraph`] is immutable once built. Nodes are kept in sorted name
//! order and every node is addressed internally by its position in that
//! order, so any sweep over `0..node_count()` visits nodes alphabetically.

mod dot;
mod io;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dot::to_dot;
pub use io::{format_graph, parse_graph, read_graph_file, write_graph_file};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid node name {0:?}")]
    InvalidName(String),

    #[error("edge {src} -> {dst} references a node that is not declared")]
    UnknownEndpoint { src: String, dst: String },

    #[error("unknown node {0}")]
    UnknownNode(String),

    #[error("unknown coupling kind {0:?}")]
    UnknownKind(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// Fully-qualified class name or any other opaque, non-empty label.
///
/// Names may not contain line breaks or the `->` edge marker, may not start
/// with `#`, and carry no surrounding whitespace, so that every node survives
/// the text interchange format unchanged.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct NodeId(String);

impl NodeId {
    pub fn new(name: impl Into<String>) -> Result<Self, GraphError> {
        let name = name.into();
        let valid = !name.is_empty()
            && name.trim() == name
            && !name.contains('\n')
            && !name.contains('\r')
            && !name.contains("->")
            && !name.starts_with('#');
        if valid {
            Ok(NodeId(name))
        } else {
            Err(GraphError::InvalidName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl TryFrom<String> for NodeId {
    type Error = GraphError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        NodeId::new(value)
    }
}

impl From<NodeId> for String {
    fn from(id: NodeId) -> String {
        id.0
    }
}

impl FromStr for NodeId {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        NodeId::new(s)
    }
}

impl std::borrow::Borrow<str> for NodeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingKind {
    Inheritance,
    Aggregation,
    Interface,
    Parameter,
    Return,
    Generic,
}

impl CouplingKind {
    pub const ALL: [CouplingKind; 6] = [
        CouplingKind::Inheritance,
        CouplingKind::Aggregation,
        CouplingKind::Interface,
        CouplingKind::Parameter,
        CouplingKind::Return,
        CouplingKind::Generic,
    ];

    /// The five kinds extracted from source declarations.
    pub const EXTRACTED: [CouplingKind; 5] = [
        CouplingKind::Inheritance,
        CouplingKind::Aggregation,
        CouplingKind::Interface,
        CouplingKind::Parameter,
        CouplingKind::Return,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CouplingKind::Inheritance => "inheritance",
            CouplingKind::Aggregation => "aggregation",
            CouplingKind::Interface => "interface",
            CouplingKind::Parameter => "parameter",
            CouplingKind::Return => "return",
            CouplingKind::Generic => "generic",
        }
    }
}

impl fmt::Display for CouplingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CouplingKind {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CouplingKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| GraphError::UnknownKind(s.to_string()))
    }
}

/// Directed simple graph of one coupling kind. Self-loops are allowed;
/// parallel edges are collapsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    kind: CouplingKind,
    reversed: bool,
    nodes: Vec<NodeId>,
    index: BTreeMap<NodeId, usize>,
    // sorted, deduplicated successor indices
    out: Vec<Vec<usize>>,
    edge_count: usize,
}

impl CouplingGraph {
    /// Builds a graph from a node list and an edge list. Duplicate nodes and
    /// duplicate edges collapse; isolated nodes are kept.
    pub fn build<N, E>(kind: CouplingKind, nodes: N, edges: E) -> Result<Self, GraphError>
    where
        N: IntoIterator<Item = NodeId>,
        E: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut nodes: Vec<NodeId> = nodes.into_iter().collect();
        nodes.sort();
        nodes.dedup();
        let index: BTreeMap<NodeId, usize> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();

        let mut out = vec![Vec::new(); nodes.len()];
        for (src, dst) in edges {
            match (index.get(&src), index.get(&dst)) {
                (Some(&s), Some(&d)) => out[s].push(d),
                _ => {
                    return Err(GraphError::UnknownEndpoint {
                        src: src.0,
                        dst: dst.0,
                    })
                }
            }
        }
        for succ in &mut out {
            succ.sort_unstable();
            succ.dedup();
        }
        let edge_count = out.iter().map(Vec::len).sum();

        Ok(CouplingGraph {
            kind,
            reversed: false,
            nodes,
            index,
            out,
            edge_count,
        })
    }

    /// Convenience constructor from string labels.
    pub fn from_names(
        kind: CouplingKind,
        nodes: &[&str],
        edges: &[(&str, &str)],
    ) -> Result<Self, GraphError> {
        let nodes = nodes
            .iter()
            .map(|n| NodeId::new(*n))
            .collect::<Result<Vec<_>, _>>()?;
        let edges = edges
            .iter()
            .map(|(a, b)| Ok((NodeId::new(*a)?, NodeId::new(*b)?)))
            .collect::<Result<Vec<_>, GraphError>>()?;
        CouplingGraph::build(kind, nodes, edges)
    }

    pub fn kind(&self) -> CouplingKind {
        self.kind
    }

    /// True when this graph is the transpose of an extracted graph
    /// (for aggregation: "is used by" rather than "uses").
    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    pub(crate) fn with_reversed(mut self, reversed: bool) -> Self {
        self.reversed = reversed;
        self
    }

    /// Label such as `aggregation` or `reverse-aggregation`.
    pub fn label(&self) -> String {
        if self.reversed {
            format!("reverse-{}", self.kind)
        } else {
            self.kind.to_string()
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes in ascending name order.
    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn node(&self, index: usize) -> &NodeId {
        &self.nodes[index]
    }

    /// Successor indices of the node at `index`, ascending.
    pub fn successors(&self, index: usize) -> &[usize] {
        &self.out[index]
    }

    pub fn has_edge(&self, src: &str, dst: &str) -> bool {
        match (self.index_of(src), self.index_of(dst)) {
            (Some(s), Some(d)) => self.out[s].binary_search(&d).is_ok(),
            _ => false,
        }
    }

    /// Edges ordered by (source name, target name).
    pub fn edges(&self) -> impl Iterator<Item = (&NodeId, &NodeId)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(move |(s, succ)| succ.iter().map(move |&d| (&self.nodes[s], &self.nodes[d])))
    }

    pub fn out_neighbors(&self, name: &str) -> Result<Vec<&NodeId>, GraphError> {
        let i = self
            .index_of(name)
            .ok_or_else(|| GraphError::UnknownNode(name.to_string()))?;
        Ok(self.out[i].iter().map(|&d| &self.nodes[d]).collect())
    }

    pub fn out_degree(&self, index: usize) -> usize {
        self.out[index].len()
    }

    /// In-degree of every node, indexed like [`nodes`](Self::nodes).
    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for succ in &self.out {
            for &d in succ {
                deg[d] += 1;
            }
        }
        deg
    }

    /// Reverses every edge. The reversed marker flips, so transposing twice
    /// gives back an identical graph.
    pub fn transpose(&self) -> CouplingGraph {
        let mut out = vec![Vec::new(); self.nodes.len()];
        for (s, succ) in self.out.iter().enumerate() {
            for &d in succ {
                out[d].push(s);
            }
        }
        // sources were visited in ascending order, so each list is sorted
        CouplingGraph {
            kind: self.kind,
            reversed: !self.reversed,
            nodes: self.nodes.clone(),
            index: self.index.clone(),
            out,
            edge_count: self.edge_count,
        }
    }

    /// Number of directed walks with exactly `depth` edges starting at `start`,
    /// found by explicit enumeration. Walks may revisit nodes and `P_0 = 1`.
    ///
    /// This is exponential in `depth` and meant as a reference for small
    /// graphs; it is not guarded against large inputs.
    pub fn count_paths(&self, start: &str, depth: usize) -> Result<u64, GraphError> {
        let start = self
            .index_of(start)
            .ok_or_else(|| GraphError::UnknownNode(start.to_string()))?;
        let mut count = 0u64;
        let mut stack = vec![(start, 0usize)];
        while let Some((node, len)) = stack.pop() {
            if len == depth {
                count += 1;
                continue;
            }
            for &next in &self.out[node] {
                stack.push((next, len + 1));
            }
        }
        Ok(count)
    }
}
