//! Potential Gain over a coupling graph.
//!
//! For every node `n` the engine builds the normalized walk table
//!
//! ```text
//! R_0(n) = 1
//! R_d(n) = sum_{y in Out(n)} R_{d-1}(y) / sum_{j in N} R_{d-1}(j)
//! ```
//!
//! and the discounted sum `Pg(n) = sum_{k=1..d_max} R_k(n) * f(k)` with
//! `f(k) = 1/k` (reciprocal) or `f(k) = gamma^k` (decay).
//!
//! Once a whole row `R_d` is zero every later row is zero as well, so the
//! sweep stops there and records the last non-zero depth as `truncated_at`.
//! On a DAG this makes the result exact after at most "longest path" rows.
//!
//! All sums run over nodes in ascending name order, so results are
//! bit-reproducible for a given graph and configuration.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::{self, JsonNumber};
use crate::graph::{CouplingGraph, NodeId};

pub const DEFAULT_D_MAX: usize = 15;
pub const DEFAULT_GAMMA: f64 = 0.5;

#[derive(Debug, Error, PartialEq)]
pub enum PgError {
    #[error("potential gain is undefined on an empty graph")]
    EmptyGraph,
    #[error("discount is only defined for depth >= 1")]
    ZeroDepth,
    #[error("gamma must lie strictly between 0 and 1, got {0}")]
    Gamma(f64),
    #[error("d_max must be at least 1")]
    DMax,
    #[error("unknown discount {0:?} (expected reciprocal or decay)")]
    UnknownDiscount(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Discount {
    #[default]
    Reciprocal,
    Decay,
}

impl fmt::Display for Discount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Discount::Reciprocal => "reciprocal",
            Discount::Decay => "decay",
        })
    }
}

impl FromStr for Discount {
    type Err = PgError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "reciprocal" => Ok(Discount::Reciprocal),
            "decay" => Ok(Discount::Decay),
            other => Err(PgError::UnknownDiscount(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PgConfig {
    pub discount: Discount,
    /// Only read by [`Discount::Decay`], but always validated.
    pub gamma: f64,
    pub d_max: usize,
}

impl Default for PgConfig {
    fn default() -> Self {
        PgConfig {
            discount: Discount::Reciprocal,
            gamma: DEFAULT_GAMMA,
            d_max: DEFAULT_D_MAX,
        }
    }
}

impl PgConfig {
    pub fn new(discount: Discount, gamma: f64, d_max: usize) -> Result<Self, PgError> {
        let config = PgConfig {
            discount,
            gamma,
            d_max,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn reciprocal(d_max: usize) -> Result<Self, PgError> {
        PgConfig::new(Discount::Reciprocal, DEFAULT_GAMMA, d_max)
    }

    pub fn decay(gamma: f64, d_max: usize) -> Result<Self, PgError> {
        PgConfig::new(Discount::Decay, gamma, d_max)
    }

    pub fn validate(&self) -> Result<(), PgError> {
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(PgError::Gamma(self.gamma));
        }
        if self.d_max < 1 {
            return Err(PgError::DMax);
        }
        Ok(())
    }
}

/// The discount `f(d)` applied to row `d` of the walk table.
pub fn discount(config: &PgConfig, depth: usize) -> Result<f64, PgError> {
    if depth == 0 {
        return Err(PgError::ZeroDepth);
    }
    Ok(match config.discount {
        Discount::Reciprocal => 1.0 / depth as f64,
        Discount::Decay => config.gamma.powi(depth as i32),
    })
}

/// Rows `R_0 ..= R_truncated_at`, each indexed like the graph's node list.
#[derive(Debug, Clone, PartialEq)]
pub struct RTable {
    rows: Vec<Vec<f64>>,
}

impl RTable {
    /// Last depth with a non-zero row; every deeper row is zero.
    pub fn truncated_at(&self) -> usize {
        self.rows.len() - 1
    }

    /// `R_depth` at node index `node`; zero for any depth past truncation.
    pub fn get(&self, depth: usize, node: usize) -> f64 {
        self.rows.get(depth).map_or(0.0, |row| row[node])
    }

    pub fn row(&self, depth: usize) -> Option<&[f64]> {
        self.rows.get(depth).map(Vec::as_slice)
    }
}

pub fn compute_r(g: &CouplingGraph, d_max: usize) -> Result<RTable, PgError> {
    if g.is_empty() {
        return Err(PgError::EmptyGraph);
    }
    let n = g.node_count();
    let mut rows = vec![vec![1.0; n]];
    for _depth in 1..=d_max {
        let prev = rows.last().expect("R_0 present");
        let total: f64 = prev.iter().sum();
        let next: Vec<f64> = (0..n)
            .map(|i| g.successors(i).iter().map(|&y| prev[y]).sum::<f64>() / total)
            .collect();
        if next.iter().all(|&v| v == 0.0) {
            break;
        }
        rows.push(next);
    }
    Ok(RTable { rows })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PgResult {
    label: String,
    config: PgConfig,
    nodes: Vec<NodeId>,
    table: RTable,
    pg: Vec<f64>,
}

pub fn potential_gain(g: &CouplingGraph, config: &PgConfig) -> Result<PgResult, PgError> {
    config.validate()?;
    let table = compute_r(g, config.d_max)?;
    let weights = (1..=table.truncated_at())
        .map(|k| discount(config, k))
        .collect::<Result<Vec<_>, _>>()?;
    let pg = (0..g.node_count())
        .map(|i| {
            weights
                .iter()
                .enumerate()
                .map(|(k, w)| table.get(k + 1, i) * w)
                .sum()
        })
        .collect();
    Ok(PgResult {
        label: g.label(),
        config: *config,
        nodes: g.nodes().to_vec(),
        table,
        pg,
    })
}

impl PgResult {
    /// Graph label, e.g. `reverse-aggregation`.
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn config(&self) -> &PgConfig {
        &self.config
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn table(&self) -> &RTable {
        &self.table
    }

    pub fn truncated_at(&self) -> usize {
        self.table.truncated_at()
    }

    pub fn pg(&self, name: &str) -> Option<f64> {
        self.position(name).map(|i| self.pg[i])
    }

    /// `R_depth(name)`; zero past truncation.
    pub fn r(&self, depth: usize, name: &str) -> Option<f64> {
        self.position(name).map(|i| self.table.get(depth, i))
    }

    pub fn pg_values(&self) -> &[f64] {
        &self.pg
    }

    pub fn values(&self) -> BTreeMap<NodeId, f64> {
        self.nodes
            .iter()
            .cloned()
            .zip(self.pg.iter().copied())
            .collect()
    }

    fn position(&self, name: &str) -> Option<usize> {
        self.nodes.binary_search_by(|n| n.as_str().cmp(name)).ok()
    }

    /// Re-derives every Pg value from the stored table and checks the
    /// documented invariants. Returns a description of the first violation.
    pub fn verify(&self) -> Result<(), String> {
        let t = self.table.truncated_at();
        if self.table.rows[0].iter().any(|&v| v != 1.0) {
            return Err(format!("{}: R_0 is not identically 1", self.label));
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let mut sum = 0.0;
            for k in 1..=t {
                let r = self.table.get(k, i);
                if r < 0.0 || !r.is_finite() {
                    return Err(format!("{}: R_{k}({node}) = {r}", self.label));
                }
                sum += r * discount(&self.config, k).map_err(|e| e.to_string())?;
            }
            if sum != self.pg[i] {
                return Err(format!(
                    "{}: Pg({node}) = {} but the table gives {sum}",
                    self.label, self.pg[i]
                ));
            }
        }
        Ok(())
    }

    /// CSV with columns `node,pg,r_1..r_T`.
    pub fn to_csv(&self) -> String {
        let t = self.truncated_at();
        let mut out = String::from("node,pg");
        for k in 1..=t {
            let _ = write!(out, ",r_{k}");
        }
        out.push('\n');
        for (i, node) in self.nodes.iter().enumerate() {
            out.push_str(&format::csv_field(node.as_str()));
            out.push(',');
            out.push_str(&format::sig(self.pg[i]));
            for k in 1..=t {
                out.push(',');
                out.push_str(&format::sig(self.table.get(k, i)));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Row<'a> {
            node: &'a str,
            pg: JsonNumber,
            r: Vec<JsonNumber>,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            graph: &'a str,
            discount: Discount,
            gamma: JsonNumber,
            d_max: usize,
            truncated_at: usize,
            nodes: Vec<Row<'a>>,
        }
        let t = self.truncated_at();
        let doc = Doc {
            graph: &self.label,
            discount: self.config.discount,
            gamma: JsonNumber::sig(self.config.gamma),
            d_max: self.config.d_max,
            truncated_at: t,
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(i, n)| Row {
                    node: n.as_str(),
                    pg: JsonNumber::sig(self.pg[i]),
                    r: (1..=t)
                        .map(|k| JsonNumber::sig(self.table.get(k, i)))
                        .collect(),
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::CouplingKind;

    fn graph(nodes: &[&str], edges: &[(&str, &str)]) -> CouplingGraph {
        CouplingGraph::from_names(CouplingKind::Aggregation, nodes, edges).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn discount_values() {
        let rec = PgConfig::default();
        assert_eq!(discount(&rec, 1).unwrap(), 1.0);
        assert_eq!(discount(&rec, 4).unwrap(), 0.25);
        let dec = PgConfig::decay(0.5, 10).unwrap();
        assert_eq!(discount(&dec, 3).unwrap(), 0.125);
        assert_eq!(discount(&rec, 0), Err(PgError::ZeroDepth));
    }

    #[test]
    fn config_validation() {
        assert_eq!(PgConfig::decay(1.0, 3), Err(PgError::Gamma(1.0)));
        assert_eq!(PgConfig::decay(0.0, 3), Err(PgError::Gamma(0.0)));
        assert!(PgConfig::decay(f64::NAN, 3).is_err());
        assert_eq!(PgConfig::reciprocal(0), Err(PgError::DMax));
        assert_eq!("decay".parse::<Discount>().unwrap(), Discount::Decay);
        assert!("linear".parse::<Discount>().is_err());
    }

    #[test]
    fn chain_table() {
        let g = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let t = compute_r(&g, 15).unwrap();
        assert_eq!(t.row(1).unwrap(), &[1.0 / 3.0, 1.0 / 3.0, 0.0]);
        assert!(close(t.get(2, 0), 0.5));
        assert_eq!(t.get(2, 1), 0.0);
        assert_eq!(t.get(2, 2), 0.0);
        assert_eq!(t.truncated_at(), 2);
    }

    #[test]
    fn self_loop_table_is_all_ones() {
        let g = graph(&["a"], &[("a", "a")]);
        let t = compute_r(&g, 7).unwrap();
        assert_eq!(t.truncated_at(), 7);
        for d in 0..=7 {
            assert_eq!(t.get(d, 0), 1.0);
        }
    }

    #[test]
    fn star_truncates_after_one_row() {
        let g = graph(
            &["root", "l1", "l2", "l3"],
            &[("root", "l1"), ("root", "l2"), ("root", "l3")],
        );
        let t = compute_r(&g, 15).unwrap();
        let root = g.index_of("root").unwrap();
        assert!(close(t.get(1, root), 0.75));
        assert_eq!(t.get(1, g.index_of("l1").unwrap()), 0.0);
        assert_eq!(t.get(2, root), 0.0);
        assert_eq!(t.truncated_at(), 1);
    }

    #[test]
    fn empty_graph_is_rejected() {
        let g = graph(&[], &[]);
        assert_eq!(compute_r(&g, 3), Err(PgError::EmptyGraph));
        assert_eq!(
            potential_gain(&g, &PgConfig::default()),
            Err(PgError::EmptyGraph)
        );
    }

    #[test]
    fn chain_potential_gain() {
        let g = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let r = potential_gain(&g, &PgConfig::reciprocal(2).unwrap()).unwrap();
        assert!(close(r.pg("a").unwrap(), 7.0 / 12.0));
        assert!(close(r.pg("b").unwrap(), 1.0 / 3.0));
        assert_eq!(r.pg("c").unwrap(), 0.0);
        r.verify().unwrap();
    }

    #[test]
    fn self_loop_partial_sums() {
        let g = graph(&["a"], &[("a", "a")]);
        let rec = potential_gain(&g, &PgConfig::reciprocal(4).unwrap()).unwrap();
        assert!(close(rec.pg("a").unwrap(), 25.0 / 12.0));
        let dec = potential_gain(&g, &PgConfig::decay(0.5, 3).unwrap()).unwrap();
        assert!(close(dec.pg("a").unwrap(), 0.875));
    }

    #[test]
    fn no_edges_means_zero_everywhere() {
        let g = graph(&["a", "b"], &[]);
        let r = potential_gain(&g, &PgConfig::default()).unwrap();
        assert_eq!(r.truncated_at(), 0);
        assert_eq!(r.pg_values(), &[0.0, 0.0]);
        assert_eq!(r.to_csv(), "node,pg\na,0\nb,0\n");
    }

    #[test]
    fn r_past_truncation_is_zero() {
        let g = graph(&["a", "b"], &[("a", "b")]);
        let r = potential_gain(&g, &PgConfig::default()).unwrap();
        assert_eq!(r.r(0, "a"), Some(1.0));
        assert_eq!(r.r(1, "a"), Some(0.5));
        assert_eq!(r.r(9, "a"), Some(0.0));
        assert_eq!(r.r(1, "zz"), None);
    }

    #[test]
    fn csv_and_json_agree() {
        let g = graph(&["a", "b", "c"], &[("a", "b"), ("b", "c")]);
        let r = potential_gain(&g, &PgConfig::default()).unwrap();
        assert_eq!(
            r.to_csv(),
            "node,pg,r_1,r_2\n\
             a,0.583333333333,0.333333333333,0.5\n\
             b,0.333333333333,0.333333333333,0\n\
             c,0,0,0\n"
        );
        let json: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(json["graph"], "aggregation");
        assert_eq!(json["truncated_at"], 2);
        assert_eq!(json["nodes"][0]["pg"].as_f64().unwrap(), 0.583333333333);
        assert_eq!(json["nodes"][0]["r"][1].as_f64().unwrap(), 0.5);
    }
}
