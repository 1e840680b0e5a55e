//! Ranking tables, overlaps between them, tightly-knit-community flags, and
//! the key-class verdict.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::extract::ClassModel;
use crate::graph::{CouplingGraph, NodeId};

pub const DEFAULT_TOP_N: usize = 15;
pub const DEFAULT_KEY_PERCENTILE: f64 = 99.0;
pub const DEFAULT_KEY_MIN_METRICS: usize = 3;
pub const DEFAULT_SELF_REF_THRESHOLD: usize = 5;

#[derive(Debug, Error, PartialEq)]
pub enum RankingError {
    #[error("tables have different lengths ({a} vs {b}); truncate both to the same top-k")]
    MismatchedK { a: usize, b: usize },
    #[error("metric {metric} covers a different class set than {reference}")]
    InconsistentClasses { metric: String, reference: String },
    #[error("key-class percentile must be within [0, 100], got {0}")]
    Percentile(f64),
    #[error("key-class metric count must be within 1..=5, got {0}")]
    MinMetrics(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankRow {
    pub rank: usize,
    pub node: NodeId,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingTable {
    pub metric: String,
    pub rows: Vec<RankRow>,
}

impl RankingTable {
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// 1-based position of `name`, if it made the table.
    pub fn position(&self, name: &str) -> Option<usize> {
        self.rows
            .iter()
            .position(|r| r.node.as_str() == name)
            .map(|p| p + 1)
    }

    pub fn names(&self) -> impl Iterator<Item = &NodeId> {
        self.rows.iter().map(|r| &r.node)
    }
}

/// Descending by value, ties by ascending name; `None` keeps every row.
pub fn rank(metric: &str, values: &BTreeMap<NodeId, f64>, top_n: Option<usize>) -> RankingTable {
    let mut entries: Vec<(&NodeId, f64)> = values.iter().map(|(k, v)| (k, *v)).collect();
    // BTreeMap iteration is already name-ordered, so a stable sort keeps ties by name
    entries.sort_by(|a, b| b.1.total_cmp(&a.1));
    let limit = top_n.unwrap_or(entries.len());
    RankingTable {
        metric: metric.to_string(),
        rows: entries
            .into_iter()
            .take(limit)
            .enumerate()
            .map(|(i, (node, value))| RankRow {
                rank: i + 1,
                node: node.clone(),
                value,
            })
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlapRow {
    pub node: NodeId,
    pub position_a: usize,
    pub position_b: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlapReport {
    pub metric_a: String,
    pub metric_b: String,
    pub rows: Vec<OverlapRow>,
}

/// Classes present in both tables with their positions, ordered as in `a`.
pub fn overlap(a: &RankingTable, b: &RankingTable) -> Result<OverlapReport, RankingError> {
    if a.k() != b.k() {
        return Err(RankingError::MismatchedK { a: a.k(), b: b.k() });
    }
    let in_b: BTreeMap<&NodeId, usize> = b.rows.iter().map(|r| (&r.node, r.rank)).collect();
    let rows = a
        .rows
        .iter()
        .filter_map(|r| {
            in_b.get(&r.node).map(|&pos_b| OverlapRow {
                node: r.node.clone(),
                position_a: r.rank,
                position_b: pos_b,
            })
        })
        .collect();
    Ok(OverlapReport {
        metric_a: a.metric.clone(),
        metric_b: b.metric.clone(),
        rows,
    })
}

/// `100 * (number of strictly smaller values) / (number of values)`.
pub fn percentile_ranks(values: &BTreeMap<NodeId, f64>) -> BTreeMap<NodeId, f64> {
    let mut sorted: Vec<f64> = values.values().copied().collect();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    values
        .iter()
        .map(|(k, &v)| {
            let below = sorted.partition_point(|&x| x < v);
            (k.clone(), 100.0 * below as f64 / n)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TkcEntry {
    pub node: NodeId,
    pub static_self_fields: usize,
    pub in_normal_top: bool,
    pub in_reverse_top: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TkcReport {
    pub threshold: usize,
    pub flagged: Vec<TkcEntry>,
}

impl TkcReport {
    pub fn is_flagged(&self, name: &str) -> bool {
        self.flagged.iter().any(|e| e.node.as_str() == name)
    }

    pub fn flagged_set(&self) -> BTreeSet<NodeId> {
        self.flagged.iter().map(|e| e.node.clone()).collect()
    }

    /// Flagged classes found in both the normal and reverse aggregation tops.
    pub fn in_both_tops(&self) -> Vec<&NodeId> {
        self.flagged
            .iter()
            .filter(|e| e.in_normal_top && e.in_reverse_top)
            .map(|e| &e.node)
            .collect()
    }
}

/// Flags classes that aggregate themselves through at least `threshold`
/// static fields of their own type (constant tables, enum constants).
pub fn tkc_flags(
    model: &ClassModel,
    aggregation: &CouplingGraph,
    normal_top: &RankingTable,
    reverse_top: &RankingTable,
    threshold: usize,
) -> TkcReport {
    let flagged = model
        .classes
        .iter()
        .filter(|(id, class)| {
            aggregation.has_edge(id.as_str(), id.as_str())
                && class.links.static_self_fields >= threshold
        })
        .map(|(id, class)| TkcEntry {
            node: id.clone(),
            static_self_fields: class.links.static_self_fields,
            in_normal_top: normal_top.position(id.as_str()).is_some(),
            in_reverse_top: reverse_top.position(id.as_str()).is_some(),
        })
        .collect();
    TkcReport { threshold, flagged }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KeyClassConfig {
    /// Percentile a metric must reach to count towards the verdict.
    pub percentile: f64,
    /// How many of the five metrics must reach it.
    pub min_metrics: usize,
}

impl Default for KeyClassConfig {
    fn default() -> Self {
        KeyClassConfig {
            percentile: DEFAULT_KEY_PERCENTILE,
            min_metrics: DEFAULT_KEY_MIN_METRICS,
        }
    }
}

impl KeyClassConfig {
    pub fn validate(&self) -> Result<(), RankingError> {
        if !(0.0..=100.0).contains(&self.percentile) {
            return Err(RankingError::Percentile(self.percentile));
        }
        if !(1..=KEY_METRICS.len()).contains(&self.min_metrics) {
            return Err(RankingError::MinMetrics(self.min_metrics));
        }
        Ok(())
    }
}

pub const KEY_METRICS: [&str; 5] = [
    "reverse-aggregation PG",
    "aggregation PG",
    "inheritance PG",
    "methods",
    "attributes",
];

/// The five per-class values the key-class rule looks at.
#[derive(Debug, Clone, Copy)]
pub struct KeyInputs<'a> {
    pub reverse_aggregation_pg: &'a BTreeMap<NodeId, f64>,
    pub aggregation_pg: &'a BTreeMap<NodeId, f64>,
    pub inheritance_pg: &'a BTreeMap<NodeId, f64>,
    pub methods: &'a BTreeMap<NodeId, f64>,
    pub attributes: &'a BTreeMap<NodeId, f64>,
}

impl<'a> KeyInputs<'a> {
    fn columns(&self) -> [&'a BTreeMap<NodeId, f64>; 5] {
        [
            self.reverse_aggregation_pg,
            self.aggregation_pg,
            self.inheritance_pg,
            self.methods,
            self.attributes,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeyClassEntry {
    pub node: NodeId,
    pub values: [f64; 5],
    pub percentiles: [f64; 5],
    pub metrics_met: usize,
    pub key: bool,
    pub tkc: bool,
}

impl KeyClassEntry {
    /// One line per metric that reached the threshold.
    pub fn evidence(&self, config: &KeyClassConfig) -> Vec<String> {
        KEY_METRICS
            .iter()
            .zip(self.values.iter().zip(&self.percentiles))
            .filter(|(_, (_, &p))| p >= config.percentile)
            .map(|(name, (v, p))| {
                format!(
                    "{name} = {} at percentile {}",
                    crate::format::sig(*v),
                    crate::format::sig(*p)
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KeyClassReport {
    pub config: KeyClassConfig,
    /// Every class, by name.
    pub entries: Vec<KeyClassEntry>,
}

impl KeyClassReport {
    /// KEY classes outside any tightly knit community, strongest first.
    pub fn key_classes(&self) -> Vec<&KeyClassEntry> {
        self.sorted(|e| e.key && !e.tkc)
    }

    /// KEY classes that are also TKC-flagged.
    pub fn tkc_key_classes(&self) -> Vec<&KeyClassEntry> {
        self.sorted(|e| e.key && e.tkc)
    }

    pub fn entry(&self, name: &str) -> Option<&KeyClassEntry> {
        self.entries.iter().find(|e| e.node.as_str() == name)
    }

    fn sorted(&self, keep: impl Fn(&KeyClassEntry) -> bool) -> Vec<&KeyClassEntry> {
        let mut v: Vec<&KeyClassEntry> = self.entries.iter().filter(|e| keep(e)).collect();
        v.sort_by(|a, b| b.metrics_met.cmp(&a.metrics_met).then(a.node.cmp(&b.node)));
        v
    }

    /// Re-derives each verdict from the stored percentiles.
    pub fn verify(&self) -> bool {
        self.entries.iter().all(|e| {
            let met = e
                .percentiles
                .iter()
                .filter(|&&p| p >= self.config.percentile)
                .count();
            met == e.metrics_met && e.key == (met >= self.config.min_metrics)
        })
    }
}

/// A class is KEY when at least `min_metrics` of its five metrics sit at or
/// above the configured percentile.
pub fn key_classes(
    inputs: &KeyInputs,
    tkc: &BTreeSet<NodeId>,
    config: &KeyClassConfig,
) -> Result<KeyClassReport, RankingError> {
    config.validate()?;
    let columns = inputs.columns();
    let reference: BTreeSet<&NodeId> = columns[0].keys().collect();
    for (i, col) in columns.iter().enumerate().skip(1) {
        if col.len() != reference.len() || !col.keys().all(|k| reference.contains(k)) {
            return Err(RankingError::InconsistentClasses {
                metric: KEY_METRICS[i].to_string(),
                reference: KEY_METRICS[0].to_string(),
            });
        }
    }
    let percentiles: Vec<BTreeMap<NodeId, f64>> =
        columns.iter().map(|c| percentile_ranks(c)).collect();

    let entries = reference
        .into_iter()
        .map(|node| {
            let values: [f64; 5] = std::array::from_fn(|i| columns[i][node]);
            let pct: [f64; 5] = std::array::from_fn(|i| percentiles[i][node]);
            let met = pct.iter().filter(|&&p| p >= config.percentile).count();
            KeyClassEntry {
                node: node.clone(),
                values,
                percentiles: pct,
                metrics_met: met,
                key: met >= config.min_metrics,
                tkc: tkc.contains(node),
            }
        })
        .collect();
    Ok(KeyClassReport {
        config: *config,
        entries,
    })
}
