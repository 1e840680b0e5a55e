//! Countable class metrics and corpus summaries.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::extract::{build_coupling_graph, count_members, ClassModel};
use crate::format::{self, JsonNumber};
use crate::graph::{CouplingKind, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("cannot summarize an empty corpus")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Degree {
    pub out: usize,
    #[serde(rename = "in")]
    pub in_: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ClassMetrics {
    pub methods: usize,
    pub attributes: usize,
    pub constructors: usize,
    pub depth: usize,
    pub degrees: BTreeMap<CouplingKind, Degree>,
}

impl ClassMetrics {
    pub fn degree(&self, kind: CouplingKind) -> Degree {
        self.degrees.get(&kind).copied().unwrap_or_default()
    }
}

pub fn collect_metrics(model: &ClassModel) -> BTreeMap<NodeId, ClassMetrics> {
    let mut out: BTreeMap<NodeId, ClassMetrics> = model
        .classes
        .iter()
        .map(|(id, class)| {
            let counts = count_members(&class.decl);
            let metrics = ClassMetrics {
                methods: counts.methods,
                attributes: counts.attributes,
                constructors: counts.constructors,
                depth: model.depth.get(id).copied().unwrap_or(0),
                degrees: BTreeMap::new(),
            };
            (id.clone(), metrics)
        })
        .collect();

    for kind in CouplingKind::EXTRACTED {
        let g = build_coupling_graph(model, kind);
        let ins = g.in_degrees();
        for (i, node) in g.nodes().iter().enumerate() {
            let m = out.get_mut(node).expect("graph nodes are model classes");
            m.degrees.insert(
                kind,
                Degree {
                    out: g.out_degree(i),
                    in_: ins[i],
                },
            );
        }
    }
    out
}

/// Checks every recorded degree against a freshly built graph.
pub fn check_degrees(
    model: &ClassModel,
    metrics: &BTreeMap<NodeId, ClassMetrics>,
) -> Result<(), String> {
    for kind in CouplingKind::EXTRACTED {
        let g = build_coupling_graph(model, kind);
        let ins = g.in_degrees();
        for (i, node) in g.nodes().iter().enumerate() {
            let d = metrics
                .get(node)
                .ok_or_else(|| format!("no metrics for {node}"))?
                .degree(kind);
            if d.out != g.out_degree(i) || d.in_ != ins[i] {
                return Err(format!("{kind} degree of {node} disagrees with the graph"));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spread {
    pub max: usize,
    /// Lower median: no interpolation between the middle pair.
    pub median: usize,
    pub mean: f64,
}

impl Spread {
    pub fn of(values: &[usize]) -> Option<Spread> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_unstable();
        Some(Spread {
            max: *sorted.last().expect("non-empty"),
            median: sorted[(sorted.len() - 1) / 2],
            mean: sorted.iter().sum::<usize>() as f64 / sorted.len() as f64,
        })
    }
}

pub fn lower_median(values: &[usize]) -> Option<usize> {
    Spread::of(values).map(|s| s.median)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryStats {
    pub classes: usize,
    pub methods: Spread,
    pub attributes: Spread,
    pub depth: Spread,
    pub constructors: Spread,
}

impl SummaryStats {
    pub fn mean_constructors(&self) -> f64 {
        self.constructors.mean
    }

    fn rows(&self) -> [(&'static str, &Spread); 4] {
        [
            ("Methods", &self.methods),
            ("Attributes", &self.attributes),
            ("Depth", &self.depth),
            ("Constructors", &self.constructors),
        ]
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::from("| Metric | Max | Median | Mean |\n|---|---:|---:|---:|\n");
        for (name, s) in self.rows() {
            let _ = writeln!(
                out,
                "| {name} | {} | {} | {} |",
                s.max,
                s.median,
                format::fixed(s.mean, 3)
            );
        }
        let _ = write!(
            out,
            "\nMean constructors per class: {}\n",
            format::fixed(self.mean_constructors(), 3)
        );
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("metric,max,median,mean\n");
        for (name, s) in self.rows() {
            let _ = writeln!(
                out,
                "{name},{},{},{}",
                s.max,
                s.median,
                format::fixed(s.mean, 3)
            );
        }
        out
    }

    pub fn to_json_doc(&self) -> SummaryDoc {
        SummaryDoc {
            classes: self.classes,
            rows: self
                .rows()
                .into_iter()
                .map(|(metric, s)| SummaryRow {
                    metric,
                    max: s.max,
                    median: s.median,
                    mean: JsonNumber::fixed(s.mean, 3),
                })
                .collect(),
            mean_constructors: JsonNumber::fixed(self.mean_constructors(), 3),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub metric: &'static str,
    pub max: usize,
    pub median: usize,
    pub mean: JsonNumber,
}

/// JSON form of [`SummaryStats`] with numbers rendered as in the tables.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryDoc {
    pub classes: usize,
    pub rows: Vec<SummaryRow>,
    pub mean_constructors: JsonNumber,
}

pub fn summarize(metrics: &BTreeMap<NodeId, ClassMetrics>) -> Result<SummaryStats, MetricsError> {
    let column = |f: fn(&ClassMetrics) -> usize| metrics.values().map(f).collect::<Vec<_>>();
    let spread = |f| Spread::of(&column(f)).ok_or(MetricsError::Empty);
    Ok(SummaryStats {
        classes: metrics.len(),
        methods: spread(|m| m.methods)?,
        attributes: spread(|m| m.attributes)?,
        depth: spread(|m| m.depth)?,
        constructors: spread(|m| m.constructors)?,
    })
}
