//! The full analysis of one class model and its Markdown, CSV and JSON
//! renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extract::{build_coupling_graph, ClassModel};
use crate::format::{self, JsonNumber};
use crate::graph::{CouplingKind, NodeId};
use crate::metrics::{self, ClassMetrics, MetricsError, SummaryDoc, SummaryStats};
use crate::pg::{potential_gain, Discount, PgConfig, PgError, PgResult};
use crate::ranking::{
    self, KeyClassConfig, KeyClassEntry, KeyClassReport, KeyInputs, OverlapReport, RankingError,
    RankingTable, TkcReport, KEY_METRICS,
};
use crate::smells::{self, escape_cell, SmellConfig, SmellError, SmellFinding};

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("the model contains no classes")]
    Empty,
    #[error(transparent)]
    Pg(#[from] PgError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Ranking(#[from] RankingError),
    #[error(transparent)]
    Smell(#[from] SmellError),
    #[error("top_n must be at least 1")]
    TopN,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Sections {
    pub summary: bool,
    pub rankings: bool,
    pub overlaps: bool,
    pub tkc: bool,
    pub key: bool,
    pub smells: bool,
}

impl Default for Sections {
    fn default() -> Self {
        Sections {
            summary: true,
            rankings: true,
            overlaps: true,
            tkc: true,
            key: true,
            smells: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    pub pg: PgConfig,
    pub top_n: usize,
    pub key: KeyClassConfig,
    pub self_ref_threshold: usize,
    pub smells: SmellConfig,
    pub sections: Sections,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            pg: PgConfig::default(),
            top_n: ranking::DEFAULT_TOP_N,
            key: KeyClassConfig::default(),
            self_ref_threshold: ranking::DEFAULT_SELF_REF_THRESHOLD,
            smells: SmellConfig::default(),
            sections: Sections::default(),
        }
    }
}

/// The graphs every report ranks, in table order.
pub const RANKED_GRAPHS: [(CouplingKind, bool); 3] = [
    (CouplingKind::Aggregation, true),
    (CouplingKind::Aggregation, false),
    (CouplingKind::Inheritance, false),
];

#[derive(Debug, Clone)]
pub struct Report {
    pub config: ReportConfig,
    pub metrics: BTreeMap<NodeId, ClassMetrics>,
    pub summary: SummaryStats,
    /// Reverse aggregation, aggregation, inheritance.
    pub pg: Vec<PgResult>,
    /// Top-N tables in the same order as `pg`.
    pub tables: Vec<RankingTable>,
    /// Reverse vs normal aggregation, then aggregation vs inheritance.
    pub overlaps: Vec<OverlapReport>,
    pub tkc: TkcReport,
    pub key: KeyClassReport,
    pub smells: Vec<SmellFinding>,
}

/// Runs every stage on `model` and checks the cross-stage invariants.
pub fn build_report(model: &ClassModel, config: &ReportConfig) -> Result<Report, ReportError> {
    if model.is_empty() {
        return Err(ReportError::Empty);
    }
    if config.top_n == 0 {
        return Err(ReportError::TopN);
    }
    config.pg.validate()?;
    config.key.validate()?;
    config.smells.validate()?;

    let metrics = metrics::collect_metrics(model);
    metrics::check_degrees(model, &metrics).map_err(ReportError::Invariant)?;
    let summary = metrics::summarize(&metrics)?;

    let aggregation = build_coupling_graph(model, CouplingKind::Aggregation);
    let mut pg = Vec::new();
    for (kind, reversed) in RANKED_GRAPHS {
        let g = build_coupling_graph(model, kind);
        let g = if reversed { g.transpose() } else { g };
        let result = potential_gain(&g, &config.pg)?;
        result.verify().map_err(ReportError::Invariant)?;
        pg.push(result);
    }
    let pg_values: Vec<BTreeMap<NodeId, f64>> = pg.iter().map(PgResult::values).collect();
    let tables: Vec<RankingTable> = pg_values
        .iter()
        .zip(KEY_METRICS)
        .map(|(v, name)| ranking::rank(name, v, Some(config.top_n)))
        .collect();
    let overlaps = vec![
        ranking::overlap(&tables[0], &tables[1])?,
        ranking::overlap(&tables[1], &tables[2])?,
    ];
    let tkc = ranking::tkc_flags(
        model,
        &aggregation,
        &tables[1],
        &tables[0],
        config.self_ref_threshold,
    );

    let methods: BTreeMap<NodeId, f64> = metrics
        .iter()
        .map(|(k, m)| (k.clone(), m.methods as f64))
        .collect();
    let attributes: BTreeMap<NodeId, f64> = metrics
        .iter()
        .map(|(k, m)| (k.clone(), m.attributes as f64))
        .collect();
    let inputs = KeyInputs {
        reverse_aggregation_pg: &pg_values[0],
        aggregation_pg: &pg_values[1],
        inheritance_pg: &pg_values[2],
        methods: &methods,
        attributes: &attributes,
    };
    let key = ranking::key_classes(&inputs, &tkc.flagged_set(), &config.key)?;
    if !key.verify() {
        return Err(ReportError::Invariant(
            "key verdicts disagree with percentiles".into(),
        ));
    }

    let smells = smells::detect_all(model, &metrics, &config.smells)?;
    if let Some(bad) = smells.iter().find(|f| !f.holds()) {
        return Err(ReportError::Invariant(format!(
            "{} finding on {} is not supported by its evidence",
            bad.smell, bad.class
        )));
    }

    Ok(Report {
        config: config.clone(),
        metrics,
        summary,
        pg,
        tables,
        overlaps,
        tkc,
        key,
        smells,
    })
}

fn pg_description(c: &PgConfig) -> String {
    match c.discount {
        Discount::Reciprocal => format!("reciprocal discount, d_max {}", c.d_max),
        Discount::Decay => format!(
            "decay discount with gamma {}, d_max {}",
            format::sig(c.gamma),
            c.d_max
        ),
    }
}

const CONVENTIONS: [&str; 4] = [
    "Methods exclude constructors and include every visibility, static or not.",
    "Attributes are declared fields only. Each enum constant counts as a static field of its enum.",
    "Constructors are declared constructors only; no implicit default is added.",
    "Depth is 0 for interfaces and java.lang.Object, 1 for a class whose superclass is outside the model.",
];

impl Report {
    pub fn classes(&self) -> usize {
        self.metrics.len()
    }

    pub fn to_markdown(&self) -> String {
        let c = &self.config;
        let mut out = String::from("# Key-class report\n\n");
        let _ = writeln!(out, "- Classes analysed: {}", self.classes());
        let _ = writeln!(out, "- Potential Gain: {}", pg_description(&c.pg));
        let depths: Vec<String> = self
            .pg
            .iter()
            .map(|r| format!("{} {}", r.label(), r.truncated_at()))
            .collect();
        let _ = writeln!(out, "- Truncation depth: {}", depths.join(", "));
        let _ = writeln!(
            out,
            "- Key-class rule: percentile >= {} in at least {} of {} metrics",
            format::sig(c.key.percentile),
            c.key.min_metrics,
            KEY_METRICS.len()
        );
        out.push_str("\nCounting conventions:\n\n");
        for line in CONVENTIONS {
            let _ = writeln!(out, "- {line}");
        }

        let s = &c.sections;
        if s.summary {
            out.push_str("\n## Summary\n\n");
            out.push_str(&self.summary.to_markdown());
        }
        if s.rankings {
            for t in &self.tables {
                let _ = write!(out, "\n## {} by {}\n\n", top_label(c.top_n), t.metric);
                out.push_str(&ranking_markdown(t, Some(&self.metrics)));
            }
        }
        if s.overlaps {
            for o in &self.overlaps {
                let _ = write!(out, "\n## Overlap of {} and {}\n\n", o.metric_a, o.metric_b);
                out.push_str(&overlap_markdown(o));
            }
        }
        if s.tkc {
            out.push_str("\n## Tightly knit communities\n\n");
            out.push_str(&self.tkc_markdown());
        }
        if s.key {
            out.push_str("\n## Key classes\n\n");
            out.push_str(&self.key_markdown(&self.key.key_classes()));
            out.push_str("\n## Key classes in tightly knit communities\n\n");
            out.push_str(&self.key_markdown(&self.key.tkc_key_classes()));
        }
        if s.smells {
            out.push_str("\n## Smells\n\n");
            out.push_str(&smells::findings_to_markdown(&self.smells));
        }
        out
    }

    fn tkc_markdown(&self) -> String {
        let t = &self.tkc;
        let mut out = format!(
            "Flag: aggregation self-loop and at least {} static fields of the class's own type.\n\n",
            t.threshold
        );
        if t.flagged.is_empty() {
            out.push_str("No class is flagged.\n");
            return out;
        }
        out.push_str(
            "| Classname | Static self-typed fields | In aggregation top | In reverse-aggregation top |\n\
             |---|---:|---|---|\n",
        );
        for e in &t.flagged {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} |",
                escape_cell(e.node.as_str()),
                e.static_self_fields,
                yes_no(e.in_normal_top),
                yes_no(e.in_reverse_top)
            );
        }
        let both: Vec<&str> = t.in_both_tops().iter().map(|n| n.as_str()).collect();
        let _ = write!(
            out,
            "\nFlagged and in both aggregation tops: {}\n",
            if both.is_empty() {
                "none".to_string()
            } else {
                both.join(", ")
            }
        );
        out
    }

    fn key_markdown(&self, entries: &[&KeyClassEntry]) -> String {
        if entries.is_empty() {
            return "None.\n".to_string();
        }
        let mut out = String::from("| Classname | Metrics met |");
        for m in KEY_METRICS {
            let _ = write!(out, " {m} percentile |");
        }
        out.push_str("\n|---|---:|---:|---:|---:|---:|---:|\n");
        for e in entries {
            let _ = write!(
                out,
                "| {} | {} |",
                escape_cell(e.node.as_str()),
                e.metrics_met
            );
            for p in e.percentiles {
                let _ = write!(out, " {} |", format::sig(p));
            }
            out.push('\n');
        }
        out.push('\n');
        for e in entries {
            let _ = writeln!(
                out,
                "- {}: {}",
                e.node,
                e.evidence(&self.key.config).join("; ")
            );
        }
        out
    }

    /// One `(file name, contents)` pair per table.
    pub fn csv_files(&self) -> Vec<(String, String)> {
        let s = &self.config.sections;
        let mut files = Vec::new();
        if s.summary {
            files.push(("summary.csv".to_string(), self.summary.to_csv()));
        }
        if s.rankings {
            for t in &self.tables {
                files.push((
                    format!("top-{}.csv", slug(&t.metric)),
                    ranking_csv(t, Some(&self.metrics)),
                ));
            }
        }
        if s.overlaps {
            for o in &self.overlaps {
                files.push((
                    format!("overlap-{}-vs-{}.csv", slug(&o.metric_a), slug(&o.metric_b)),
                    overlap_csv(o),
                ));
            }
        }
        if s.tkc {
            let mut csv =
                String::from("class,static_self_fields,in_aggregation_top,in_reverse_top\n");
            for e in &self.tkc.flagged {
                let _ = writeln!(
                    csv,
                    "{},{},{},{}",
                    format::csv_field(e.node.as_str()),
                    e.static_self_fields,
                    e.in_normal_top,
                    e.in_reverse_top
                );
            }
            files.push(("tkc.csv".to_string(), csv));
        }
        if s.key {
            let mut csv = String::from("class,key,tkc,metrics_met");
            for m in KEY_METRICS {
                let _ = write!(csv, ",{}_percentile", slug(m).replace('-', "_"));
            }
            csv.push('\n');
            for e in &self.key.entries {
                let _ = write!(
                    csv,
                    "{},{},{},{}",
                    format::csv_field(e.node.as_str()),
                    e.key,
                    e.tkc,
                    e.metrics_met
                );
                for p in e.percentiles {
                    let _ = write!(csv, ",{}", format::sig(p));
                }
                csv.push('\n');
            }
            files.push(("key-classes.csv".to_string(), csv));
        }
        if s.smells {
            files.push((
                "smells.csv".to_string(),
                smells::findings_to_csv(&self.smells),
            ));
        }
        files
    }

    /// All CSV tables in one stream, each preceded by a `# file` line.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (i, (name, body)) in self.csv_files().into_iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            let _ = writeln!(out, "# {name}");
            out.push_str(&body);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let c = &self.config;
        let s = &c.sections;
        let doc = JsonReport {
            classes: self.classes(),
            pg: JsonPg {
                discount: c.pg.discount,
                gamma: JsonNumber::sig(c.pg.gamma),
                d_max: c.pg.d_max,
                truncated_at: self
                    .pg
                    .iter()
                    .map(|r| (r.label().to_string(), r.truncated_at()))
                    .collect(),
            },
            top_n: c.top_n,
            key_rule: JsonKeyRule {
                percentile: JsonNumber::sig(c.key.percentile),
                min_metrics: c.key.min_metrics,
            },
            conventions: CONVENTIONS.to_vec(),
            summary: s.summary.then(|| self.summary.to_json_doc()),
            rankings: s.rankings.then(|| {
                self.tables
                    .iter()
                    .map(|t| json_table(t, Some(&self.metrics)))
                    .collect()
            }),
            overlaps: s.overlaps.then_some(&self.overlaps),
            tkc: s.tkc.then(|| JsonTkc {
                report: &self.tkc,
                in_both_tops: self.tkc.in_both_tops(),
            }),
            key_classes: s.key.then(|| {
                self.key
                    .entries
                    .iter()
                    .map(|e| JsonKey {
                        class: e.node.as_str(),
                        key: e.key,
                        tkc: e.tkc,
                        metrics_met: e.metrics_met,
                        values: e.values.iter().map(|&v| JsonNumber::sig(v)).collect(),
                        percentiles: e.percentiles.iter().map(|&p| JsonNumber::sig(p)).collect(),
                        evidence: e.evidence(&c.key),
                    })
                    .collect()
            }),
            smells: s.smells.then_some(&self.smells),
        };
        let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
        text.push('\n');
        text
    }
}

fn class_cells(metrics: &BTreeMap<NodeId, ClassMetrics>, node: &NodeId) -> [usize; 4] {
    let m = &metrics[node];
    [m.methods, m.attributes, m.constructors, m.depth]
}

/// A ranking as a Markdown table; member columns appear when `metrics` is
/// given.
pub fn ranking_markdown(
    t: &RankingTable,
    metrics: Option<&BTreeMap<NodeId, ClassMetrics>>,
) -> String {
    let mut out = match metrics {
        Some(_) => format!(
            "| Rank | Classname | Methods | Attributes | Constructors | Depth | {} |\n\
             |---:|---|---:|---:|---:|---:|---:|\n",
            t.metric
        ),
        None => format!("| Rank | Classname | {} |\n|---:|---|---:|\n", t.metric),
    };
    for r in &t.rows {
        let _ = write!(out, "| {} | {} |", r.rank, escape_cell(r.node.as_str()));
        if let Some(m) = metrics {
            let [a, b, c, d] = class_cells(m, &r.node);
            let _ = write!(out, " {a} | {b} | {c} | {d} |");
        }
        let _ = writeln!(out, " {} |", format::sig(r.value));
    }
    out
}

pub fn ranking_csv(t: &RankingTable, metrics: Option<&BTreeMap<NodeId, ClassMetrics>>) -> String {
    let mut out = String::from(match metrics {
        Some(_) => "rank,class,methods,attributes,constructors,depth,value\n",
        None => "rank,class,value\n",
    });
    for r in &t.rows {
        let _ = write!(out, "{},{},", r.rank, format::csv_field(r.node.as_str()));
        if let Some(m) = metrics {
            let [a, b, c, d] = class_cells(m, &r.node);
            let _ = write!(out, "{a},{b},{c},{d},");
        }
        let _ = writeln!(out, "{}", format::sig(r.value));
    }
    out
}

fn overlap_markdown(o: &OverlapReport) -> String {
    if o.rows.is_empty() {
        return "No class appears in both tables.\n".to_string();
    }
    let mut out = format!(
        "| Classname | {} | {} |\n|---|---:|---:|\n",
        o.metric_a, o.metric_b
    );
    for r in &o.rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} |",
            escape_cell(r.node.as_str()),
            r.position_a,
            r.position_b
        );
    }
    out
}

fn overlap_csv(o: &OverlapReport) -> String {
    let mut out = String::from("class,position_a,position_b\n");
    for r in &o.rows {
        let _ = writeln!(
            out,
            "{},{},{}",
            format::csv_field(r.node.as_str()),
            r.position_a,
            r.position_b
        );
    }
    out
}

/// `usize::MAX` stands for "every class".
fn top_label(n: usize) -> String {
    if n == usize::MAX {
        "All classes".to_string()
    } else {
        format!("Top {n}")
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn slug(metric: &str) -> String {
    metric.to_lowercase().replace(' ', "-")
}

#[derive(Serialize)]
struct JsonReport<'a> {
    classes: usize,
    pg: JsonPg,
    top_n: usize,
    key_rule: JsonKeyRule,
    conventions: Vec<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<SummaryDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rankings: Option<Vec<JsonTable<'a>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    overlaps: Option<&'a Vec<OverlapReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tkc: Option<JsonTkc<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    key_classes: Option<Vec<JsonKey<'a>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    smells: Option<&'a Vec<SmellFinding>>,
}

#[derive(Serialize)]
struct JsonPg {
    discount: Discount,
    gamma: JsonNumber,
    d_max: usize,
    truncated_at: BTreeMap<String, usize>,
}

#[derive(Serialize)]
struct JsonKeyRule {
    percentile: JsonNumber,
    min_metrics: usize,
}

#[derive(Serialize)]
struct JsonTable<'a> {
    metric: &'a str,
    rows: Vec<JsonRankRow<'a>>,
}

#[derive(Serialize)]
struct JsonRankRow<'a> {
    rank: usize,
    class: &'a str,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    members: Option<JsonMembers>,
    value: JsonNumber,
}

#[derive(Serialize)]
struct JsonMembers {
    methods: usize,
    attributes: usize,
    constructors: usize,
    depth: usize,
}

fn json_table<'a>(
    t: &'a RankingTable,
    metrics: Option<&BTreeMap<NodeId, ClassMetrics>>,
) -> JsonTable<'a> {
    JsonTable {
        metric: &t.metric,
        rows: t
            .rows
            .iter()
            .map(|r| JsonRankRow {
                rank: r.rank,
                class: r.node.as_str(),
                members: metrics.map(|m| {
                    let [methods, attributes, constructors, depth] = class_cells(m, &r.node);
                    JsonMembers {
                        methods,
                        attributes,
                        constructors,
                        depth,
                    }
                }),
                value: JsonNumber::sig(r.value),
            })
            .collect(),
    }
}

pub fn ranking_json(t: &RankingTable, metrics: Option<&BTreeMap<NodeId, ClassMetrics>>) -> String {
    let mut text = serde_json::to_string_pretty(&json_table(t, metrics)).expect("table serializes");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct JsonTkc<'a> {
    #[serde(flatten)]
    report: &'a TkcReport,
    in_both_tops: Vec<&'a NodeId>,
}

#[derive(Serialize)]
struct JsonKey<'a> {
    class: &'a str,
    key: bool,
    tkc: bool,
    metrics_met: usize,
    values: Vec<JsonNumber>,
    percentiles: Vec<JsonNumber>,
    evidence: Vec<String>,
}
