//! Command-line front end.
//!
//! Exit codes: 0 success, 1 input or usage error, 2 empty input, 3 internal
//! invariant violation.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::extract::{build_coupling_graph, build_model, load_sources, ClassModel, ExtractError};
use crate::format;
use crate::graph::{format_graph, read_graph_file, to_dot, CouplingGraph, CouplingKind};
use crate::metrics::collect_metrics;
use crate::pg::{potential_gain, Discount, PgConfig, PgResult};
use crate::ranking::{self, KeyClassConfig};
use crate::report::{self, build_report, ReportConfig, ReportError, Sections, RANKED_GRAPHS};
use crate::smells::{self, SmellConfig};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl fmt::Display) -> Self {
        CliError {
            code: 1,
            message: message.to_string(),
        }
    }

    pub fn empty(message: impl fmt::Display) -> Self {
        CliError {
            code: 2,
            message: message.to_string(),
        }
    }

    pub fn invariant(message: impl fmt::Display) -> Self {
        CliError {
            code: 3,
            message: message.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ReportError> for CliError {
    fn from(e: ReportError) -> Self {
        match e {
            ReportError::Empty => CliError::empty(e),
            ReportError::Invariant(_) => CliError::invariant(e),
            other => CliError::input(other),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "keyclass",
    version,
    about = "Potential Gain coupling analysis and key-class detection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a source tree and write the class model (model.json).
    Analyze(AnalyzeArgs),
    /// Write coupling graphs in the interchange format or as DOT.
    Graph(GraphArgs),
    /// Compute Potential Gain for each requested graph.
    Pg(PgArgs),
    /// Rank classes by Potential Gain.
    Rank(RankArgs),
    /// Produce the full report.
    Report(ReportArgs),
    /// Run the smell detectors.
    Smells(SmellsArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Root of a Java source tree.
    #[arg(long, value_name = "DIR")]
    pub source: Option<PathBuf>,
    /// Graph in the interchange format.
    #[arg(long, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Class model written by `analyze`.
    #[arg(long, value_name = "FILE")]
    pub model: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// TOML file with defaults for any flag; flags win.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Write output files into DIR instead of stdout.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Skip unparseable source files with a warning.
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Markdown,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Text,
    Dot,
}

/// A coupling kind, possibly transposed (`reverse-aggregation`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphSel {
    pub kind: CouplingKind,
    pub reversed: bool,
}

impl FromStr for GraphSel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (reversed, name) = match s.strip_prefix("reverse-") {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let kind = CouplingKind::from_str(name).map_err(|e| e.to_string())?;
        Ok(GraphSel { kind, reversed })
    }
}

impl fmt::Display for GraphSel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.reversed {
            f.write_str("reverse-")?;
        }
        f.write_str(self.kind.as_str())
    }
}

#[derive(Debug, Args)]
pub struct KindArgs {
    /// Graph kind, repeatable: inheritance, aggregation, interface,
    /// parameter, return, generic, or any of them prefixed with `reverse-`.
    #[arg(long = "kind", value_name = "K")]
    pub kinds: Vec<GraphSel>,
}

#[derive(Debug, Args)]
pub struct PgOpts {
    /// Discount function.
    #[arg(long, value_parser = parse_discount)]
    pub discount: Option<Discount>,
    /// Decay factor, strictly between 0 and 1.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Deepest walk length considered.
    #[arg(long)]
    pub dmax: Option<usize>,
}

fn parse_discount(s: &str) -> Result<Discount, String> {
    s.parse().map_err(|e: crate::pg::PgError| e.to_string())
}

/// `N` or `all`.
fn parse_top(s: &str) -> Result<usize, String> {
    if s == "all" {
        return Ok(usize::MAX);
    }
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(format!("expected a positive integer or `all`, got {s:?}")),
        Ok(n) => Ok(n),
    }
}

#[derive(Debug, Args)]
pub struct TopOpts {
    /// Rows per ranking table (`all` for every class).
    #[arg(long, value_parser = parse_top)]
    pub top: Option<usize>,
}

#[derive(Debug, Args)]
pub struct KeyOpts {
    #[arg(long, value_name = "P")]
    pub key_percentile: Option<f64>,
    #[arg(long, value_name = "M")]
    pub key_min_metrics: Option<usize>,
    /// Static self-typed fields needed for the TKC flag.
    #[arg(long, value_name = "N")]
    pub self_ref_threshold: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SmellOpts {
    #[arg(long, value_name = "N")]
    pub large_class_methods: Option<usize>,
    #[arg(long, value_name = "F")]
    pub primitive_fraction: Option<f64>,
    #[arg(long, value_name = "N")]
    pub primitive_min_attributes: Option<usize>,
    /// Comma-separated replacement for the basic type list.
    #[arg(long, value_name = "T,..", value_delimiter = ',')]
    pub basic_types: Option<Vec<String>>,
    #[arg(long, value_name = "N")]
    pub long_method_lines: Option<usize>,
    #[arg(long, value_name = "N")]
    pub min_constructors: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SectionOpts {
    #[arg(long)]
    pub no_summary: bool,
    #[arg(long)]
    pub no_rankings: bool,
    #[arg(long)]
    pub no_overlaps: bool,
    #[arg(long)]
    pub no_tkc: bool,
    #[arg(long)]
    pub no_key: bool,
    #[arg(long)]
    pub no_smells: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long, value_name = "DIR")]
    pub source: PathBuf,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub kinds: KindArgs,
    #[arg(long, value_enum, default_value_t = GraphFormat::Text)]
    pub format: GraphFormat,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct PgArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub kinds: KindArgs,
    #[command(flatten)]
    pub pg: PgOpts,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub kinds: KindArgs,
    #[command(flatten)]
    pub pg: PgOpts,
    #[command(flatten)]
    pub top: TopOpts,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub pg: PgOpts,
    #[command(flatten)]
    pub top: TopOpts,
    #[command(flatten)]
    pub key: KeyOpts,
    #[command(flatten)]
    pub smells: SmellOpts,
    #[command(flatten)]
    pub sections: SectionOpts,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SmellsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub smells: SmellOpts,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Keys accepted in a `--config` file; names match the long flags.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub kind: Option<Vec<String>>,
    pub discount: Option<Discount>,
    pub gamma: Option<f64>,
    pub dmax: Option<usize>,
    pub top: Option<toml::Value>,
    pub key_percentile: Option<f64>,
    pub key_min_metrics: Option<usize>,
    pub self_ref_threshold: Option<usize>,
    pub large_class_methods: Option<usize>,
    pub primitive_fraction: Option<f64>,
    pub primitive_min_attributes: Option<usize>,
    pub basic_types: Option<Vec<String>>,
    pub long_method_lines: Option<usize>,
    pub min_constructors: Option<usize>,
    pub format: Option<OutputFormat>,
    pub lenient: Option<bool>,
    pub no_summary: Option<bool>,
    pub no_rankings: Option<bool>,
    pub no_overlaps: Option<bool>,
    pub no_tkc: Option<bool>,
    pub no_key: Option<bool>,
    pub no_smells: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<FileConfig, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }

    fn kinds(&self) -> Result<Vec<GraphSel>, CliError> {
        self.kind
            .iter()
            .flatten()
            .map(|k| k.parse().map_err(CliError::input))
            .collect()
    }

    fn top(&self) -> Result<Option<usize>, CliError> {
        match &self.top {
            None => Ok(None),
            Some(toml::Value::Integer(n)) => {
                parse_top(&n.to_string()).map(Some).map_err(CliError::input)
            }
            Some(toml::Value::String(s)) => parse_top(s).map(Some).map_err(CliError::input),
            Some(other) => Err(CliError::input(format!("top: unexpected value {other}"))),
        }
    }
}

fn pg_config(opts: &PgOpts, file: &FileConfig) -> Result<PgConfig, CliError> {
    let d = PgConfig::default();
    PgConfig::new(
        opts.discount.or(file.discount).unwrap_or(d.discount),
        opts.gamma.or(file.gamma).unwrap_or(d.gamma),
        opts.dmax.or(file.dmax).unwrap_or(d.d_max),
    )
    .map_err(CliError::input)
}

fn smell_config(opts: &SmellOpts, file: &FileConfig) -> Result<SmellConfig, CliError> {
    let d = SmellConfig::default();
    let config = SmellConfig {
        large_class_methods: opts
            .large_class_methods
            .or(file.large_class_methods)
            .unwrap_or(d.large_class_methods),
        primitive_fraction: opts
            .primitive_fraction
            .or(file.primitive_fraction)
            .unwrap_or(d.primitive_fraction),
        primitive_min_attributes: opts
            .primitive_min_attributes
            .or(file.primitive_min_attributes)
            .unwrap_or(d.primitive_min_attributes),
        basic_types: opts
            .basic_types
            .clone()
            .or_else(|| file.basic_types.clone())
            .unwrap_or(d.basic_types),
        long_method_lines: opts
            .long_method_lines
            .or(file.long_method_lines)
            .unwrap_or(d.long_method_lines),
        min_constructors: opts
            .min_constructors
            .or(file.min_constructors)
            .unwrap_or(d.min_constructors),
    };
    config.validate().map_err(CliError::input)?;
    Ok(config)
}

fn top_n(opts: &TopOpts, file: &FileConfig) -> Result<usize, CliError> {
    Ok(opts.top.or(file.top()?).unwrap_or(ranking::DEFAULT_TOP_N))
}

fn output_format(flag: Option<OutputFormat>, file: &FileConfig) -> OutputFormat {
    flag.or(file.format).unwrap_or(OutputFormat::Markdown)
}

enum Input {
    Model(ClassModel),
    Graph(CouplingGraph),
}

fn extract_error(e: ExtractError) -> CliError {
    CliError::input(e)
}

fn load_model_from_source(root: &Path, lenient: bool) -> Result<ClassModel, CliError> {
    let loaded = load_sources(root, lenient).map_err(extract_error)?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    if loaded.units.is_empty() {
        return Err(CliError::empty(format!(
            "no parseable Java sources under {}",
            root.display()
        )));
    }
    let model = build_model(&loaded.units).map_err(extract_error)?;
    if model.is_empty() {
        return Err(CliError::empty("the sources declare no types"));
    }
    Ok(model)
}

fn load_input(input: &InputArgs, lenient: bool) -> Result<Input, CliError> {
    if let Some(root) = &input.source {
        return load_model_from_source(root, lenient).map(Input::Model);
    }
    if let Some(path) = &input.model {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        let model = ClassModel::from_json(&text).map_err(extract_error)?;
        if model.is_empty() {
            return Err(CliError::empty("the model contains no classes"));
        }
        return Ok(Input::Model(model));
    }
    let path = input.graph.as_ref().expect("clap enforces one input");
    let g = read_graph_file(path).map_err(CliError::input)?;
    if g.is_empty() {
        return Err(CliError::empty("the graph has no nodes"));
    }
    Ok(Input::Graph(g))
}

fn load_model(input: &InputArgs, lenient: bool, command: &str) -> Result<ClassModel, CliError> {
    match load_input(input, lenient)? {
        Input::Model(m) => Ok(m),
        Input::Graph(_) => Err(CliError::input(format!(
            "{command} needs class members: use --source or --model"
        ))),
    }
}

fn default_kinds() -> Vec<GraphSel> {
    RANKED_GRAPHS
        .iter()
        .map(|&(kind, reversed)| GraphSel { kind, reversed })
        .collect()
}

/// The requested graphs, built from the model or derived from a graph file.
fn select_graphs(input: &Input, kinds: &[GraphSel]) -> Result<Vec<CouplingGraph>, CliError> {
    match input {
        Input::Model(model) => {
            let kinds = if kinds.is_empty() {
                default_kinds()
            } else {
                kinds.to_vec()
            };
            Ok(kinds
                .iter()
                .map(|sel| {
                    let g = build_coupling_graph(model, sel.kind);
                    if sel.reversed {
                        g.transpose()
                    } else {
                        g
                    }
                })
                .collect())
        }
        Input::Graph(g) => {
            if kinds.is_empty() {
                return Ok(vec![g.clone()]);
            }
            kinds
                .iter()
                .map(|sel| {
                    if sel.kind != g.kind() {
                        return Err(CliError::input(format!(
                            "--kind {sel} is not available from a {} graph file",
                            g.label()
                        )));
                    }
                    Ok(if sel.reversed == g.is_reversed() {
                        g.clone()
                    } else {
                        g.transpose()
                    })
                })
                .collect()
        }
    }
}

fn dedup_kinds(mut kinds: Vec<GraphSel>) -> Vec<GraphSel> {
    let mut seen = Vec::new();
    kinds.retain(|k| {
        if seen.contains(k) {
            false
        } else {
            seen.push(*k);
            true
        }
    });
    kinds
}

fn requested_kinds(args: &KindArgs, file: &FileConfig) -> Result<Vec<GraphSel>, CliError> {
    let kinds = if args.kinds.is_empty() {
        file.kinds()?
    } else {
        args.kinds.clone()
    };
    Ok(dedup_kinds(kinds))
}

/// Named output documents, written to `--out` or printed.
struct Outputs {
    files: Vec<(String, String)>,
}

impl Outputs {
    fn emit(self, out: Option<&Path>, format: Option<OutputFormat>) -> Result<(), CliError> {
        if let Some(dir) = out {
            fs::create_dir_all(dir)
                .map_err(|e| CliError::input(format!("{}: {e}", dir.display())))?;
            for (name, body) in &self.files {
                let path = dir.join(name);
                fs::write(&path, body)
                    .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            }
            return Ok(());
        }
        let text = match format {
            Some(OutputFormat::Json) if self.files.len() > 1 => {
                let docs: Vec<&str> = self.files.iter().map(|(_, b)| b.trim_end()).collect();
                format!("[\n{}\n]\n", docs.join(",\n"))
            }
            Some(OutputFormat::Csv) if self.files.len() > 1 => self
                .files
                .iter()
                .map(|(name, body)| format!("# {name}\n{body}"))
                .collect::<Vec<_>>()
                .join("\n"),
            _ => self
                .files
                .iter()
                .map(|(_, b)| b.as_str())
                .collect::<Vec<_>>()
                .join("\n"),
        };
        print!("{text}");
        Ok(())
    }
}

fn extension(format: OutputFormat) -> &'static str {
    match format {
        OutputFormat::Markdown => "md",
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    }
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let lenient = args.common.lenient || file.lenient.unwrap_or(false);
    let model = load_model_from_source(&args.source, lenient)?;
    eprintln!("analyzed {} classes", model.len());
    Outputs {
        files: vec![("model.json".into(), model.to_json())],
    }
    .emit(args.common.out.as_deref(), None)
}

fn cmd_graph(args: &GraphArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let lenient = args.common.lenient || file.lenient.unwrap_or(false);
    let input = load_input(&args.input, lenient)?;
    let mut kinds = requested_kinds(&args.kinds, &file)?;
    if kinds.is_empty() && matches!(input, Input::Model(_)) {
        kinds = CouplingKind::EXTRACTED
            .iter()
            .map(|&kind| GraphSel {
                kind,
                reversed: false,
            })
            .collect();
    }
    let files = select_graphs(&input, &kinds)?
        .iter()
        .map(|g| match args.format {
            GraphFormat::Text => (format!("{}.graph", g.label()), format_graph(g)),
            GraphFormat::Dot => (format!("{}.dot", g.label()), to_dot(g)),
        })
        .collect();
    Outputs { files }.emit(args.common.out.as_deref(), None)
}

fn timed_pg(g: &CouplingGraph, config: &PgConfig) -> Result<PgResult, CliError> {
    let start = Instant::now();
    let result = potential_gain(g, config).map_err(|e| match e {
        crate::pg::PgError::EmptyGraph => CliError::empty(e),
        other => CliError::input(other),
    })?;
    let elapsed = start.elapsed();
    eprintln!(
        "pg {}: {} nodes, {} edges, truncated at {}, {:.1} ms",
        g.label(),
        g.node_count(),
        g.edge_count(),
        result.truncated_at(),
        elapsed.as_secs_f64() * 1000.0
    );
    result.verify().map_err(CliError::invariant)?;
    Ok(result)
}

fn pg_markdown(r: &PgResult) -> String {
    let t = r.truncated_at();
    let mut out = format!("## Potential Gain over {}\n\n| Node | PG |", r.label());
    for k in 1..=t {
        out.push_str(&format!(" R_{k} |"));
    }
    out.push_str("\n|---|---:|");
    out.push_str(&"---:|".repeat(t));
    out.push('\n');
    for n in r.nodes() {
        out.push_str(&format!(
            "| {} | {} |",
            n,
            format::sig(r.pg(n.as_str()).expect("own node"))
        ));
        for k in 1..=t {
            out.push_str(&format!(
                " {} |",
                format::sig(r.r(k, n.as_str()).expect("own node"))
            ));
        }
        out.push('\n');
    }
    out
}

fn cmd_pg(args: &PgArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let lenient = args.common.lenient || file.lenient.unwrap_or(false);
    let config = pg_config(&args.pg, &file)?;
    let format = output_format(args.format, &file);
    let input = load_input(&args.input, lenient)?;
    let kinds = requested_kinds(&args.kinds, &file)?;
    let mut files = Vec::new();
    for g in select_graphs(&input, &kinds)? {
        let r = timed_pg(&g, &config)?;
        let body = match format {
            OutputFormat::Markdown => pg_markdown(&r),
            OutputFormat::Csv => r.to_csv(),
            OutputFormat::Json => r.to_json(),
        };
        files.push((format!("pg-{}.{}", r.label(), extension(format)), body));
    }
    Outputs { files }.emit(args.common.out.as_deref(), Some(format))
}

fn cmd_rank(args: &RankArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let lenient = args.common.lenient || file.lenient.unwrap_or(false);
    let config = pg_config(&args.pg, &file)?;
    let top = top_n(&args.top, &file)?;
    let format = output_format(args.format, &file);
    let input = load_input(&args.input, lenient)?;
    let metrics = match &input {
        Input::Model(m) => Some(collect_metrics(m)),
        Input::Graph(_) => None,
    };
    let kinds = requested_kinds(&args.kinds, &file)?;
    let mut files = Vec::new();
    for g in select_graphs(&input, &kinds)? {
        let r = timed_pg(&g, &config)?;
        let table = ranking::rank(&format!("{} PG", r.label()), &r.values(), Some(top));
        let body = match format {
            OutputFormat::Markdown => format!(
                "## {} by {} PG\n\n{}",
                if top == usize::MAX {
                    "All classes".to_string()
                } else {
                    format!("Top {top}")
                },
                r.label(),
                report::ranking_markdown(&table, metrics.as_ref())
            ),
            OutputFormat::Csv => report::ranking_csv(&table, metrics.as_ref()),
            OutputFormat::Json => report::ranking_json(&table, metrics.as_ref()),
        };
        files.push((format!("rank-{}.{}", r.label(), extension(format)), body));
    }
    Outputs { files }.emit(args.common.out.as_deref(), Some(format))
}

fn cmd_report(args: &ReportArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let lenient = args.common.lenient || file.lenient.unwrap_or(false);
    let s = &args.sections;
    let off = |flag: bool, key: Option<bool>| flag || key.unwrap_or(false);
    let config = ReportConfig {
        pg: pg_config(&args.pg, &file)?,
        top_n: top_n(&args.top, &file)?,
        key: KeyClassConfig {
            percentile: args
                .key
                .key_percentile
                .or(file.key_percentile)
                .unwrap_or(ranking::DEFAULT_KEY_PERCENTILE),
            min_metrics: args
                .key
                .key_min_metrics
                .or(file.key_min_metrics)
                .unwrap_or(ranking::DEFAULT_KEY_MIN_METRICS),
        },
        self_ref_threshold: args
            .key
            .self_ref_threshold
            .or(file.self_ref_threshold)
            .unwrap_or(ranking::DEFAULT_SELF_REF_THRESHOLD),
        smells: smell_config(&args.smells, &file)?,
        sections: Sections {
            summary: !off(s.no_summary, file.no_summary),
            rankings: !off(s.no_rankings, file.no_rankings),
            overlaps: !off(s.no_overlaps, file.no_overlaps),
            tkc: !off(s.no_tkc, file.no_tkc),
            key: !off(s.no_key, file.no_key),
            smells: !off(s.no_smells, file.no_smells),
        },
    };
    config.key.validate().map_err(CliError::input)?;
    let format = output_format(args.format, &file);
    let model = load_model(&args.input, lenient, "report")?;
    let report = build_report(&model, &config)?;
    let files = match format {
        OutputFormat::Markdown => vec![("report.md".to_string(), report.to_markdown())],
        OutputFormat::Json => vec![("report.json".to_string(), report.to_json())],
        OutputFormat::Csv => report.csv_files(),
    };
    Outputs { files }.emit(args.common.out.as_deref(), Some(format))
}

fn cmd_smells(args: &SmellsArgs) -> Result<(), CliError> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let lenient = args.common.lenient || file.lenient.unwrap_or(false);
    let config = smell_config(&args.smells, &file)?;
    let format = output_format(args.format, &file);
    let model = load_model(&args.input, lenient, "smells")?;
    let metrics = collect_metrics(&model);
    let findings = smells::detect_all(&model, &metrics, &config).map_err(CliError::input)?;
    if let Some(bad) = findings.iter().find(|f| !f.holds()) {
        return Err(CliError::invariant(format!(
            "{} finding on {} is not supported by its evidence",
            bad.smell, bad.class
        )));
    }
    let body = match format {
        OutputFormat::Markdown => smells::findings_to_markdown(&findings),
        OutputFormat::Csv => smells::findings_to_csv(&findings),
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(&findings).expect("findings serialize");
            text.push('\n');
            text
        }
    };
    Outputs {
        files: vec![(format!("smells.{}", extension(format)), body)],
    }
    .emit(args.common.out.as_deref(), Some(format))
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Graph(a) => cmd_graph(a),
        Command::Pg(a) => cmd_pg(a),
        Command::Rank(a) => cmd_rank(a),
        Command::Report(a) => cmd_report(a),
        Command::Smells(a) => cmd_smells(a),
    }
}

/// Parses `args`, runs the command, and maps the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
