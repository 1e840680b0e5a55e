#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use keyclass::extract::load_sources;
use keyclass::metrics::collect_metrics;
use keyclass::{build_coupling_graph, build_model, ClassModel, CouplingKind};
use serde::Deserialize;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn corpus_dir() -> PathBuf {
    fixture_dir().join("corpus")
}

pub fn fixture_model() -> ClassModel {
    let loaded = load_sources(&corpus_dir(), false).expect("fixture corpus parses");
    assert!(loaded.warnings.is_empty());
    build_model(&loaded.units).expect("fixture corpus builds")
}

#[derive(Debug, Deserialize)]
pub struct Expected {
    pub classes: BTreeMap<String, [usize; 4]>,
    pub static_self_fields: BTreeMap<String, usize>,
    pub edges: BTreeMap<String, Vec<String>>,
    pub long_methods: BTreeMap<String, (String, usize)>,
}

pub fn expected() -> Expected {
    let text = std::fs::read_to_string(fixture_dir().join("expected_model.toml")).unwrap();
    toml::from_str(&text).unwrap()
}

pub const EDGE_KINDS: [CouplingKind; 5] = [
    CouplingKind::Inheritance,
    CouplingKind::Interface,
    CouplingKind::Aggregation,
    CouplingKind::Parameter,
    CouplingKind::Return,
];

/// Every disagreement between the model and the expectation file.
pub fn extraction_diffs(model: &ClassModel, exp: &Expected) -> Vec<String> {
    let mut diffs = Vec::new();
    let metrics = collect_metrics(model);
    let got: BTreeSet<&str> = metrics.keys().map(|k| k.as_str()).collect();
    let want: BTreeSet<&str> = exp.classes.keys().map(String::as_str).collect();
    for extra in got.difference(&want) {
        diffs.push(format!("unexpected class {extra}"));
    }
    for missing in want.difference(&got) {
        diffs.push(format!("missing class {missing}"));
    }
    for (name, counts) in &exp.classes {
        if let Some(m) = metrics.get(name.as_str()) {
            let actual = [m.methods, m.attributes, m.constructors, m.depth];
            if &actual != counts {
                diffs.push(format!("{name}: counts {actual:?}, expected {counts:?}"));
            }
        }
    }
    for (id, class) in &model.classes {
        let want = exp
            .static_self_fields
            .get(id.as_str())
            .copied()
            .unwrap_or(0);
        if class.links.static_self_fields != want {
            diffs.push(format!(
                "{id}: {} static self-typed fields, expected {want}",
                class.links.static_self_fields
            ));
        }
    }
    for kind in EDGE_KINDS {
        let g = build_coupling_graph(model, kind);
        let got: BTreeSet<String> = g.edges().map(|(a, b)| format!("{a} -> {b}")).collect();
        let want: BTreeSet<String> = exp
            .edges
            .get(kind.as_str())
            .into_iter()
            .flatten()
            .cloned()
            .collect();
        for e in got.difference(&want) {
            diffs.push(format!("{kind}: unexpected edge {e}"));
        }
        for e in want.difference(&got) {
            diffs.push(format!("{kind}: missing edge {e}"));
        }
    }
    let mut long = BTreeMap::new();
    for (id, class) in &model.classes {
        for m in &class.decl.methods {
            if m.body_line_count >= 50 {
                long.insert(id.to_string(), (m.signature(), m.body_line_count));
            }
        }
    }
    if long != exp.long_methods {
        diffs.push(format!(
            "long methods {long:?}, expected {:?}",
            exp.long_methods
        ));
    }
    diffs
}
