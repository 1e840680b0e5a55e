mod common;

use std::collections::BTreeMap;

use keyclass::ranking::{self, KeyClassConfig, OverlapRow};
use keyclass::report::{build_report, ReportConfig};
use keyclass::NodeId;

fn id(s: &str) -> NodeId {
    NodeId::new(s).unwrap()
}

/// Values that rank `names` in the given order, top first.
fn ordered(names: &[&str]) -> BTreeMap<NodeId, f64> {
    names
        .iter()
        .enumerate()
        .map(|(i, n)| (id(n), (names.len() - i) as f64))
        .collect()
}

#[test]
fn overlap_reproduces_jdk_reverse_vs_normal_aggregation() {
    let reverse = [
        "MediaType",
        "r2",
        "UnicodeBlock",
        "HTML.Attribute",
        "HTML.Tag",
        "MediaSizeName",
        "Color",
        "r8",
        "CSS.Attribute",
        "AccessibleRole",
        "r11",
        "r12",
        "r13",
        "r14",
        "r15",
    ];
    let normal = [
        "MediaType",
        "UnicodeBlock",
        "HTML.Attribute",
        "HTML.Tag",
        "MediaSizeName",
        "CSS.Attribute",
        "AccessibleRole",
        "n8",
        "n9",
        "n10",
        "n11",
        "n12",
        "n13",
        "Color",
        "n15",
    ];
    let a = ranking::rank("reverse-aggregation PG", &ordered(&reverse), Some(15));
    let b = ranking::rank("aggregation PG", &ordered(&normal), Some(15));
    let got: Vec<(String, usize, usize)> = ranking::overlap(&a, &b)
        .unwrap()
        .rows
        .into_iter()
        .map(|r| (r.node.to_string(), r.position_a, r.position_b))
        .collect();
    let want = [
        ("MediaType", 1, 1),
        ("UnicodeBlock", 3, 2),
        ("HTML.Attribute", 4, 3),
        ("HTML.Tag", 5, 4),
        ("MediaSizeName", 6, 5),
        ("Color", 7, 14),
        ("CSS.Attribute", 9, 6),
        ("AccessibleRole", 10, 7),
    ]
    .map(|(n, x, y)| (n.to_string(), x, y));
    assert_eq!(got, want);
}

#[test]
fn fixture_overlap_at_top_five() {
    let config = ReportConfig {
        top_n: 5,
        ..ReportConfig::default()
    };
    let report = build_report(&common::fixture_model(), &config).unwrap();
    assert!(report.tables.iter().all(|t| t.k() == 5));
    let rows: Vec<(&str, usize, usize)> = report.overlaps[0]
        .rows
        .iter()
        .map(|r: &OverlapRow| (r.node.as_str(), r.position_a, r.position_b))
        .collect();
    assert_eq!(
        rows,
        [
            ("com.acme.model.Category", 1, 5),
            ("com.acme.model.Order", 4, 4)
        ]
    );
    let shared: Vec<(&str, usize, usize)> = report.overlaps[1]
        .rows
        .iter()
        .map(|r| (r.node.as_str(), r.position_a, r.position_b))
        .collect();
    assert_eq!(shared, [("com.acme.model.Category", 5, 4)]);
}

#[test]
fn default_top_n_covers_small_corpus() {
    let report = build_report(&common::fixture_model(), &ReportConfig::default()).unwrap();
    assert!(report.tables.iter().all(|t| t.k() == 12));
    assert!(report.overlaps.iter().all(|o| o.rows.len() == 12));
}

#[test]
fn no_key_class_at_default_percentile() {
    // with 12 classes the best attainable percentile is 100 * 11/12
    let report = build_report(&common::fixture_model(), &ReportConfig::default()).unwrap();
    let best = report
        .key
        .entries
        .iter()
        .flat_map(|e| e.percentiles)
        .fold(0.0f64, f64::max);
    assert!((best - 100.0 * 11.0 / 12.0).abs() < 1e-12);
    assert!(report.key.key_classes().is_empty());
    assert!(report.key.tkc_key_classes().is_empty());
}

#[test]
fn god_class_is_key_at_lower_percentile() {
    let config = ReportConfig {
        key: KeyClassConfig {
            percentile: 90.0,
            min_metrics: 3,
        },
        ..ReportConfig::default()
    };
    let report = build_report(&common::fixture_model(), &config).unwrap();
    let keys: Vec<&str> = report
        .key
        .key_classes()
        .iter()
        .map(|e| e.node.as_str())
        .collect();
    assert_eq!(keys, ["com.acme.store.Store"]);
    let store = report.key.entry("com.acme.store.Store").unwrap();
    assert_eq!(store.metrics_met, 3);
    assert!(!store.tkc);
    let evidence = store.evidence(&config.key);
    assert_eq!(evidence.len(), 3);
    assert!(evidence.iter().any(|e| e.starts_with("methods = 54 ")));
    assert!(evidence.iter().any(|e| e.starts_with("attributes = 25 ")));
    assert!(evidence.iter().any(|e| e.starts_with("aggregation PG = ")));
}

#[test]
fn enum_with_constants_is_tight_community() {
    let report = build_report(&common::fixture_model(), &ReportConfig::default()).unwrap();
    let flagged: Vec<&str> = report.tkc.flagged.iter().map(|e| e.node.as_str()).collect();
    assert_eq!(flagged, ["com.acme.model.Category"]);
    let entry = &report.tkc.flagged[0];
    assert_eq!(entry.static_self_fields, 6);
    assert!(entry.in_normal_top && entry.in_reverse_top);
}

#[test]
fn tkc_excluded_from_key_list_but_reported_separately() {
    let model = common::fixture_model();
    let config = ReportConfig {
        key: KeyClassConfig {
            percentile: 30.0,
            min_metrics: 3,
        },
        ..ReportConfig::default()
    };
    let report = build_report(&model, &config).unwrap();
    let category = report.key.entry("com.acme.model.Category").unwrap();
    assert!(category.key && category.tkc);
    assert!(report.key.key_classes().iter().all(|e| !e.tkc));
    assert!(report
        .key
        .tkc_key_classes()
        .iter()
        .any(|e| e.node.as_str() == "com.acme.model.Category"));
}
