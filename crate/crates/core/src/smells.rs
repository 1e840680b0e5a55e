//! Threshold detectors for a handful of bad smells, each paired with the
//! refactorings that usually address it.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extract::{ClassModel, TypeRef, PRIMITIVES};
use crate::format::{self, JsonNumber};
use crate::graph::NodeId;
use crate::metrics::ClassMetrics;

pub const EXTRACT_CLASS: &str = "Extract Class";
pub const EXTRACT_SUBCLASS: &str = "Extract Subclass";
pub const EXTRACT_METHOD: &str = "Extract Method";
pub const MOVE_FIELD: &str = "Move Field";
pub const MOVE_METHOD: &str = "Move Method";
pub const CREATION_METHODS: &str = "Replace Constructors with Creation Methods";

/// `java.lang` wrappers treated as basic alongside primitives and `String`.
pub const BOXED: [&str; 8] = [
    "Boolean",
    "Byte",
    "Character",
    "Short",
    "Integer",
    "Long",
    "Float",
    "Double",
];

#[derive(Debug, Error, PartialEq)]
pub enum SmellError {
    #[error("basic type list is empty")]
    NoBasicTypes,
    #[error("primitive fraction must be within (0, 1], got {0}")]
    Fraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Smell {
    LargeClass,
    PrimitiveObsession,
    LongMethod,
    MultipleConstructors,
}

impl fmt::Display for Smell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Smell::LargeClass => "Large Class",
            Smell::PrimitiveObsession => "Primitive Obsession",
            Smell::LongMethod => "Long Method",
            Smell::MultipleConstructors => "Multiple Constructors",
        })
    }
}

/// A measured value held against its threshold; met when `value >= threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct Criterion {
    pub measure: &'static str,
    pub value: f64,
    pub threshold: f64,
}

impl Criterion {
    fn new(measure: &'static str, value: f64, threshold: f64) -> Self {
        Criterion {
            measure,
            value,
            threshold,
        }
    }

    pub fn met(&self) -> bool {
        self.value >= self.threshold
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} >= {}",
            self.measure,
            format::sig(self.value),
            format::sig(self.threshold)
        )
    }
}

impl Serialize for Criterion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Criterion", 3)?;
        st.serialize_field("measure", self.measure)?;
        st.serialize_field("value", &JsonNumber::sig(self.value))?;
        st.serialize_field("threshold", &JsonNumber::sig(self.threshold))?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmellFinding {
    pub class: NodeId,
    pub smell: Smell,
    /// The offending member for method-level smells.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub member: Option<String>,
    pub evidence: Vec<Criterion>,
    pub suggestions: Vec<&'static str>,
}

impl SmellFinding {
    /// The verdict implied by the evidence alone.
    pub fn holds(&self) -> bool {
        !self.evidence.is_empty() && self.evidence.iter().all(Criterion::met)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SmellConfig {
    pub large_class_methods: usize,
    pub primitive_fraction: f64,
    pub primitive_min_attributes: usize,
    pub basic_types: Vec<String>,
    pub long_method_lines: usize,
    pub min_constructors: usize,
}

impl Default for SmellConfig {
    fn default() -> Self {
        let mut basic: Vec<String> = PRIMITIVES.iter().map(|s| s.to_string()).collect();
        basic.push("String".into());
        basic.extend(BOXED.iter().map(|s| s.to_string()));
        SmellConfig {
            large_class_methods: 50,
            primitive_fraction: 0.8,
            primitive_min_attributes: 15,
            basic_types: basic,
            long_method_lines: 50,
            min_constructors: 3,
        }
    }
}

impl SmellConfig {
    pub fn validate(&self) -> Result<(), SmellError> {
        if self.basic_types.is_empty() {
            return Err(SmellError::NoBasicTypes);
        }
        if !(self.primitive_fraction > 0.0 && self.primitive_fraction <= 1.0) {
            return Err(SmellError::Fraction(self.primitive_fraction));
        }
        Ok(())
    }

    /// Array element types decide; `java.lang.` qualification is ignored.
    pub fn is_basic(&self, ty: &TypeRef) -> bool {
        let name = ty.name.strip_prefix("java.lang.").unwrap_or(&ty.name);
        self.basic_types.iter().any(|b| b == name)
    }
}

pub fn detect_large_class(
    metrics: &BTreeMap<NodeId, ClassMetrics>,
    threshold: usize,
) -> Vec<SmellFinding> {
    metrics
        .iter()
        .filter(|(_, m)| m.methods >= threshold)
        .map(|(id, m)| SmellFinding {
            class: id.clone(),
            smell: Smell::LargeClass,
            member: None,
            evidence: vec![Criterion::new(
                "methods",
                m.methods as f64,
                threshold as f64,
            )],
            suggestions: vec![EXTRACT_CLASS, EXTRACT_SUBCLASS],
        })
        .collect()
}

pub fn detect_primitive_obsession(
    model: &ClassModel,
    config: &SmellConfig,
) -> Result<Vec<SmellFinding>, SmellError> {
    config.validate()?;
    let mut out = Vec::new();
    for (id, class) in &model.classes {
        let fields = &class.decl.fields;
        let total = fields.len();
        if total == 0 || total < config.primitive_min_attributes {
            continue;
        }
        let basic = fields.iter().filter(|f| config.is_basic(&f.ty)).count();
        let fraction = basic as f64 / total as f64;
        if fraction >= config.primitive_fraction {
            out.push(SmellFinding {
                class: id.clone(),
                smell: Smell::PrimitiveObsession,
                member: None,
                evidence: vec![
                    Criterion::new(
                        "attributes",
                        total as f64,
                        config.primitive_min_attributes as f64,
                    ),
                    Criterion::new("basic-typed fraction", fraction, config.primitive_fraction),
                ],
                suggestions: vec![EXTRACT_CLASS, MOVE_FIELD],
            });
        }
    }
    Ok(out)
}

pub fn detect_long_methods(model: &ClassModel, threshold: usize) -> Vec<SmellFinding> {
    let mut out = Vec::new();
    for (id, class) in &model.classes {
        for m in &class.decl.methods {
            if m.body_line_count >= threshold {
                out.push(SmellFinding {
                    class: id.clone(),
                    smell: Smell::LongMethod,
                    member: Some(m.signature()),
                    evidence: vec![Criterion::new(
                        "body lines",
                        m.body_line_count as f64,
                        threshold as f64,
                    )],
                    suggestions: vec![EXTRACT_METHOD, MOVE_METHOD],
                });
            }
        }
    }
    out
}

pub fn detect_constructor_candidates(
    metrics: &BTreeMap<NodeId, ClassMetrics>,
    min_constructors: usize,
) -> Vec<SmellFinding> {
    metrics
        .iter()
        .filter(|(_, m)| m.constructors >= min_constructors)
        .map(|(id, m)| SmellFinding {
            class: id.clone(),
            smell: Smell::MultipleConstructors,
            member: None,
            evidence: vec![Criterion::new(
                "constructors",
                m.constructors as f64,
                min_constructors as f64,
            )],
            suggestions: vec![CREATION_METHODS],
        })
        .collect()
}

/// All four detectors, ordered by class, smell, then member.
pub fn detect_all(
    model: &ClassModel,
    metrics: &BTreeMap<NodeId, ClassMetrics>,
    config: &SmellConfig,
) -> Result<Vec<SmellFinding>, SmellError> {
    let mut all = detect_large_class(metrics, config.large_class_methods);
    all.extend(detect_primitive_obsession(model, config)?);
    all.extend(detect_long_methods(model, config.long_method_lines));
    all.extend(detect_constructor_candidates(
        metrics,
        config.min_constructors,
    ));
    all.sort_by(|a, b| (&a.class, a.smell, &a.member).cmp(&(&b.class, b.smell, &b.member)));
    Ok(all)
}

pub fn findings_to_markdown(findings: &[SmellFinding]) -> String {
    if findings.is_empty() {
        return "No findings.\n".to_string();
    }
    let mut out = String::from(
        "| Class | Smell | Member | Evidence | Suggested refactorings |\n|---|---|---|---|---|\n",
    );
    for f in findings {
        let evidence: Vec<String> = f.evidence.iter().map(ToString::to_string).collect();
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} |",
            f.class,
            f.smell,
            f.member.as_deref().map(escape_cell).unwrap_or_default(),
            evidence.join("; "),
            f.suggestions.join(", ")
        );
    }
    out
}

pub fn findings_to_csv(findings: &[SmellFinding]) -> String {
    let mut out = String::from("class,smell,member,measure,value,threshold,suggestions\n");
    for f in findings {
        for c in &f.evidence {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                format::csv_field(f.class.as_str()),
                format::csv_field(&f.smell.to_string()),
                format::csv_field(f.member.as_deref().unwrap_or("")),
                format::csv_field(c.measure),
                format::sig(c.value),
                format::sig(c.threshold),
                format::csv_field(&f.suggestions.join("; "))
            );
        }
    }
    out
}

/// Pipes would split a Markdown table cell.
pub(crate) fn escape_cell(s: &str) -> String {
    s.replace('|', "\\|")
}
