//! Class model: every declared type, its resolved references, and its depth.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::decl::{ClassDecl, CompilationUnit, Import, TypeKind};
use super::ExtractError;
use crate::graph::{CouplingGraph, CouplingKind, NodeId};

/// The implicit root of every class hierarchy.
pub const OBJECT: &str = "java.lang.Object";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceUnit {
    pub path: String,
    pub unit: CompilationUnit,
}

/// Resolved coupling targets of one class. Every entry names a class in the
/// model; external references never appear here.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Links {
    pub superclass: Option<NodeId>,
    /// Set when the superclass is the model's `java.lang.Object` reached
    /// without an `extends` clause.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub implicit_superclass: bool,
    pub interfaces: BTreeSet<NodeId>,
    pub aggregation: BTreeSet<NodeId>,
    pub parameter: BTreeSet<NodeId>,
    #[serde(rename = "return")]
    pub returns: BTreeSet<NodeId>,
    pub generic: BTreeSet<NodeId>,
    /// Static fields whose type resolves to this class itself.
    pub static_self_fields: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelClass {
    pub file: String,
    pub package: String,
    pub enclosing: Option<NodeId>,
    pub nested: Vec<NodeId>,
    /// The declaration with its `nested` list emptied; nested types are
    /// model classes of their own.
    pub decl: ClassDecl,
    pub links: Links,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ClassModel {
    pub classes: BTreeMap<NodeId, ModelClass>,
    /// For each class, every type name written in its declarations and what
    /// it resolved to (`null` = external).
    pub resolution: BTreeMap<NodeId, BTreeMap<String, Option<NodeId>>>,
    pub depth: BTreeMap<NodeId, usize>,
}

impl ClassModel {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&ModelClass> {
        self.classes.get(name)
    }

    pub fn ids(&self) -> impl Iterator<Item = &NodeId> {
        self.classes.keys()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// Loads a serialized model and checks that every link and depth entry
    /// refers to a class of the model.
    pub fn from_json(text: &str) -> Result<ClassModel, ExtractError> {
        let model: ClassModel = serde_json::from_str(text)
            .map_err(|e| ExtractError::InconsistentModel(e.to_string()))?;
        for (id, class) in &model.classes {
            let l = &class.links;
            let targets = l
                .superclass
                .iter()
                .chain(&l.interfaces)
                .chain(&l.aggregation)
                .chain(&l.parameter)
                .chain(&l.returns)
                .chain(&l.generic);
            for t in targets {
                if !model.classes.contains_key(t) {
                    return Err(ExtractError::InconsistentModel(format!(
                        "{id} links to unknown class {t}"
                    )));
                }
            }
            if !model.depth.contains_key(id) {
                return Err(ExtractError::InconsistentModel(format!(
                    "{id} has no depth"
                )));
            }
        }
        if model.depth.len() != model.classes.len() {
            return Err(ExtractError::InconsistentModel(
                "depth table does not match class table".into(),
            ));
        }
        Ok(model)
    }
}

struct UnitScope<'a> {
    package: &'a str,
    imports: &'a [Import],
    top_level: Vec<String>,
}

struct Flat<'a> {
    decl: &'a ClassDecl,
    unit: usize,
    file: &'a str,
    enclosing: Option<String>,
    /// Innermost first: the class, then each enclosing class.
    scope_chain: Vec<String>,
    type_params: BTreeSet<String>,
}

fn flatten<'a>(
    decl: &'a ClassDecl,
    unit: usize,
    file: &'a str,
    outer: Option<&Flat<'a>>,
    out: &mut Vec<Flat<'a>>,
) {
    let mut scope_chain = vec![decl.qualified_name.clone()];
    let mut type_params: BTreeSet<String> = decl.type_params.iter().cloned().collect();
    if let Some(o) = outer {
        scope_chain.extend(o.scope_chain.iter().cloned());
        type_params.extend(o.type_params.iter().cloned());
    }
    let flat = Flat {
        decl,
        unit,
        file,
        enclosing: outer.map(|o| o.decl.qualified_name.clone()),
        scope_chain,
        type_params,
    };
    for nested in &decl.nested {
        flatten(nested, unit, file, Some(&flat), out);
    }
    out.push(flat);
}

fn simple_name(qualified: &str) -> &str {
    qualified.rsplit('.').next().unwrap_or(qualified)
}

fn qualify(prefix: &str, name: &str) -> String {
    if prefix.is_empty() {
        name.to_string()
    } else {
        format!("{prefix}.{name}")
    }
}

struct Resolver<'a> {
    known: &'a BTreeSet<String>,
}

impl Resolver<'_> {
    fn known(&self, name: &str) -> Option<String> {
        self.known.contains(name).then(|| name.to_string())
    }

    /// Resolution order for a simple name: types of the same unit (innermost
    /// scope outwards), same package, single-type imports, on-demand imports,
    /// then the implicit `java.lang.*`.
    fn simple(&self, scope: &UnitScope, chain: &[String], name: &str) -> Option<String> {
        for class in chain {
            if let Some(hit) = self.known(&format!("{class}.{name}")) {
                return Some(hit);
            }
            if simple_name(class) == name {
                return Some(class.clone());
            }
        }
        if let Some(top) = scope.top_level.iter().find(|t| simple_name(t) == name) {
            return Some(top.clone());
        }
        if let Some(hit) = self.known(&qualify(scope.package, name)) {
            return Some(hit);
        }
        let single = scope
            .imports
            .iter()
            .find(|i| !i.is_static && !i.on_demand && simple_name(&i.path) == name);
        if let Some(import) = single {
            return self.known(&import.path);
        }
        for import in scope.imports.iter().filter(|i| !i.is_static && i.on_demand) {
            if let Some(hit) = self.known(&qualify(&import.path, name)) {
                return Some(hit);
            }
        }
        self.known(&qualify("java.lang", name))
    }

    fn resolve(
        &self,
        scope: &UnitScope,
        chain: &[String],
        type_params: &BTreeSet<String>,
        name: &str,
    ) -> Option<String> {
        if type_params.contains(name) {
            return None;
        }
        match name.split_once('.') {
            None => self.simple(scope, chain, name),
            Some((first, rest)) => self.known(name).or_else(|| {
                self.simple(scope, chain, first)
                    .and_then(|base| self.known(&format!("{base}.{rest}")))
            }),
        }
    }
}

fn is_primitive_name(name: &str) -> bool {
    name == "void" || super::PRIMITIVES.contains(&name)
}

/// Merges parsed units into a model. Units are processed in path order, so
/// the result does not depend on the order they are passed in.
pub fn build_model(units: &[SourceUnit]) -> Result<ClassModel, ExtractError> {
    let mut units: Vec<&SourceUnit> = units.iter().collect();
    units.sort_by(|a, b| a.path.cmp(&b.path));

    let mut flats = Vec::new();
    let mut scopes = Vec::new();
    for (ui, su) in units.iter().enumerate() {
        for decl in &su.unit.types {
            flatten(decl, ui, &su.path, None, &mut flats);
        }
        scopes.push(UnitScope {
            package: su.unit.package.as_deref().unwrap_or(""),
            imports: &su.unit.imports,
            top_level: su
                .unit
                .types
                .iter()
                .map(|t| t.qualified_name.clone())
                .collect(),
        });
    }

    let mut files: BTreeMap<&str, &str> = BTreeMap::new();
    for f in &flats {
        if let Some(first) = files.insert(&f.decl.qualified_name, f.file) {
            return Err(ExtractError::DuplicateClass {
                name: f.decl.qualified_name.clone(),
                first: first.to_string(),
                second: f.file.to_string(),
            });
        }
    }
    let known: BTreeSet<String> = files.keys().map(|k| k.to_string()).collect();
    let resolver = Resolver { known: &known };
    let id = |s: &str| NodeId::new(s).expect("class names are valid node ids");

    let mut model = ClassModel::default();
    for f in &flats {
        let scope = &scopes[f.unit];
        let decl = f.decl;
        let me = id(&decl.qualified_name);
        let mut seen: BTreeMap<String, Option<NodeId>> = BTreeMap::new();
        let mut resolve = |name: &str, extra: &[String]| -> Option<NodeId> {
            if is_primitive_name(name) {
                return None;
            }
            if extra.iter().any(|t| t == name) {
                return None;
            }
            let hit = resolver
                .resolve(scope, &f.scope_chain, &f.type_params, name)
                .map(|s| id(&s));
            seen.entry(name.to_string()).or_insert_with(|| hit.clone());
            hit
        };
        let mut resolve_all = |extra: &[String], names: Vec<&str>| {
            names
                .into_iter()
                .filter_map(|n| resolve(n, extra))
                .collect::<Vec<_>>()
        };

        let mut links = Links::default();
        if let Some(sup) = &decl.superclass {
            links.superclass = resolve_all(&[], vec![sup.name.as_str()]).pop();
        } else if decl.kind == TypeKind::Class
            && decl.qualified_name != OBJECT
            && known.contains(OBJECT)
        {
            links.superclass = Some(id(OBJECT));
            links.implicit_superclass = true;
        }
        for i in &decl.interfaces {
            links
                .interfaces
                .extend(resolve_all(&[], vec![i.name.as_str()]));
        }
        for field in &decl.fields {
            let targets = resolve_all(&[], field.ty.coupled_names());
            if field.is_static && targets.contains(&me) {
                links.static_self_fields += 1;
            }
            links.aggregation.extend(targets);
            links
                .generic
                .extend(resolve_all(&[], field.ty.argument_names()));
        }
        for m in &decl.methods {
            for p in &m.params {
                links
                    .parameter
                    .extend(resolve_all(&m.type_params, p.coupled_names()));
                links
                    .generic
                    .extend(resolve_all(&m.type_params, p.argument_names()));
            }
            if let Some(r) = &m.return_type {
                links
                    .returns
                    .extend(resolve_all(&m.type_params, r.coupled_names()));
                links
                    .generic
                    .extend(resolve_all(&m.type_params, r.argument_names()));
            }
        }
        for c in &decl.constructors {
            // resolved for the record only; constructors are not methods
            for p in &c.params {
                resolve_all(&[], p.coupled_names());
            }
        }

        let mut stripped = decl.clone();
        let nested = std::mem::take(&mut stripped.nested)
            .iter()
            .map(|n| id(&n.qualified_name))
            .collect();
        model.resolution.insert(me.clone(), seen);
        model.classes.insert(
            me,
            ModelClass {
                file: f.file.to_string(),
                package: scope.package.to_string(),
                enclosing: f.enclosing.as_deref().map(id),
                nested,
                decl: stripped,
                links,
            },
        );
    }

    model.depth = compute_depth(&model)?;
    Ok(model)
}

/// Depth in the inheritance hierarchy. Interfaces and `java.lang.Object` sit
/// at 0; a class with no superclass, or one outside the model, sits at 1;
/// otherwise one more than its superclass.
pub fn compute_depth(model: &ClassModel) -> Result<BTreeMap<NodeId, usize>, ExtractError> {
    let mut depth: BTreeMap<NodeId, usize> = BTreeMap::new();
    for start in model.classes.keys() {
        let mut path: Vec<&NodeId> = Vec::new();
        let mut current = start;
        let base = loop {
            if let Some(&d) = depth.get(current) {
                break d;
            }
            if let Some(pos) = path.iter().position(|p| *p == current) {
                let mut cycle: Vec<String> = path[pos..].iter().map(|p| p.to_string()).collect();
                cycle.push(current.to_string());
                return Err(ExtractError::InheritanceCycle(cycle));
            }
            let class = &model.classes[current];
            if class.decl.kind == TypeKind::Interface || current.as_str() == OBJECT {
                depth.insert(current.clone(), 0);
                break 0;
            }
            match &class.links.superclass {
                Some(sup) if model.classes.contains_key(sup) => {
                    path.push(current);
                    current = sup;
                }
                _ => {
                    depth.insert(current.clone(), 1);
                    break 1;
                }
            }
        };
        for (i, node) in path.iter().rev().enumerate() {
            depth.insert((*node).clone(), base + i + 1);
        }
    }
    Ok(depth)
}

/// Coupling graph of one kind over all model classes.
///
/// Inheritance edges run parent -> child and interface edges run
/// interface -> implementer, so descendants add to the supertype's gain.
/// Aggregation, parameter, return, and generic edges run from the class
/// whose declaration mentions a type to that type.
pub fn build_coupling_graph(model: &ClassModel, kind: CouplingKind) -> CouplingGraph {
    let mut edges = Vec::new();
    for (id, class) in &model.classes {
        let l = &class.links;
        match kind {
            CouplingKind::Inheritance => {
                if let Some(sup) = &l.superclass {
                    edges.push((sup.clone(), id.clone()));
                }
            }
            CouplingKind::Interface => {
                edges.extend(l.interfaces.iter().map(|i| (i.clone(), id.clone())));
            }
            CouplingKind::Aggregation => {
                edges.extend(l.aggregation.iter().map(|t| (id.clone(), t.clone())));
            }
            CouplingKind::Parameter => {
                edges.extend(l.parameter.iter().map(|t| (id.clone(), t.clone())));
            }
            CouplingKind::Return => {
                edges.extend(l.returns.iter().map(|t| (id.clone(), t.clone())));
            }
            CouplingKind::Generic => {
                edges.extend(l.generic.iter().map(|t| (id.clone(), t.clone())));
            }
        }
    }
    CouplingGraph::build(kind, model.classes.keys().cloned(), edges)
        .expect("model links only target model classes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::parse_compilation_unit;

    fn model(files: &[(&str, &str)]) -> Result<ClassModel, ExtractError> {
        let units: Vec<SourceUnit> = files
            .iter()
            .map(|(path, src)| SourceUnit {
                path: path.to_string(),
                unit: parse_compilation_unit(src).unwrap(),
            })
            .collect();
        build_model(&units)
    }

    fn edges(g: &CouplingGraph) -> Vec<(String, String)> {
        g.edges()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect()
    }

    fn pair(a: &str, b: &str) -> (String, String) {
        (a.to_string(), b.to_string())
    }

    #[test]
    fn explicit_import_resolves() {
        let m = model(&[
            ("p1/A.java", "package p1; import p2.B; class A { B b; }"),
            ("p2/B.java", "package p2; public class B {}"),
        ])
        .unwrap();
        let g = build_coupling_graph(&m, CouplingKind::Aggregation);
        assert_eq!(edges(&g), vec![pair("p1.A", "p2.B")]);
        assert_eq!(
            m.resolution["p1.A"]["B"],
            Some(NodeId::new("p2.B").unwrap())
        );
    }

    #[test]
    fn external_types_make_no_edges() {
        let m = model(&[("A.java", "class A { java.util.List l; String s; }")]).unwrap();
        let g = build_coupling_graph(&m, CouplingKind::Aggregation);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.node_count(), 1);
        assert_eq!(m.resolution["A"]["java.util.List"], None);
    }

    #[test]
    fn nested_self_reference() {
        let m = model(&[("A.java", "class A { class B { B b; } }")]).unwrap();
        let g = build_coupling_graph(&m, CouplingKind::Aggregation);
        assert_eq!(edges(&g), vec![pair("A.B", "A.B")]);
        assert_eq!(m.classes["A.B"].enclosing, Some(NodeId::new("A").unwrap()));
        assert_eq!(m.classes["A"].nested, vec![NodeId::new("A.B").unwrap()]);
    }

    #[test]
    fn resolution_order() {
        let m = model(&[
            (
                "a/Main.java",
                "package a; import b.Shadow; import c.*;\n\
                 class Main { Local l; Sibling s; Shadow sh; Wild w; Main.Inner i; Inner j; \
                 class Inner {} }\n\
                 class Local {}",
            ),
            ("a/Sibling.java", "package a; class Sibling {}"),
            ("a/Shadow.java", "package a; class Shadow {}"),
            ("b/Shadow.java", "package b; class Shadow {}"),
            ("c/Wild.java", "package c; class Wild {}"),
            ("c/Sibling.java", "package c; class Sibling {}"),
        ])
        .unwrap();
        let agg = &m.classes["a.Main"].links.aggregation;
        let got: Vec<&str> = agg.iter().map(NodeId::as_str).collect();
        // same-package Shadow wins over the single-type import
        assert_eq!(
            got,
            vec!["a.Local", "a.Main.Inner", "a.Shadow", "a.Sibling", "c.Wild"]
        );
    }

    #[test]
    fn single_import_of_external_shadows_on_demand() {
        let m = model(&[
            (
                "a/A.java",
                "package a; import lib.Thing; import c.*; class A { Thing t; }",
            ),
            ("c/Thing.java", "package c; class Thing {}"),
        ])
        .unwrap();
        assert!(m.classes["a.A"].links.aggregation.is_empty());
    }

    #[test]
    fn type_parameters_do_not_resolve() {
        let m = model(&[
            ("T.java", "class T {}"),
            (
                "Box.java",
                "class Box<T> { T value; <U> U map(T t) { return null; } }",
            ),
        ])
        .unwrap();
        let l = &m.classes["Box"].links;
        assert!(l.aggregation.is_empty());
        assert!(l.parameter.is_empty());
        assert!(l.returns.is_empty());
    }

    #[test]
    fn duplicate_class_names_both_files() {
        let err = model(&[
            ("x/A.java", "package p; class A {}"),
            ("y/A.java", "package p; class A {}"),
        ])
        .unwrap_err();
        assert_eq!(
            err,
            ExtractError::DuplicateClass {
                name: "p.A".into(),
                first: "x/A.java".into(),
                second: "y/A.java".into()
            }
        );
    }

    #[test]
    fn depth_rules() {
        let m = model(&[
            (
                "java/lang/Object.java",
                "package java.lang; public class Object {}",
            ),
            (
                "java/lang/Throwable.java",
                "package java.lang; public class Throwable {}",
            ),
            (
                "java/lang/Exception.java",
                "package java.lang; public class Exception extends Throwable {}",
            ),
            (
                "app/Handler.java",
                "package app; interface ErrorHandler { void a(); void b(); void c(); }\n\
                 class Servlet extends javax.servlet.HttpServlet {}\n\
                 class Mine extends Exception {}",
            ),
        ])
        .unwrap();
        let d = |n: &str| m.depth[n];
        assert_eq!(d("java.lang.Object"), 0);
        assert_eq!(d("java.lang.Throwable"), 1);
        assert_eq!(d("java.lang.Exception"), 2);
        assert_eq!(d("app.ErrorHandler"), 0);
        assert_eq!(d("app.Servlet"), 1);
        // java.lang.* is implicitly imported
        assert_eq!(d("app.Mine"), 3);
        assert!(m.classes["java.lang.Throwable"].links.implicit_superclass);
        assert!(m.classes["app.Servlet"].links.superclass.is_none());
    }

    #[test]
    fn inheritance_cycle_is_reported() {
        let err = model(&[(
            "C.java",
            "class A extends B {} class B extends C {} class C extends A {}",
        )])
        .unwrap_err();
        assert_eq!(
            err,
            ExtractError::InheritanceCycle(vec!["A".into(), "B".into(), "C".into(), "A".into()])
        );
    }

    #[test]
    fn graph_directions() {
        let m = model(&[(
            "All.java",
            "interface I {}\n\
             class A {}\n\
             class B extends A implements I { java.util.List<A> as; A[] arr; \
               C make(A a) { return null; } }\n\
             class C { static final C ONE = new C(), TWO = new C(); }",
        )])
        .unwrap();
        assert_eq!(
            edges(&build_coupling_graph(&m, CouplingKind::Inheritance)),
            vec![pair("A", "B")]
        );
        assert_eq!(
            edges(&build_coupling_graph(&m, CouplingKind::Interface)),
            vec![pair("I", "B")]
        );
        assert_eq!(
            edges(&build_coupling_graph(&m, CouplingKind::Aggregation)),
            vec![pair("B", "A"), pair("C", "C")]
        );
        assert_eq!(
            edges(&build_coupling_graph(&m, CouplingKind::Parameter)),
            vec![pair("B", "A")]
        );
        assert_eq!(
            edges(&build_coupling_graph(&m, CouplingKind::Return)),
            vec![pair("B", "C")]
        );
        assert_eq!(
            edges(&build_coupling_graph(&m, CouplingKind::Generic)),
            vec![pair("B", "A")]
        );
        assert_eq!(m.classes["C"].links.static_self_fields, 2);
    }

    #[test]
    fn build_is_order_independent() {
        let files = [
            (
                "b/B.java",
                "package b; import a.A; class B extends A { A peer; }",
            ),
            ("a/A.java", "package a; public class A { b.B child; }"),
        ];
        let mut reversed = files;
        reversed.reverse();
        assert_eq!(model(&files).unwrap(), model(&reversed).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let m = model(&[(
            "A.java",
            "enum E { X, Y; } class A<T> extends Base { E e; java.util.Map<String, A> m; }",
        )])
        .unwrap();
        let back = ClassModel::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
        let broken = m
            .to_json()
            .replace("\"superclass\": null", "\"superclass\": \"Nope\"");
        assert!(ClassModel::from_json(&broken).is_err());
    }
}
