//! Renders parsed declarations back to Java source.
//!
//! Output re-parses to the same declarations: bodies are emitted as the
//! recorded number of blank lines, initializers and parameter names are
//! synthesized. Members marked unparsed are dropped.

use std::fmt::Write as _;

use super::decl::{ClassDecl, CompilationUnit, TypeKind};

pub fn render_unit(unit: &CompilationUnit) -> String {
    let mut out = String::new();
    if let Some(p) = &unit.package {
        let _ = writeln!(out, "package {p};");
    }
    for i in &unit.imports {
        let _ = writeln!(
            out,
            "import {}{}{};",
            if i.is_static { "static " } else { "" },
            i.path,
            if i.on_demand { ".*" } else { "" }
        );
    }
    for t in &unit.types {
        out.push('\n');
        render_class(t, 0, &mut out);
    }
    out
}

fn render_class(decl: &ClassDecl, level: usize, out: &mut String) {
    let pad = "    ".repeat(level);
    let inner = "    ".repeat(level + 1);
    let _ = write!(out, "{pad}{} {}", decl.kind, decl.name);
    if !decl.type_params.is_empty() {
        let _ = write!(out, "<{}>", decl.type_params.join(", "));
    }
    if let Some(sup) = &decl.superclass {
        let _ = write!(out, " extends {sup}");
    }
    if !decl.interfaces.is_empty() {
        let list: Vec<String> = decl.interfaces.iter().map(ToString::to_string).collect();
        let keyword = if decl.kind == TypeKind::Interface {
            "extends"
        } else {
            "implements"
        };
        let _ = write!(out, " {keyword} {}", list.join(", "));
    }
    out.push_str(" {\n");

    if decl.kind == TypeKind::Enum {
        let constants: Vec<&str> = decl
            .fields
            .iter()
            .filter(|f| f.enum_constant)
            .map(|f| f.name.as_str())
            .collect();
        let _ = writeln!(out, "{inner}{};", constants.join(", "));
    }
    for f in decl.fields.iter().filter(|f| !f.enum_constant) {
        let stat = if f.is_static && decl.kind != TypeKind::Interface {
            "static "
        } else {
            ""
        };
        let _ = writeln!(out, "{inner}{stat}{} {};", f.ty, f.name);
    }
    for c in &decl.constructors {
        let params = param_list(c.params.iter().map(ToString::to_string));
        let _ = writeln!(out, "{inner}{}({params}) {{ }}", decl.name);
    }
    for m in &decl.methods {
        let tparams = if m.type_params.is_empty() {
            String::new()
        } else {
            format!("<{}> ", m.type_params.join(", "))
        };
        let ret = m
            .return_type
            .as_ref()
            .map_or_else(|| "void".to_string(), ToString::to_string);
        let params = param_list(m.params.iter().map(ToString::to_string));
        let _ = write!(out, "{inner}{tparams}{ret} {}({params})", m.name);
        if m.body_line_count == 0 {
            out.push_str(";\n");
        } else {
            out.push_str(" {\n");
            for _ in 0..m.body_line_count {
                out.push('\n');
            }
            let _ = writeln!(out, "{inner}}}");
        }
    }
    for n in &decl.nested {
        render_class(n, level + 1, out);
    }
    let _ = writeln!(out, "{pad}}}");
}

fn param_list(types: impl Iterator<Item = String>) -> String {
    types
        .enumerate()
        .map(|(i, t)| format!("{t} p{i}"))
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extract::parse_compilation_unit;

    #[test]
    fn round_trip_preserves_declarations() {
        let src = "package p;\nimport q.*;\nimport static q.U.f;\n\
                   public class A<T> extends B<T> implements I, J<T> {\n\
                     static final A SELF = new A(), OTHER;\n\
                     java.util.Map<String, java.util.List<T>> index;\n\
                     int[][] grid;\n\
                     A() {}\n\
                     A(int a, String... rest) {}\n\
                     <U> U[] convert(java.util.List<? extends U> in, T t) {\n\
                       return null;\n\
                     }\n\
                     abstract void none();\n\
                     enum Mode { ON, OFF; int weight; }\n\
                     interface Listener extends java.util.EventListener { int X = 1; void on(); }\n\
                   }\n";
        let unit = parse_compilation_unit(src).unwrap();
        let again = parse_compilation_unit(&render_unit(&unit)).unwrap();
        assert_eq!(again, unit);
    }
}
