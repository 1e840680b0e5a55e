//! Java source extraction: parsing, name resolution, and the class model the
//! coupling graphs and metrics are computed from.

mod decl;
mod lexer;
mod model;
mod parser;
mod pretty;

use std::fmt;
use std::fs;
use std::path::Path;

use thiserror::Error;
use walkdir::WalkDir;

pub use decl::{
    count_members, ClassDecl, CompilationUnit, ConstructorDecl, FieldDecl, Import, MemberCounts,
    MethodDecl, TypeKind, TypeRef, UnparsedMember, PRIMITIVES,
};
pub use model::{
    build_coupling_graph, build_model, compute_depth, ClassModel, Links, ModelClass, SourceUnit,
    OBJECT,
};
pub use parser::parse_compilation_unit;
pub use pretty::render_unit;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExtractError {
    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    #[error("class {name} is declared in both {first} and {second}")]
    DuplicateClass {
        name: String,
        first: String,
        second: String,
    },

    #[error("inheritance cycle: {}", .0.join(" -> "))]
    InheritanceCycle(Vec<String>),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("model file is inconsistent: {0}")]
    InconsistentModel(String),
}

/// Parsed sources plus the warnings produced while skipping bad files.
#[derive(Debug, Default)]
pub struct LoadedSources {
    pub units: Vec<SourceUnit>,
    pub warnings: Vec<String>,
}

/// Parses every `*.java` file under `root`, in sorted path order.
///
/// Paths in the result are relative to `root` with `/` separators. With
/// `lenient`, files that fail to parse are skipped with a warning; otherwise
/// the first failure is returned. `module-info.java` is always skipped.
pub fn load_sources(root: &Path, lenient: bool) -> Result<LoadedSources, ExtractError> {
    let io_err = |path: &Path, e: &dyn fmt::Display| ExtractError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    if !root.is_dir() {
        return Err(io_err(root, &"not a directory"));
    }

    let mut files = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| io_err(root, &e))?;
        let path = entry.path();
        if entry.file_type().is_file()
            && path.extension().is_some_and(|e| e == "java")
            && path.file_name().is_some_and(|n| n != "module-info.java")
        {
            files.push(path.to_path_buf());
        }
    }

    let mut loaded = LoadedSources::default();
    for path in files {
        let rel = path
            .strip_prefix(root)
            .unwrap_or(&path)
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect::<Vec<_>>()
            .join("/");
        let text = match fs::read(&path) {
            Ok(bytes) => String::from_utf8_lossy(&bytes).into_owned(),
            Err(e) => return Err(io_err(&path, &e)),
        };
        match parse_compilation_unit(&text) {
            Ok(unit) => loaded.units.push(SourceUnit { path: rel, unit }),
            Err(e) if lenient => {
                loaded
                    .warnings
                    .push(format!("skipped {rel}:{}: {}", e.line, e.message));
            }
            Err(e) => {
                return Err(ExtractError::Parse {
                    file: rel,
                    line: e.line,
                    message: e.message,
                })
            }
        }
    }
    loaded.units.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(loaded)
}
