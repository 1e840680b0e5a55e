use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TypeKind {
    Class,
    Interface,
    Enum,
}

impl fmt::Display for TypeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TypeKind::Class => "class",
            TypeKind::Interface => "interface",
            TypeKind::Enum => "enum",
        })
    }
}

/// A type as written in a declaration: `java.util.Map<K, List<V>>[]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TypeRef {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub args: Vec<TypeRef>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub dims: usize,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

pub const PRIMITIVES: [&str; 8] = [
    "boolean", "byte", "char", "short", "int", "long", "float", "double",
];

impl TypeRef {
    pub fn simple(name: impl Into<String>) -> Self {
        TypeRef {
            name: name.into(),
            args: Vec::new(),
            dims: 0,
        }
    }

    pub fn is_primitive(&self) -> bool {
        PRIMITIVES.contains(&self.name.as_str())
    }

    /// Names a coupling edge may target: the type itself (or array
    /// element), its type arguments, and the arguments of those arguments.
    /// Deeper nesting is not followed.
    pub fn coupled_names(&self) -> Vec<&str> {
        let mut names = vec![self.name.as_str()];
        names.extend(self.argument_names());
        names
    }

    /// Type-argument names, two nesting levels deep.
    pub fn argument_names(&self) -> Vec<&str> {
        let mut names = Vec::new();
        for arg in &self.args {
            names.push(arg.name.as_str());
            names.extend(arg.args.iter().map(|a| a.name.as_str()));
        }
        names
    }
}

impl fmt::Display for TypeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.args.is_empty() {
            f.write_str("<")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(">")?;
        }
        for _ in 0..self.dims {
            f.write_str("[]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDecl {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: TypeRef,
    pub is_static: bool,
    /// Enum constants are recorded as static fields of the enum's own type.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub enum_constant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodDecl {
    pub name: String,
    /// `None` for `void`.
    pub return_type: Option<TypeRef>,
    pub params: Vec<TypeRef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub type_params: Vec<String>,
    /// Physical lines strictly between the body's braces; 0 without a body.
    pub body_line_count: usize,
}

impl MethodDecl {
    /// `name(T1, T2)`, used to tell overloads apart in reports.
    pub fn signature(&self) -> String {
        let params: Vec<String> = self.params.iter().map(ToString::to_string).collect();
        format!("{}({})", self.name, params.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructorDecl {
    pub params: Vec<TypeRef>,
}

/// A member the parser could not make sense of. The rest of the unit is
/// still accepted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnparsedMember {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassDecl {
    pub name: String,
    pub qualified_name: String,
    pub kind: TypeKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub type_params: Vec<String>,
    pub superclass: Option<TypeRef>,
    /// `implements` for classes and enums, `extends` for interfaces.
    pub interfaces: Vec<TypeRef>,
    pub fields: Vec<FieldDecl>,
    pub methods: Vec<MethodDecl>,
    pub constructors: Vec<ConstructorDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub nested: Vec<ClassDecl>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unparsed: Vec<UnparsedMember>,
}

impl ClassDecl {
    pub fn new(name: &str, qualified_name: String, kind: TypeKind) -> Self {
        ClassDecl {
            name: name.to_string(),
            qualified_name,
            kind,
            type_params: Vec::new(),
            superclass: None,
            interfaces: Vec::new(),
            fields: Vec::new(),
            methods: Vec::new(),
            constructors: Vec::new(),
            nested: Vec::new(),
            unparsed: Vec::new(),
        }
    }
}

/// (methods, attributes, constructors) as declared. Constructors are not
/// methods; every field declarator, static or not, is an attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MemberCounts {
    pub methods: usize,
    pub attributes: usize,
    pub constructors: usize,
}

pub fn count_members(decl: &ClassDecl) -> MemberCounts {
    MemberCounts {
        methods: decl.methods.len(),
        attributes: decl.fields.len(),
        constructors: decl.constructors.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Import {
    pub path: String,
    pub is_static: bool,
    pub on_demand: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CompilationUnit {
    pub package: Option<String>,
    pub imports: Vec<Import>,
    pub types: Vec<ClassDecl>,
}
