//! Declaration-level parser for Java sources.
//!
//! Only what the class metrics need is understood: package and imports,
//! type declarations with their supertypes, fields, method and constructor
//! signatures, and nested types. Method bodies and initializers are skipped
//! by bracket matching; annotations, type-parameter bounds and lambdas are
//! consumed without being interpreted.

use super::decl::{
    ClassDecl, CompilationUnit, ConstructorDecl, FieldDecl, Import, MethodDecl, TypeKind, TypeRef,
    UnparsedMember,
};
use super::lexer::{tokenize, Tok, Token};
use super::ParseError;

const MODIFIERS: [&str; 13] = [
    "public",
    "protected",
    "private",
    "static",
    "final",
    "abstract",
    "native",
    "synchronized",
    "transient",
    "volatile",
    "strictfp",
    "default",
    "sealed",
];

pub fn parse_compilation_unit(src: &str) -> Result<CompilationUnit, ParseError> {
    let tokens = tokenize(src)?;
    let last_line = src.lines().count().max(1);
    Parser {
        toks: tokens,
        pos: 0,
        last_line,
        package: None,
    }
    .unit()
}

#[derive(Default)]
struct Modifiers {
    is_static: bool,
}

enum Member {
    Nothing,
    Fields(Vec<FieldDecl>),
    Method(MethodDecl),
    Constructor(ConstructorDecl),
    Nested(ClassDecl),
}

#[derive(Clone, Copy, PartialEq)]
enum DeclKeyword {
    Class,
    Interface,
    Enum,
    Annotation,
    Record,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    last_line: usize,
    package: Option<String>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.peek_at(0)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    fn line(&self) -> usize {
        self.toks.get(self.pos).map_or(self.last_line, |t| t.line)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line(), message)
    }

    fn at_punct(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Punct(c))
    }

    fn punct_at(&self, k: usize, c: char) -> bool {
        self.peek_at(k) == Some(&Tok::Punct(c))
    }

    fn at_ident(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(id)) if id == s)
    }

    fn ident_at(&self, k: usize) -> Option<&str> {
        match self.peek_at(k) {
            Some(Tok::Ident(id)) => Some(id),
            _ => None,
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        if self.at_punct(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn eat_ident(&mut self, s: &str) -> bool {
        if self.at_ident(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(id)) => {
                let id = id.clone();
                self.pos += 1;
                Ok(id)
            }
            _ => Err(self.err("expected an identifier")),
        }
    }

    fn qualified_name(&mut self) -> Result<String, ParseError> {
        let mut name = self.ident()?;
        while self.at_punct('.') && self.ident_at(1).is_some() {
            self.pos += 1;
            name.push('.');
            name.push_str(&self.ident()?);
        }
        Ok(name)
    }

    /// Skips from an opening bracket to its partner. Returns the lines of
    /// both brackets.
    fn skip_balanced(&mut self, open: char, close: char) -> Result<(usize, usize), ParseError> {
        let open_line = self.line();
        self.expect_punct(open)?;
        let mut depth = 1;
        while let Some(tok) = self.toks.get(self.pos) {
            match tok.tok {
                Tok::Punct(c) if c == open => depth += 1,
                Tok::Punct(c) if c == close => {
                    depth -= 1;
                    if depth == 0 {
                        let close_line = tok.line;
                        self.pos += 1;
                        return Ok((open_line, close_line));
                    }
                }
                _ => {}
            }
            self.pos += 1;
        }
        Err(ParseError::new(
            open_line,
            format!("unbalanced `{open}`: no matching `{close}`"),
        ))
    }

    fn skip_annotation(&mut self) -> Result<(), ParseError> {
        self.expect_punct('@')?;
        self.qualified_name()?;
        if self.at_punct('(') {
            self.skip_balanced('(', ')')?;
        }
        Ok(())
    }

    fn at_annotation(&self) -> bool {
        self.at_punct('@') && self.ident_at(1).is_some_and(|id| id != "interface")
    }

    fn skip_annotations(&mut self) -> Result<(), ParseError> {
        while self.at_annotation() {
            self.skip_annotation()?;
        }
        Ok(())
    }

    fn modifiers(&mut self) -> Result<Modifiers, ParseError> {
        let mut mods = Modifiers::default();
        loop {
            if self.at_annotation() {
                self.skip_annotation()?;
            } else if let Some(id) = self.ident_at(0) {
                if id == "non" && self.punct_at(1, '-') && self.ident_at(2) == Some("sealed") {
                    self.pos += 3;
                } else if MODIFIERS.contains(&id) {
                    if id == "static" {
                        mods.is_static = true;
                    }
                    self.pos += 1;
                } else {
                    break;
                }
            } else {
                break;
            }
        }
        Ok(mods)
    }

    fn decl_keyword(&self) -> Option<DeclKeyword> {
        match self.peek()? {
            Tok::Punct('@') if self.ident_at(1) == Some("interface") => {
                Some(DeclKeyword::Annotation)
            }
            Tok::Ident(id) => match id.as_str() {
                "class" => Some(DeclKeyword::Class),
                "interface" => Some(DeclKeyword::Interface),
                "enum" => Some(DeclKeyword::Enum),
                "record"
                    if self.ident_at(1).is_some()
                        && (self.punct_at(2, '(') || self.punct_at(2, '<')) =>
                {
                    Some(DeclKeyword::Record)
                }
                _ => None,
            },
            _ => None,
        }
    }

    fn unit(mut self) -> Result<CompilationUnit, ParseError> {
        let mut unit = CompilationUnit::default();
        loop {
            while self.eat_punct(';') {}
            if self.peek().is_none() {
                break;
            }
            self.modifiers()?;
            if self.eat_ident("package") {
                let name = self.qualified_name()?;
                self.expect_punct(';')?;
                self.package = Some(name.clone());
                unit.package = Some(name);
            } else if self.eat_ident("import") {
                let is_static = self.eat_ident("static");
                let path = self.qualified_name()?;
                let on_demand = self.at_punct('.') && self.punct_at(1, '*');
                if on_demand {
                    self.pos += 2;
                }
                self.expect_punct(';')?;
                unit.imports.push(Import {
                    path,
                    is_static,
                    on_demand,
                });
            } else if let Some(kw) = self.decl_keyword() {
                let prefix = self.package.clone();
                unit.types.push(self.type_decl(kw, prefix.as_deref())?);
            } else {
                return Err(self.err("expected a type declaration"));
            }
        }
        Ok(unit)
    }

    fn type_decl(
        &mut self,
        kw: DeclKeyword,
        prefix: Option<&str>,
    ) -> Result<ClassDecl, ParseError> {
        if kw == DeclKeyword::Annotation {
            self.pos += 1;
        }
        self.pos += 1;
        let name = self.ident()?;
        let qualified = match prefix {
            Some(p) => format!("{p}.{name}"),
            None => name.clone(),
        };
        let kind = match kw {
            DeclKeyword::Class | DeclKeyword::Record => TypeKind::Class,
            DeclKeyword::Interface | DeclKeyword::Annotation => TypeKind::Interface,
            DeclKeyword::Enum => TypeKind::Enum,
        };
        let mut decl = ClassDecl::new(&name, qualified, kind);

        if self.at_punct('<') {
            decl.type_params = self.type_params()?;
        }
        if kw == DeclKeyword::Record {
            for (ty, field) in self.record_components()? {
                decl.fields.push(FieldDecl {
                    name: field,
                    ty,
                    is_static: false,
                    enum_constant: false,
                });
            }
        }
        if self.eat_ident("extends") {
            match kind {
                TypeKind::Interface => decl.interfaces = self.type_list()?,
                _ => decl.superclass = Some(self.parse_type()?),
            }
        }
        if self.eat_ident("implements") {
            let list = self.type_list()?;
            decl.interfaces.extend(list);
        }
        if self.eat_ident("permits") {
            self.type_list()?;
        }

        let open_line = self.line();
        self.expect_punct('{')?;
        if kind == TypeKind::Enum {
            self.enum_constants(&mut decl)?;
        }
        loop {
            if self.eat_punct('}') {
                return Ok(decl);
            }
            if self.peek().is_none() {
                return Err(ParseError::new(
                    open_line,
                    format!("unbalanced `{{`: body of {} is never closed", decl.name),
                ));
            }
            let start = self.pos;
            let line = self.line();
            match self.member(&decl, kw == DeclKeyword::Record) {
                Ok(Member::Nothing) => {}
                Ok(Member::Fields(fields)) => decl.fields.extend(fields),
                Ok(Member::Method(m)) => decl.methods.push(m),
                Ok(Member::Constructor(c)) => decl.constructors.push(c),
                Ok(Member::Nested(n)) => decl.nested.push(n),
                Err(e) => {
                    self.pos = start;
                    self.recover_member()?;
                    decl.unparsed.push(UnparsedMember {
                        line,
                        reason: e.message,
                    });
                }
            }
        }
    }

    /// Skips one member after a failed parse: up to and including a `;` or a
    /// top-level `{...}` block, stopping before the enclosing body's `}`.
    fn recover_member(&mut self) -> Result<(), ParseError> {
        let start_line = self.line();
        while let Some(tok) = self.peek() {
            match tok {
                Tok::Punct('{') => {
                    self.skip_balanced('{', '}')?;
                    // a block followed by these continues an expression
                    if [',', ')', '.'].iter().any(|&c| self.at_punct(c)) {
                        continue;
                    }
                    self.eat_punct(';');
                    return Ok(());
                }
                Tok::Punct('}') => return Ok(()),
                Tok::Punct(';') => {
                    self.pos += 1;
                    return Ok(());
                }
                _ => {}
            }
            self.pos += 1;
        }
        Err(ParseError::new(
            start_line,
            "unexpected end of file inside a member",
        ))
    }

    fn member(&mut self, owner: &ClassDecl, is_record: bool) -> Result<Member, ParseError> {
        if self.eat_punct(';') {
            return Ok(Member::Nothing);
        }
        let mods = self.modifiers()?;
        if self.at_punct('{') {
            self.skip_balanced('{', '}')?;
            return Ok(Member::Nothing);
        }
        if let Some(kw) = self.decl_keyword() {
            return Ok(Member::Nested(
                self.type_decl(kw, Some(&owner.qualified_name))?,
            ));
        }
        let type_params = if self.at_punct('<') {
            self.type_params()?
        } else {
            Vec::new()
        };

        if self.at_ident(&owner.name) && self.punct_at(1, '(') {
            self.pos += 1;
            let params = self.params()?;
            self.throws()?;
            self.skip_balanced('{', '}')?;
            return Ok(Member::Constructor(ConstructorDecl { params }));
        }
        if is_record && self.at_ident(&owner.name) && self.punct_at(1, '{') {
            // compact canonical constructor
            self.pos += 1;
            self.skip_balanced('{', '}')?;
            return Ok(Member::Nothing);
        }

        let ty = if self.eat_ident("void") {
            None
        } else {
            Some(self.parse_type()?)
        };
        let name = self.ident()?;

        if self.at_punct('(') {
            let params = self.params()?;
            let extra_dims = self.dims()?;
            let return_type = ty.map(|mut t| {
                t.dims += extra_dims;
                t
            });
            self.throws()?;
            let body_line_count = if self.at_punct('{') {
                let (open, close) = self.skip_balanced('{', '}')?;
                close.saturating_sub(open).saturating_sub(1)
            } else if self.eat_punct(';') {
                0
            } else if self.eat_ident("default") {
                self.skip_initializer()?;
                self.expect_punct(';')?;
                0
            } else {
                return Err(self.err("expected a method body or `;`"));
            };
            return Ok(Member::Method(MethodDecl {
                name,
                return_type,
                params,
                type_params,
                body_line_count,
            }));
        }

        let ty = ty.ok_or_else(|| self.err("a field cannot have type void"))?;
        let is_static = mods.is_static || owner.kind == TypeKind::Interface;
        let mut fields = Vec::new();
        let mut name = name;
        loop {
            let mut field_ty = ty.clone();
            field_ty.dims += self.dims()?;
            fields.push(FieldDecl {
                name,
                ty: field_ty,
                is_static,
                enum_constant: false,
            });
            if self.eat_punct('=') {
                self.skip_initializer()?;
            }
            if self.eat_punct(',') {
                name = self.ident()?;
                continue;
            }
            self.expect_punct(';')?;
            return Ok(Member::Fields(fields));
        }
    }

    fn enum_constants(&mut self, decl: &mut ClassDecl) -> Result<(), ParseError> {
        loop {
            self.skip_annotations()?;
            if self.eat_punct(';') || self.at_punct('}') {
                return Ok(());
            }
            let name = self.ident()?;
            if self.at_punct('(') {
                self.skip_balanced('(', ')')?;
            }
            if self.at_punct('{') {
                self.skip_balanced('{', '}')?;
            }
            decl.fields.push(FieldDecl {
                name,
                ty: TypeRef::simple(decl.name.clone()),
                is_static: true,
                enum_constant: true,
            });
            if self.eat_punct(',') {
                continue;
            }
            if self.eat_punct(';') || self.at_punct('}') {
                return Ok(());
            }
            return Err(self.err("malformed enum constant list"));
        }
    }

    fn record_components(&mut self) -> Result<Vec<(TypeRef, String)>, ParseError> {
        self.expect_punct('(')?;
        let mut out = Vec::new();
        if self.eat_punct(')') {
            return Ok(out);
        }
        loop {
            self.skip_annotations()?;
            let mut ty = self.parse_type()?;
            if self.varargs() {
                ty.dims += 1;
            }
            let name = self.ident()?;
            out.push((ty, name));
            if self.eat_punct(')') {
                return Ok(out);
            }
            self.expect_punct(',')?;
        }
    }

    fn params(&mut self) -> Result<Vec<TypeRef>, ParseError> {
        self.expect_punct('(')?;
        let mut params = Vec::new();
        if self.eat_punct(')') {
            return Ok(params);
        }
        loop {
            self.modifiers()?;
            let mut ty = self.parse_type()?;
            if self.varargs() {
                ty.dims += 1;
            }
            if self.eat_ident("this") {
                // receiver parameter, not a real argument
            } else {
                self.ident()?;
                ty.dims += self.dims()?;
                params.push(ty);
            }
            if self.eat_punct(')') {
                return Ok(params);
            }
            self.expect_punct(',')?;
        }
    }

    fn varargs(&mut self) -> bool {
        if self.at_punct('.') && self.punct_at(1, '.') && self.punct_at(2, '.') {
            self.pos += 3;
            true
        } else {
            false
        }
    }

    fn throws(&mut self) -> Result<(), ParseError> {
        if self.eat_ident("throws") {
            self.type_list()?;
        }
        Ok(())
    }

    fn dims(&mut self) -> Result<usize, ParseError> {
        let mut dims = 0;
        loop {
            let save = self.pos;
            self.skip_annotations()?;
            if self.at_punct('[') && self.punct_at(1, ']') {
                self.pos += 2;
                dims += 1;
            } else {
                self.pos = save;
                return Ok(dims);
            }
        }
    }

    fn type_list(&mut self) -> Result<Vec<TypeRef>, ParseError> {
        let mut list = vec![self.parse_type()?];
        while self.eat_punct(',') {
            list.push(self.parse_type()?);
        }
        Ok(list)
    }

    fn parse_type(&mut self) -> Result<TypeRef, ParseError> {
        self.skip_annotations()?;
        let mut name = self.ident()?;
        let mut args = Vec::new();
        if self.at_punct('<') {
            args = self.type_args()?;
        }
        while self.at_punct('.') && self.ident_at(1).is_some() {
            self.pos += 1;
            name.push('.');
            name.push_str(&self.ident()?);
            if self.at_punct('<') {
                args = self.type_args()?;
            }
        }
        let dims = self.dims()?;
        Ok(TypeRef { name, args, dims })
    }

    fn type_args(&mut self) -> Result<Vec<TypeRef>, ParseError> {
        self.expect_punct('<')?;
        let mut args = Vec::new();
        if self.eat_punct('>') {
            return Ok(args);
        }
        loop {
            self.skip_annotations()?;
            if self.eat_punct('?') {
                if self.eat_ident("extends") || self.eat_ident("super") {
                    args.push(self.parse_type()?);
                }
            } else {
                args.push(self.parse_type()?);
            }
            if self.eat_punct('>') {
                return Ok(args);
            }
            self.expect_punct(',')?;
        }
    }

    fn type_params(&mut self) -> Result<Vec<String>, ParseError> {
        self.expect_punct('<')?;
        let mut names = Vec::new();
        loop {
            self.skip_annotations()?;
            names.push(self.ident()?);
            if self.eat_ident("extends") {
                self.parse_type()?;
                while self.eat_punct('&') {
                    self.parse_type()?;
                }
            }
            if self.eat_punct('>') {
                return Ok(names);
            }
            self.expect_punct(',')?;
        }
    }

    /// Skips an initializer expression up to (not including) the `,` or `;`
    /// that ends the declarator. Generic arguments after `new` or a `.` are
    /// consumed as a unit so their commas are not mistaken for separators.
    fn skip_initializer(&mut self) -> Result<(), ParseError> {
        let start_line = self.line();
        let mut depth = 0usize;
        loop {
            let Some(tok) = self.peek().cloned() else {
                return Err(ParseError::new(start_line, "unterminated initializer"));
            };
            match tok {
                Tok::Punct(',' | ';') if depth == 0 => return Ok(()),
                Tok::Punct('(' | '[' | '{') => depth += 1,
                Tok::Punct(')' | ']' | '}') => {
                    if depth == 0 {
                        return Err(self.err("unbalanced brackets in initializer"));
                    }
                    depth -= 1;
                }
                Tok::Ident(ref id) if id == "new" => {
                    self.pos += 1;
                    self.skip_annotations()?;
                    if self.ident_at(0).is_some() {
                        self.parse_type()?;
                    }
                    continue;
                }
                Tok::Punct('.') if self.punct_at(1, '<') => {
                    self.pos += 1;
                    self.skip_balanced('<', '>')?;
                    continue;
                }
                _ => {}
            }
            self.pos += 1;
        }
    }
}
