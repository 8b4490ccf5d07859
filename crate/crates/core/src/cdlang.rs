//! The textual class-diagram language: positioned AST and a hand-written
//! recursive-descent parser.
//!
//! ```text
//! classdiagram Shop {
//!   abstract class Item { String title; }
//!   class Book extends Item { int pages; String describe(String prefix); }
//!   interface Priced { double price(); }
//!   enum Format { HARDCOVER, PAPERBACK }
//! }
//! ```

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// A 1-based line/column position inside a named source file.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SourcePos {
    #[serde(skip)]
    pub file: String,
    pub line: u32,
    pub col: u32,
}

impl SourcePos {
    pub fn new(file: impl Into<String>, line: u32, col: u32) -> Self {
        debug_assert!(line >= 1 && col >= 1);
        SourcePos {
            file: file.into(),
            line,
            col,
        }
    }
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TypeForm {
    Class,
    Interface,
    Enum,
}

impl TypeForm {
    pub fn keyword(self) -> &'static str {
        match self {
            TypeForm::Class => "class",
            TypeForm::Interface => "interface",
            TypeForm::Enum => "enum",
        }
    }
}

impl fmt::Display for TypeForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdAst {
    pub diagram_name: String,
    pub pos: SourcePos,
    pub types: Vec<CdTypeNode>,
}

impl CdAst {
    pub fn find_type(&self, name: &str) -> Option<&CdTypeNode> {
        self.types.iter().find(|t| t.name == name)
    }

    pub fn find_type_mut(&mut self, name: &str) -> Option<&mut CdTypeNode> {
        self.types.iter_mut().find(|t| t.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdTypeNode {
    pub name: String,
    pub form: TypeForm,
    pub is_abstract: bool,
    pub super_name: Option<String>,
    pub fields: Vec<CdFieldNode>,
    pub methods: Vec<CdMethodNode>,
    pub enum_constants: Vec<String>,
    /// Whole-unit templates bound by transformations; when non-empty they
    /// replace the default template for this node's form.
    pub attached_templates: Vec<String>,
    /// Fragment templates bound by transformations and expanded inside the
    /// type body by the unit template (accessor methods, singleton members).
    pub member_templates: Vec<String>,
    pub pos: SourcePos,
}

impl CdTypeNode {
    pub fn new(name: impl Into<String>, form: TypeForm, pos: SourcePos) -> Self {
        CdTypeNode {
            name: name.into(),
            form,
            is_abstract: false,
            super_name: None,
            fields: Vec::new(),
            methods: Vec::new(),
            enum_constants: Vec::new(),
            attached_templates: Vec::new(),
            member_templates: Vec::new(),
            pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdFieldNode {
    pub name: String,
    pub type_name: String,
    pub pos: SourcePos,
    pub attached_templates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdMethodNode {
    pub name: String,
    pub return_type_name: String,
    pub params: Vec<CdParam>,
    pub pos: SourcePos,
    pub attached_templates: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CdParam {
    pub name: String,
    pub type_name: String,
}

/// Letter followed by letters, digits or underscores (ASCII only).
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

const KEYWORDS: &[&str] = &[
    "classdiagram",
    "class",
    "interface",
    "enum",
    "abstract",
    "extends",
];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Keyword(&'static str),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Semi,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Keyword(k) => write!(f, "keyword `{k}`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: u32,
    col: u32,
}

fn lex(text: &str, file: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1u32, 1u32);

    while let Some(&c) = chars.peek() {
        let (start_line, start_col) = (line, col);
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            ';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            col += 1;
            tokens.push(Token {
                tok,
                line: start_line,
                col: start_col,
            });
            continue;
        }
        match c {
            '\n' => {
                chars.next();
                line += 1;
                col = 1;
            }
            ' ' | '\t' | '\r' | '\u{feff}' => {
                chars.next();
                col += 1;
            }
            '/' => {
                chars.next();
                if chars.peek() != Some(&'/') {
                    return Err(Error::Parse {
                        pos: SourcePos::new(file, start_line, start_col),
                        message: "unexpected `/`; comments start with `//`".into(),
                    });
                }
                while let Some(&c) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            c if c.is_ascii_alphabetic() => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        word.push(c);
                        chars.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                let tok = match KEYWORDS.iter().find(|k| **k == word) {
                    Some(k) => Tok::Keyword(k),
                    None => Tok::Ident(word),
                };
                tokens.push(Token {
                    tok,
                    line: start_line,
                    col: start_col,
                });
            }
            other => {
                return Err(Error::Parse {
                    pos: SourcePos::new(file, start_line, start_col),
                    message: format!("unexpected character {other:?}"),
                });
            }
        }
    }
    tokens.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    cursor: usize,
    file: &'a str,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.tokens[self.cursor]
    }

    fn next(&mut self) -> Token {
        let tok = self.tokens[self.cursor].clone();
        if self.cursor + 1 < self.tokens.len() {
            self.cursor += 1;
        }
        tok
    }

    fn pos_of(&self, tok: &Token) -> SourcePos {
        SourcePos::new(self.file, tok.line, tok.col)
    }

    fn error<T>(&self, tok: &Token, expected: &str) -> Result<T> {
        Err(Error::Parse {
            pos: self.pos_of(tok),
            message: format!("expected {expected}, found {}", tok.tok),
        })
    }

    fn expect(&mut self, want: Tok) -> Result<Token> {
        let tok = self.next();
        if tok.tok == want {
            Ok(tok)
        } else {
            self.error(&tok, &want.to_string())
        }
    }

    fn keyword(&mut self, kw: &'static str) -> Result<Token> {
        self.expect(Tok::Keyword(kw))
    }

    fn ident(&mut self, what: &str) -> Result<(String, SourcePos)> {
        let tok = self.next();
        match &tok.tok {
            Tok::Ident(name) => Ok((name.clone(), self.pos_of(&tok))),
            _ => self.error(&tok, what),
        }
    }

    fn at(&self, want: &Tok) -> bool {
        &self.peek().tok == want
    }

    fn diagram(&mut self) -> Result<CdAst> {
        let kw = self.keyword("classdiagram")?;
        let (diagram_name, _) = self.ident("diagram name")?;
        self.expect(Tok::LBrace)?;
        let mut types: Vec<CdTypeNode> = Vec::new();
        while !self.at(&Tok::RBrace) {
            let node = self.type_decl()?;
            if types.iter().any(|t| t.name == node.name) {
                return Err(Error::DuplicateName {
                    pos: node.pos,
                    name: node.name,
                });
            }
            types.push(node);
        }
        self.expect(Tok::RBrace)?;
        self.expect(Tok::Eof)?;
        Ok(CdAst {
            diagram_name,
            pos: self.pos_of(&kw),
            types,
        })
    }

    fn type_decl(&mut self) -> Result<CdTypeNode> {
        let tok = self.peek().clone();
        match tok.tok {
            Tok::Keyword("abstract") => {
                self.next();
                self.keyword("class")?;
                let mut node = self.class_body()?;
                node.is_abstract = true;
                Ok(node)
            }
            Tok::Keyword("class") => {
                self.next();
                self.class_body()
            }
            Tok::Keyword("interface") => {
                self.next();
                self.interface_body()
            }
            Tok::Keyword("enum") => {
                self.next();
                self.enum_body()
            }
            _ => self.error(&tok, "`class`, `abstract`, `interface`, `enum` or `}`"),
        }
    }

    fn class_body(&mut self) -> Result<CdTypeNode> {
        let (name, pos) = self.ident("class name")?;
        let mut node = CdTypeNode::new(name, TypeForm::Class, pos);
        if self.at(&Tok::Keyword("extends")) {
            self.next();
            node.super_name = Some(self.ident("supertype name")?.0);
        }
        self.expect(Tok::LBrace)?;
        while !self.at(&Tok::RBrace) {
            match self.member()? {
                Member::Field(f) => {
                    if node.fields.iter().any(|g| g.name == f.name) {
                        return Err(Error::DuplicateName {
                            pos: f.pos,
                            name: f.name,
                        });
                    }
                    node.fields.push(f);
                }
                Member::Method(m) => push_method(&mut node, m)?,
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(node)
    }

    fn interface_body(&mut self) -> Result<CdTypeNode> {
        let (name, pos) = self.ident("interface name")?;
        let mut node = CdTypeNode::new(name, TypeForm::Interface, pos);
        self.expect(Tok::LBrace)?;
        while !self.at(&Tok::RBrace) {
            let start = self.peek().clone();
            match self.member()? {
                Member::Field(_) => {
                    return Err(Error::Parse {
                        pos: self.pos_of(&start),
                        message: format!("interface `{}` cannot declare fields", node.name),
                    })
                }
                Member::Method(m) => push_method(&mut node, m)?,
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(node)
    }

    fn enum_body(&mut self) -> Result<CdTypeNode> {
        let (name, pos) = self.ident("enum name")?;
        let mut node = CdTypeNode::new(name, TypeForm::Enum, pos);
        self.expect(Tok::LBrace)?;
        loop {
            let (constant, pos) = self.ident("enum constant")?;
            if node.enum_constants.contains(&constant) {
                return Err(Error::DuplicateName {
                    pos,
                    name: constant,
                });
            }
            node.enum_constants.push(constant);
            if self.at(&Tok::Comma) {
                self.next();
            } else {
                break;
            }
        }
        self.expect(Tok::RBrace)?;
        Ok(node)
    }

    fn member(&mut self) -> Result<Member> {
        let (type_name, _) = self.ident("member type")?;
        let (name, pos) = self.ident("member name")?;
        if self.at(&Tok::Semi) {
            self.next();
            return Ok(Member::Field(CdFieldNode {
                name,
                type_name,
                pos,
                attached_templates: Vec::new(),
            }));
        }
        self.expect(Tok::LParen)?;
        let mut params: Vec<CdParam> = Vec::new();
        if !self.at(&Tok::RParen) {
            loop {
                let (param_type, _) = self.ident("parameter type")?;
                let (param_name, param_pos) = self.ident("parameter name")?;
                if params.iter().any(|p| p.name == param_name) {
                    return Err(Error::DuplicateName {
                        pos: param_pos,
                        name: param_name,
                    });
                }
                params.push(CdParam {
                    name: param_name,
                    type_name: param_type,
                });
                if self.at(&Tok::Comma) {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        self.expect(Tok::Semi)?;
        Ok(Member::Method(CdMethodNode {
            name,
            return_type_name: type_name,
            params,
            pos,
            attached_templates: Vec::new(),
        }))
    }
}

enum Member {
    Field(CdFieldNode),
    Method(CdMethodNode),
}

fn push_method(node: &mut CdTypeNode, m: CdMethodNode) -> Result<()> {
    if node.methods.iter().any(|n| n.name == m.name) {
        return Err(Error::DuplicateName {
            pos: m.pos,
            name: m.name,
        });
    }
    node.methods.push(m);
    Ok(())
}

/// Parses class-diagram source text into an AST.
pub fn parse_cd(text: &str, file_name: &str) -> Result<CdAst> {
    let tokens = lex(text, file_name)?;
    Parser {
        tokens,
        cursor: 0,
        file: file_name,
    }
    .diagram()
}

/// Like [`parse_cd`] but accepts raw bytes; invalid UTF-8 is a parse error.
pub fn parse_cd_bytes(bytes: &[u8], file_name: &str) -> Result<CdAst> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_cd(text, file_name),
        Err(e) => {
            let valid = String::from_utf8_lossy(&bytes[..e.valid_up_to()]);
            let line = valid.matches('\n').count() as u32 + 1;
            let col = valid.rsplit('\n').next().map_or(0, |l| l.chars().count()) as u32 + 1;
            Err(Error::Parse {
                pos: SourcePos::new(file_name, line, col),
                message: "input is not valid UTF-8".into(),
            })
        }
    }
}

/// Names of every type declared in the diagram, in document order.
pub fn declared_type_names(ast: &CdAst) -> HashSet<&str> {
    ast.types.iter().map(|t| t.name.as_str()).collect()
}
