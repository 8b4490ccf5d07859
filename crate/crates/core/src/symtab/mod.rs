//! Scope-tree symbol table for class-diagram models and the Java symbols
//! generated from them.
//!
//! Scopes and symbols live in arenas owned by [`SymbolTable`] and are
//! addressed by [`ScopeId`] / [`SymbolId`]. The global scope holds one
//! `CD_TYPE` symbol per diagram type; each type symbol spans a sub-scope with
//! its fields and methods. Every registered generator gets its own sub-scope
//! of the global scope for the Java symbols it creates (see `genmap`).

mod build;
mod dump;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::cdlang::{CdParam, SourcePos, TypeForm};
use crate::error::{Error, Result};
use crate::genmap::{GeneratorId, GeneratorInfo, MappingKey};

pub use build::build_symbol_table;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScopeId(usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(usize);

impl ScopeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl SymbolId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SymbolKind {
    CdType,
    CdField,
    CdMethod,
    JavaType,
    JavaClass,
    JavaInterface,
    JavaEnum,
    JavaField,
    JavaMethod,
}

/// Groups of kinds whose names must be unique within one scope.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Namespace {
    Type,
    Field,
    Method,
}

impl SymbolKind {
    pub const ALL: [SymbolKind; 9] = [
        SymbolKind::CdType,
        SymbolKind::CdField,
        SymbolKind::CdMethod,
        SymbolKind::JavaType,
        SymbolKind::JavaClass,
        SymbolKind::JavaInterface,
        SymbolKind::JavaEnum,
        SymbolKind::JavaField,
        SymbolKind::JavaMethod,
    ];

    pub fn namespace(self) -> Namespace {
        match self {
            SymbolKind::CdType
            | SymbolKind::JavaType
            | SymbolKind::JavaClass
            | SymbolKind::JavaInterface
            | SymbolKind::JavaEnum => Namespace::Type,
            SymbolKind::CdField | SymbolKind::JavaField => Namespace::Field,
            SymbolKind::CdMethod | SymbolKind::JavaMethod => Namespace::Method,
        }
    }

    pub fn is_cd(self) -> bool {
        matches!(
            self,
            SymbolKind::CdType | SymbolKind::CdField | SymbolKind::CdMethod
        )
    }

    pub fn is_java(self) -> bool {
        !self.is_cd()
    }

    pub fn is_java_type(self) -> bool {
        matches!(
            self,
            SymbolKind::JavaType
                | SymbolKind::JavaClass
                | SymbolKind::JavaInterface
                | SymbolKind::JavaEnum
        )
    }

    /// Whether a symbol of kind `self` answers a query for `query`.
    /// A `JAVA_TYPE` query matches every Java type sub-kind.
    pub fn satisfies(self, query: SymbolKind) -> bool {
        self == query || (query == SymbolKind::JavaType && self.is_java_type())
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SymbolKind::CdType => "CD_TYPE",
            SymbolKind::CdField => "CD_FIELD",
            SymbolKind::CdMethod => "CD_METHOD",
            SymbolKind::JavaType => "JAVA_TYPE",
            SymbolKind::JavaClass => "JAVA_CLASS",
            SymbolKind::JavaInterface => "JAVA_INTERFACE",
            SymbolKind::JavaEnum => "JAVA_ENUM",
            SymbolKind::JavaField => "JAVA_FIELD",
            SymbolKind::JavaMethod => "JAVA_METHOD",
        }
    }
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Kind-specific data carried by a symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Type {
        form: TypeForm,
        is_abstract: bool,
        super_name: Option<String>,
    },
    Field {
        type_name: String,
    },
    Method {
        return_type_name: String,
        params: Vec<CdParam>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub kind: SymbolKind,
    /// The scope that contains this symbol.
    pub scope: ScopeId,
    pub pos: Option<SourcePos>,
    /// Set on field symbols that hide a same-named field of a supertype.
    pub shadows: bool,
    pub payload: Payload,
    pub generator_info: Option<GeneratorInfo>,
    /// The scope this symbol opens (type symbols only).
    pub spanned_scope: Option<ScopeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scope {
    pub name: Option<String>,
    pub enclosing: Option<ScopeId>,
    pub symbols: Vec<SymbolId>,
    pub sub_scopes: Vec<ScopeId>,
    /// The symbol whose body this scope is, if any.
    pub spanning_symbol: Option<SymbolId>,
    index: HashMap<(String, Namespace), SymbolId>,
}

/// A new symbol to be declared with [`SymbolTable::declare`].
#[derive(Debug, Clone)]
pub struct SymbolDecl {
    pub name: String,
    pub kind: SymbolKind,
    pub pos: Option<SourcePos>,
    pub payload: Payload,
}

#[derive(Debug, Clone)]
pub struct SymbolTable {
    scopes: Vec<Scope>,
    symbols: Vec<Symbol>,
    pub(crate) generators: Vec<(GeneratorId, ScopeId)>,
    pub(crate) mappings: BTreeMap<MappingKey, SymbolId>,
}

impl Default for SymbolTable {
    fn default() -> Self {
        Self::new()
    }
}

impl SymbolTable {
    /// An empty table holding only the anonymous global scope.
    pub fn new() -> Self {
        SymbolTable {
            scopes: vec![Scope {
                name: None,
                enclosing: None,
                symbols: Vec::new(),
                sub_scopes: Vec::new(),
                spanning_symbol: None,
                index: HashMap::new(),
            }],
            symbols: Vec::new(),
            generators: Vec::new(),
            mappings: BTreeMap::new(),
        }
    }

    pub fn global(&self) -> ScopeId {
        ScopeId(0)
    }

    pub fn scope(&self, id: ScopeId) -> &Scope {
        &self.scopes[id.0]
    }

    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id.0]
    }

    pub(crate) fn symbol_mut(&mut self, id: SymbolId) -> &mut Symbol {
        &mut self.symbols[id.0]
    }

    pub fn scope_ids(&self) -> impl Iterator<Item = ScopeId> {
        (0..self.scopes.len()).map(ScopeId)
    }

    pub fn symbol_ids(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.symbols.len()).map(SymbolId)
    }

    pub fn scope_name(&self, id: ScopeId) -> String {
        self.scope(id)
            .name
            .clone()
            .unwrap_or_else(|| "<global>".to_string())
    }

    /// Adds an empty child scope below `enclosing`.
    pub fn new_scope(&mut self, enclosing: ScopeId, name: Option<String>) -> ScopeId {
        let id = ScopeId(self.scopes.len());
        self.scopes.push(Scope {
            name,
            enclosing: Some(enclosing),
            symbols: Vec::new(),
            sub_scopes: Vec::new(),
            spanning_symbol: None,
            index: HashMap::new(),
        });
        self.scopes[enclosing.0].sub_scopes.push(id);
        id
    }

    /// Adds a child scope below the symbol's own scope and links the two.
    pub fn open_scope_for(&mut self, symbol: SymbolId) -> ScopeId {
        let sym = &self.symbols[symbol.0];
        let (parent, name) = (sym.scope, sym.name.clone());
        let id = self.new_scope(parent, Some(name));
        self.scopes[id.0].spanning_symbol = Some(symbol);
        self.symbols[symbol.0].spanned_scope = Some(id);
        id
    }

    /// Declares a symbol in `scope`. Names are unique per kind namespace.
    pub fn declare(&mut self, scope: ScopeId, decl: SymbolDecl) -> Result<SymbolId> {
        let key = (decl.name.clone(), decl.kind.namespace());
        if self.scopes[scope.0].index.contains_key(&key) {
            return Err(match decl.pos {
                Some(pos) if decl.kind.is_cd() => Error::DuplicateName {
                    pos,
                    name: decl.name,
                },
                _ => Error::NameClash {
                    scope: self.scope_name(scope),
                    name: decl.name,
                },
            });
        }
        let id = SymbolId(self.symbols.len());
        self.symbols.push(Symbol {
            name: decl.name,
            kind: decl.kind,
            scope,
            pos: decl.pos,
            shadows: false,
            payload: decl.payload,
            generator_info: None,
            spanned_scope: None,
        });
        let scope = &mut self.scopes[scope.0];
        scope.symbols.push(id);
        scope.index.insert(key, id);
        Ok(id)
    }

    /// Looks a symbol up in one scope only.
    pub fn lookup_local(&self, scope: ScopeId, name: &str, kind: SymbolKind) -> Option<SymbolId> {
        let id = *self.scopes[scope.0]
            .index
            .get(&(name.to_string(), kind.namespace()))?;
        self.symbols[id.0].kind.satisfies(kind).then_some(id)
    }

    /// Finds the nearest symbol named `name` of kind `kind`, searching `from`
    /// and then each enclosing scope. Inner declarations hide outer ones.
    pub fn resolve(&self, name: &str, kind: SymbolKind, from: ScopeId) -> Result<SymbolId> {
        let mut cursor = Some(from);
        while let Some(scope) = cursor {
            if let Some(id) = self.lookup_local(scope, name, kind) {
                return Ok(id);
            }
            cursor = self.scopes[scope.0].enclosing;
        }
        Err(Error::SymbolNotFound {
            name: name.to_string(),
            kind,
            from_scope: self.scope_name(from),
        })
    }

    /// Looks a field up in a CD type scope, then along the type's extends
    /// chain. Enclosing and sibling scopes are never consulted.
    pub fn resolve_field_considering_inheritance(
        &self,
        name: &str,
        from: ScopeId,
    ) -> Result<SymbolId> {
        let mut owner = self.scopes[from.0].spanning_symbol;
        let mut scope = Some(from);
        // A well-built table has no cycles; the bound guards hand-made ones.
        let mut budget = self.symbols.len() + 1;
        while let Some(s) = scope {
            if let Some(id) = self.lookup_local(s, name, SymbolKind::CdField) {
                return Ok(id);
            }
            budget -= 1;
            if budget == 0 {
                break;
            }
            owner = owner.and_then(|t| self.super_type(t));
            scope = owner.and_then(|t| self.symbols[t.0].spanned_scope);
        }
        Err(Error::SymbolNotFound {
            name: name.to_string(),
            kind: SymbolKind::CdField,
            from_scope: self.scope_name(from),
        })
    }

    /// The CD type named as supertype of a CD type symbol.
    pub fn super_type(&self, type_symbol: SymbolId) -> Option<SymbolId> {
        let sym = &self.symbols[type_symbol.0];
        match &sym.payload {
            Payload::Type {
                super_name: Some(super_name),
                ..
            } if sym.kind == SymbolKind::CdType => {
                self.lookup_local(sym.scope, super_name, SymbolKind::CdType)
            }
            _ => None,
        }
    }

    /// The type symbol whose scope contains `member`.
    pub fn owner_of(&self, member: SymbolId) -> Option<SymbolId> {
        self.scopes[self.symbols[member.0].scope.0].spanning_symbol
    }

    /// `Book.title` for members, `Book` for types.
    pub fn qualified_name(&self, id: SymbolId) -> String {
        let sym = &self.symbols[id.0];
        match self.owner_of(id) {
            Some(owner) => format!("{}.{}", self.symbols[owner.0].name, sym.name),
            None => sym.name.clone(),
        }
    }

    /// The CD type symbol named `name` in the global scope.
    pub fn cd_type(&self, name: &str) -> Result<SymbolId> {
        self.lookup_local(self.global(), name, SymbolKind::CdType)
            .ok_or_else(|| Error::SymbolNotFound {
                name: name.to_string(),
                kind: SymbolKind::CdType,
                from_scope: self.scope_name(self.global()),
            })
    }

    /// Resolves `Type` or `Type.member` to a CD symbol. Members are looked
    /// up as fields (including inherited ones), then as methods.
    pub fn resolve_cd_path(&self, path: &str) -> Result<SymbolId> {
        let (type_name, member) = match path.split_once('.') {
            Some((t, m)) => (t, Some(m)),
            None => (path, None),
        };
        let ty = self.cd_type(type_name)?;
        let Some(member) = member else {
            return Ok(ty);
        };
        let scope = self.symbols[ty.0]
            .spanned_scope
            .expect("CD type symbols always open a scope");
        self.resolve_field_considering_inheritance(member, scope)
            .or_else(|_| {
                self.lookup_local(scope, member, SymbolKind::CdMethod)
                    .ok_or_else(|| Error::SymbolNotFound {
                        name: member.to_string(),
                        kind: SymbolKind::CdField,
                        from_scope: type_name.to_string(),
                    })
            })
    }
}
