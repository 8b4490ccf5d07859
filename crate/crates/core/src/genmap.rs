//! Output-specific generator information stored in the symbol table.
//!
//! Each registered generator owns a sub-scope of the global scope holding
//! the Java symbols it creates. Source (class-diagram) symbols are linked to
//! those Java symbols by per-generator mappings tagged with a [`Role`], and
//! Java classes and fields carry a [`GeneratorInfo`] record describing how
//! instances are created and how fields are read and written.
//!
//! All registration methods are idempotent for identical arguments and
//! refuse to silently remap a symbol to a different name. The setters
//! (`add_instantiation`, `set_accessor`, `set_mutator`) are last-write-wins.

use std::fmt;

use serde::Serialize;

use crate::cdlang::TypeForm;
use crate::error::{Error, Result};
use crate::java::is_java_identifier;
use crate::symtab::{Payload, ScopeId, SymbolDecl, SymbolId, SymbolKind, SymbolTable};

/// Handle for a registered generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeneratorId(String);

impl GeneratorId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Role {
    TypeOf,
    FieldOf,
    AccessorOf,
    MutatorOf,
    MethodOf,
    BackingFieldOf,
}

impl Role {
    pub const ALL: [Role; 6] = [
        Role::TypeOf,
        Role::FieldOf,
        Role::AccessorOf,
        Role::MutatorOf,
        Role::MethodOf,
        Role::BackingFieldOf,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::TypeOf => "TYPE_OF",
            Role::FieldOf => "FIELD_OF",
            Role::AccessorOf => "ACCESSOR_OF",
            Role::MutatorOf => "MUTATOR_OF",
            Role::MethodOf => "METHOD_OF",
            Role::BackingFieldOf => "BACKING_FIELD_OF",
        }
    }

    /// Whether `source_kind --role--> target_kind` is an allowed mapping.
    pub fn allows(self, source_kind: SymbolKind, target_kind: SymbolKind) -> bool {
        match (source_kind, self) {
            (SymbolKind::CdType, Role::TypeOf) => target_kind.is_java_type(),
            (SymbolKind::CdField, Role::FieldOf) => target_kind == SymbolKind::JavaField,
            (SymbolKind::CdField, Role::AccessorOf | Role::MutatorOf) => {
                target_kind == SymbolKind::JavaMethod
            }
            (SymbolKind::CdMethod, Role::MethodOf) => target_kind == SymbolKind::JavaMethod,
            (SymbolKind::CdMethod, Role::BackingFieldOf) => target_kind == SymbolKind::JavaField,
            _ => false,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InstantiationStrategy {
    DirectNew,
    Factory,
    Singleton,
    Custom,
}

/// How instances of a generated Java class are created.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JavaClassGI {
    pub instantiation_code: Option<String>,
    pub strategy: InstantiationStrategy,
    /// Cleared when a transformation makes `new C()` unavailable to clients.
    pub direct_new_allowed: bool,
}

impl Default for JavaClassGI {
    fn default() -> Self {
        JavaClassGI {
            instantiation_code: None,
            strategy: InstantiationStrategy::DirectNew,
            direct_new_allowed: true,
        }
    }
}

/// Method names through which a generated field is read and written.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JavaFieldGI {
    pub accessor_code: Option<String>,
    pub mutator_code: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorInfo {
    JavaClass(JavaClassGI),
    JavaField(JavaFieldGI),
}

/// Whether rendering may fall back to plain Java when information is
/// missing (`Fallback`) or must fail (`Strict`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RenderMode {
    #[default]
    Strict,
    Fallback,
}

pub(crate) type MappingKey = (SymbolId, usize, Role);

/// One `source --role--> target` edge recorded under a generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolMapping {
    pub source: SymbolId,
    pub generator: GeneratorId,
    pub role: Role,
    pub target: SymbolId,
}

fn check_identifier(name: &str, what: &str) -> Result<()> {
    if is_java_identifier(name) {
        Ok(())
    } else {
        Err(Error::precondition(format!(
            "`{name}` is not a valid Java {what} name"
        )))
    }
}

fn check_code(code: &str, what: &str) -> Result<()> {
    if code.trim().is_empty() {
        Err(Error::precondition(format!("{what} code must not be empty")))
    } else {
        Ok(())
    }
}

impl SymbolTable {
    /// Registers a generator and creates its Java-symbol scope.
    pub fn register_generator(&mut self, id: &str) -> Result<GeneratorId> {
        if id.is_empty() {
            return Err(Error::precondition("generator id must not be empty"));
        }
        if self.generators.iter().any(|(g, _)| g.0 == id) {
            return Err(Error::DuplicateGenerator { id: id.to_string() });
        }
        let scope = self.new_scope(self.global(), Some(id.to_string()));
        let gen = GeneratorId(id.to_string());
        self.generators.push((gen.clone(), scope));
        Ok(gen)
    }

    pub fn generator(&self, id: &str) -> Option<GeneratorId> {
        self.generators
            .iter()
            .find(|(g, _)| g.0 == id)
            .map(|(g, _)| g.clone())
    }

    pub fn generators(&self) -> impl Iterator<Item = &GeneratorId> {
        self.generators.iter().map(|(g, _)| g)
    }

    fn generator_index(&self, gen: &GeneratorId) -> Result<usize> {
        self.generators
            .iter()
            .position(|(g, _)| g == gen)
            .ok_or_else(|| Error::UnknownGenerator { id: gen.0.clone() })
    }

    /// The scope that holds the Java symbols created by `gen`.
    pub fn generator_scope(&self, gen: &GeneratorId) -> Result<ScopeId> {
        Ok(self.generators[self.generator_index(gen)?].1)
    }

    fn expect_kind(&self, id: SymbolId, expected: SymbolKind) -> Result<()> {
        let sym = self.symbol(id);
        if sym.kind == expected {
            Ok(())
        } else {
            Err(Error::Kind {
                symbol: self.qualified_name(id),
                expected: expected.to_string(),
                found: sym.kind,
            })
        }
    }

    /// The target mapped from `source` under `gen` with `role`.
    pub fn lookup_mapping(&self, source: SymbolId, gen: &GeneratorId, role: Role) -> Result<SymbolId> {
        let index = self.generator_index(gen)?;
        self.mappings
            .get(&(source, index, role))
            .copied()
            .ok_or_else(|| Error::OrderViolation {
                symbol: self.qualified_name(source),
                role,
                generator: gen.0.clone(),
                pos: self.symbol(source).pos.clone(),
                prerequisite: None,
            })
    }

    pub fn try_lookup_mapping(&self, source: SymbolId, gen: &GeneratorId, role: Role) -> Option<SymbolId> {
        let index = self.generator_index(gen).ok()?;
        self.mappings.get(&(source, index, role)).copied()
    }

    /// All recorded mappings, ordered by source symbol, generator and role.
    pub fn mappings(&self) -> impl Iterator<Item = SymbolMapping> + '_ {
        self.mappings
            .iter()
            .map(|(&(source, gen, role), &target)| SymbolMapping {
                source,
                generator: self.generators[gen].0.clone(),
                role,
                target,
            })
    }

    /// Returns the existing target when `source` already maps under `role`,
    /// erroring if it maps to a differently named symbol.
    fn existing_target(
        &self,
        source: SymbolId,
        gen: &GeneratorId,
        role: Role,
        name: &str,
    ) -> Result<Option<SymbolId>> {
        match self.try_lookup_mapping(source, gen, role) {
            Some(target) if self.symbol(target).name == name => Ok(Some(target)),
            Some(target) => Err(Error::MappingConflict {
                source_name: self.qualified_name(source),
                generator: gen.0.clone(),
                existing: self.symbol(target).name.clone(),
                requested: name.to_string(),
            }),
            None => Ok(None),
        }
    }

    fn record(&mut self, source: SymbolId, gen: &GeneratorId, role: Role, target: SymbolId) -> Result<()> {
        let index = self.generator_index(gen)?;
        debug_assert!(role.allows(self.symbol(source).kind, self.symbol(target).kind));
        self.mappings.insert((source, index, role), target);
        Ok(())
    }

    /// Maps a CD type to a Java type named `class_name`; the Java kind
    /// follows the CD type's form. Classes start with direct instantiation.
    pub fn to_java_type(&mut self, s: SymbolId, class_name: &str, gen: &GeneratorId) -> Result<SymbolId> {
        self.expect_kind(s, SymbolKind::CdType)?;
        check_identifier(class_name, "type")?;
        let gen_scope = self.generator_scope(gen)?;
        if let Some(existing) = self.existing_target(s, gen, Role::TypeOf, class_name)? {
            return Ok(existing);
        }
        let source = self.symbol(s);
        let Payload::Type { form, is_abstract, super_name } = source.payload.clone() else {
            unreachable!("CD_TYPE symbols carry a type payload");
        };
        let kind = match form {
            TypeForm::Class => SymbolKind::JavaClass,
            TypeForm::Interface => SymbolKind::JavaInterface,
            TypeForm::Enum => SymbolKind::JavaEnum,
        };
        let pos = source.pos.clone();
        let target = self.declare(
            gen_scope,
            SymbolDecl {
                name: class_name.to_string(),
                kind,
                pos,
                payload: Payload::Type { form, is_abstract, super_name },
            },
        )?;
        self.open_scope_for(target);
        if kind == SymbolKind::JavaClass {
            self.symbol_mut(target).generator_info = Some(GeneratorInfo::JavaClass(JavaClassGI::default()));
        }
        self.record(s, gen, Role::TypeOf, target)?;
        Ok(target)
    }

    /// The scope of the Java type that `member`'s owner is mapped to.
    fn mapped_owner_scope(&self, member: SymbolId, gen: &GeneratorId) -> Result<ScopeId> {
        let owner = self
            .owner_of(member)
            .expect("CD members live in a type scope");
        let java_type = self.lookup_mapping(owner, gen, Role::TypeOf)?;
        Ok(self.symbol(java_type).spanned_scope.expect("Java types open a scope"))
    }

    /// Maps a CD field to a Java field named `field_name` inside the Java
    /// type of its owner. The owner must already be mapped.
    pub fn to_java_field(&mut self, s: SymbolId, field_name: &str, gen: &GeneratorId) -> Result<SymbolId> {
        self.expect_kind(s, SymbolKind::CdField)?;
        check_identifier(field_name, "field")?;
        if let Some(existing) = self.existing_target(s, gen, Role::FieldOf, field_name)? {
            return Ok(existing);
        }
        let scope = self.mapped_owner_scope(s, gen)?;
        let source = self.symbol(s);
        let (payload, pos, shadows) = (source.payload.clone(), source.pos.clone(), source.shadows);
        let target = self.declare(
            scope,
            SymbolDecl {
                name: field_name.to_string(),
                kind: SymbolKind::JavaField,
                pos,
                payload,
            },
        )?;
        let sym = self.symbol_mut(target);
        sym.shadows = shadows;
        sym.generator_info = Some(GeneratorInfo::JavaField(JavaFieldGI::default()));
        self.record(s, gen, Role::FieldOf, target)?;
        Ok(target)
    }

    /// Maps a CD method to a Java method named `method_name` inside the Java
    /// type of its owner. The owner must already be mapped.
    pub fn to_java_method(&mut self, s: SymbolId, method_name: &str, gen: &GeneratorId) -> Result<SymbolId> {
        self.expect_kind(s, SymbolKind::CdMethod)?;
        check_identifier(method_name, "method")?;
        if let Some(existing) = self.existing_target(s, gen, Role::MethodOf, method_name)? {
            return Ok(existing);
        }
        let scope = self.mapped_owner_scope(s, gen)?;
        let source = self.symbol(s);
        let (payload, pos) = (source.payload.clone(), source.pos.clone());
        let target = self.declare(
            scope,
            SymbolDecl {
                name: method_name.to_string(),
                kind: SymbolKind::JavaMethod,
                pos,
                payload,
            },
        )?;
        self.record(s, gen, Role::MethodOf, target)?;
        Ok(target)
    }

    fn field_accessor_method(
        &mut self,
        field: SymbolId,
        method_name: &str,
        gen: &GeneratorId,
        role: Role,
    ) -> Result<SymbolId> {
        self.expect_kind(field, SymbolKind::CdField)?;
        check_identifier(method_name, "method")?;
        if let Some(existing) = self.existing_target(field, gen, role, method_name)? {
            return Ok(existing);
        }
        let java_field = self.lookup_mapping(field, gen, Role::FieldOf)?;
        let sym = self.symbol(java_field);
        let Payload::Field { type_name } = sym.payload.clone() else {
            unreachable!("field symbols carry a field payload");
        };
        let (scope, pos) = (sym.scope, sym.pos.clone());
        let payload = if role == Role::AccessorOf {
            Payload::Method {
                return_type_name: type_name,
                params: Vec::new(),
            }
        } else {
            Payload::Method {
                return_type_name: "void".into(),
                params: vec![crate::cdlang::CdParam {
                    name: sym.name.clone(),
                    type_name,
                }],
            }
        };
        let target = self.declare(
            scope,
            SymbolDecl {
                name: method_name.to_string(),
                kind: SymbolKind::JavaMethod,
                pos,
                payload,
            },
        )?;
        self.record(field, gen, role, target)?;
        Ok(target)
    }

    /// Creates the Java getter `method_name` for a mapped CD field and
    /// records it with role `ACCESSOR_OF`.
    pub fn map_accessor_method(&mut self, field: SymbolId, method_name: &str, gen: &GeneratorId) -> Result<SymbolId> {
        self.field_accessor_method(field, method_name, gen, Role::AccessorOf)
    }

    /// Creates the one-argument Java setter `method_name` for a mapped CD
    /// field and records it with role `MUTATOR_OF`.
    pub fn map_mutator_method(&mut self, field: SymbolId, method_name: &str, gen: &GeneratorId) -> Result<SymbolId> {
        self.field_accessor_method(field, method_name, gen, Role::MutatorOf)
    }

    /// Records that a CD method is realised as direct access to an already
    /// generated Java field of the same owner.
    pub fn map_backing_field(&mut self, method: SymbolId, field_name: &str, gen: &GeneratorId) -> Result<SymbolId> {
        self.expect_kind(method, SymbolKind::CdMethod)?;
        if let Some(existing) = self.existing_target(method, gen, Role::BackingFieldOf, field_name)? {
            return Ok(existing);
        }
        let scope = self.mapped_owner_scope(method, gen)?;
        let target = self
            .lookup_local(scope, field_name, SymbolKind::JavaField)
            .ok_or_else(|| Error::SymbolNotFound {
                name: field_name.to_string(),
                kind: SymbolKind::JavaField,
                from_scope: self.scope_name(scope),
            })?;
        self.record(method, gen, Role::BackingFieldOf, target)?;
        Ok(target)
    }

    fn class_gi_mut(&mut self, c: SymbolId) -> Result<&mut JavaClassGI> {
        self.expect_kind(c, SymbolKind::JavaClass)?;
        let sym = self.symbol_mut(c);
        if !matches!(sym.generator_info, Some(GeneratorInfo::JavaClass(_))) {
            sym.generator_info = Some(GeneratorInfo::JavaClass(JavaClassGI::default()));
        }
        match &mut sym.generator_info {
            Some(GeneratorInfo::JavaClass(gi)) => Ok(gi),
            _ => unreachable!(),
        }
    }

    fn field_gi_mut(&mut self, f: SymbolId) -> Result<&mut JavaFieldGI> {
        self.expect_kind(f, SymbolKind::JavaField)?;
        let sym = self.symbol_mut(f);
        if !matches!(sym.generator_info, Some(GeneratorInfo::JavaField(_))) {
            sym.generator_info = Some(GeneratorInfo::JavaField(JavaFieldGI::default()));
        }
        match &mut sym.generator_info {
            Some(GeneratorInfo::JavaField(gi)) => Ok(gi),
            _ => unreachable!(),
        }
    }

    pub fn class_info(&self, c: SymbolId) -> Option<&JavaClassGI> {
        match &self.symbol(c).generator_info {
            Some(GeneratorInfo::JavaClass(gi)) => Some(gi),
            _ => None,
        }
    }

    pub fn field_info(&self, f: SymbolId) -> Option<&JavaFieldGI> {
        match &self.symbol(f).generator_info {
            Some(GeneratorInfo::JavaField(gi)) => Some(gi),
            _ => None,
        }
    }

    /// Stores the code snippet that creates an instance of `c`,
    /// e.g. `BookFactory.create()`.
    pub fn add_instantiation(&mut self, c: SymbolId, code: &str) -> Result<()> {
        check_code(code, "instantiation")?;
        let gi = self.class_gi_mut(c)?;
        gi.instantiation_code = Some(code.to_string());
        gi.strategy = InstantiationStrategy::Custom;
        Ok(())
    }

    /// Declares that clients may not use `new C()`; strict rendering then
    /// requires an instantiation snippet.
    pub fn forbid_direct_instantiation(&mut self, c: SymbolId, strategy: InstantiationStrategy) -> Result<()> {
        if !matches!(strategy, InstantiationStrategy::Factory | InstantiationStrategy::Singleton) {
            return Err(Error::precondition(
                "only FACTORY or SINGLETON can replace direct instantiation",
            ));
        }
        let gi = self.class_gi_mut(c)?;
        gi.direct_new_allowed = false;
        if gi.instantiation_code.is_none() {
            gi.strategy = strategy;
        }
        Ok(())
    }

    /// Stores a creation snippet produced by a design pattern and forbids
    /// `new C()` for clients.
    pub fn set_instantiation(&mut self, c: SymbolId, code: &str, strategy: InstantiationStrategy) -> Result<()> {
        check_code(code, "instantiation")?;
        let gi = self.class_gi_mut(c)?;
        gi.instantiation_code = Some(code.to_string());
        gi.strategy = strategy;
        if strategy != InstantiationStrategy::DirectNew {
            gi.direct_new_allowed = false;
        }
        Ok(())
    }

    /// Declares a Java method without a diagram counterpart (such as a
    /// singleton's `getInstance`) in Java type `java_type`. Declaring the
    /// same name again returns the existing method.
    pub fn add_java_method(&mut self, java_type: SymbolId, name: &str, return_type_name: &str) -> Result<SymbolId> {
        let sym = self.symbol(java_type);
        if !sym.kind.is_java_type() {
            return Err(Error::Kind {
                symbol: self.qualified_name(java_type),
                expected: SymbolKind::JavaType.to_string(),
                found: sym.kind,
            });
        }
        check_identifier(name, "method")?;
        let scope = sym.spanned_scope.expect("Java types open a scope");
        if let Some(existing) = self.lookup_local(scope, name, SymbolKind::JavaMethod) {
            return Ok(existing);
        }
        let pos = sym.pos.clone();
        self.declare(
            scope,
            SymbolDecl {
                name: name.to_string(),
                kind: SymbolKind::JavaMethod,
                pos,
                payload: Payload::Method {
                    return_type_name: return_type_name.to_string(),
                    params: Vec::new(),
                },
            },
        )
    }

    /// Stores the name of the method that reads field `f`.
    pub fn set_accessor(&mut self, f: SymbolId, code: &str) -> Result<()> {
        check_code(code, "accessor")?;
        self.field_gi_mut(f)?.accessor_code = Some(code.to_string());
        Ok(())
    }

    /// Stores the name of the one-argument method that writes field `f`.
    pub fn set_mutator(&mut self, f: SymbolId, code: &str) -> Result<()> {
        check_code(code, "mutator")?;
        self.field_gi_mut(f)?.mutator_code = Some(code.to_string());
        Ok(())
    }

    /// Expression that creates an instance of Java class `c`.
    pub fn render_instantiation(&self, c: SymbolId, mode: RenderMode) -> Result<String> {
        self.expect_kind(c, SymbolKind::JavaClass)?;
        let default = JavaClassGI::default();
        let gi = self.class_info(c).unwrap_or(&default);
        if let Some(code) = &gi.instantiation_code {
            return Ok(code.clone());
        }
        if mode == RenderMode::Strict && !gi.direct_new_allowed {
            return Err(Error::MissingGeneratorInfo {
                symbol: self.symbol(c).name.clone(),
                needed: "instantiation".into(),
                pos: self.symbol(c).pos.clone(),
                prerequisite: None,
            });
        }
        Ok(format!("new {}()", self.symbol(c).name))
    }

    /// `<receiver>.<accessor>()`, or `<receiver>.<field>` as fallback.
    pub fn render_accessor_call(&self, receiver: &str, f: SymbolId, mode: RenderMode) -> Result<String> {
        if receiver.trim().is_empty() {
            return Err(Error::precondition("accessor call needs a receiver expression"));
        }
        self.expect_kind(f, SymbolKind::JavaField)?;
        match self.field_info(f).and_then(|gi| gi.accessor_code.as_ref()) {
            Some(code) => Ok(format!("{receiver}.{code}()")),
            None if mode == RenderMode::Strict => Err(self.missing_field_info(f, "accessor")),
            None => Ok(format!("{receiver}.{}", self.symbol(f).name)),
        }
    }

    /// `<receiver>.<mutator>(<arg>)`, or `<receiver>.<field> = <arg>` as
    /// fallback. Mutators always take exactly one argument.
    pub fn render_mutator_call(&self, receiver: &str, f: SymbolId, arg: &str, mode: RenderMode) -> Result<String> {
        if receiver.trim().is_empty() {
            return Err(Error::precondition("mutator call needs a receiver expression"));
        }
        if arg.trim().is_empty() {
            return Err(Error::precondition("mutator call needs exactly one argument expression"));
        }
        self.expect_kind(f, SymbolKind::JavaField)?;
        match self.field_info(f).and_then(|gi| gi.mutator_code.as_ref()) {
            Some(code) => Ok(format!("{receiver}.{code}({arg})")),
            None if mode == RenderMode::Strict => Err(self.missing_field_info(f, "mutator")),
            None => Ok(format!("{receiver}.{} = {arg}", self.symbol(f).name)),
        }
    }

    fn missing_field_info(&self, f: SymbolId, needed: &str) -> Error {
        Error::MissingGeneratorInfo {
            symbol: self.qualified_name(f),
            needed: needed.to_string(),
            pos: self.symbol(f).pos.clone(),
            prerequisite: None,
        }
    }

    /// Checks every mapping against the allowed role table and every
    /// generator info record against its symbol kind. Returns one message
    /// per violation.
    pub fn validate_mappings(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for m in self.mappings() {
            let (s, t) = (self.symbol(m.source), self.symbol(m.target));
            if !m.role.allows(s.kind, t.kind) {
                problems.push(format!(
                    "{} ({}) --{}--> {} ({}) under {}",
                    self.qualified_name(m.source),
                    s.kind,
                    m.role,
                    self.qualified_name(m.target),
                    t.kind,
                    m.generator
                ));
            }
        }
        for id in self.symbol_ids() {
            let sym = self.symbol(id);
            let ok = match &sym.generator_info {
                None => true,
                Some(GeneratorInfo::JavaClass(gi)) => {
                    sym.kind == SymbolKind::JavaClass
                        && match gi.strategy {
                            InstantiationStrategy::DirectNew => {
                                gi.instantiation_code.is_none() && gi.direct_new_allowed
                            }
                            InstantiationStrategy::Custom => gi.instantiation_code.is_some(),
                            InstantiationStrategy::Factory | InstantiationStrategy::Singleton => {
                                !gi.direct_new_allowed
                            }
                        }
                }
                Some(GeneratorInfo::JavaField(_)) => sym.kind == SymbolKind::JavaField,
            };
            if !ok {
                problems.push(format!(
                    "generator info on {} ({}) is malformed",
                    self.qualified_name(id),
                    sym.kind
                ));
            }
        }
        problems
    }
}
