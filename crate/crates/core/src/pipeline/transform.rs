//! The built-in AST transformations.

use crate::cdlang::{CdMethodNode, CdTypeNode, TypeForm};
use crate::error::{Error, Result};
use crate::genmap::{GeneratorId, InstantiationStrategy, Role};
use crate::java::{accessor_name, mutator_name};
use crate::symtab::{SymbolId, SymbolKind, SymbolTable};
use crate::tmpl::TemplateSet;
use crate::CdAst;

use super::TransformSpec;

pub(super) const ACCESSOR_FRAGMENT: &str = "accessor-methods";
pub(super) const SINGLETON_FRAGMENT: &str = "singleton-members";
pub(super) const FACTORY_TEMPLATE: &str = "factory-class";

pub(super) struct Step<'a> {
    pub ast: &'a mut CdAst,
    pub symtab: &'a mut SymbolTable,
    pub gen: &'a GeneratorId,
    pub templates: &'a TemplateSet,
    pub accessors: bool,
}

fn push_once(list: &mut Vec<String>, item: &str) {
    if !list.iter().any(|t| t == item) {
        list.push(item.to_string());
    }
}

impl Step<'_> {
    pub fn apply(&mut self, spec: &TransformSpec) -> Result<()> {
        match spec {
            TransformSpec::MapDefaults => self.map_defaults(),
            TransformSpec::AddAccessors if self.accessors => self.add_accessors(),
            TransformSpec::AddAccessors => Ok(()),
            TransformSpec::Factory(t) => self.factory(t),
            TransformSpec::Singleton(t) => self.singleton(t),
            TransformSpec::Attach { type_name, template } => self.attach(type_name, template),
        }
    }

    fn map_defaults(&mut self) -> Result<()> {
        let st = &mut *self.symtab;
        for node in &self.ast.types {
            let cd = st.cd_type(&node.name)?;
            st.to_java_type(cd, &node.name, self.gen)?;
            let scope = st.symbol(cd).spanned_scope.expect("CD types open a scope");
            for field in &node.fields {
                let f = member(st, scope, &field.name, SymbolKind::CdField);
                st.to_java_field(f, &field.name, self.gen)?;
            }
            for method in &node.methods {
                let m = member(st, scope, &method.name, SymbolKind::CdMethod);
                st.to_java_method(m, &method.name, self.gen)?;
            }
        }
        Ok(())
    }

    fn add_accessors(&mut self) -> Result<()> {
        let st = &mut *self.symtab;
        for node in &mut self.ast.types {
            if node.fields.is_empty() {
                continue;
            }
            let cd = st.cd_type(&node.name)?;
            let scope = st.symbol(cd).spanned_scope.expect("CD types open a scope");
            for field in &node.fields {
                let f = member(st, scope, &field.name, SymbolKind::CdField);
                let java_field = st.lookup_mapping(f, self.gen, Role::FieldOf)?;
                let java_name = st.symbol(java_field).name.clone();
                let (getter, setter) = (accessor_name(&java_name), mutator_name(&java_name));
                st.map_accessor_method(f, &getter, self.gen)?;
                st.map_mutator_method(f, &setter, self.gen)?;
                st.set_accessor(java_field, &getter)?;
                st.set_mutator(java_field, &setter)?;
            }
            push_once(&mut node.member_templates, ACCESSOR_FRAGMENT);
        }
        Ok(())
    }

    /// CD symbol of a concrete class plus the Java class it is mapped to.
    fn mapped_class(&self, type_name: &str) -> Result<(SymbolId, SymbolId)> {
        let st = &*self.symtab;
        let cd = st.cd_type(type_name)?;
        let node = self.ast.find_type(type_name).expect("declared types have a node");
        if node.form != TypeForm::Class {
            return Err(Error::Kind {
                symbol: type_name.to_string(),
                expected: "class".into(),
                found: SymbolKind::CdType,
            });
        }
        if node.is_abstract {
            return Err(Error::precondition(format!(
                "`{type_name}` is abstract and cannot be instantiated"
            )));
        }
        let java = st.lookup_mapping(cd, self.gen, Role::TypeOf)?;
        Ok((cd, java))
    }

    fn factory(&mut self, type_name: &str) -> Result<()> {
        let (_, java) = self.mapped_class(type_name)?;
        let factory_name = format!("{type_name}Factory");
        let create = CdMethodNode {
            name: "create".into(),
            return_type_name: type_name.to_string(),
            params: Vec::new(),
            pos: self.ast.find_type(type_name).expect("checked above").pos.clone(),
            attached_templates: Vec::new(),
        };
        match self.ast.find_type(&factory_name) {
            Some(existing)
                if existing.attached_templates.iter().any(|t| t == FACTORY_TEMPLATE)
                    && existing.methods.first() == Some(&create) => {}
            Some(_) => {
                return Err(Error::NameClash {
                    scope: self.symtab.scope_name(self.symtab.global()),
                    name: factory_name,
                })
            }
            None => {
                let mut node = CdTypeNode::new(&factory_name, TypeForm::Class, create.pos.clone());
                node.methods.push(create);
                node.attached_templates.push(FACTORY_TEMPLATE.to_string());
                self.symtab.declare_type(&node)?;
                let at = self
                    .ast
                    .types
                    .iter()
                    .position(|t| t.name == type_name)
                    .expect("checked above");
                self.ast.types.insert(at + 1, node);
            }
        }
        let st = &mut *self.symtab;
        let factory_cd = st.cd_type(&factory_name)?;
        let java_factory = st.to_java_type(factory_cd, &factory_name, self.gen)?;
        let create_cd = st.resolve_cd_path(&format!("{factory_name}.create"))?;
        st.to_java_method(create_cd, "create", self.gen)?;
        let java_factory_name = st.symbol(java_factory).name.clone();
        st.set_instantiation(
            java,
            &format!("{java_factory_name}.create()"),
            InstantiationStrategy::Factory,
        )?;
        Ok(())
    }

    fn singleton(&mut self, type_name: &str) -> Result<()> {
        let (_, java) = self.mapped_class(type_name)?;
        let st = &mut *self.symtab;
        let java_name = st.symbol(java).name.clone();
        st.add_java_method(java, "getInstance", &java_name)?;
        st.set_instantiation(
            java,
            &format!("{java_name}.getInstance()"),
            InstantiationStrategy::Singleton,
        )?;
        let node = self.ast.find_type_mut(type_name).expect("checked above");
        push_once(&mut node.member_templates, SINGLETON_FRAGMENT);
        Ok(())
    }

    fn attach(&mut self, type_name: &str, template: &str) -> Result<()> {
        if !self.templates.contains(template) {
            return Err(Error::Template {
                message: format!("no template named `{template}`"),
            });
        }
        let cd = self.symtab.cd_type(type_name)?;
        self.symtab.lookup_mapping(cd, self.gen, Role::TypeOf)?;
        let node = self.ast.find_type_mut(type_name).expect("declared types have a node");
        node.attached_templates.push(template.to_string());
        Ok(())
    }
}

fn member(st: &SymbolTable, scope: crate::symtab::ScopeId, name: &str, kind: SymbolKind) -> SymbolId {
    st.lookup_local(scope, name, kind)
        .expect("AST members are declared in the symbol table")
}
