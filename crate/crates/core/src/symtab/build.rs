use crate::cdlang::{CdAst, CdTypeNode, TypeForm};
use crate::error::{Error, Result};
use crate::java::is_builtin_type;

use super::{Payload, SymbolDecl, SymbolId, SymbolKind, SymbolTable};

/// Builds the symbol table for a parsed diagram.
///
/// Every type gets a `CD_TYPE` symbol in the global scope and a sub-scope
/// with its `CD_FIELD` / `CD_METHOD` symbols. Type references must name a
/// declared type or a builtin; `void` is accepted as a method return type.
pub fn build_symbol_table(ast: &CdAst) -> Result<SymbolTable> {
    let mut table = SymbolTable::new();
    let mut declared = Vec::with_capacity(ast.types.len());
    for node in &ast.types {
        declared.push(table.declare_type_symbols(node)?);
    }
    for node in &ast.types {
        table.check_type_references(node)?;
    }
    table.check_acyclic(&declared)?;
    for &ty in &declared {
        table.compute_shadowing(ty);
    }
    Ok(table)
}

impl SymbolTable {
    /// Adds one more diagram type to a built table (used by transformations
    /// that synthesize types).
    pub fn declare_type(&mut self, node: &CdTypeNode) -> Result<SymbolId> {
        let ty = self.declare_type_symbols(node)?;
        self.check_type_references(node)?;
        self.check_acyclic(&[ty])?;
        self.compute_shadowing(ty);
        Ok(ty)
    }

    fn declare_type_symbols(&mut self, node: &CdTypeNode) -> Result<SymbolId> {
        let ty = self.declare(
            self.global(),
            SymbolDecl {
                name: node.name.clone(),
                kind: SymbolKind::CdType,
                pos: Some(node.pos.clone()),
                payload: Payload::Type {
                    form: node.form,
                    is_abstract: node.is_abstract,
                    super_name: node.super_name.clone(),
                },
            },
        )?;
        let scope = self.open_scope_for(ty);
        for field in &node.fields {
            self.declare(
                scope,
                SymbolDecl {
                    name: field.name.clone(),
                    kind: SymbolKind::CdField,
                    pos: Some(field.pos.clone()),
                    payload: Payload::Field {
                        type_name: field.type_name.clone(),
                    },
                },
            )?;
        }
        for method in &node.methods {
            self.declare(
                scope,
                SymbolDecl {
                    name: method.name.clone(),
                    kind: SymbolKind::CdMethod,
                    pos: Some(method.pos.clone()),
                    payload: Payload::Method {
                        return_type_name: method.return_type_name.clone(),
                        params: method.params.clone(),
                    },
                },
            )?;
        }
        Ok(ty)
    }

    fn check_type_references(&self, node: &CdTypeNode) -> Result<()> {
        let known = |name: &str| {
            is_builtin_type(name)
                || self
                    .lookup_local(self.global(), name, SymbolKind::CdType)
                    .is_some()
        };
        if let Some(super_name) = &node.super_name {
            let Some(super_id) = self.lookup_local(self.global(), super_name, SymbolKind::CdType)
            else {
                return Err(Error::UnknownType {
                    pos: node.pos.clone(),
                    name: super_name.clone(),
                });
            };
            if let Payload::Type { form, .. } = &self.symbol(super_id).payload {
                if *form != TypeForm::Class || node.form != TypeForm::Class {
                    return Err(Error::InvalidSupertype {
                        pos: node.pos.clone(),
                        name: node.name.clone(),
                        super_name: super_name.clone(),
                        found: form.to_string(),
                    });
                }
            }
        }
        for field in &node.fields {
            if !known(&field.type_name) {
                return Err(Error::UnknownType {
                    pos: field.pos.clone(),
                    name: field.type_name.clone(),
                });
            }
        }
        for method in &node.methods {
            let unknown = std::iter::once(&method.return_type_name)
                .filter(|t| t.as_str() != "void")
                .chain(method.params.iter().map(|p| &p.type_name))
                .find(|t| !known(t));
            if let Some(name) = unknown {
                return Err(Error::UnknownType {
                    pos: method.pos.clone(),
                    name: name.clone(),
                });
            }
        }
        Ok(())
    }

    fn check_acyclic(&self, roots: &[SymbolId]) -> Result<()> {
        for &root in roots {
            let mut chain = vec![root];
            let mut cursor = self.super_type(root);
            while let Some(next) = cursor {
                if let Some(start) = chain.iter().position(|&t| t == next) {
                    let names = chain[start..]
                        .iter()
                        .map(|&t| self.symbol(t).name.clone())
                        .collect();
                    return Err(Error::CyclicInheritance { names });
                }
                chain.push(next);
                cursor = self.super_type(next);
            }
        }
        Ok(())
    }

    fn compute_shadowing(&mut self, ty: SymbolId) {
        let scope = self.symbol(ty).spanned_scope.expect("type scope");
        let fields: Vec<SymbolId> = self
            .scope(scope)
            .symbols
            .iter()
            .copied()
            .filter(|&s| self.symbol(s).kind == SymbolKind::CdField)
            .collect();
        for field in fields {
            let name = self.symbol(field).name.clone();
            let mut ancestor = self.super_type(ty);
            let mut shadows = false;
            while let Some(a) = ancestor {
                let a_scope = self.symbol(a).spanned_scope.expect("type scope");
                if self.lookup_local(a_scope, &name, SymbolKind::CdField).is_some() {
                    shadows = true;
                    break;
                }
                ancestor = self.super_type(a);
            }
            self.symbol_mut(field).shadows = shadows;
        }
    }
}
