//! Template evaluation against the AST and the symbol table.

use crate::cdlang::{CdFieldNode, CdMethodNode, CdParam, CdTypeNode};
use crate::error::{Error, Result};
use crate::genmap::{GeneratorId, RenderMode, Role};
use crate::java::{default_value, is_builtin_type};
use crate::symtab::{SymbolId, SymbolKind, SymbolTable};

use super::parse::{Builtin, Expr, Segment, Template};
use super::TemplateSet;

/// Maximum nesting of `include` calls.
pub const MAX_INCLUDE_DEPTH: usize = 64;

/// A value a template expression can produce.
#[derive(Debug, Clone, PartialEq)]
pub enum Value<'a> {
    Str(String),
    Bool(bool),
    List(Vec<Value<'a>>),
    Type(&'a CdTypeNode),
    Field(&'a CdTypeNode, &'a CdFieldNode),
    Method(&'a CdTypeNode, &'a CdMethodNode),
    Param(&'a CdParam),
}

impl Value<'_> {
    fn truthy(&self) -> bool {
        match self {
            Value::Str(s) => !s.is_empty(),
            Value::Bool(b) => *b,
            Value::List(items) => !items.is_empty(),
            _ => true,
        }
    }

    fn render(&self) -> String {
        match self {
            Value::Str(s) => s.clone(),
            Value::Bool(b) => b.to_string(),
            Value::List(items) => items.iter().map(Value::render).collect::<Vec<_>>().join(", "),
            Value::Type(t) => t.name.clone(),
            Value::Field(_, f) => f.name.clone(),
            Value::Method(_, m) => m.name.clone(),
            Value::Param(p) => p.name.clone(),
        }
    }
}

fn strs<'a>(items: &[String]) -> Value<'a> {
    Value::List(items.iter().map(|s| Value::Str(s.clone())).collect())
}

/// Everything a template sees while it expands: the node under expansion,
/// the generator whose mappings are consulted, the rendering mode and the
/// loop variables in scope. Loop variables hide node properties.
pub struct TemplateContext<'a> {
    pub node: Value<'a>,
    pub generator: &'a GeneratorId,
    pub mode: RenderMode,
    pub symtab: &'a SymbolTable,
    pub templates: &'a TemplateSet,
    bindings: Vec<(String, Value<'a>)>,
    depth: usize,
}

impl<'a> TemplateContext<'a> {
    pub fn new(
        node: Value<'a>,
        generator: &'a GeneratorId,
        mode: RenderMode,
        symtab: &'a SymbolTable,
        templates: &'a TemplateSet,
    ) -> Self {
        TemplateContext {
            node,
            generator,
            mode,
            symtab,
            templates,
            bindings: Vec::new(),
            depth: 0,
        }
    }

    fn binding(&self, name: &str) -> Option<&Value<'a>> {
        self.bindings
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }
}

/// Expands `template` in `ctx`. Errors are annotated with the template name
/// and the position of the failing segment.
pub fn evaluate(template: &Template, ctx: &mut TemplateContext<'_>) -> Result<String> {
    let mut out = String::new();
    eval_segments(template, &template.body, ctx, &mut out)?;
    Ok(out)
}

fn annotate(template: &Template, pos: &crate::cdlang::SourcePos, err: Error) -> Error {
    match err {
        e @ Error::InTemplate { .. } => e,
        e => Error::InTemplate {
            template: template.name.clone(),
            pos: pos.clone(),
            source: Box::new(e),
        },
    }
}

fn eval_segments<'a>(
    template: &Template,
    segments: &[Segment],
    ctx: &mut TemplateContext<'a>,
    out: &mut String,
) -> Result<()> {
    for seg in segments {
        match seg {
            Segment::Literal(text) => out.push_str(text),
            Segment::Interp { expr, pos } => {
                let value = eval_expr(expr, ctx).map_err(|e| annotate(template, pos, e))?;
                out.push_str(&value.render());
            }
            Segment::Foreach {
                var,
                list,
                body,
                pos,
            } => {
                let items = match eval_expr(list, ctx).map_err(|e| annotate(template, pos, e))? {
                    Value::List(items) => items,
                    other => {
                        return Err(annotate(
                            template,
                            pos,
                            Error::Template {
                                message: format!("`{list}` is not a list (got `{}`)", other.render()),
                            },
                        ))
                    }
                };
                for item in items {
                    ctx.bindings.push((var.clone(), item));
                    let result = eval_segments(template, body, ctx, out);
                    ctx.bindings.pop();
                    result?;
                }
            }
            Segment::If {
                cond,
                then,
                otherwise,
                pos,
            } => {
                let value = eval_expr(cond, ctx).map_err(|e| annotate(template, pos, e))?;
                let branch = if value.truthy() { then } else { otherwise };
                eval_segments(template, branch, ctx, out)?;
            }
        }
    }
    Ok(())
}

fn eval_expr<'a>(expr: &Expr, ctx: &mut TemplateContext<'a>) -> Result<Value<'a>> {
    match expr {
        Expr::Str(s) => Ok(Value::Str(s.clone())),
        Expr::Path(path) => eval_path(path, ctx),
        Expr::Call(builtin, args) => call(*builtin, args, ctx),
    }
}

fn eval_path<'a>(path: &[String], ctx: &TemplateContext<'a>) -> Result<Value<'a>> {
    let unknown = || Error::UnknownPath {
        path: path.join("."),
    };
    let (head, rest) = path.split_first().ok_or_else(unknown)?;
    let mut value = if head == "this" {
        ctx.node.clone()
    } else if let Some(bound) = ctx.binding(head) {
        bound.clone()
    } else {
        property(&ctx.node, head, ctx).ok_or_else(unknown)??
    };
    for segment in rest {
        value = property(&value, segment, ctx).ok_or_else(unknown)??;
    }
    Ok(value)
}

/// Named property of a value; `None` when the property does not exist.
fn property<'a>(value: &Value<'a>, name: &str, ctx: &TemplateContext<'a>) -> Option<Result<Value<'a>>> {
    let v = match (value, name) {
        (Value::Type(t), "name") => Value::Str(t.name.clone()),
        (Value::Type(t), "form") => Value::Str(t.form.to_string()),
        (Value::Type(t), "isAbstract") => Value::Bool(t.is_abstract),
        (Value::Type(t), "isClass") => Value::Bool(t.form == crate::cdlang::TypeForm::Class),
        (Value::Type(t), "isInterface") => Value::Bool(t.form == crate::cdlang::TypeForm::Interface),
        (Value::Type(t), "isEnum") => Value::Bool(t.form == crate::cdlang::TypeForm::Enum),
        (Value::Type(t), "superName") => Value::Str(t.super_name.clone().unwrap_or_default()),
        (Value::Type(t), "fields") => Value::List(t.fields.iter().map(|f| Value::Field(t, f)).collect()),
        (Value::Type(t), "methods") => Value::List(t.methods.iter().map(|m| Value::Method(t, m)).collect()),
        (Value::Type(t), "enumConstants") => strs(&t.enum_constants),
        (Value::Type(t), "enumConstantList") => Value::Str(t.enum_constants.join(", ")),
        (Value::Type(t), "attachedTemplates") => strs(&t.attached_templates),
        (Value::Type(t), "memberTemplates") => strs(&t.member_templates),

        (Value::Field(_, f), "name") => Value::Str(f.name.clone()),
        (Value::Field(_, f), "typeName") => Value::Str(f.type_name.clone()),
        (Value::Field(_, f), "javaTypeName") => return Some(java_type_name(&f.type_name, ctx).map(Value::Str)),
        (Value::Field(_, f), "attachedTemplates") => strs(&f.attached_templates),
        (Value::Field(t, _), "owner") => Value::Type(t),
        (Value::Field(..), "shadows") => {
            let shadows = member_symbol(value, ctx).map(|s| ctx.symtab.symbol(s).shadows);
            Value::Bool(shadows.unwrap_or(false))
        }
        (Value::Field(..), "accessorName") => Value::Str(field_code(value, ctx, Code::Accessor)),
        (Value::Field(..), "mutatorName") => Value::Str(field_code(value, ctx, Code::Mutator)),

        (Value::Method(_, m), "name") => Value::Str(m.name.clone()),
        (Value::Method(_, m), "returnTypeName") => Value::Str(m.return_type_name.clone()),
        (Value::Method(_, m), "javaReturnTypeName") => {
            return Some(java_type_name(&m.return_type_name, ctx).map(Value::Str))
        }
        (Value::Method(_, m), "params") => Value::List(m.params.iter().map(Value::Param).collect()),
        (Value::Method(_, m), "paramList") => {
            let params: Result<Vec<String>> = m
                .params
                .iter()
                .map(|p| Ok(format!("{} {}", java_type_name(&p.type_name, ctx)?, p.name)))
                .collect();
            return Some(params.map(|p| Value::Str(p.join(", "))));
        }
        (Value::Method(_, m), "returnsValue") => Value::Bool(default_value(&m.return_type_name).is_some()),
        (Value::Method(_, m), "defaultValue") => {
            Value::Str(default_value(&m.return_type_name).unwrap_or_default().to_string())
        }
        (Value::Method(_, m), "attachedTemplates") => strs(&m.attached_templates),
        (Value::Method(t, _), "owner") => Value::Type(t),

        (Value::Param(p), "name") => Value::Str(p.name.clone()),
        (Value::Param(p), "typeName") => Value::Str(p.type_name.clone()),
        (Value::Param(p), "javaTypeName") => return Some(java_type_name(&p.type_name, ctx).map(Value::Str)),
        _ => return None,
    };
    Some(Ok(v))
}

#[derive(Clone, Copy)]
enum Code {
    Accessor,
    Mutator,
}

/// Accessor or mutator name registered for a field node, or empty.
fn field_code(field: &Value<'_>, ctx: &TemplateContext<'_>, which: Code) -> String {
    let Some(cd) = member_symbol(field, ctx) else {
        return String::new();
    };
    let Some(java) = ctx.symtab.try_lookup_mapping(cd, ctx.generator, Role::FieldOf) else {
        return String::new();
    };
    let gi = ctx.symtab.field_info(java);
    let code = match which {
        Code::Accessor => gi.and_then(|g| g.accessor_code.clone()),
        Code::Mutator => gi.and_then(|g| g.mutator_code.clone()),
    };
    code.unwrap_or_default()
}

/// Java spelling of a type reference: builtins stay as they are, diagram
/// types go through their `TYPE_OF` mapping.
fn java_type_name(name: &str, ctx: &TemplateContext<'_>) -> Result<String> {
    if name == "void" || is_builtin_type(name) {
        return Ok(name.to_string());
    }
    let cd = ctx.symtab.cd_type(name)?;
    mapped_name(cd, Role::TypeOf, ctx)
}

fn mapped_name(cd: SymbolId, role: Role, ctx: &TemplateContext<'_>) -> Result<String> {
    match ctx.symtab.lookup_mapping(cd, ctx.generator, role) {
        Ok(target) => Ok(ctx.symtab.symbol(target).name.clone()),
        Err(Error::OrderViolation { .. }) if ctx.mode == RenderMode::Fallback => {
            Ok(ctx.symtab.symbol(cd).name.clone())
        }
        Err(e) => Err(e),
    }
}

fn member_symbol(value: &Value<'_>, ctx: &TemplateContext<'_>) -> Option<SymbolId> {
    let st = ctx.symtab;
    let (owner, name, kind) = match value {
        Value::Type(t) => return st.cd_type(&t.name).ok(),
        Value::Field(t, f) => (t, &f.name, SymbolKind::CdField),
        Value::Method(t, m) => (t, &m.name, SymbolKind::CdMethod),
        _ => return None,
    };
    let scope = st.symbol(st.cd_type(&owner.name).ok()?).spanned_scope?;
    st.lookup_local(scope, name, kind)
}

/// Resolves a builtin's symbol argument to a CD symbol: loop variables and
/// `this` first, then `Type` / `Type.member` names, then node properties.
fn symbol_arg(expr: &Expr, ctx: &mut TemplateContext<'_>) -> Result<SymbolId> {
    let from_value = |value: Value<'_>, ctx: &TemplateContext<'_>| -> Result<SymbolId> {
        match value {
            Value::Str(s) => ctx.symtab.resolve_cd_path(&s),
            other => member_symbol(&other, ctx).ok_or_else(|| Error::Template {
                message: format!("`{}` does not denote a model element", other.render()),
            }),
        }
    };
    match expr {
        Expr::Path(path) => {
            let head = &path[0];
            if head == "this" || ctx.binding(head).is_some() {
                let value = eval_path(path, ctx)?;
                return from_value(value, ctx);
            }
            match ctx.symtab.resolve_cd_path(&path.join(".")) {
                Ok(id) => Ok(id),
                Err(not_found) => match eval_path(path, ctx) {
                    Ok(value) => from_value(value, ctx),
                    Err(_) => Err(not_found),
                },
            }
        }
        other => {
            let value = eval_expr(other, ctx)?;
            from_value(value, ctx)
        }
    }
}

fn string_arg(expr: &Expr, ctx: &mut TemplateContext<'_>) -> Result<String> {
    Ok(eval_expr(expr, ctx)?.render())
}

fn expect_cd_kind(id: SymbolId, kind: SymbolKind, ctx: &TemplateContext<'_>) -> Result<()> {
    let sym = ctx.symtab.symbol(id);
    if sym.kind == kind {
        Ok(())
    } else {
        Err(Error::Kind {
            symbol: ctx.symtab.qualified_name(id),
            expected: kind.to_string(),
            found: sym.kind,
        })
    }
}

fn call<'a>(builtin: Builtin, args: &[Expr], ctx: &mut TemplateContext<'a>) -> Result<Value<'a>> {
    let st = ctx.symtab;
    let mode = ctx.mode;
    let text = match builtin {
        Builtin::Instantiation => {
            let cd = symbol_arg(&args[0], ctx)?;
            expect_cd_kind(cd, SymbolKind::CdType, ctx)?;
            match st.lookup_mapping(cd, ctx.generator, Role::TypeOf) {
                Ok(java) => st.render_instantiation(java, mode)?,
                Err(Error::OrderViolation { .. }) if mode == RenderMode::Fallback => {
                    format!("new {}()", st.symbol(cd).name)
                }
                Err(e) => return Err(e),
            }
        }
        Builtin::Accessor | Builtin::Mutator => {
            let cd = symbol_arg(&args[0], ctx)?;
            expect_cd_kind(cd, SymbolKind::CdField, ctx)?;
            let receiver = string_arg(&args[1], ctx)?;
            let arg = match builtin {
                Builtin::Mutator => Some(string_arg(&args[2], ctx)?),
                _ => None,
            };
            match st.lookup_mapping(cd, ctx.generator, Role::FieldOf) {
                Ok(java) => match &arg {
                    Some(arg) => st.render_mutator_call(&receiver, java, arg, mode)?,
                    None => st.render_accessor_call(&receiver, java, mode)?,
                },
                Err(Error::OrderViolation { .. }) if mode == RenderMode::Fallback => {
                    if receiver.trim().is_empty() {
                        return Err(Error::precondition("field access needs a receiver expression"));
                    }
                    let name = &st.symbol(cd).name;
                    match &arg {
                        Some(arg) if arg.trim().is_empty() => {
                            return Err(Error::precondition(
                                "mutator call needs exactly one argument expression",
                            ))
                        }
                        Some(arg) => format!("{receiver}.{name} = {arg}"),
                        None => format!("{receiver}.{name}"),
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Builtin::JavaName => {
            let cd = symbol_arg(&args[0], ctx)?;
            let role = match st.symbol(cd).kind {
                SymbolKind::CdType => Role::TypeOf,
                SymbolKind::CdField => Role::FieldOf,
                _ => Role::MethodOf,
            };
            mapped_name(cd, role, ctx)?
        }
        Builtin::Include => {
            let name = match &args[0] {
                Expr::Path(p) if p.len() == 1 && ctx.binding(&p[0]).is_none() && property(&ctx.node, &p[0], ctx).is_none() => {
                    p[0].clone()
                }
                other => string_arg(other, ctx)?,
            };
            if ctx.depth >= MAX_INCLUDE_DEPTH {
                return Err(Error::InfiniteInclude {
                    name,
                    limit: MAX_INCLUDE_DEPTH,
                });
            }
            let templates = ctx.templates;
            let template = templates.get(&name).ok_or_else(|| Error::Template {
                message: format!("unknown template `{name}`"),
            })?;
            ctx.depth += 1;
            let result = evaluate(template, ctx);
            ctx.depth -= 1;
            result?
        }
    };
    Ok(Value::Str(text))
}
