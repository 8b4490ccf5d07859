//! Class-diagram to Java code generation driven by an extended symbol table.
//!
//! The symbol table records, next to the model's own symbols, which Java
//! symbols each generator produced for them and how the generated code is
//! meant to be used (instantiation snippets, accessor and mutator names).
//! Transformations register that information while the generator runs and
//! templates consume it, so a template asking for information that was not
//! registered yet fails with an order-violation error instead of emitting
//! inconsistent code.

pub mod cdlang;
pub mod error;
pub mod genmap;
pub mod java;
pub mod pipeline;
pub mod symtab;
pub mod tmpl;

pub use cdlang::{parse_cd, parse_cd_bytes, CdAst, CdFieldNode, CdMethodNode, CdParam, CdTypeNode, SourcePos, TypeForm};
pub use error::{Error, Result};
pub use genmap::{
    GeneratorId, GeneratorInfo, InstantiationStrategy, JavaClassGI, JavaFieldGI, RenderMode, Role,
    SymbolMapping,
};
pub use pipeline::{
    lint_java, parse_transform_list, run_pipeline, EmittedFile, GenConfig, Generation, LintFinding, LintKind, Pipeline,
    RunReport, TransformSpec,
};
pub use symtab::{build_symbol_table, Payload, Scope, ScopeId, Symbol, SymbolId, SymbolKind, SymbolTable};
pub use tmpl::{evaluate, parse_template, Template, TemplateContext, TemplateSet, Value};
