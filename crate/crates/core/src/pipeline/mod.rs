//! Transformation-then-template generation: transformations rewrite the AST
//! and record generator information, then every type node is expanded with
//! its attached templates (or the default for its form) into one file.

mod lint;
mod transform;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::cdlang::{CdAst, TypeForm};
use crate::error::{Error, Result};
use crate::genmap::{GeneratorId, RenderMode, Role};
use crate::symtab::{build_symbol_table, SymbolTable};
use crate::tmpl::{evaluate, TemplateContext, TemplateSet, Value};

pub use lint::{lint_java, LintFinding, LintKind};

/// One built-in transformation with its arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TransformSpec {
    MapDefaults,
    AddAccessors,
    Factory(String),
    Singleton(String),
    Attach { type_name: String, template: String },
}

impl TransformSpec {
    /// The transformation that has to run before `self`, if any.
    pub fn prerequisite(&self) -> Option<&'static str> {
        match self {
            TransformSpec::MapDefaults => None,
            _ => Some("map-defaults"),
        }
    }
}

impl fmt::Display for TransformSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransformSpec::MapDefaults => f.write_str("map-defaults"),
            TransformSpec::AddAccessors => f.write_str("add-accessors"),
            TransformSpec::Factory(t) => write!(f, "factory:{t}"),
            TransformSpec::Singleton(t) => write!(f, "singleton:{t}"),
            TransformSpec::Attach { type_name, template } => write!(f, "attach:{type_name}:{template}"),
        }
    }
}

impl FromStr for TransformSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::Config {
            message: format!("invalid transform `{s}`: {why}"),
        };
        let parts: Vec<&str> = s.trim().split(':').collect();
        let arg = |i: usize| -> Result<String> {
            match parts.get(i) {
                Some(a) if !a.is_empty() => Ok(a.to_string()),
                _ => Err(bad("missing argument")),
            }
        };
        let spec = match parts[0] {
            "map-defaults" => TransformSpec::MapDefaults,
            "add-accessors" => TransformSpec::AddAccessors,
            "factory" => TransformSpec::Factory(arg(1)?),
            "singleton" => TransformSpec::Singleton(arg(1)?),
            "attach" => TransformSpec::Attach {
                type_name: arg(1)?,
                template: arg(2)?,
            },
            _ => {
                return Err(bad(
                    "expected map-defaults, add-accessors, factory:<Type>, singleton:<Type> or attach:<Type>:<template>",
                ))
            }
        };
        let expected = match spec {
            TransformSpec::MapDefaults | TransformSpec::AddAccessors => 1,
            TransformSpec::Factory(_) | TransformSpec::Singleton(_) => 2,
            TransformSpec::Attach { .. } => 3,
        };
        if parts.len() != expected {
            return Err(bad("wrong number of arguments"));
        }
        Ok(spec)
    }
}

/// Parses a comma-separated transform list; blank entries are ignored.
pub fn parse_transform_list(list: &str) -> Result<Vec<TransformSpec>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

/// Transformations used when none are configured.
pub fn default_transforms() -> Vec<TransformSpec> {
    vec![TransformSpec::MapDefaults, TransformSpec::AddAccessors]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub generator_id: String,
    pub transforms: Vec<TransformSpec>,
    pub mode: RenderMode,
    pub accessors: bool,
    pub output_dir: PathBuf,
    pub template_dir: Option<PathBuf>,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            generator_id: "cd2java".into(),
            transforms: default_transforms(),
            mode: RenderMode::Strict,
            accessors: true,
            output_dir: PathBuf::from("."),
            template_dir: None,
        }
    }
}

impl GenConfig {
    pub fn with_transforms(transforms: Vec<TransformSpec>) -> Self {
        GenConfig {
            transforms,
            ..GenConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.generator_id.trim().is_empty() {
            return Err(Error::Config {
                message: "generator id must not be empty".into(),
            });
        }
        Ok(())
    }
}

/// A generated compilation unit, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmittedFile {
    pub relative_path: PathBuf,
    pub content: String,
}

/// Result of a successful run.
#[derive(Debug, Clone)]
pub struct Generation {
    pub files: Vec<EmittedFile>,
    pub symtab: SymbolTable,
    pub ast: CdAst,
    pub generator: GeneratorId,
}

/// Everything a run produced, including the symbol table as it was when a
/// step failed.
#[derive(Debug)]
pub struct RunReport {
    pub result: Result<Vec<EmittedFile>>,
    pub symtab: Option<SymbolTable>,
    pub ast: CdAst,
    pub generator: Option<GeneratorId>,
}

impl RunReport {
    pub fn into_result(self) -> Result<Generation> {
        let files = self.result?;
        Ok(Generation {
            files,
            symtab: self.symtab.expect("successful runs have a symbol table"),
            ast: self.ast,
            generator: self.generator.expect("successful runs register a generator"),
        })
    }
}

/// Configured generator with its template set.
#[derive(Debug, Clone)]
pub struct Pipeline {
    config: GenConfig,
    templates: TemplateSet,
}

impl Pipeline {
    /// Loads the templates named by the configuration.
    pub fn new(config: GenConfig) -> Result<Self> {
        config.validate()?;
        let templates = match &config.template_dir {
            Some(dir) => TemplateSet::with_dir(dir)?,
            None => TemplateSet::builtin(),
        };
        Ok(Pipeline { config, templates })
    }

    pub fn with_templates(config: GenConfig, templates: TemplateSet) -> Self {
        Pipeline { config, templates }
    }

    pub fn config(&self) -> &GenConfig {
        &self.config
    }

    pub fn templates(&self) -> &TemplateSet {
        &self.templates
    }

    pub fn run(&self, ast: CdAst) -> Result<Generation> {
        self.execute(ast).into_result()
    }

    /// Runs every step, stopping at the first error.
    pub fn execute(&self, mut ast: CdAst) -> RunReport {
        if let Err(e) = self.config.validate() {
            return RunReport {
                result: Err(e),
                symtab: None,
                ast,
                generator: None,
            };
        }
        let mut symtab = match build_symbol_table(&ast) {
            Ok(st) => st,
            Err(e) => {
                return RunReport {
                    result: Err(e),
                    symtab: None,
                    ast,
                    generator: None,
                }
            }
        };
        let generator = match symtab.register_generator(&self.config.generator_id) {
            Ok(g) => g,
            Err(e) => {
                return RunReport {
                    result: Err(e),
                    symtab: Some(symtab),
                    ast,
                    generator: None,
                }
            }
        };
        let result = self
            .transform_all(&mut ast, &mut symtab, &generator)
            .and_then(|()| self.emit(&ast, &symtab, &generator))
            .map_err(|e| e.with_prerequisite(prerequisite_hint));
        RunReport {
            result,
            symtab: Some(symtab),
            ast,
            generator: Some(generator),
        }
    }

    fn transform_all(&self, ast: &mut CdAst, symtab: &mut SymbolTable, gen: &GeneratorId) -> Result<()> {
        for spec in &self.config.transforms {
            let mut step = transform::Step {
                ast: &mut *ast,
                symtab: &mut *symtab,
                gen,
                templates: &self.templates,
                accessors: self.config.accessors,
            };
            step.apply(spec).map_err(|e| {
                let e = e.with_prerequisite(|_| spec.prerequisite().map(str::to_string));
                Error::InTransform {
                    transform: spec.to_string(),
                    source: Box::new(e),
                }
            })?;
        }
        Ok(())
    }

    fn emit(&self, ast: &CdAst, symtab: &SymbolTable, gen: &GeneratorId) -> Result<Vec<EmittedFile>> {
        let mut files = Vec::with_capacity(ast.types.len());
        for node in &ast.types {
            let default = match node.form {
                TypeForm::Class => "class",
                TypeForm::Interface => "interface",
                TypeForm::Enum => "enum",
            };
            let names: Vec<&str> = if node.attached_templates.is_empty() {
                vec![default]
            } else {
                node.attached_templates.iter().map(String::as_str).collect()
            };
            let mut content = String::new();
            for name in names {
                let template = self.templates.get(name).ok_or_else(|| Error::Template {
                    message: format!("template `{name}` attached to `{}` does not exist", node.name),
                })?;
                let mut ctx = TemplateContext::new(Value::Type(node), gen, self.config.mode, symtab, &self.templates);
                content.push_str(&evaluate(template, &mut ctx)?);
            }
            let cd = symtab.cd_type(&node.name)?;
            let java_name = match symtab.lookup_mapping(cd, gen, Role::TypeOf) {
                Ok(java) => symtab.symbol(java).name.clone(),
                Err(Error::OrderViolation { .. }) if self.config.mode == RenderMode::Fallback => node.name.clone(),
                Err(e) => return Err(e),
            };
            files.push(EmittedFile {
                relative_path: PathBuf::from(format!("{java_name}.java")),
                content,
            });
        }
        Ok(files)
    }
}

/// Runs the pipeline with the configured (or embedded) templates.
pub fn run_pipeline(ast: CdAst, config: &GenConfig) -> Result<Generation> {
    Pipeline::new(config.clone())?.run(ast)
}

/// Which transformation supplies what an error reports as missing.
fn prerequisite_hint(err: &Error) -> Option<String> {
    match err {
        Error::OrderViolation { role, .. } => match role {
            Role::TypeOf | Role::FieldOf | Role::MethodOf => Some("map-defaults".into()),
            Role::AccessorOf | Role::MutatorOf => Some("add-accessors".into()),
            Role::BackingFieldOf => None,
        },
        Error::MissingGeneratorInfo { symbol, needed, .. } => match needed.as_str() {
            "accessor" | "mutator" => Some("add-accessors".into()),
            "instantiation" => Some(format!("factory:{symbol}` or `singleton:{symbol}")),
            _ => None,
        },
        _ => None,
    }
}
