//! A small template language whose builtins read generator information
//! from the symbol table while code is being generated.

mod eval;
mod parse;

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};

pub use eval::{evaluate, TemplateContext, Value, MAX_INCLUDE_DEPTH};
pub use parse::{parse_template, Builtin, Expr, Segment, Template};

/// File extension of template files.
pub const TEMPLATE_EXT: &str = "jt";

const EMBEDDED: &[(&str, &str)] = &[
    ("class", include_str!("../../templates/class.jt")),
    ("interface", include_str!("../../templates/interface.jt")),
    ("enum", include_str!("../../templates/enum.jt")),
    ("accessor-methods", include_str!("../../templates/accessor-methods.jt")),
    ("factory-class", include_str!("../../templates/factory-class.jt")),
    ("singleton-members", include_str!("../../templates/singleton-members.jt")),
];

/// Parsed templates addressed by name.
#[derive(Debug, Clone)]
pub struct TemplateSet {
    templates: BTreeMap<String, Template>,
}

impl TemplateSet {
    /// The default templates shipped with the generator.
    pub fn builtin() -> Self {
        let templates = EMBEDDED
            .iter()
            .map(|(name, text)| {
                let t = parse_template(text, name).expect("embedded templates parse");
                (name.to_string(), t)
            })
            .collect();
        TemplateSet { templates }
    }

    /// Defaults, overridden and extended by every `*.jt` file in `dir`.
    pub fn with_dir(dir: &Path) -> Result<Self> {
        let mut set = Self::builtin();
        set.load_dir(dir)?;
        Ok(set)
    }

    pub fn load_dir(&mut self, dir: &Path) -> Result<()> {
        let io = |e: std::io::Error| Error::Io {
            path: dir.display().to_string(),
            message: e.to_string(),
        };
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e == TEMPLATE_EXT))
            .collect();
        paths.sort();
        for path in paths {
            let name = path
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| Error::Template {
                    message: format!("template file name `{}` is not UTF-8", path.display()),
                })?
                .to_string();
            let text = std::fs::read_to_string(&path).map_err(|e| Error::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            self.insert_source(&name, &text)?;
        }
        Ok(())
    }

    /// Parses `text` and stores it under `name`, replacing any previous one.
    pub fn insert_source(&mut self, name: &str, text: &str) -> Result<()> {
        let template = parse_template(text, name)?;
        self.templates.insert(name.to_string(), template);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Template> {
        self.templates.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.templates.contains_key(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.templates.keys().map(String::as_str)
    }
}

impl Default for TemplateSet {
    fn default() -> Self {
        Self::builtin()
    }
}
