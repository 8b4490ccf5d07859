//! Flat `key = value` configuration files.

use std::path::{Path, PathBuf};

use symgen_core::{parse_transform_list, Error, RenderMode, Result, TransformSpec};

/// Settings read from a configuration file. Every field is optional so that
/// command-line flags can be layered on top.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileConfig {
    pub out: Option<PathBuf>,
    pub transforms: Option<Vec<TransformSpec>>,
    pub generator_id: Option<String>,
    pub mode: Option<RenderMode>,
    pub accessors: Option<bool>,
    pub template_dir: Option<PathBuf>,
    pub dump_symtab: Option<PathBuf>,
    pub dry_run: Option<bool>,
}

fn config_error(origin: &str, line: usize, message: impl std::fmt::Display) -> Error {
    Error::Config {
        message: format!("{origin}:{line}: {message}"),
    }
}

fn parse_bool(value: &str) -> Option<bool> {
    match value {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

impl FileConfig {
    /// Parses configuration text. Relative paths are resolved against `base`.
    pub fn parse(text: &str, origin: &str, base: &Path) -> Result<Self> {
        let mut config = FileConfig::default();
        for (index, raw) in text.lines().enumerate() {
            let line_no = index + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(config_error(origin, line_no, format!("expected `key = value`, found `{line}`")));
            };
            let (key, value) = (key.trim(), value.trim());
            let path = || base.join(value);
            let flag = |name: &str| {
                parse_bool(value).ok_or_else(|| config_error(origin, line_no, format!("`{name}` expects true or false, found `{value}`")))
            };
            match key {
                "out" => config.out = Some(path()),
                "transforms" => {
                    config.transforms =
                        Some(parse_transform_list(value).map_err(|e| config_error(origin, line_no, e))?)
                }
                "generator-id" => config.generator_id = Some(value.to_string()),
                "mode" => {
                    config.mode = Some(match value {
                        "strict" => RenderMode::Strict,
                        "fallback" => RenderMode::Fallback,
                        _ => {
                            return Err(config_error(origin, line_no, format!("`mode` expects strict or fallback, found `{value}`")))
                        }
                    })
                }
                "accessors" => config.accessors = Some(flag("accessors")?),
                "template-dir" => config.template_dir = Some(path()),
                "dump-symtab" => config.dump_symtab = Some(path()),
                "dry-run" => config.dry_run = Some(flag("dry-run")?),
                _ => return Err(config_error(origin, line_no, format!("unknown key `{key}`"))),
            }
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        FileConfig::parse(&text, &path.display().to_string(), base)
    }
}
