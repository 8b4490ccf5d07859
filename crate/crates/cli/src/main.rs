//! `symgen`: generate Java sources from a class diagram.

mod config;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use symgen_core::{parse_cd_bytes, parse_transform_list, Error, GenConfig, Pipeline, RenderMode, Result};

use config::FileConfig;

/// Generate Java sources from a class diagram.
///
/// Exit codes: 0 success, 1 usage or configuration error, 2 model could not
/// be read, parsed or resolved, 3 generation error.
#[derive(Debug, Parser)]
#[command(name = "symgen", version)]
struct Cli {
    /// Class diagram to generate from.
    model: PathBuf,

    /// Output directory.
    #[arg(short, long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Comma-separated transformations, applied in order.
    #[arg(long, value_name = "LIST")]
    transforms: Option<String>,

    /// Generator id under which mappings are recorded.
    #[arg(long, value_name = "ID")]
    generator_id: Option<String>,

    /// Fail on missing mappings (default).
    #[arg(long, conflicts_with = "fallback")]
    strict: bool,

    /// Fall back to model names when mappings are missing.
    #[arg(long)]
    fallback: bool,

    /// Do not generate accessor and mutator methods.
    #[arg(long)]
    no_accessors: bool,

    /// Directory whose `.jt` files override the built-in templates.
    #[arg(long, value_name = "DIR")]
    template_dir: Option<PathBuf>,

    /// Write the symbol table as JSON, also after a failed run.
    #[arg(long, value_name = "FILE")]
    dump_symtab: Option<PathBuf>,

    /// List the files that would be written without writing them.
    #[arg(long)]
    dry_run: bool,

    /// Read settings from a `key = value` file; flags take precedence.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
}

/// Fully resolved invocation.
#[derive(Debug)]
struct Settings {
    model: PathBuf,
    generation: GenConfig,
    dump_symtab: Option<PathBuf>,
    dry_run: bool,
}

impl Settings {
    fn resolve(cli: Cli) -> Result<Self> {
        let file = match &cli.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let defaults = GenConfig::default();
        let mode = if cli.fallback {
            RenderMode::Fallback
        } else if cli.strict {
            RenderMode::Strict
        } else {
            file.mode.unwrap_or(defaults.mode)
        };
        let transforms = cli.transforms.as_deref().map(parse_transform_list).transpose()?;
        let generation = GenConfig {
            generator_id: cli.generator_id.or(file.generator_id).unwrap_or(defaults.generator_id),
            transforms: transforms.or(file.transforms).unwrap_or(defaults.transforms),
            mode,
            accessors: !cli.no_accessors && file.accessors.unwrap_or(defaults.accessors),
            output_dir: cli.out.or(file.out).unwrap_or(defaults.output_dir),
            template_dir: cli.template_dir.or(file.template_dir),
        };
        Ok(Settings {
            model: cli.model,
            generation,
            dump_symtab: cli.dump_symtab.or(file.dump_symtab),
            dry_run: cli.dry_run || file.dry_run.unwrap_or(false),
        })
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| io_error(parent, e))?;
    }
    std::fs::write(path, content).map_err(|e| io_error(path, e))
}

fn execute(settings: &Settings) -> Result<()> {
    let bytes = std::fs::read(&settings.model).map_err(|e| io_error(&settings.model, e))?;
    let ast = parse_cd_bytes(&bytes, &settings.model.display().to_string())?;
    let pipeline = Pipeline::new(settings.generation.clone())?;
    let report = pipeline.execute(ast);
    if let (Some(path), Some(symtab)) = (&settings.dump_symtab, &report.symtab) {
        if !settings.dry_run {
            write_file(path, &symtab.to_json())?;
        }
    }
    let files = report.result?;
    let out = &settings.generation.output_dir;
    for file in &files {
        let path = out.join(&file.relative_path);
        if settings.dry_run {
            println!("would write {}", path.display());
        } else {
            write_file(&path, &file.content)?;
            println!("wrote {} ({} lines)", path.display(), file.content.lines().count());
        }
    }
    Ok(())
}

fn diagnostic(e: &Error) -> String {
    let message = e.to_string().replace('\n', " ");
    match e.pos() {
        Some(pos) => format!("error[{}]: {pos}: {message}", e.code()),
        None => format!("error[{}]: {message}", e.code()),
    }
}

fn run(args: impl IntoIterator<Item = OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    0
                }
                _ => {
                    let rendered = e.to_string();
                    let first = rendered.lines().next().unwrap_or_default();
                    eprintln!("error[E_USAGE]: {}", first.trim_start_matches("error: "));
                    1
                }
            };
        }
    };
    match Settings::resolve(cli).and_then(|settings| execute(&settings)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", diagnostic(&e));
            e.exit_code()
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(std::env::args_os()) as u8)
}
