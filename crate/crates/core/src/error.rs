use thiserror::Error;

use crate::cdlang::SourcePos;
use crate::genmap::Role;
use crate::symtab::SymbolKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the generator can report.
///
/// Each variant has a stable diagnostic code (see [`Error::code`]); the
/// wrapping variants `InTransform` and `InTemplate` add context and delegate
/// their code to the wrapped error.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{message}")]
    Config { message: String },

    #[error("syntax error: {message}")]
    Parse { pos: SourcePos, message: String },

    #[error("duplicate name `{name}`")]
    DuplicateName { pos: SourcePos, name: String },

    #[error("unknown type `{name}`")]
    UnknownType { pos: SourcePos, name: String },

    #[error("cyclic inheritance between {}", names.join(", "))]
    CyclicInheritance { names: Vec<String> },

    #[error("`{name}` cannot extend {found} `{super_name}`; only classes can be extended")]
    InvalidSupertype {
        pos: SourcePos,
        name: String,
        super_name: String,
        found: String,
    },

    #[error("cannot resolve {kind} `{name}` from scope `{from_scope}`")]
    SymbolNotFound {
        name: String,
        kind: SymbolKind,
        from_scope: String,
    },

    #[error("generator `{id}` is already registered")]
    DuplicateGenerator { id: String },

    #[error("unknown generator `{id}`")]
    UnknownGenerator { id: String },

    #[error("{message}")]
    Precondition { message: String },

    #[error(
        "`{source_name}` is already mapped to `{existing}` under generator `{generator}`; refusing to remap it to `{requested}`"
    )]
    MappingConflict {
        source_name: String,
        generator: String,
        existing: String,
        requested: String,
    },

    #[error("name `{name}` is already taken in scope `{scope}`")]
    NameClash { scope: String, name: String },

    #[error(
        "order violation: `{symbol}` has no {role} mapping under generator `{generator}`{}",
        hint(prerequisite)
    )]
    OrderViolation {
        symbol: String,
        role: Role,
        generator: String,
        pos: Option<SourcePos>,
        prerequisite: Option<String>,
    },

    #[error("missing generator info: `{symbol}` has no {needed} code{}", hint(prerequisite))]
    MissingGeneratorInfo {
        symbol: String,
        needed: String,
        pos: Option<SourcePos>,
        prerequisite: Option<String>,
    },

    #[error("`{symbol}` is a {found}, expected {expected}")]
    Kind {
        symbol: String,
        expected: String,
        found: SymbolKind,
    },

    #[error("template `{name}`: {message}")]
    TemplateParse {
        name: String,
        pos: SourcePos,
        message: String,
    },

    #[error("{message}")]
    Template { message: String },

    #[error("unknown path `{path}`")]
    UnknownPath { path: String },

    #[error("include depth exceeded {limit} while including `{name}`")]
    InfiniteInclude { name: String, limit: usize },

    #[error("transform `{transform}`: {source}")]
    InTransform {
        transform: String,
        #[source]
        source: Box<Error>,
    },

    #[error("in template `{template}`: {source}")]
    InTemplate {
        template: String,
        pos: SourcePos,
        #[source]
        source: Box<Error>,
    },
}

fn hint(prerequisite: &Option<String>) -> String {
    match prerequisite {
        Some(p) => format!("; run `{p}` first"),
        None => String::new(),
    }
}

impl Error {
    /// Stable diagnostic code printed as `error[<code>]`.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Io { .. } => "E_IO",
            Error::Config { .. } => "E_CONFIG",
            Error::Parse { .. } => "E_PARSE",
            Error::DuplicateName { .. } => "E_DUPLICATE",
            Error::UnknownType { .. } => "E_UNKNOWN_TYPE",
            Error::CyclicInheritance { .. } => "E_CYCLE",
            Error::InvalidSupertype { .. } => "E_SUPERTYPE",
            Error::SymbolNotFound { .. } => "E_NOT_FOUND",
            Error::DuplicateGenerator { .. } => "E_DUPLICATE_GENERATOR",
            Error::UnknownGenerator { .. } => "E_UNKNOWN_GENERATOR",
            Error::Precondition { .. } => "E_PRECONDITION",
            Error::MappingConflict { .. } => "E_MAPPING_CONFLICT",
            Error::NameClash { .. } => "E_NAME_CLASH",
            Error::OrderViolation { .. } => "E_ORDER",
            Error::MissingGeneratorInfo { .. } => "E_MISSING_INFO",
            Error::Kind { .. } => "E_KIND",
            Error::TemplateParse { .. } => "E_TEMPLATE_PARSE",
            Error::Template { .. } => "E_TEMPLATE",
            Error::UnknownPath { .. } => "E_UNKNOWN_PATH",
            Error::InfiniteInclude { .. } => "E_INFINITE_INCLUDE",
            Error::InTransform { source, .. } | Error::InTemplate { source, .. } => source.code(),
        }
    }

    /// Process exit code for this error: 1 usage, 2 parse/build, 3 generation.
    pub fn exit_code(&self) -> i32 {
        match self.root() {
            Error::Config { .. } => 1,
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::DuplicateName { .. }
            | Error::UnknownType { .. }
            | Error::CyclicInheritance { .. }
            | Error::InvalidSupertype { .. } => 2,
            _ => 3,
        }
    }

    /// Best source location for a diagnostic prefix.
    pub fn pos(&self) -> Option<&SourcePos> {
        match self {
            Error::Parse { pos, .. }
            | Error::DuplicateName { pos, .. }
            | Error::UnknownType { pos, .. }
            | Error::InvalidSupertype { pos, .. }
            | Error::TemplateParse { pos, .. }
            | Error::InTemplate { pos, .. } => Some(pos),
            Error::OrderViolation { pos, .. } | Error::MissingGeneratorInfo { pos, .. } => {
                pos.as_ref()
            }
            Error::InTransform { source, .. } => source.pos(),
            _ => None,
        }
    }

    /// The innermost error, with all context wrappers removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::InTransform { source, .. } | Error::InTemplate { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn precondition(message: impl Into<String>) -> Self {
        Error::Precondition {
            message: message.into(),
        }
    }

    /// Fills in the prerequisite hint on order and missing-info errors that
    /// do not have one yet, looking through context wrappers.
    pub(crate) fn with_prerequisite(mut self, hint: impl FnOnce(&Error) -> Option<String>) -> Self {
        let mut cursor = &mut self;
        while let Error::InTransform { source, .. } | Error::InTemplate { source, .. } = cursor {
            cursor = source.as_mut();
        }
        let suggested = hint(cursor);
        if let Error::OrderViolation { prerequisite, .. }
        | Error::MissingGeneratorInfo { prerequisite, .. } = cursor
        {
            if prerequisite.is_none() {
                *prerequisite = suggested;
            }
        }
        self
    }
}
