//! Facts about the Java output language shared by the mapper, the default
//! templates and the linter.

use crate::cdlang::is_identifier;

/// Type names that need no declaration in a class diagram.
pub const BUILTIN_TYPES: &[&str] = &["String", "int", "boolean", "double"];

pub const JAVA_KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try",
    "void", "volatile", "while", "true", "false", "null", "var", "record", "yield", "sealed",
    "permits", "non-sealed",
];

pub fn is_keyword(word: &str) -> bool {
    JAVA_KEYWORDS.contains(&word)
}

/// An identifier usable as a Java type, field or method name.
pub fn is_java_identifier(name: &str) -> bool {
    is_identifier(name) && !is_keyword(name)
}

pub fn is_builtin_type(name: &str) -> bool {
    BUILTIN_TYPES.contains(&name)
}

/// Literal returned by a generated method stub; `None` for `void`.
pub fn default_value(type_name: &str) -> Option<&'static str> {
    match type_name {
        "void" => None,
        "int" | "double" => Some("0"),
        "boolean" => Some("false"),
        _ => Some("null"),
    }
}

/// `title` -> `Title`.
pub fn capitalize(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(first) => first.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

pub fn accessor_name(field: &str) -> String {
    format!("get{}", capitalize(field))
}

pub fn mutator_name(field: &str) -> String {
    format!("set{}", capitalize(field))
}
