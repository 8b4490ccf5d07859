//! Light-weight well-formedness check for generated Java source.

use std::fmt;

use crate::java::is_keyword;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LintKind {
    UnbalancedDelimiter,
    TemplateResidue,
    IllegalToken,
    UnterminatedLiteral,
    TypeNameMismatch,
}

impl LintKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LintKind::UnbalancedDelimiter => "unbalanced-delimiter",
            LintKind::TemplateResidue => "template-residue",
            LintKind::IllegalToken => "illegal-token",
            LintKind::UnterminatedLiteral => "unterminated-literal",
            LintKind::TypeNameMismatch => "type-name-mismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LintFinding {
    pub kind: LintKind,
    pub line: u32,
    pub col: u32,
    pub message: String,
}

impl fmt::Display for LintFinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.line, self.col, self.kind.as_str(), self.message)
    }
}

const RESIDUE: &[&str] = &["${", "@foreach", "@if(", "@else", "@end"];
const OPERATOR_CHARS: &str = "+-*/%=<>!&|^~?:;,.@";
const MODIFIERS: &[&str] = &["public", "abstract", "final", "static", "strictfp", "sealed"];
const TYPE_KEYWORDS: &[&str] = &["class", "interface", "enum", "record"];

#[derive(Debug)]
enum Tok {
    Word(String),
    Open(char),
    Close(char),
    Other,
}

struct Scanner {
    chars: Vec<char>,
    i: usize,
    line: u32,
    col: u32,
    findings: Vec<LintFinding>,
}

impl Scanner {
    fn peek(&self, ahead: usize) -> Option<char> {
        self.chars.get(self.i + ahead).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek(0)?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn report(&mut self, kind: LintKind, line: u32, col: u32, message: String) {
        self.findings.push(LintFinding { kind, line, col, message });
    }

    fn quoted(&mut self, quote: char, line: u32, col: u32) {
        self.bump();
        let mut len = 0;
        loop {
            match self.peek(0) {
                None | Some('\n') => {
                    self.report(LintKind::UnterminatedLiteral, line, col, "unterminated literal".into());
                    return;
                }
                Some('\\') => {
                    self.bump();
                    self.bump();
                }
                Some(c) if c == quote => {
                    self.bump();
                    break;
                }
                Some(_) => {
                    self.bump();
                }
            }
            len += 1;
        }
        if quote == '\'' && len != 1 {
            self.report(LintKind::IllegalToken, line, col, "character literal must hold one character".into());
        }
    }

    fn next_token(&mut self) -> Option<(Tok, u32, u32)> {
        loop {
            let c = self.peek(0)?;
            let (line, col) = (self.line, self.col);
            if c.is_whitespace() {
                self.bump();
            } else if c == '/' && self.peek(1) == Some('/') {
                while self.peek(0).is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else if c == '/' && self.peek(1) == Some('*') {
                self.bump();
                self.bump();
                loop {
                    match self.peek(0) {
                        None => {
                            self.report(LintKind::UnterminatedLiteral, line, col, "unterminated comment".into());
                            return None;
                        }
                        Some('*') if self.peek(1) == Some('/') => {
                            self.bump();
                            self.bump();
                            break;
                        }
                        Some(_) => {
                            self.bump();
                        }
                    }
                }
            } else if c == '"' || c == '\'' {
                self.quoted(c, line, col);
                return Some((Tok::Other, line, col));
            } else if c.is_alphabetic() || c == '_' || c == '$' {
                let mut word = String::new();
                while let Some(c) = self.peek(0).filter(|c| c.is_alphanumeric() || *c == '_' || *c == '$') {
                    word.push(c);
                    self.bump();
                }
                if word == "_" {
                    self.report(LintKind::IllegalToken, line, col, "`_` is not a legal identifier".into());
                }
                return Some((Tok::Word(word), line, col));
            } else if c.is_ascii_digit() || (c == '.' && self.peek(1).is_some_and(|d| d.is_ascii_digit())) {
                let mut number = String::new();
                while let Some(c) = self.peek(0) {
                    let signed_exponent = matches!(c, '+' | '-')
                        && number.ends_with(['e', 'E'])
                        && !number.starts_with("0x")
                        && !number.starts_with("0X");
                    if !(c.is_alphanumeric() || c == '_' || c == '.' || signed_exponent) {
                        break;
                    }
                    number.push(c);
                    self.bump();
                }
                if !is_number_literal(&number) {
                    self.report(LintKind::IllegalToken, line, col, format!("malformed number `{number}`"));
                }
                return Some((Tok::Other, line, col));
            } else {
                self.bump();
                return Some(match c {
                    '{' | '(' | '[' => (Tok::Open(c), line, col),
                    '}' | ')' | ']' => (Tok::Close(c), line, col),
                    c if OPERATOR_CHARS.contains(c) => (Tok::Other, line, col),
                    c => {
                        self.report(LintKind::IllegalToken, line, col, format!("illegal character `{c}`"));
                        (Tok::Other, line, col)
                    }
                });
            }
        }
    }
}

fn is_number_literal(s: &str) -> bool {
    let digits = |t: &str| {
        !t.is_empty()
            && t.chars().all(|c| c.is_ascii_digit() || c == '_')
            && !t.starts_with('_')
            && !t.ends_with('_')
    };
    if let Some(hex) = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        let hex = hex.strip_suffix(['l', 'L']).unwrap_or(hex);
        return !hex.is_empty() && hex.chars().all(|c| c.is_ascii_hexdigit() || c == '_');
    }
    let (body, suffix) = match s.chars().last() {
        Some(c @ ('l' | 'L' | 'f' | 'F' | 'd' | 'D')) => (&s[..s.len() - 1], Some(c)),
        _ => (s, None),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(i) => (&body[..i], Some(&body[i + 1..])),
        None => (body, None),
    };
    if let Some(exp) = exponent {
        let exp = exp.strip_prefix(['+', '-']).unwrap_or(exp);
        if !digits(exp) {
            return false;
        }
    }
    let is_float = mantissa.contains('.') || exponent.is_some();
    if matches!(suffix, Some('l' | 'L')) && is_float {
        return false;
    }
    match mantissa.split_once('.') {
        Some((int, frac)) => {
            (int.is_empty() || digits(int)) && (frac.is_empty() || digits(frac)) && !(int.is_empty() && frac.is_empty())
        }
        None => digits(mantissa),
    }
}

fn residue_findings(content: &str, out: &mut Vec<LintFinding>) {
    for (line_no, line) in content.lines().enumerate() {
        for marker in RESIDUE {
            let mut from = 0;
            while let Some(at) = line[from..].find(marker) {
                let start = from + at;
                let end = start + marker.len();
                from = end;
                let word_marker = marker.ends_with(|c: char| c.is_alphabetic());
                if word_marker
                    && line[end..]
                        .chars()
                        .next()
                        .is_some_and(|c| c.is_alphanumeric() || c == '_')
                {
                    continue;
                }
                out.push(LintFinding {
                    kind: LintKind::TemplateResidue,
                    line: line_no as u32 + 1,
                    col: line[..start].chars().count() as u32 + 1,
                    message: format!("unexpanded template syntax `{marker}`"),
                });
            }
        }
    }
}

/// Checks generated Java source: balanced `{} () []` outside literals and
/// comments, no template residue, legal tokens, and a public top-level type
/// named after the file.
pub fn lint_java(file_name: &str, content: &str) -> Vec<LintFinding> {
    let mut scanner = Scanner {
        chars: content.chars().collect(),
        i: 0,
        line: 1,
        col: 1,
        findings: Vec::new(),
    };
    residue_findings(content, &mut scanner.findings);

    let mut stack: Vec<(char, u32, u32)> = Vec::new();
    let mut modifiers: Vec<String> = Vec::new();
    let mut expect_type_name: Option<bool> = None;
    let mut public_types: Vec<(String, u32, u32)> = Vec::new();
    while let Some((tok, line, col)) = scanner.next_token() {
        match tok {
            Tok::Open(c) => {
                stack.push((c, line, col));
                modifiers.clear();
            }
            Tok::Close(c) => {
                let want = match c {
                    '}' => '{',
                    ')' => '(',
                    _ => '[',
                };
                match stack.pop() {
                    Some((open, ..)) if open == want => {}
                    Some((open, l, k)) => scanner.report(
                        LintKind::UnbalancedDelimiter,
                        line,
                        col,
                        format!("`{c}` closes `{open}` opened at {l}:{k}"),
                    ),
                    None => scanner.report(LintKind::UnbalancedDelimiter, line, col, format!("unmatched `{c}`")),
                }
                modifiers.clear();
            }
            Tok::Word(word) if stack.is_empty() => {
                if let Some(public) = expect_type_name.take() {
                    if public {
                        public_types.push((word, line, col));
                    }
                } else if TYPE_KEYWORDS.contains(&word.as_str()) {
                    expect_type_name = Some(modifiers.iter().any(|m| m == "public"));
                    modifiers.clear();
                } else if MODIFIERS.contains(&word.as_str()) {
                    modifiers.push(word);
                } else {
                    modifiers.clear();
                }
            }
            Tok::Word(word) => {
                if expect_type_name.take().is_some() && is_keyword(&word) {
                    scanner.report(LintKind::IllegalToken, line, col, format!("keyword `{word}` used as a name"));
                }
            }
            Tok::Other => modifiers.clear(),
        }
    }
    for (open, line, col) in stack {
        scanner.report(LintKind::UnbalancedDelimiter, line, col, format!("`{open}` is never closed"));
    }

    let stem = file_name.strip_suffix(".java").unwrap_or(file_name);
    let stem = stem.rsplit(['/', '\\']).next().unwrap_or(stem);
    for (name, line, col) in &public_types {
        if is_keyword(name) {
            scanner.report(LintKind::IllegalToken, *line, *col, format!("keyword `{name}` used as a type name"));
        } else if name != stem {
            scanner.report(
                LintKind::TypeNameMismatch,
                *line,
                *col,
                format!("public type `{name}` must be declared in `{name}.java`, not `{file_name}`"),
            );
        }
    }
    if public_types.len() > 1 {
        let (_, line, col) = &public_types[1];
        scanner.report(
            LintKind::TypeNameMismatch,
            *line,
            *col,
            "more than one public top-level type".into(),
        );
    }
    let mut findings = scanner.findings;
    findings.sort_by_key(|f| (f.line, f.col));
    findings
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(file: &str, src: &str) -> Vec<LintKind> {
        lint_java(file, src).into_iter().map(|f| f.kind).collect()
    }

    #[test]
    fn clean_unit() {
        let src = "public class Book {\n\n    private String title;\n\n    public String getTitle() {\n        return this.title;\n    }\n}\n";
        assert_eq!(lint_java("Book.java", src), vec![]);
    }

    #[test]
    fn unbalanced_brace() {
        let findings = lint_java("A.java", "class A {");
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].kind, LintKind::UnbalancedDelimiter);
        assert_eq!((findings[0].line, findings[0].col), (1, 9));
        assert_eq!(kinds("A.java", "class A { void f(] }"), vec![LintKind::UnbalancedDelimiter]);
        assert_eq!(kinds("A.java", "class A {}}"), vec![LintKind::UnbalancedDelimiter]);
    }

    #[test]
    fn delimiters_in_literals_and_comments_do_not_count() {
        let src = "public class A {\n  String s = \"{(\"; char c = '}'; // )\n  /* ] */ String e = \"\\\"{\";\n}\n";
        assert_eq!(lint_java("A.java", src), vec![]);
    }

    #[test]
    fn template_residue() {
        let findings = lint_java("A.java", "public class A { String ${name}; }");
        assert!(findings.iter().any(|f| f.kind == LintKind::TemplateResidue && f.col == 25));
        assert!(kinds("A.java", "public class A {}\n@foreach(f : fields)\n").contains(&LintKind::TemplateResidue));
        assert!(kinds("A.java", "public class A {}\n@end\n").contains(&LintKind::TemplateResidue));
        assert!(!kinds("A.java", "@endpoint public class A {}\n").contains(&LintKind::TemplateResidue));
    }

    #[test]
    fn illegal_tokens() {
        assert!(kinds("A.java", "public class A { int _; }").contains(&LintKind::IllegalToken));
        assert!(kinds("A.java", "public class A { int x = 12ab; }").contains(&LintKind::IllegalToken));
        assert!(kinds("A.java", "public class A { # }").contains(&LintKind::IllegalToken));
        assert!(kinds("A.java", "public class A { char c = 'ab'; }").contains(&LintKind::IllegalToken));
        assert_eq!(kinds("A.java", "public class A { double d = 1e-5 + 0xE-1; }"), vec![]);
        assert!(kinds("A.java", "public class A { String s = \"open\n; }").contains(&LintKind::UnterminatedLiteral));
        for ok in ["0", "1_000", "0x1F", "10L", "1.5", "1e10", "1e+5", "2.5f", ".5", "3D"] {
            assert!(is_number_literal(ok), "{ok}");
        }
        for bad in ["1_", "0x", "1.5L", "1e", "12ab", "1..2"] {
            assert!(!is_number_literal(bad), "{bad}");
        }
    }

    #[test]
    fn file_name_must_match_public_type() {
        let findings = lint_java("Book.java", "public class Novel {}\n");
        assert_eq!(findings.len(), 1);
        assert_eq!(findings[0].kind, LintKind::TypeNameMismatch);
        assert_eq!(lint_java("out/Book.java", "public final class Book {}\n"), vec![]);
        assert_eq!(lint_java("Book.java", "class Helper {}\n"), vec![]);
        assert_eq!(
            kinds("A.java", "public class A {}\npublic class B {}\n"),
            vec![LintKind::TypeNameMismatch, LintKind::TypeNameMismatch]
        );
        assert_eq!(kinds("A.java", "public class class {}"), vec![LintKind::IllegalToken]);
    }
}
