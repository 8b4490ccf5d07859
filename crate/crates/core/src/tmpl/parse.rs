//! Template syntax.
//!
//! * `${expr}` interpolates an expression;
//! * `@foreach(v : expr) ... @end` iterates a list;
//! * `@if(expr) ... [@else ...] @end` branches on truthiness;
//! * `@@` is a literal `@` and `$${` a literal `${`; any other `@` is text.
//!
//! A directive that is alone on its line (ignoring spaces and tabs) consumes
//! the whole line, newline included.
//!
//! Expressions are string literals, dotted paths (`f.typeName`) or calls to
//! the builtins `instantiation`, `accessor`, `mutator`, `javaName` and
//! `include`.

use std::fmt;

use crate::cdlang::SourcePos;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub name: String,
    pub body: Vec<Segment>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    Literal(String),
    Interp {
        expr: Expr,
        pos: SourcePos,
    },
    Foreach {
        var: String,
        list: Expr,
        body: Vec<Segment>,
        pos: SourcePos,
    },
    If {
        cond: Expr,
        then: Vec<Segment>,
        otherwise: Vec<Segment>,
        pos: SourcePos,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Builtin {
    Instantiation,
    Accessor,
    Mutator,
    JavaName,
    Include,
}

impl Builtin {
    fn from_name(name: &str) -> Option<Builtin> {
        Some(match name {
            "instantiation" => Builtin::Instantiation,
            "accessor" => Builtin::Accessor,
            "mutator" => Builtin::Mutator,
            "javaName" => Builtin::JavaName,
            "include" => Builtin::Include,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Instantiation => "instantiation",
            Builtin::Accessor => "accessor",
            Builtin::Mutator => "mutator",
            Builtin::JavaName => "javaName",
            Builtin::Include => "include",
        }
    }

    fn arity(self) -> usize {
        match self {
            Builtin::Accessor => 2,
            Builtin::Mutator => 3,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Str(String),
    Path(Vec<String>),
    Call(Builtin, Vec<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Str(s) => write!(f, "{s:?}"),
            Expr::Path(p) => f.write_str(&p.join(".")),
            Expr::Call(b, args) => {
                write!(f, "{}(", b.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// Flat token produced by the first pass; `start..end` is its byte span.
#[derive(Debug)]
enum Piece {
    Text(String),
    Interp(Expr),
    Foreach(String, Expr),
    If(Expr),
    Else,
    End,
}

impl Piece {
    fn is_directive(&self) -> bool {
        !matches!(self, Piece::Text(_) | Piece::Interp(_))
    }
}

struct Lexer<'a> {
    name: &'a str,
    src: &'a str,
    line_starts: Vec<usize>,
}

impl<'a> Lexer<'a> {
    fn new(name: &'a str, src: &'a str) -> Self {
        let line_starts = std::iter::once(0)
            .chain(src.match_indices('\n').map(|(i, _)| i + 1))
            .collect();
        Lexer {
            name,
            src,
            line_starts,
        }
    }

    fn pos(&self, offset: usize) -> SourcePos {
        let line = self.line_starts.partition_point(|&s| s <= offset);
        let start = self.line_starts[line - 1];
        let col = self.src[start..offset].chars().count() + 1;
        SourcePos::new(format!("{}.jt", self.name), line as u32, col as u32)
    }

    fn error<T>(&self, offset: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::TemplateParse {
            name: self.name.to_string(),
            pos: self.pos(offset),
            message: message.into(),
        })
    }

    fn pieces(&self) -> Result<Vec<(Piece, usize, usize)>> {
        let src = self.src;
        let bytes = src.as_bytes();
        let mut out = Vec::new();
        let mut text = String::new();
        let mut text_start = 0;
        let mut i = 0;
        let flush = |text: &mut String, out: &mut Vec<(Piece, usize, usize)>, start, end| {
            if !text.is_empty() {
                out.push((Piece::Text(std::mem::take(text)), start, end));
            }
        };
        while i < bytes.len() {
            let rest = &src[i..];
            if rest.starts_with("$${") {
                text.push_str("${");
                i += 3;
            } else if rest.starts_with("${") {
                flush(&mut text, &mut out, text_start, i);
                let close = self.find_close(i + 2, '}')?;
                let expr = self.expr(i + 2, close)?;
                out.push((Piece::Interp(expr), i, close + 1));
                i = close + 1;
                text_start = i;
            } else if rest.starts_with("@@") {
                text.push('@');
                i += 2;
            } else if let Some((piece, end)) = self.directive(i)? {
                flush(&mut text, &mut out, text_start, i);
                out.push((piece, i, end));
                i = end;
                text_start = i;
            } else {
                let c = rest.chars().next().expect("non-empty rest");
                text.push(c);
                i += c.len_utf8();
            }
        }
        flush(&mut text, &mut out, text_start, i);
        Ok(out)
    }

    fn keyword_at(&self, at: usize, kw: &str) -> bool {
        let rest = &self.src[at..];
        rest.starts_with(kw)
            && !rest[kw.len()..]
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphanumeric() || c == '_')
    }

    fn directive(&self, at: usize) -> Result<Option<(Piece, usize)>> {
        let rest = &self.src[at..];
        if rest.starts_with("@foreach(") {
            let open = at + "@foreach(".len();
            let close = self.find_close(open, ')')?;
            let inner = &self.src[open..close];
            let Some(colon) = inner.find(':') else {
                return self.error(at, "expected `@foreach(var : list)`");
            };
            let var = inner[..colon].trim();
            if !crate::cdlang::is_identifier(var) {
                return self.error(open, format!("invalid loop variable `{var}`"));
            }
            let list = self.expr(open + colon + 1, close)?;
            return Ok(Some((Piece::Foreach(var.to_string(), list), close + 1)));
        }
        if rest.starts_with("@if(") {
            let open = at + "@if(".len();
            let close = self.find_close(open, ')')?;
            let cond = self.expr(open, close)?;
            return Ok(Some((Piece::If(cond), close + 1)));
        }
        if self.keyword_at(at, "@else") {
            return Ok(Some((Piece::Else, at + "@else".len())));
        }
        if self.keyword_at(at, "@end") {
            return Ok(Some((Piece::End, at + "@end".len())));
        }
        if (rest.starts_with("@foreach") || rest.starts_with("@if"))
            && (self.keyword_at(at, "@foreach") || self.keyword_at(at, "@if"))
        {
            return self.error(at, "directive needs a parenthesised argument");
        }
        Ok(None)
    }

    /// Offset of the closing delimiter, skipping string literals and
    /// balanced parentheses.
    fn find_close(&self, from: usize, close: char) -> Result<usize> {
        let mut depth = 0usize;
        let mut in_string = false;
        let mut escaped = false;
        for (off, c) in self.src[from..].char_indices() {
            let at = from + off;
            if in_string {
                match (escaped, c) {
                    (true, _) => escaped = false,
                    (false, '\\') => escaped = true,
                    (false, '"') => in_string = false,
                    _ => {}
                }
                continue;
            }
            match c {
                '"' => in_string = true,
                '(' => depth += 1,
                ')' if depth > 0 => depth -= 1,
                c if c == close && depth == 0 => return Ok(at),
                '\n' => return self.error(from, format!("missing `{close}` before end of line")),
                _ => {}
            }
        }
        self.error(from, format!("missing `{close}`"))
    }

    fn expr(&self, start: usize, end: usize) -> Result<Expr> {
        let mut p = ExprParser {
            lexer: self,
            at: start,
            end,
        };
        let expr = p.expr()?;
        p.skip_ws();
        if p.at < end {
            return self.error(p.at, "unexpected text after expression");
        }
        Ok(expr)
    }
}

struct ExprParser<'l, 'a> {
    lexer: &'l Lexer<'a>,
    at: usize,
    end: usize,
}

impl ExprParser<'_, '_> {
    fn peek(&self) -> Option<char> {
        self.lexer.src[self.at..self.end].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.at += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.at;
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.at += 1;
            } else {
                break;
            }
        }
        let word = &self.lexer.src[start..self.at];
        if !crate::cdlang::is_identifier(word) {
            return self.lexer.error(start, "expected an identifier or string literal");
        }
        Ok(word.to_string())
    }

    fn expr(&mut self) -> Result<Expr> {
        self.skip_ws();
        let start = self.at;
        if self.peek() == Some('"') {
            return self.string();
        }
        let head = self.ident()?;
        self.skip_ws();
        if self.peek() == Some('(') {
            let Some(builtin) = Builtin::from_name(&head) else {
                return self.lexer.error(start, format!("unknown function `{head}`"));
            };
            self.at += 1;
            let mut args = Vec::new();
            self.skip_ws();
            if self.peek() != Some(')') {
                loop {
                    args.push(self.expr()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(',') => self.at += 1,
                        _ => break,
                    }
                }
            }
            self.skip_ws();
            if self.peek() != Some(')') {
                return self.lexer.error(self.at, "expected `)`");
            }
            self.at += 1;
            if args.len() != builtin.arity() {
                return self.lexer.error(
                    start,
                    format!(
                        "`{}` takes {} argument(s), got {}",
                        builtin.name(),
                        builtin.arity(),
                        args.len()
                    ),
                );
            }
            return Ok(Expr::Call(builtin, args));
        }
        let mut path = vec![head];
        while self.peek() == Some('.') {
            self.at += 1;
            path.push(self.ident()?);
            self.skip_ws();
        }
        Ok(Expr::Path(path))
    }

    fn string(&mut self) -> Result<Expr> {
        let start = self.at;
        self.at += 1;
        let mut out = String::new();
        while let Some(c) = self.peek() {
            self.at += c.len_utf8();
            match c {
                '"' => return Ok(Expr::Str(out)),
                '\\' => {
                    let Some(e) = self.peek() else { break };
                    self.at += e.len_utf8();
                    out.push(match e {
                        'n' => '\n',
                        't' => '\t',
                        other => other,
                    });
                }
                c => out.push(c),
            }
        }
        self.lexer.error(start, "unterminated string literal")
    }
}

/// Marks directives that sit alone on their line and trims that line from
/// the neighbouring text pieces.
fn trim_standalone(src: &str, pieces: &mut [(Piece, usize, usize)]) {
    for i in 0..pieces.len() {
        if !pieces[i].0.is_directive() {
            continue;
        }
        let (start, end) = (pieces[i].1, pieces[i].2);
        let line_start = src[..start].rfind('\n').map_or(0, |n| n + 1);
        let line_end = src[end..].find('\n').map_or(src.len(), |n| end + n);
        let blank = |s: &str| s.chars().all(|c| c == ' ' || c == '\t' || c == '\r');
        if !blank(&src[line_start..start]) || !blank(&src[end..line_end]) {
            continue;
        }
        if line_start < start {
            if let Some((Piece::Text(prev), ..)) = i.checked_sub(1).map(|j| &mut pieces[j]) {
                let keep = prev.trim_end_matches([' ', '\t']).len();
                prev.truncate(keep);
            }
        }
        if let Some((Piece::Text(next), ..)) = pieces.get_mut(i + 1) {
            let trimmed = next.trim_start_matches([' ', '\t', '\r']);
            let trimmed = trimmed.strip_prefix('\n').unwrap_or(trimmed);
            *next = trimmed.to_string();
        }
    }
}

enum Frame {
    Foreach {
        var: String,
        list: Expr,
        pos: SourcePos,
        body: Vec<Segment>,
    },
    If {
        cond: Expr,
        pos: SourcePos,
        then: Vec<Segment>,
        otherwise: Option<Vec<Segment>>,
    },
}

impl Frame {
    fn current(&mut self) -> &mut Vec<Segment> {
        match self {
            Frame::Foreach { body, .. } => body,
            Frame::If {
                otherwise: Some(o), ..
            } => o,
            Frame::If { then, .. } => then,
        }
    }
}

/// Parses template source. All expressions are parsed up front.
pub fn parse_template(text: &str, name: &str) -> Result<Template> {
    let lexer = Lexer::new(name, text);
    let mut pieces = lexer.pieces()?;
    trim_standalone(text, &mut pieces);

    let mut root: Vec<Segment> = Vec::new();
    let mut stack: Vec<Frame> = Vec::new();
    for (piece, start, _) in pieces {
        let pos = lexer.pos(start);
        let segment = match piece {
            Piece::Text(t) if t.is_empty() => continue,
            Piece::Text(t) => Segment::Literal(t),
            Piece::Interp(expr) => Segment::Interp { expr, pos },
            Piece::Foreach(var, list) => {
                stack.push(Frame::Foreach {
                    var,
                    list,
                    pos,
                    body: Vec::new(),
                });
                continue;
            }
            Piece::If(cond) => {
                stack.push(Frame::If {
                    cond,
                    pos,
                    then: Vec::new(),
                    otherwise: None,
                });
                continue;
            }
            Piece::Else => {
                match stack.last_mut() {
                    Some(Frame::If { otherwise, .. }) if otherwise.is_none() => {
                        *otherwise = Some(Vec::new());
                    }
                    _ => return lexer.error(start, "`@else` without matching `@if`"),
                }
                continue;
            }
            Piece::End => match stack.pop() {
                Some(Frame::Foreach {
                    var,
                    list,
                    pos,
                    body,
                }) => Segment::Foreach {
                    var,
                    list,
                    body,
                    pos,
                },
                Some(Frame::If {
                    cond,
                    pos,
                    then,
                    otherwise,
                }) => Segment::If {
                    cond,
                    then,
                    otherwise: otherwise.unwrap_or_default(),
                    pos,
                },
                None => return lexer.error(start, "`@end` without matching `@foreach` or `@if`"),
            },
        };
        match stack.last_mut() {
            Some(frame) => frame.current().push(segment),
            None => root.push(segment),
        }
    }
    if let Some(frame) = stack.pop() {
        let (pos, what) = match frame {
            Frame::Foreach { pos, .. } => (pos, "@foreach"),
            Frame::If { pos, .. } => (pos, "@if"),
        };
        return Err(Error::TemplateParse {
            name: name.to_string(),
            pos,
            message: format!("`{what}` is never closed with `@end`"),
        });
    }
    Ok(Template {
        name: name.to_string(),
        body: merge_literals(root),
    })
}

fn merge_literals(segments: Vec<Segment>) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::with_capacity(segments.len());
    for seg in segments {
        let seg = match seg {
            Segment::Foreach {
                var,
                list,
                body,
                pos,
            } => Segment::Foreach {
                var,
                list,
                body: merge_literals(body),
                pos,
            },
            Segment::If {
                cond,
                then,
                otherwise,
                pos,
            } => Segment::If {
                cond,
                then: merge_literals(then),
                otherwise: merge_literals(otherwise),
                pos,
            },
            other => other,
        };
        match (out.last_mut(), seg) {
            (Some(Segment::Literal(prev)), Segment::Literal(next)) => prev.push_str(&next),
            (_, seg) => out.push(seg),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lit(s: &str) -> Segment {
        Segment::Literal(s.into())
    }

    fn path(p: &[&str]) -> Expr {
        Expr::Path(p.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn interpolation() {
        let t = parse_template("class ${name} {}", "t").unwrap();
        assert_eq!(
            t.body,
            vec![
                lit("class "),
                Segment::Interp {
                    expr: path(&["name"]),
                    pos: SourcePos::new("t.jt", 1, 7)
                },
                lit(" {}")
            ]
        );
    }

    #[test]
    fn foreach() {
        let t = parse_template("@foreach(f : fields)${f.typeName} ${f.name};@end", "t").unwrap();
        match &t.body[..] {
            [Segment::Foreach { var, list, body, .. }] => {
                assert_eq!(var, "f");
                assert_eq!(list, &path(&["fields"]));
                assert_eq!(body.len(), 4);
                assert_eq!(body[3], lit(";"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn if_else() {
        let t = parse_template("@if(superName)yes@else no@end", "t").unwrap();
        assert_eq!(
            t.body,
            vec![Segment::If {
                cond: path(&["superName"]),
                then: vec![lit("yes")],
                otherwise: vec![lit(" no")],
                pos: SourcePos::new("t.jt", 1, 1)
            }]
        );
    }

    #[test]
    fn builtin_calls() {
        let t = parse_template(r#"${accessor(Book.title, "b")}"#, "t").unwrap();
        assert_eq!(
            t.body,
            vec![Segment::Interp {
                expr: Expr::Call(
                    Builtin::Accessor,
                    vec![path(&["Book", "title"]), Expr::Str("b".into())]
                ),
                pos: SourcePos::new("t.jt", 1, 1)
            }]
        );
        let t = parse_template(r#"${mutator(Book.title, "b", "\"x}\"")}"#, "t").unwrap();
        match &t.body[0] {
            Segment::Interp {
                expr: Expr::Call(Builtin::Mutator, args),
                ..
            } => assert_eq!(args[2], Expr::Str("\"x}\"".into())),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn standalone_directives_consume_their_line() {
        let src = "A\n  @foreach(x : xs)\n  - ${x}\n  @end\nB\n";
        let t = parse_template(src, "t").unwrap();
        match &t.body[..] {
            [Segment::Literal(a), Segment::Foreach { body, .. }, Segment::Literal(b)] => {
                assert_eq!(a, "A\n");
                assert_eq!(body[0], lit("  - "));
                assert_eq!(body[2], lit("\n"));
                assert_eq!(b, "B\n");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn escapes() {
        let t = parse_template("a@@b $${x} c@Override", "t").unwrap();
        assert_eq!(t.body, vec![lit("a@b ${x} c@Override")]);
    }

    #[test]
    fn errors_carry_positions() {
        let cases = [
            ("@foreach(f : fields)x", (1, 1)),
            ("x\n@end", (2, 1)),
            ("@else", (1, 1)),
            ("${name", (1, 3)),
            ("${frobnicate(x)}", (1, 3)),
            ("${include(a, b)}", (1, 3)),
            ("${a.}", (1, 5)),
            ("${a b}", (1, 5)),
            ("${\"open}", (1, 3)),
            ("@foreach(fields)x@end", (1, 1)),
            ("@foreach(1 : fields)x@end", (1, 10)),
            ("@if x @end", (1, 1)),
            ("@if(a)@else@else@end", (1, 12)),
        ];
        for (src, (line, col)) in cases {
            match parse_template(src, "broken") {
                Err(Error::TemplateParse { name, pos, .. }) => {
                    assert_eq!(name, "broken");
                    assert_eq!((pos.line, pos.col), (line, col), "{src}");
                }
                other => panic!("{src}: unexpected {other:?}"),
            }
        }
    }
}
