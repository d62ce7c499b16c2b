// SPDX-License-Identifier: Apache-2.0

//! Structural parser for module headers, ports and signal declarations.

use std::collections::HashSet;

use super::lexer::{lex, Token, TokenKind};
use super::source::SourceFile;
use super::types::*;

/// Extracts every `module ... endmodule` block from `file`.
///
/// Unsupported constructs are stepped over and reported in
/// [`ParsedFile::skipped`]; only structural damage (unbalanced
/// module/endmodule, unterminated comments or strings) is an error.
pub fn parse_modules(file: &SourceFile) -> Result<ParsedFile, ScanError> {
    let lexed = lex(file.content());
    if let Some(err) = lexed.error {
        return Err(ScanError::MalformedSource {
            path: file.path().to_path_buf(),
            line: file.line_of(err.offset),
            message: err.message,
        });
    }
    let mut parser = Parser {
        file,
        toks: lexed.tokens,
        pos: 0,
        out: ParsedFile::default(),
    };
    parser.top_level()?;
    Ok(parser.out)
}

/// Parses several files and rejects module names that appear more than once.
pub fn parse_all<'a>(files: impl IntoIterator<Item = &'a SourceFile>) -> Result<ParsedFile, ScanError> {
    let mut all = ParsedFile::default();
    for file in files {
        let parsed = parse_modules(file)?;
        for m in parsed.modules {
            if let Some(prev) = all.modules.iter().find(|p| p.name == m.name) {
                return Err(ScanError::DuplicateModule {
                    name: m.name,
                    first: prev.path.clone(),
                    second: m.path,
                });
            }
            all.modules.push(m);
        }
        all.skipped.extend(parsed.skipped);
    }
    Ok(all)
}

const SKIPPED_BLOCKS: &[(&str, &str)] = &[
    ("generate", "endgenerate"),
    ("function", "endfunction"),
    ("task", "endtask"),
    ("interface", "endinterface"),
    ("package", "endpackage"),
    ("program", "endprogram"),
    ("class", "endclass"),
    ("checker", "endchecker"),
    ("config", "endconfig"),
    ("primitive", "endprimitive"),
    ("covergroup", "endgroup"),
    ("property", "endproperty"),
    ("sequence", "endsequence"),
    ("clocking", "endclocking"),
    ("specify", "endspecify"),
];

/// Blocks that are routine RTL and do not warrant a skip diagnostic.
const QUIET_BLOCKS: &[&str] = &["function", "task"];

const STATEMENT_SKIPS: &[&str] = &["typedef", "localparam", "parameter", "import", "genvar", "export"];

const NET_TYPES: &[&str] = &[
    "wire", "tri", "var", "wand", "wor", "uwire", "tri0", "tri1", "supply0", "supply1",
];
const VECTOR_TYPES: &[&str] = &["logic", "reg", "bit"];
const ATOM_TYPES: &[(&str, u32)] = &[
    ("int", 32),
    ("integer", 32),
    ("byte", 8),
    ("shortint", 16),
    ("longint", 64),
    ("time", 64),
];

fn is_type_keyword(text: &str) -> bool {
    NET_TYPES.contains(&text)
        || VECTOR_TYPES.contains(&text)
        || ATOM_TYPES.iter().any(|(k, _)| *k == text)
        || text == "signed"
        || text == "unsigned"
}

fn direction_of(text: &str) -> Option<Direction> {
    match text {
        "input" => Some(Direction::Input),
        "output" => Some(Direction::Output),
        "inout" => Some(Direction::Inout),
        _ => None,
    }
}

struct Parser<'a> {
    file: &'a SourceFile,
    toks: Vec<Token<'a>>,
    pos: usize,
    out: ParsedFile,
}

/// Port list style detected from the module header.
enum HeaderStyle {
    Ansi,
    /// Names only; directions and widths come from body declarations.
    NonAnsi(Vec<(String, u32)>),
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Token<'a>> {
        self.toks.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<Token<'a>> {
        let t = self.peek();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn line(&self, tok: &Token<'_>) -> u32 {
        self.file.line_of(tok.offset)
    }

    fn eof_line(&self) -> u32 {
        self.file.line_count() as u32
    }

    fn malformed(&self, line: u32, message: impl Into<String>) -> ScanError {
        ScanError::MalformedSource {
            path: self.file.path().to_path_buf(),
            line,
            message: message.into(),
        }
    }

    fn skip_note(&mut self, line: u32, message: impl Into<String>) {
        self.out.skipped.push(SkipDiagnostic {
            path: self.file.path().to_path_buf(),
            line,
            message: message.into(),
        });
    }

    fn top_level(&mut self) -> Result<(), ScanError> {
        while let Some(t) = self.bump() {
            if !t.is_ident() {
                continue;
            }
            match t.text {
                "module" | "macromodule" => {
                    let m = self.module(t)?;
                    self.out.modules.push(m);
                }
                "endmodule" => return Err(self.malformed(self.line(&t), "`endmodule` without matching `module`")),
                "typedef" => self.skip_statement(&t)?,
                kw => {
                    if let Some(&(open, close)) = SKIPPED_BLOCKS.iter().find(|(o, _)| *o == kw) {
                        // `interface class` / `extern` prototypes end at `;` only
                        self.skip_block(&t, open, close)?;
                        if !QUIET_BLOCKS.contains(&open) {
                            self.skip_note(self.line(&t), format!("`{open}` block not scanned"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Skips to the matching `close` keyword, honouring nesting of `open`.
    fn skip_block(&mut self, start: &Token<'_>, open: &str, close: &str) -> Result<(), ScanError> {
        let mut depth = 1usize;
        while let Some(t) = self.bump() {
            if t.is_ident() {
                if t.text == open {
                    depth += 1;
                } else if t.text == close {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(());
                    }
                } else if t.text == "endmodule" && open != "module" {
                    return Err(self.malformed(
                        self.line(&t),
                        format!("`{open}` opened at line {} is not closed", self.line(start)),
                    ));
                }
            }
        }
        Err(self.malformed(
            self.eof_line(),
            format!("`{open}` opened at line {} is not closed", self.line(start)),
        ))
    }

    /// Skips to the `;` ending the current statement, ignoring nested
    /// parentheses, brackets and braces.
    fn skip_statement(&mut self, start: &Token<'_>) -> Result<(), ScanError> {
        let mut depth = 0i32;
        while let Some(t) = self.bump() {
            if t.kind != TokenKind::Punct {
                if t.is("endmodule") {
                    return Err(self.malformed(
                        self.line(&t),
                        format!("statement starting at line {} has no `;`", self.line(start)),
                    ));
                }
                continue;
            }
            match t.text {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => depth -= 1,
                ";" if depth <= 0 => return Ok(()),
                _ => {}
            }
        }
        Err(self.malformed(
            self.eof_line(),
            format!("statement starting at line {} has no `;`", self.line(start)),
        ))
    }

    /// Consumes a balanced group whose opening token was already consumed and
    /// returns the tokens strictly inside it.
    fn balanced(&mut self, open: &Token<'a>, close: &str) -> Result<Vec<Token<'a>>, ScanError> {
        let open_text = open.text;
        let mut depth = 1usize;
        let mut inner = Vec::new();
        while let Some(t) = self.bump() {
            if t.kind == TokenKind::Punct {
                if t.text == open_text {
                    depth += 1;
                } else if t.text == close {
                    depth -= 1;
                    if depth == 0 {
                        return Ok(inner);
                    }
                }
            }
            if t.is("endmodule") {
                break;
            }
            inner.push(t);
        }
        Err(self.malformed(self.line(open), format!("unbalanced `{open_text}`")))
    }

    fn module(&mut self, kw: Token<'a>) -> Result<ModuleDecl, ScanError> {
        let start_line = self.line(&kw);
        let name = match self.bump() {
            Some(t) if t.is_ident() => t.text.to_string(),
            _ => return Err(self.malformed(start_line, "expected module name after `module`")),
        };
        while matches!(self.peek(), Some(t) if t.is("automatic") || t.is("static")) {
            self.bump();
        }
        while let Some(t) = self.peek() {
            if !t.is("import") {
                break;
            }
            self.bump();
            self.skip_statement(&t)?;
        }
        if let Some(hash) = self.peek().filter(|t| t.is("#")) {
            self.bump();
            match self.bump() {
                Some(open) if open.is("(") => {
                    self.balanced(&open, ")")?;
                    self.skip_note(self.line(&hash), format!("parameter list of `{name}` not elaborated"));
                }
                _ => return Err(self.malformed(self.line(&hash), "expected `(` after `#`")),
            }
        }

        let mut ports = Vec::new();
        let mut style = HeaderStyle::Ansi;
        if let Some(open) = self.peek().filter(|t| t.is("(")) {
            self.bump();
            let inner = self.balanced(&open, ")")?;
            style = self.port_list(&name, &inner, &mut ports)?;
        }
        match self.bump() {
            Some(t) if t.is(";") => {}
            Some(t) => {
                return Err(self.malformed(self.line(&t), format!("expected `;` after header of module `{name}`")))
            }
            None => return Err(self.malformed(self.eof_line(), format!("module `{name}` has no `endmodule`"))),
        }

        let mut declared_late: Vec<Option<Port>> = match &style {
            HeaderStyle::NonAnsi(names) => vec![None; names.len()],
            HeaderStyle::Ansi => Vec::new(),
        };
        let mut signals: Vec<Signal> = Vec::new();
        let mut paren_depth = 0i32;
        let end_line;
        loop {
            let Some(t) = self.bump() else {
                return Err(self.malformed(
                    self.eof_line(),
                    format!("module `{name}` (line {start_line}) has no `endmodule`"),
                ));
            };
            match t.kind {
                TokenKind::Punct => {
                    match t.text {
                        "(" => paren_depth += 1,
                        ")" => paren_depth = (paren_depth - 1).max(0),
                        _ => {}
                    }
                    continue;
                }
                TokenKind::Ident => {}
                _ => continue,
            }
            match t.text {
                "endmodule" => {
                    end_line = self.line(&t);
                    if self.peek().is_some_and(|c| c.is(":")) {
                        self.bump();
                        self.bump();
                    }
                    break;
                }
                "module" | "macromodule" => {
                    return Err(self.malformed(
                        self.line(&t),
                        format!("`module` inside module `{name}` (line {start_line}); missing `endmodule`"),
                    ))
                }
                _ if paren_depth > 0 => {}
                kw if STATEMENT_SKIPS.contains(&kw) => self.skip_statement(&t)?,
                kw if direction_of(kw).is_some() => {
                    let dir = direction_of(kw).unwrap();
                    let decl = self.declaration(&t)?;
                    match &style {
                        HeaderStyle::NonAnsi(names) => {
                            for (decl_name, line, _) in decl.names {
                                match names.iter().position(|(n, _)| *n == decl_name) {
                                    Some(i) => {
                                        declared_late[i] = Some(Port {
                                            name: decl_name,
                                            direction: dir,
                                            width: decl.width.clone(),
                                            line,
                                        })
                                    }
                                    None => self.skip_note(
                                        line,
                                        format!("`{decl_name}` declared {dir} but absent from the port list"),
                                    ),
                                }
                            }
                        }
                        HeaderStyle::Ansi => {
                            self.skip_note(self.line(&t), "port declaration in body of ANSI-style module")
                        }
                    }
                }
                kw if is_type_keyword(kw) && !self.peek().is_some_and(|n| n.is("'")) => {
                    let decl = self.declaration(&t)?;
                    for (sig_name, line, array) in decl.names {
                        let is_port = ports.iter().any(|p: &Port| p.name == sig_name)
                            || matches!(&style, HeaderStyle::NonAnsi(n) if n.iter().any(|(x, _)| *x == sig_name));
                        if is_port || signals.iter().any(|s| s.name == sig_name) {
                            continue;
                        }
                        let width = if array {
                            Width::Unresolved(format!("unpacked array `{sig_name}`"))
                        } else {
                            decl.width.clone()
                        };
                        signals.push(Signal {
                            name: sig_name,
                            width,
                            declared_type: decl.declared_type,
                            line,
                        });
                    }
                }
                kw => {
                    if let Some(&(open, close)) = SKIPPED_BLOCKS.iter().find(|(o, _)| *o == kw) {
                        self.skip_block(&t, open, close)?;
                        if !QUIET_BLOCKS.contains(&open) {
                            self.skip_note(self.line(&t), format!("`{open}` block in module `{name}` not scanned"));
                        }
                    }
                }
            }
        }

        if let HeaderStyle::NonAnsi(names) = style {
            for ((port_name, line), decl) in names.into_iter().zip(declared_late) {
                match decl {
                    Some(p) => ports.push(p),
                    None => self.skip_note(
                        line,
                        format!("port `{port_name}` of `{name}` has no direction declaration"),
                    ),
                }
            }
        }

        let mut seen = HashSet::new();
        for p in &ports {
            if !seen.insert(p.name.as_str()) {
                return Err(self.malformed(p.line, format!("duplicate port `{}` in module `{name}`", p.name)));
            }
        }
        for p in &ports {
            if let Width::Unresolved(text) = &p.width {
                self.skip_note(
                    p.line,
                    format!("width of port `{}` is not a literal range ({text})", p.name),
                );
            }
        }

        Ok(ModuleDecl {
            name,
            ports,
            signals,
            path: self.file.path().to_path_buf(),
            lines: (start_line, end_line),
        })
    }

    fn port_list(
        &mut self,
        module: &str,
        inner: &[Token<'a>],
        ports: &mut Vec<Port>,
    ) -> Result<HeaderStyle, ScanError> {
        let items = split_top_level(inner, ",");
        if items.iter().all(|i| i.is_empty()) {
            return Ok(HeaderStyle::Ansi);
        }
        let first = &items[0];
        if first.len() == 1 && first[0].is_ident() && direction_of(first[0].text).is_none() {
            let mut names = Vec::new();
            for item in &items {
                match item.as_slice() {
                    [t] if t.is_ident() => names.push((t.text.to_string(), self.line(t))),
                    [t, ..] => self.skip_note(
                        self.line(t),
                        format!("port expression in header of `{module}` not supported"),
                    ),
                    [] => {}
                }
            }
            self.skip_note(
                self.line(&first[0]),
                format!("non-ANSI port list in `{module}`; directions taken from body"),
            );
            return Ok(HeaderStyle::NonAnsi(names));
        }

        let mut prev: Option<(Direction, Width)> = None;
        for item in items {
            let Some(head) = item.first().copied() else { continue };
            let line = self.line(&head);
            let mut toks: &[Token<'a>] = &item;
            if let Some(eq) = position_top_level(toks, "=") {
                toks = &toks[..eq];
            }
            let mut dir = None;
            if let Some(d) = toks.first().and_then(|t| direction_of(t.text)) {
                dir = Some(d);
                toks = &toks[1..];
            } else if toks.first().is_some_and(|t| t.is("ref")) {
                self.skip_note(line, "`ref` port not supported");
                continue;
            }
            let mut array = false;
            while toks.last().is_some_and(|t| t.is("]")) {
                match matching_open(toks, toks.len() - 1) {
                    Some(open) => {
                        toks = &toks[..open];
                        array = true;
                    }
                    None => break,
                }
            }
            let Some((name_tok, type_toks)) = toks.split_last() else {
                self.skip_note(line, format!("unrecognised port in `{module}`"));
                continue;
            };
            if !name_tok.is_ident() {
                self.skip_note(line, format!("unrecognised port in `{module}`"));
                continue;
            }
            if type_toks.iter().any(|t| t.is(".")) {
                self.skip_note(line, format!("interface port `{}` not scanned", name_tok.text));
                prev = None;
                continue;
            }
            let (direction, width) = match (dir, type_toks.is_empty(), &prev) {
                (None, true, Some((d, w))) => (*d, w.clone()),
                (None, _, None) => {
                    self.skip_note(line, format!("port `{}` has no direction", name_tok.text));
                    continue;
                }
                (d, _, _) => {
                    let d = d.or(prev.as_ref().map(|p| p.0)).unwrap();
                    let (_, w) = self.data_type(type_toks);
                    (d, w)
                }
            };
            prev = Some((direction, width.clone()));
            let width = if array {
                Width::Unresolved(format!("unpacked array port `{}`", name_tok.text))
            } else {
                width
            };
            ports.push(Port {
                name: name_tok.text.to_string(),
                direction,
                width,
                line: self.line(name_tok),
            });
        }
        Ok(HeaderStyle::Ansi)
    }

    /// Parses `<type> name [dims] [= expr], ...;` after its first keyword.
    fn declaration(&mut self, first: &Token<'a>) -> Result<Declaration, ScanError> {
        let mut type_toks = vec![*first];
        if direction_of(first.text).is_some() {
            type_toks.clear();
        }
        loop {
            match self.peek() {
                Some(t) if t.is_ident() && is_type_keyword(t.text) => {
                    type_toks.push(t);
                    self.bump();
                }
                Some(t) if t.is("[") => {
                    self.bump();
                    let inner = self.balanced(&t, "]")?;
                    type_toks.push(t);
                    type_toks.extend(inner);
                    type_toks.push(Token {
                        kind: TokenKind::Punct,
                        text: "]",
                        offset: t.offset,
                    });
                }
                _ => break,
            }
        }
        let (declared_type, width) = self.data_type(&type_toks);

        let mut rest = Vec::new();
        let mut depth = 0i32;
        loop {
            let Some(t) = self.bump() else {
                return Err(self.malformed(self.line(first), "declaration has no `;`"));
            };
            if t.is("endmodule") {
                return Err(self.malformed(self.line(first), "declaration has no `;`"));
            }
            if t.kind == TokenKind::Punct {
                match t.text {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" | "}" => depth -= 1,
                    ";" if depth <= 0 => break,
                    _ => {}
                }
            }
            rest.push(t);
        }
        let mut names = Vec::new();
        for item in split_top_level(&rest, ",") {
            let Some(name) = item.first().filter(|t| t.is_ident()) else {
                continue;
            };
            let array = item.get(1).is_some_and(|t| t.is("["));
            names.push((name.text.to_string(), self.line(name), array));
        }
        Ok(Declaration {
            declared_type,
            width,
            names,
        })
    }

    /// Resolves keyword/dimension tokens of a data type to a width.
    fn data_type(&self, toks: &[Token<'_>]) -> (DeclaredType, Width) {
        let mut declared = None;
        let mut atom = None;
        let mut user_type = None;
        let mut dims: Vec<&[Token<'_>]> = Vec::new();
        let mut i = 0;
        while i < toks.len() {
            let t = &toks[i];
            if t.is("[") {
                let close = matching_close(toks, i).unwrap_or(toks.len() - 1);
                dims.push(&toks[i + 1..close]);
                i = close + 1;
                continue;
            }
            match t.text {
                "wire" => declared = declared.or(Some(DeclaredType::Wire)),
                "reg" => declared = declared.or(Some(DeclaredType::Reg)),
                "logic" => declared = declared.or(Some(DeclaredType::Logic)),
                "signed" | "unsigned" => {}
                txt if NET_TYPES.contains(&txt) || txt == "bit" => declared = declared.or(Some(DeclaredType::Other)),
                txt => {
                    if let Some((_, w)) = ATOM_TYPES.iter().find(|(k, _)| *k == txt) {
                        atom = Some(*w);
                        declared = declared.or(Some(DeclaredType::Other));
                    } else if t.is_ident() {
                        user_type = Some(txt.to_string());
                        declared = Some(DeclaredType::Other);
                    }
                }
            }
            i += 1;
        }
        let declared = declared.unwrap_or(DeclaredType::Wire);
        if let Some(ty) = user_type {
            return (declared, Width::Unresolved(format!("user type `{ty}`")));
        }
        let width = match (atom, dims.as_slice()) {
            (Some(w), []) => Width::Fixed(w),
            (None, []) => Width::Scalar,
            (None, [inner]) => self.range(inner),
            _ => Width::Unresolved(format!(
                "[{}]",
                dims.iter().map(|d| self.text_of(d)).collect::<Vec<_>>().join("][")
            )),
        };
        (declared, width)
    }

    fn range(&self, inner: &[Token<'_>]) -> Width {
        if let [msb, colon, lsb] = inner {
            if colon.is(":") {
                if let (Some(m), Some(l)) = (literal_int(msb), literal_int(lsb)) {
                    if m >= l {
                        return Width::Range(PackedRange { msb: m, lsb: l });
                    }
                    return Width::Unresolved(format!("ascending range [{m}:{l}]"));
                }
            }
        }
        Width::Unresolved(format!("[{}]", self.text_of(inner)))
    }

    fn text_of(&self, toks: &[Token<'_>]) -> String {
        match (toks.first(), toks.last()) {
            (Some(a), Some(b)) => self.file.content()[a.offset..b.offset + b.text.len()].to_string(),
            _ => String::new(),
        }
    }
}

struct Declaration {
    declared_type: DeclaredType,
    width: Width,
    /// (name, line, has unpacked dimension)
    names: Vec<(String, u32, bool)>,
}

fn literal_int(t: &Token<'_>) -> Option<u32> {
    if t.kind != TokenKind::Number || !t.text.bytes().all(|b| b.is_ascii_digit() || b == b'_') {
        return None;
    }
    t.text.replace('_', "").parse().ok()
}

fn split_top_level<'a>(toks: &[Token<'a>], sep: &str) -> Vec<Vec<Token<'a>>> {
    let mut out = vec![Vec::new()];
    let mut depth = 0i32;
    for t in toks {
        if t.kind == TokenKind::Punct {
            match t.text {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => depth -= 1,
                s if s == sep && depth == 0 => {
                    out.push(Vec::new());
                    continue;
                }
                _ => {}
            }
        }
        out.last_mut().unwrap().push(*t);
    }
    out
}

fn position_top_level(toks: &[Token<'_>], needle: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, t) in toks.iter().enumerate() {
        if t.kind == TokenKind::Punct {
            match t.text {
                "(" | "[" | "{" => depth += 1,
                ")" | "]" | "}" => depth -= 1,
                s if s == needle && depth == 0 => return Some(i),
                _ => {}
            }
        }
    }
    None
}

fn matching_close(toks: &[Token<'_>], open: usize) -> Option<usize> {
    let mut depth = 0i32;
    for (i, t) in toks.iter().enumerate().skip(open) {
        if t.is("[") {
            depth += 1;
        } else if t.is("]") {
            depth -= 1;
            if depth == 0 {
                return Some(i);
            }
        }
    }
    None
}

fn matching_open(toks: &[Token<'_>], close: usize) -> Option<usize> {
    let mut depth = 0i32;
    for i in (0..=close).rev() {
        if toks[i].is("]") {
            depth += 1;
        } else if toks[i].is("[") {
            depth -= 1;
            if depth == 0 {
                return Some(i);
            }
        }
    }
    None
}
