// SPDX-License-Identifier: Apache-2.0

//! Tokenizer for the synthesizable SystemVerilog subset.
//!
//! Comments and string literals never produce identifier tokens, so nothing
//! downstream can match keywords inside them. Compiler directives that only
//! affect the preprocessor (`include`, `define`, conditional compilation) are
//! consumed here; any other back-ticked name is a macro invocation and is
//! kept as a [`TokenKind::Macro`] token.

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Number,
    Str,
    /// Back-ticked macro use such as `` `FF ``; text excludes the back-tick.
    Macro,
    /// `$name` system task or function.
    System,
    Punct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Token<'a> {
    pub kind: TokenKind,
    pub text: &'a str,
    pub offset: usize,
}

impl Token<'_> {
    pub fn is(&self, text: &str) -> bool {
        self.text == text && self.kind != TokenKind::Str
    }

    pub fn is_ident(&self) -> bool {
        self.kind == TokenKind::Ident
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexError {
    pub offset: usize,
    pub message: String,
}

/// Tokens up to the first lexical error, plus that error if any.
#[derive(Debug, Clone)]
pub struct Lexed<'a> {
    pub tokens: Vec<Token<'a>>,
    pub error: Option<LexError>,
}

const LINE_DIRECTIVES: &[&str] = &[
    "include",
    "timescale",
    "default_nettype",
    "resetall",
    "undef",
    "undefineall",
    "pragma",
    "line",
    "celldefine",
    "endcelldefine",
    "unconnected_drive",
    "nounconnected_drive",
];

const CONDITIONAL_WITH_NAME: &[&str] = &["ifdef", "ifndef", "elsif"];
const CONDITIONAL_BARE: &[&str] = &["else", "endif"];

pub fn lex(src: &str) -> Lexed<'_> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;

    macro_rules! fail {
        ($off:expr, $msg:expr) => {
            return Lexed {
                tokens,
                error: Some(LexError {
                    offset: $off,
                    message: $msg.into(),
                }),
            }
        };
    }

    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'/' && bytes.get(i + 1) == Some(&b'/') {
            i = skip_to_eol(bytes, i);
            continue;
        }
        if c == b'/' && bytes.get(i + 1) == Some(&b'*') {
            match src[i + 2..].find("*/") {
                Some(end) => i = i + 2 + end + 2,
                None => fail!(i, "unterminated block comment"),
            }
            continue;
        }
        if c == b'"' {
            let start = i;
            i += 1;
            loop {
                match bytes.get(i) {
                    None | Some(b'\n') => fail!(start, "unterminated string literal"),
                    Some(b'\\') => i += 1 + src[i + 1..].chars().next().map_or(0, char::len_utf8),
                    Some(b'"') => {
                        i += 1;
                        break;
                    }
                    Some(_) => i += 1,
                }
            }
            tokens.push(Token {
                kind: TokenKind::Str,
                text: &src[start..i.min(src.len())],
                offset: start,
            });
            continue;
        }
        if c == b'`' {
            let start = i;
            let name_end = scan_word(bytes, i + 1);
            let name = &src[i + 1..name_end];
            if name.is_empty() {
                // `` `` `` token pasting or a stray back-tick
                tokens.push(punct(src, i));
                i += 1;
                continue;
            }
            if name == "define" {
                i = skip_define(bytes, name_end);
            } else if LINE_DIRECTIVES.contains(&name) {
                i = skip_to_eol(bytes, name_end);
            } else if CONDITIONAL_WITH_NAME.contains(&name) {
                let mut j = name_end;
                while j < bytes.len() && (bytes[j] == b' ' || bytes[j] == b'\t') {
                    j += 1;
                }
                i = scan_word(bytes, j);
            } else if CONDITIONAL_BARE.contains(&name) {
                i = name_end;
            } else {
                tokens.push(Token {
                    kind: TokenKind::Macro,
                    text: name,
                    offset: start,
                });
                i = name_end;
            }
            continue;
        }
        if c == b'$' && bytes.get(i + 1).is_some_and(|b| is_word_start(*b)) {
            let end = scan_word(bytes, i + 1);
            tokens.push(Token {
                kind: TokenKind::System,
                text: &src[i..end],
                offset: i,
            });
            i = end;
            continue;
        }
        if c == b'\\' {
            // escaped identifier runs to the next whitespace
            let start = i;
            i += 1;
            while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
                i += 1;
            }
            tokens.push(Token {
                kind: TokenKind::Ident,
                text: &src[start..i],
                offset: start,
            });
            continue;
        }
        if is_word_start(c) {
            let end = scan_word(bytes, i);
            tokens.push(Token {
                kind: TokenKind::Ident,
                text: &src[i..end],
                offset: i,
            });
            i = end;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            i = scan_digits(bytes, i);
            if bytes.get(i) == Some(&b'.') && bytes.get(i + 1).is_some_and(u8::is_ascii_digit) {
                i = scan_digits(bytes, i + 1);
            }
            let mut j = i;
            while j < bytes.len() && (bytes[j] == b' ' || bytes[j] == b'\t') {
                j += 1;
            }
            if bytes.get(j) == Some(&b'\'') {
                if let Some(end) = scan_based_literal(bytes, j) {
                    i = end;
                }
            }
            tokens.push(Token {
                kind: TokenKind::Number,
                text: &src[start..i],
                offset: start,
            });
            continue;
        }
        if c == b'\'' {
            if let Some(end) = scan_based_literal(bytes, i) {
                tokens.push(Token {
                    kind: TokenKind::Number,
                    text: &src[i..end],
                    offset: i,
                });
                i = end;
                continue;
            }
            if let Some(&d) = bytes.get(i + 1) {
                if matches!(d, b'0' | b'1' | b'x' | b'X' | b'z' | b'Z')
                    && !bytes.get(i + 2).is_some_and(|b| is_word_char(*b))
                {
                    tokens.push(Token {
                        kind: TokenKind::Number,
                        text: &src[i..i + 2],
                        offset: i,
                    });
                    i += 2;
                    continue;
                }
            }
        }
        if !c.is_ascii() {
            // Non-ASCII outside comments/strings: step over the whole char.
            let ch_len = src[i..].chars().next().map_or(1, char::len_utf8);
            tokens.push(Token {
                kind: TokenKind::Punct,
                text: &src[i..i + ch_len],
                offset: i,
            });
            i += ch_len;
            continue;
        }
        tokens.push(punct(src, i));
        i += 1;
    }
    Lexed { tokens, error: None }
}

fn punct(src: &str, i: usize) -> Token<'_> {
    Token {
        kind: TokenKind::Punct,
        text: &src[i..i + 1],
        offset: i,
    }
}

fn is_word_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

fn is_word_char(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'$'
}

fn scan_word(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && is_word_char(bytes[i]) {
        i += 1;
    }
    i
}

fn scan_digits(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'_') {
        i += 1;
    }
    i
}

fn skip_to_eol(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && bytes[i] != b'\n' {
        i += 1;
    }
    i
}

fn skip_define(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() {
        if bytes[i] == b'\\' && bytes.get(i + 1) == Some(&b'\n') {
            i += 2;
            continue;
        }
        if bytes[i] == b'\\' && bytes.get(i + 1) == Some(&b'\r') && bytes.get(i + 2) == Some(&b'\n') {
            i += 3;
            continue;
        }
        if bytes[i] == b'\n' {
            break;
        }
        i += 1;
    }
    i
}

/// `'[s]<base><digits>` starting at the apostrophe; returns the end offset.
fn scan_based_literal(bytes: &[u8], apos: usize) -> Option<usize> {
    let mut i = apos + 1;
    if matches!(bytes.get(i), Some(b's' | b'S')) {
        i += 1;
    }
    if !matches!(
        bytes.get(i),
        Some(b'b' | b'B' | b'o' | b'O' | b'd' | b'D' | b'h' | b'H')
    ) {
        return None;
    }
    i += 1;
    while i < bytes.len() && (bytes[i] == b' ' || bytes[i] == b'\t') {
        i += 1;
    }
    let digits_start = i;
    while i < bytes.len()
        && (bytes[i].is_ascii_hexdigit() || matches!(bytes[i], b'_' | b'x' | b'X' | b'z' | b'Z' | b'?'))
    {
        i += 1;
    }
    (i > digits_start).then_some(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(src: &str) -> Vec<&str> {
        lex(src).tokens.iter().map(|t| t.text).collect()
    }

    #[test]
    fn comments_and_strings_hide_keywords() {
        let src = "// module a (\n/* wire x; */ logic \"reg y\" z;";
        let l = lex(src);
        assert!(l.error.is_none());
        let kinds: Vec<_> = l.tokens.iter().map(|t| (t.kind, t.text)).collect();
        assert_eq!(
            kinds,
            vec![
                (TokenKind::Ident, "logic"),
                (TokenKind::Str, "\"reg y\""),
                (TokenKind::Ident, "z"),
                (TokenKind::Punct, ";"),
            ]
        );
    }

    #[test]
    fn numbers() {
        assert_eq!(
            texts("32'd1 '0 8'hFF 4, 'b101 12'h004 4 'd3"),
            vec!["32'd1", "'0", "8'hFF", "4", ",", "'b101", "12'h004", "4 'd3"]
        );
    }

    #[test]
    fn cast_apostrophe_is_punct() {
        assert_eq!(texts("logic'(x)"), vec!["logic", "'", "(", "x", ")"]);
    }

    #[test]
    fn directives() {
        let src = "`include RTL.svh\n`define FOO(a) \\\n  a+1\n`ifdef BAR\n`FF(a, b, c, d, e, '0);\n`endif\n";
        let l = lex(src);
        let got: Vec<_> = l.tokens.iter().map(|t| t.text).collect();
        assert_eq!(got[0], "FF");
        assert_eq!(l.tokens[0].kind, TokenKind::Macro);
        assert_eq!(got.last(), Some(&";"));
    }

    #[test]
    fn unterminated_comment_is_error() {
        let l = lex("module a; /* oops\n");
        assert_eq!(l.tokens.len(), 3);
        assert_eq!(l.error.unwrap().offset, 10);
    }

    #[test]
    fn unterminated_string_is_error() {
        assert!(lex("x = \"abc\n").error.is_some());
    }
}
