// SPDX-License-Identifier: Apache-2.0

//! Keyword-level checks for the RTL coding guidelines.
//!
//! Rules operate on the token stream, so text inside comments and string
//! literals can never trigger them.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;

use super::lexer::{lex, Token, TokenKind};
use super::source::SourceFile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleId {
    /// `wire` declaration.
    W001,
    /// `reg` declaration.
    W002,
    /// `always` instead of `always_comb` / `always_ff`.
    W003,
    /// Raw `always_ff` where the `FF` register macro is required.
    W004,
    /// Instance that spells out every connection where `.*` would do.
    W005,
}

impl RuleId {
    pub const ALL: [RuleId; 5] = [RuleId::W001, RuleId::W002, RuleId::W003, RuleId::W004, RuleId::W005];

    fn message(self) -> &'static str {
        match self {
            RuleId::W001 => "`wire` declaration; use `logic`",
            RuleId::W002 => "`reg` declaration; use `logic`",
            RuleId::W003 => "bare `always` block; use `always_comb` or `always_ff`",
            RuleId::W004 => "`always_ff` block; infer registers with the `FF` macro",
            RuleId::W005 => "every port connected by name; use `.*`",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl std::str::FromStr for RuleId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleId::ALL
            .into_iter()
            .find(|r| r.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown lint rule `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    pub enabled: BTreeSet<RuleId>,
    /// W004 only fires when set.
    pub enforce_ff_macro: bool,
}

impl Default for RuleSet {
    fn default() -> Self {
        Self {
            enabled: RuleId::ALL.into_iter().collect(),
            enforce_ff_macro: true,
        }
    }
}

impl RuleSet {
    fn on(&self, rule: RuleId) -> bool {
        self.enabled.contains(&rule) && (rule != RuleId::W004 || self.enforce_ff_macro)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LintViolation {
    pub rule_id: RuleId,
    pub file: PathBuf,
    pub line: u32,
    pub excerpt: String,
    pub message: String,
}

impl fmt::Display for LintViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {} {}",
            self.file.display(),
            self.line,
            self.rule_id,
            self.message
        )
    }
}

pub fn lint(file: &SourceFile, rules: &RuleSet) -> Vec<LintViolation> {
    // An unterminated comment or string hides the rest of the file; the
    // parser reports that, lint just checks what it could read.
    let toks = lex(file.content()).tokens;
    let mut out = Vec::new();
    let mut push = |rule: RuleId, tok: &Token<'_>| {
        let line = file.line_of(tok.offset);
        out.push(LintViolation {
            rule_id: rule,
            file: file.path().to_path_buf(),
            line,
            excerpt: file.line_text(line).trim().to_string(),
            message: rule.message().to_string(),
        });
    };

    for (i, t) in toks.iter().enumerate() {
        if t.kind != TokenKind::Ident {
            continue;
        }
        let rule = match t.text {
            "wire" => RuleId::W001,
            "reg" => RuleId::W002,
            "always" => RuleId::W003,
            "always_ff" => RuleId::W004,
            _ => {
                if rules.on(RuleId::W005) && explicit_instance(&toks, i) {
                    push(RuleId::W005, t);
                }
                continue;
            }
        };
        if rules.on(rule) {
            push(rule, t);
        }
    }
    out.sort_by(|a, b| (&a.file, a.line, a.rule_id).cmp(&(&b.file, b.line, b.rule_id)));
    out
}

/// Lints several files; the result is ordered by (file, line).
pub fn lint_all<'a>(files: impl IntoIterator<Item = &'a SourceFile>, rules: &RuleSet) -> Vec<LintViolation> {
    let mut out: Vec<_> = files.into_iter().flat_map(|f| lint(f, rules)).collect();
    out.sort_by(|a, b| (&a.file, a.line, a.rule_id).cmp(&(&b.file, b.line, b.rule_id)));
    out
}

const NOT_A_MODULE_TYPE: &[&str] = &["module", "macromodule", "interface", "program", "function", "task"];

/// `type [#(...)] name ( .a(a), .b(b) );` where every connection repeats the
/// port name, so `.*` would connect the same signals.
fn explicit_instance(toks: &[Token<'_>], i: usize) -> bool {
    if NOT_A_MODULE_TYPE.contains(&toks[i].text) {
        return false;
    }
    let prev_ok = i == 0
        || matches!(toks[i - 1].text, ";" | "end" | "begin" | ")" | "endgenerate" | "else")
        || toks[i - 1].kind == TokenKind::Macro;
    if !prev_ok {
        return false;
    }
    let mut j = i + 1;
    if toks.get(j).is_some_and(|t| t.is("#")) {
        j += 1;
        match skip_group(toks, j, "(", ")") {
            Some(end) => j = end,
            None => return false,
        }
    }
    if !toks.get(j).is_some_and(|t| t.is_ident()) {
        return false;
    }
    j += 1;
    while toks.get(j).is_some_and(|t| t.is("[")) {
        match skip_group(toks, j, "[", "]") {
            Some(end) => j = end,
            None => return false,
        }
    }
    if !toks.get(j).is_some_and(|t| t.is("(")) {
        return false;
    }
    let Some(end) = skip_group(toks, j, "(", ")") else {
        return false;
    };
    if !toks.get(end).is_some_and(|t| t.is(";")) {
        return false;
    }
    let inner = &toks[j + 1..end - 1];
    if inner.is_empty() {
        return false;
    }
    // Exactly repeated `. port ( port )` separated by commas.
    let mut k = 0;
    loop {
        match inner.get(k..k + 5) {
            Some([dot, port, open, sig, close])
                if dot.is(".")
                    && port.is_ident()
                    && open.is("(")
                    && sig.is_ident()
                    && close.is(")")
                    && port.text == sig.text => {}
            _ => return false,
        }
        k += 5;
        match inner.get(k) {
            None => return true,
            Some(t) if t.is(",") => k += 1,
            Some(_) => return false,
        }
    }
}

/// Index just past the group opened at `start`.
fn skip_group(toks: &[Token<'_>], start: usize, open: &str, close: &str) -> Option<usize> {
    if !toks.get(start)?.is(open) {
        return None;
    }
    let mut depth = 0;
    for (k, t) in toks.iter().enumerate().skip(start) {
        if t.is(open) {
            depth += 1;
        } else if t.is(close) {
            depth -= 1;
            if depth == 0 {
                return Some(k + 1);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(src: &str) -> Vec<(RuleId, u32)> {
        lint(&SourceFile::new("x.sv", src), &RuleSet::default())
            .into_iter()
            .map(|v| (v.rule_id, v.line))
            .collect()
    }

    #[test]
    fn reg_declaration() {
        let v = lint(
            &SourceFile::new("x.sv", "module a;\nreg [3:0] state;\nendmodule\n"),
            &RuleSet::default(),
        );
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule_id, RuleId::W002);
        assert_eq!(v[0].line, 2);
        assert_eq!(v[0].excerpt, "reg [3:0] state;");
        assert_eq!(v[0].to_string(), "x.sv:2: W002 `reg` declaration; use `logic`");
    }

    #[test]
    fn comments_and_strings_are_ignored() {
        assert!(run("// wire reg always always_ff\n/* reg */ initial $display(\"wire\");").is_empty());
    }

    #[test]
    fn always_variants() {
        let src = "always_comb a = b;\nalways @(posedge clk) q <= d;\nalways_ff @(posedge clk) q <= d;\nalways_latch x = y;\n";
        assert_eq!(run(src), vec![(RuleId::W003, 2), (RuleId::W004, 3)]);
        let relaxed = RuleSet {
            enforce_ff_macro: false,
            ..RuleSet::default()
        };
        assert_eq!(lint(&SourceFile::new("x.sv", src), &relaxed).len(), 1);
    }

    #[test]
    fn explicit_instances() {
        let src = "module top;\n  sub u0 (.a(a), .b(b));\n  sub u1 (.a(a), .b(x));\n  sub #(.W(4)) u2 (.a(a));\n  sub u3 (.*);\nendmodule\n";
        assert_eq!(run(src), vec![(RuleId::W005, 2), (RuleId::W005, 4)]);
    }

    #[test]
    fn disabled_rules() {
        let rules = RuleSet {
            enabled: [RuleId::W001].into_iter().collect(),
            enforce_ff_macro: true,
        };
        let v = lint(&SourceFile::new("x.sv", "wire a; reg b;"), &rules);
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn sorted_by_line() {
        let src = "reg a;\nwire b; reg c;\nalways @* d = e;\n";
        assert_eq!(
            run(src),
            vec![
                (RuleId::W002, 1),
                (RuleId::W001, 2),
                (RuleId::W002, 2),
                (RuleId::W003, 3)
            ]
        );
    }
}
