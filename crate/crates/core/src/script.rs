// SPDX-License-Identifier: Apache-2.0

//! Test scripts: command lines paired with their expected response.
//!
//! File format:
//!
//! ```text
//! # read the ID register
//! > R 0x70000000
//! < 0x1234abcd
//! ```

use std::fmt::Write as _;

use crate::uart_host::{parse_command, Command};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub command: Command,
    pub expected: String,
    pub comment: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TestScript {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("script line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

impl TestScript {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, command: Command, expected: impl Into<String>, comment: impl Into<String>) {
        self.steps.push(Step {
            command,
            expected: expected.into(),
            comment: comment.into(),
        });
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Command lines as they go over the wire.
    pub fn command_lines(&self) -> Vec<String> {
        self.steps.iter().map(|s| s.command.to_string()).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.steps {
            for line in s.comment.lines() {
                let _ = writeln!(out, "# {line}");
            }
            let _ = writeln!(out, "> {}", s.command);
            let _ = writeln!(out, "< {}", s.expected);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, ScriptError> {
        let mut script = TestScript::new();
        let mut comment: Vec<&str> = Vec::new();
        let mut pending: Option<(usize, Command)> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| ScriptError { line, message };
            let trimmed = raw.trim_end_matches('\r');
            if trimmed.trim().is_empty() {
                continue;
            }
            if let Some(c) = trimmed.strip_prefix('#') {
                comment.push(c.strip_prefix(' ').unwrap_or(c));
            } else if let Some(cmd) = trimmed.strip_prefix('>') {
                if let Some((l, _)) = pending {
                    return Err(err(format!("command on line {l} has no expected response")));
                }
                let cmd = match parse_command(cmd) {
                    Ok(Some(c)) => c,
                    Ok(None) => return Err(err("empty command".into())),
                    Err(e) => return Err(err(e.to_string())),
                };
                pending = Some((line, cmd));
            } else if let Some(exp) = trimmed.strip_prefix('<') {
                let Some((_, command)) = pending.take() else {
                    return Err(err("expected response without a command".into()));
                };
                script.push(command, exp.trim(), comment.join("\n"));
                comment.clear();
            } else {
                return Err(err(format!("unrecognised line `{trimmed}`")));
            }
        }
        if let Some((l, _)) = pending {
            return Err(ScriptError {
                line: l,
                message: "command has no expected response".into(),
            });
        }
        Ok(script)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut s = TestScript::new();
        s.push(Command::Read(0x7000_0000), "0x1234abcd", "ID register");
        s.push(Command::Write(0x7000_0004, 0xf), "OK", "");
        s.push(Command::Read(0x1), "ERR MISALIGNED", "two\nlines");
        let text = s.to_text();
        assert!(text.starts_with("# ID register\n> R 0x70000000\n< 0x1234abcd\n> W 0x70000004 0x0000000f\n< OK\n"));
        assert_eq!(TestScript::parse(&text).unwrap(), s);
    }

    #[test]
    fn hand_written() {
        let s = TestScript::parse("\n#c\r\n> r 70000000\r\n<   0x00000001  \n").unwrap();
        assert_eq!(s.steps[0].command, Command::Read(0x7000_0000));
        assert_eq!(s.steps[0].expected, "0x00000001");
        assert_eq!(s.steps[0].comment, "c");
    }

    #[test]
    fn errors() {
        assert_eq!(TestScript::parse("> R 0\n> R 4\n< OK").unwrap_err().line, 2);
        assert_eq!(TestScript::parse("< OK").unwrap_err().line, 1);
        assert_eq!(TestScript::parse("> R zz\n< OK").unwrap_err().line, 1);
        assert_eq!(TestScript::parse("> R 0").unwrap_err().line, 1);
        assert_eq!(TestScript::parse("R 0").unwrap_err().line, 1);
    }
}
