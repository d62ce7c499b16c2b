// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use crate::busmodel::{BusErrorKind, SocModel};

/// One line of the host protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Read(u32),
    Write(u32, u32),
    Help,
    Quit,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Read(a) => write!(f, "R 0x{a:08x}"),
            Command::Write(a, d) => write!(f, "W 0x{a:08x} 0x{d:08x}"),
            Command::Help => f.write_str("?"),
            Command::Quit => f.write_str("Q"),
        }
    }
}

/// Rejected command line; carries the offending token.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{token}`")]
pub struct ParseError {
    pub token: String,
}

fn bad(token: &str) -> ParseError {
    ParseError { token: token.into() }
}

pub const HELP_TEXT: &str = "R <addr> | W <addr> <data> | ? | Q  (hex, 0x optional)";

/// Parses `R <addr>`, `W <addr> <data>`, `?` or `Q`.
///
/// Verbs are case-insensitive; numbers are hex with or without `0x`.
/// Returns `Ok(None)` for a blank line.
pub fn parse_command(line: &str) -> Result<Option<Command>, ParseError> {
    let mut tokens = line.split([' ', '\t', '\r', '\n']).filter(|t| !t.is_empty());
    let Some(verb) = tokens.next() else {
        return Ok(None);
    };
    let mut operand = || -> Result<u32, ParseError> {
        let tok = tokens.next().ok_or_else(|| bad(verb))?;
        parse_hex_word(tok).ok_or_else(|| bad(tok))
    };
    let cmd = match verb {
        "R" | "r" => Command::Read(operand()?),
        "W" | "w" => {
            let addr = operand()?;
            Command::Write(addr, operand()?)
        }
        "?" => Command::Help,
        "Q" | "q" => Command::Quit,
        other => return Err(bad(other)),
    };
    match tokens.next() {
        Some(extra) => Err(bad(extra)),
        None => Ok(Some(cmd)),
    }
}

fn parse_hex_word(tok: &str) -> Option<u32> {
    let digits = tok.strip_prefix("0x").or_else(|| tok.strip_prefix("0X")).unwrap_or(tok);
    if digits.is_empty() || digits.len() > 8 || !digits.bytes().all(|b| b.is_ascii_hexdigit()) {
        return None;
    }
    u32::from_str_radix(digits, 16).ok()
}

pub fn format_read(value: u32) -> String {
    format!("0x{value:08x}")
}

pub const RESPONSE_OK: &str = "OK";

pub fn format_bus_error(kind: BusErrorKind) -> String {
    let tag = match kind {
        BusErrorKind::Unmapped => "UNMAPPED",
        BusErrorKind::Misaligned => "MISALIGNED",
        BusErrorKind::UninitializedRead => "XREAD",
    };
    format!("ERR {tag}")
}

pub fn format_parse_error(err: &ParseError) -> String {
    format!("ERR PARSE {}", err.token)
}

/// Runs one command against the model and returns its single response line.
pub fn execute(soc: &mut SocModel, cmd: Command) -> String {
    match cmd {
        Command::Read(addr) => match soc.bus_read(addr) {
            Ok(v) => format_read(v),
            Err(e) => format_bus_error(e.kind),
        },
        Command::Write(addr, data) => match soc.bus_write(addr, data) {
            Ok(()) => RESPONSE_OK.to_string(),
            Err(e) => format_bus_error(e.kind),
        },
        Command::Help => HELP_TEXT.to_string(),
        Command::Quit => RESPONSE_OK.to_string(),
    }
}

/// Parses and executes one raw line. `None` for blank lines, which get no
/// response.
pub fn respond(soc: &mut SocModel, line: &str) -> Option<(Option<Command>, String)> {
    match parse_command(line) {
        Ok(None) => None,
        Ok(Some(cmd)) => Some((Some(cmd), execute(soc, cmd))),
        Err(e) => Some((None, format_parse_error(&e))),
    }
}
