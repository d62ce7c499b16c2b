// SPDX-License-Identifier: Apache-2.0

use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Input,
    Output,
    Inout,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Input => "input",
            Direction::Output => "output",
            Direction::Inout => "inout",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DeclaredType {
    Logic,
    Wire,
    Reg,
    Other,
}

/// Packed `[msb:lsb]` range with literal bounds, `msb >= lsb`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PackedRange {
    pub msb: u32,
    pub lsb: u32,
}

impl PackedRange {
    pub fn width(&self) -> u32 {
        self.msb - self.lsb + 1
    }
}

/// Bit width of a declaration as far as the scanner could resolve it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Width {
    /// No packed dimension: one bit.
    Scalar,
    Range(PackedRange),
    /// Integer atom types (`int`, `byte`, ...) with their implicit width.
    Fixed(u32),
    /// Parameterized, multi-dimensional or user-typed; the raw text is kept
    /// for diagnostics.
    Unresolved(String),
}

impl Width {
    pub fn bits(&self) -> Option<u32> {
        match self {
            Width::Scalar => Some(1),
            Width::Range(r) => Some(r.width()),
            Width::Fixed(n) => Some(*n),
            Width::Unresolved(_) => None,
        }
    }

    pub fn packed_range(&self) -> Option<PackedRange> {
        match self {
            Width::Range(r) => Some(*r),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Port {
    pub name: String,
    pub direction: Direction,
    pub width: Width,
    pub line: u32,
}

impl Port {
    pub fn width_bits(&self) -> Option<u32> {
        self.width.bits()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signal {
    pub name: String,
    pub width: Width,
    pub declared_type: DeclaredType,
    pub line: u32,
}

impl Signal {
    pub fn width_bits(&self) -> Option<u32> {
        self.width.bits()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModuleDecl {
    pub name: String,
    pub ports: Vec<Port>,
    pub signals: Vec<Signal>,
    pub path: PathBuf,
    /// First and last line of the `module ... endmodule` block.
    pub lines: (u32, u32),
}

impl ModuleDecl {
    pub fn port(&self, name: &str) -> Option<&Port> {
        self.ports.iter().find(|p| p.name == name)
    }
}

/// A construct the scanner stepped over without failing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkipDiagnostic {
    pub path: PathBuf,
    pub line: u32,
    pub message: String,
}

impl fmt::Display for SkipDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: skipped: {}", self.path.display(), self.line, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParsedFile {
    pub modules: Vec<ModuleDecl>,
    pub skipped: Vec<SkipDiagnostic>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScanError {
    #[error("{}:{line}: malformed source: {message}", path.display())]
    MalformedSource { path: PathBuf, line: u32, message: String },
    #[error("module `{name}` declared twice ({} and {})", first.display(), second.display())]
    DuplicateModule {
        name: String,
        first: PathBuf,
        second: PathBuf,
    },
}
