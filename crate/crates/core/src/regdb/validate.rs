// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;

use super::{RegDb, REQUIRED_COLUMNS, STATE_COLUMN};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingColumn(String),
    MissingStateColumn,
    InvalidName(String),
    DuplicateName(String),
    WidthOutOfRange {
        name: String,
        width_bits: u32,
    },
    ResetTooWide {
        name: String,
        reset_value: u32,
        width_bits: u32,
    },
    Unassigned(String),
    Misaligned {
        name: String,
        offset: u32,
    },
    ReservedOffset(String),
    DuplicateOffset {
        offset: u32,
        names: Vec<String>,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingColumn(c) => write!(f, "missing required column `{c}`"),
            Violation::MissingStateColumn => write!(f, "retired entries present but no `{STATE_COLUMN}` column"),
            Violation::InvalidName(n) => write!(f, "`{n}` is not a valid identifier"),
            Violation::DuplicateName(n) => write!(f, "register name `{n}` used more than once"),
            Violation::WidthOutOfRange { name, width_bits } => {
                write!(f, "`{name}`: width {width_bits} outside 1..=32")
            }
            Violation::ResetTooWide {
                name,
                reset_value,
                width_bits,
            } => write!(
                f,
                "`{name}`: reset value {reset_value:#x} does not fit in {width_bits} bits"
            ),
            Violation::Unassigned(n) => write!(f, "`{n}` has no offset"),
            Violation::Misaligned { name, offset } => write!(f, "`{name}`: offset {offset:#x} is not word-aligned"),
            Violation::ReservedOffset(n) => write!(f, "`{n}`: offset 0x0 is reserved for the ID register"),
            Violation::DuplicateOffset { offset, names } => {
                write!(f, "offset {offset:#x} shared by {}", names.join(", "))
            }
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Every invariant of the database; empty iff the database is valid.
pub fn validate_db(db: &RegDb) -> Vec<Violation> {
    let mut out = Vec::new();
    for c in REQUIRED_COLUMNS {
        if !db.columns().iter().any(|x| x == c) {
            out.push(Violation::MissingColumn(c.to_string()));
        }
    }
    if db.retired().next().is_some() && !db.columns().iter().any(|c| c == STATE_COLUMN) {
        out.push(Violation::MissingStateColumn);
    }

    let mut names: BTreeMap<&str, usize> = BTreeMap::new();
    let mut offsets: BTreeMap<u32, Vec<String>> = BTreeMap::new();
    for e in db.entries() {
        *names.entry(&e.name).or_default() += 1;
        if !is_identifier(&e.name) {
            out.push(Violation::InvalidName(e.name.clone()));
        }
        if !(1..=32).contains(&e.width_bits) {
            out.push(Violation::WidthOutOfRange {
                name: e.name.clone(),
                width_bits: e.width_bits,
            });
        } else if e.reset_value & !e.mask() != 0 {
            out.push(Violation::ResetTooWide {
                name: e.name.clone(),
                reset_value: e.reset_value,
                width_bits: e.width_bits,
            });
        }
        match e.offset {
            None => out.push(Violation::Unassigned(e.name.clone())),
            Some(0) => out.push(Violation::ReservedOffset(e.name.clone())),
            Some(o) if o % 4 != 0 => out.push(Violation::Misaligned {
                name: e.name.clone(),
                offset: o,
            }),
            Some(_) => {}
        }
        if let Some(o) = e.offset {
            offsets.entry(o).or_default().push(e.name.clone());
        }
    }
    out.extend(
        names
            .into_iter()
            .filter(|(_, n)| *n > 1)
            .map(|(name, _)| Violation::DuplicateName(name.to_string())),
    );
    out.extend(
        offsets
            .into_iter()
            .filter(|(_, n)| n.len() > 1)
            .map(|(offset, names)| Violation::DuplicateOffset { offset, names }),
    );
    out
}
