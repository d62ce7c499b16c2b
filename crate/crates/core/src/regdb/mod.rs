// SPDX-License-Identifier: Apache-2.0

//! The CSV register database.
//!
//! One database describes one CSR block. Every generated artifact is a pure
//! function of it, so its canonical text (and the hash of that text) fully
//! identifies a revision. Entries are never deleted: a register whose signal
//! disappears is retired and keeps its offset forever, so software built
//! against an older revision can never silently hit a re-used address.

mod csv_io;
mod update;
mod validate;

use std::collections::BTreeMap;
use std::fmt;

use crate::Access;

pub use csv_io::{load_db, save_db};
pub use update::{allocate_offsets, update_db, ChangeReport, FieldChange, ScanSet};
pub(crate) use validate::is_identifier;
pub use validate::{validate_db, Violation};

/// Columns every database must carry, in default order.
pub const REQUIRED_COLUMNS: [&str; 7] = [
    "name",
    "width",
    "access",
    "reset",
    "offset",
    "origin_module",
    "description",
];
/// Lifecycle column; optional on load (missing means every entry is active).
pub const STATE_COLUMN: &str = "state";
pub const SCHEMA_VERSION: u32 = 1;
/// Offset 0 always holds the generated read-only ID register.
pub const ID_OFFSET: u32 = 0;
pub const DEFAULT_REGION_SIZE: u32 = 0x1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum EntryState {
    #[default]
    Active,
    Retired,
}

impl fmt::Display for EntryState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EntryState::Active => "active",
            EntryState::Retired => "retired",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegEntry {
    pub name: String,
    pub width_bits: u32,
    pub access: Access,
    pub reset_value: u32,
    /// `None` until [`allocate_offsets`] assigns one.
    pub offset: Option<u32>,
    pub origin_module: String,
    pub description: String,
    pub state: EntryState,
    /// Values of user-added columns, keyed by column name. Empty values are
    /// not stored.
    pub extra: BTreeMap<String, String>,
}

impl RegEntry {
    pub fn new(name: impl Into<String>, width_bits: u32, access: Access, origin_module: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            width_bits,
            access,
            reset_value: 0,
            offset: None,
            origin_module: origin_module.into(),
            description: String::new(),
            state: EntryState::Active,
            extra: BTreeMap::new(),
        }
    }

    pub fn at(mut self, offset: u32) -> Self {
        self.offset = Some(offset);
        self
    }

    pub fn with_reset(mut self, reset_value: u32) -> Self {
        self.reset_value = reset_value;
        self
    }

    pub fn with_description(mut self, description: impl Into<String>) -> Self {
        self.description = description.into();
        self
    }

    pub fn retired(mut self) -> Self {
        self.state = EntryState::Retired;
        self
    }

    pub fn is_active(&self) -> bool {
        self.state == EntryState::Active
    }

    /// All-ones value of this register's width.
    pub fn mask(&self) -> u32 {
        width_mask(self.width_bits)
    }
}

pub fn width_mask(width_bits: u32) -> u32 {
    match width_bits {
        0 => 0,
        w if w >= 32 => u32::MAX,
        w => (1u32 << w) - 1,
    }
}

/// Register database: entries kept in canonical order (by offset, with
/// unassigned entries last in insertion order) plus the column header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegDb {
    entries: Vec<RegEntry>,
    columns: Vec<String>,
}

impl Default for RegDb {
    fn default() -> Self {
        Self::new()
    }
}

impl RegDb {
    pub fn new() -> Self {
        Self {
            entries: Vec::new(),
            columns: default_columns(),
        }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = RegEntry>) -> Self {
        let mut db = Self::new();
        db.entries = entries.into_iter().collect();
        db.sort();
        db
    }

    /// Uses `columns` as the header. Extra columns are kept in this order.
    pub fn with_columns(mut self, columns: Vec<String>) -> Self {
        self.columns = columns;
        self
    }

    pub fn entries(&self) -> &[RegEntry] {
        &self.entries
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn entry(&self, name: &str) -> Option<&RegEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn active(&self) -> impl Iterator<Item = &RegEntry> {
        self.entries.iter().filter(|e| e.is_active())
    }

    pub fn retired(&self) -> impl Iterator<Item = &RegEntry> {
        self.entries.iter().filter(|e| !e.is_active())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn schema_version(&self) -> u32 {
        SCHEMA_VERSION
    }

    /// CRC-32 of the canonical CSV text. This is the value of the ID
    /// register and appears in every generated file banner.
    pub fn content_hash(&self) -> u32 {
        crc32fast::hash(save_db(self).as_bytes())
    }

    pub(crate) fn entries_mut(&mut self) -> &mut Vec<RegEntry> {
        &mut self.entries
    }

    pub(crate) fn columns_mut(&mut self) -> &mut Vec<String> {
        &mut self.columns
    }

    pub(crate) fn sort(&mut self) {
        self.entries.sort_by_key(|e| (e.offset.is_none(), e.offset));
    }

    /// Columns that are not part of the schema.
    pub fn extra_columns(&self) -> impl Iterator<Item = &str> {
        self.columns
            .iter()
            .map(String::as_str)
            .filter(|c| !REQUIRED_COLUMNS.contains(c) && *c != STATE_COLUMN)
    }
}

fn default_columns() -> Vec<String> {
    REQUIRED_COLUMNS
        .iter()
        .chain(std::iter::once(&STATE_COLUMN))
        .map(|c| c.to_string())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DbError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("row {row}: {message}")]
    Parse { row: u64, message: String },
    #[error("rows {}: {message}", rows.iter().map(u64::to_string).collect::<Vec<_>>().join(", "))]
    Invariant { rows: Vec<u64>, message: String },
    #[error("conflict on `{name}`: {message}")]
    Conflict { name: String, message: String },
    #[error("no free offset for `{name}` within the {region_size:#x}-byte CSR region")]
    AddressSpaceExhausted { name: String, region_size: u32 },
    #[error("candidate `{0}` appears more than once in the scan")]
    DuplicateCandidate(String),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks() {
        assert_eq!(width_mask(1), 1);
        assert_eq!(width_mask(4), 0xf);
        assert_eq!(width_mask(31), 0x7fff_ffff);
        assert_eq!(width_mask(32), u32::MAX);
    }

    #[test]
    fn canonical_order() {
        let db = RegDb::from_entries([
            RegEntry::new("b", 1, Access::Rw, "m").at(8),
            RegEntry::new("u", 1, Access::Rw, "m"),
            RegEntry::new("a", 1, Access::Rw, "m").at(4),
        ]);
        let names: Vec<_> = db.entries().iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, vec!["a", "b", "u"]);
    }

    #[test]
    fn hash_tracks_content() {
        let a = RegDb::from_entries([RegEntry::new("a", 1, Access::Rw, "m").at(4)]);
        let b = RegDb::from_entries([RegEntry::new("a", 2, Access::Rw, "m").at(4)]);
        assert_eq!(a.content_hash(), a.clone().content_hash());
        assert_ne!(a.content_hash(), b.content_hash());
    }
}
