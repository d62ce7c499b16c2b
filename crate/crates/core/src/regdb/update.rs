// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use super::{width_mask, DbError, EntryState, RegDb, RegEntry, STATE_COLUMN};
use crate::sv_scan::CsrCandidate;

/// Result of one scan run: which modules were looked at, and what they
/// contained. Entries from modules outside `modules` are left untouched.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScanSet {
    pub modules: BTreeSet<String>,
    pub candidates: Vec<CsrCandidate>,
}

impl ScanSet {
    /// Treats the candidates' origin modules as the scanned set.
    pub fn from_candidates(candidates: Vec<CsrCandidate>) -> Self {
        Self {
            modules: candidates.iter().map(|c| c.origin_module.clone()).collect(),
            candidates,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldChange {
    pub name: String,
    pub field: &'static str,
    pub old: String,
    pub new: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ChangeReport {
    pub added: Vec<String>,
    pub modified: Vec<FieldChange>,
    pub retired: Vec<String>,
    pub unchanged_count: usize,
}

impl ChangeReport {
    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.modified.is_empty() && self.retired.is_empty()
    }

    pub fn modified_names(&self) -> BTreeSet<&str> {
        self.modified.iter().map(|c| c.name.as_str()).collect()
    }
}

impl fmt::Display for ChangeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return writeln!(f, "no changes ({} registers unchanged)", self.unchanged_count);
        }
        writeln!(f, "added: {}", self.added.len())?;
        for n in &self.added {
            writeln!(f, "  + {n}")?;
        }
        writeln!(f, "modified: {}", self.modified_names().len())?;
        for c in &self.modified {
            writeln!(f, "  ~ {} {}: {} -> {}", c.name, c.field, c.old, c.new)?;
        }
        writeln!(f, "retired: {}", self.retired.len())?;
        for n in &self.retired {
            writeln!(f, "  - {n}")?;
        }
        writeln!(f, "unchanged: {}", self.unchanged_count)
    }
}

/// Merges a scan into the database.
///
/// Scans own `width`, `access` and `origin_module`; every other column is
/// left as the user edited it (a reset value that no longer fits a narrowed
/// width is truncated). New registers get the lowest free offsets in
/// candidate order; registers that vanished from a scanned module are
/// retired in place.
pub fn update_db(db: &RegDb, scan: &ScanSet, region_size: u32) -> Result<(RegDb, ChangeReport), DbError> {
    let mut seen = HashSet::new();
    for c in &scan.candidates {
        if !seen.insert(c.name.as_str()) {
            return Err(DbError::DuplicateCandidate(c.name.clone()));
        }
    }

    let mut next = db.clone();
    let mut report = ChangeReport::default();
    for cand in &scan.candidates {
        let Some(entry) = next.entries_mut().iter_mut().find(|e| e.name == cand.name) else {
            next.entries_mut().push(RegEntry::new(
                &cand.name,
                cand.width_bits,
                cand.access,
                &cand.origin_module,
            ));
            report.added.push(cand.name.clone());
            continue;
        };
        let mut change = |field: &'static str, old: String, new: String| {
            report.modified.push(FieldChange {
                name: cand.name.clone(),
                field,
                old,
                new,
            })
        };
        if entry.state == EntryState::Retired {
            if entry.access != cand.access {
                return Err(DbError::Conflict {
                    name: cand.name.clone(),
                    message: format!(
                        "retired {} register reappears as {}; rename the signal or edit the database",
                        entry.access, cand.access
                    ),
                });
            }
            entry.state = EntryState::Active;
            change("state", "retired".into(), "active".into());
        }
        if entry.width_bits != cand.width_bits {
            change("width", entry.width_bits.to_string(), cand.width_bits.to_string());
            entry.width_bits = cand.width_bits;
            let fitted = entry.reset_value & width_mask(cand.width_bits);
            if fitted != entry.reset_value {
                change("reset", format!("{:#x}", entry.reset_value), format!("{fitted:#x}"));
                entry.reset_value = fitted;
            }
        }
        if entry.access != cand.access {
            change("access", entry.access.to_string(), cand.access.to_string());
            entry.access = cand.access;
        }
        if entry.origin_module != cand.origin_module {
            change("origin_module", entry.origin_module.clone(), cand.origin_module.clone());
            entry.origin_module = cand.origin_module.clone();
        }
    }

    for entry in next.entries_mut() {
        if entry.is_active() && scan.modules.contains(&entry.origin_module) && !seen.contains(entry.name.as_str()) {
            entry.state = EntryState::Retired;
            report.retired.push(entry.name.clone());
        }
    }
    if !report.retired.is_empty() && !next.columns().iter().any(|c| c == STATE_COLUMN) {
        next.columns_mut().push(STATE_COLUMN.to_string());
    }

    let touched: BTreeSet<&str> = report
        .added
        .iter()
        .chain(&report.retired)
        .map(String::as_str)
        .chain(report.modified.iter().map(|c| c.name.as_str()))
        .collect();
    report.unchanged_count = next
        .entries()
        .iter()
        .filter(|e| !touched.contains(e.name.as_str()))
        .count();

    let next = allocate_offsets(&next, region_size)?;
    Ok((next, report))
}

/// Gives every unassigned entry the lowest word-aligned offset >= 4 that no
/// active or retired entry holds, in insertion order. Assigned offsets never
/// move.
pub fn allocate_offsets(db: &RegDb, region_size: u32) -> Result<RegDb, DbError> {
    let mut next = db.clone();
    let mut used: BTreeSet<u32> = next.entries().iter().filter_map(|e| e.offset).collect();
    let mut cursor = 4u64;
    for entry in next.entries_mut().iter_mut().filter(|e| e.offset.is_none()) {
        while used.contains(&(cursor as u32)) {
            cursor += 4;
        }
        if cursor + 4 > region_size as u64 {
            return Err(DbError::AddressSpaceExhausted {
                name: entry.name.clone(),
                region_size,
            });
        }
        entry.offset = Some(cursor as u32);
        used.insert(cursor as u32);
    }
    next.sort();
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regdb::DEFAULT_REGION_SIZE;
    use crate::Access;

    fn cand(name: &str, width: u32, access: Access, module: &str) -> CsrCandidate {
        CsrCandidate {
            name: name.into(),
            width_bits: width,
            access,
            origin_module: module.into(),
            source_line: 1,
        }
    }

    fn offsets(db: &RegDb) -> Vec<(&str, Option<u32>)> {
        db.entries().iter().map(|e| (e.name.as_str(), e.offset)).collect()
    }

    #[test]
    fn fresh_database() {
        let scan = ScanSet::from_candidates(vec![
            cand("cfg_a", 8, Access::Rw, "m"),
            cand("sts_b", 1, Access::Ro, "m"),
        ]);
        let (db, report) = update_db(&RegDb::new(), &scan, DEFAULT_REGION_SIZE).unwrap();
        assert_eq!(offsets(&db), vec![("cfg_a", Some(0x4)), ("sts_b", Some(0x8))]);
        assert_eq!(report.added, vec!["cfg_a", "sts_b"]);
        assert_eq!(db.entries()[0].reset_value, 0);
        assert!(db.entries()[0].description.is_empty());
    }

    #[test]
    fn width_change_keeps_offset() {
        let db = RegDb::from_entries([RegEntry::new("cfg_a", 4, Access::Rw, "m")
            .at(0x10)
            .with_description("keep me")]);
        let scan = ScanSet::from_candidates(vec![cand("cfg_a", 8, Access::Rw, "m")]);
        let (db, report) = update_db(&db, &scan, DEFAULT_REGION_SIZE).unwrap();
        assert_eq!(db.entries()[0].offset, Some(0x10));
        assert_eq!(db.entries()[0].width_bits, 8);
        assert_eq!(db.entries()[0].description, "keep me");
        assert_eq!(
            report.modified,
            vec![FieldChange {
                name: "cfg_a".into(),
                field: "width",
                old: "4".into(),
                new: "8".into()
            }]
        );
    }

    #[test]
    fn narrowing_truncates_reset() {
        let db = RegDb::from_entries([RegEntry::new("cfg_a", 8, Access::Rw, "m").at(4).with_reset(0xa5)]);
        let scan = ScanSet::from_candidates(vec![cand("cfg_a", 4, Access::Rw, "m")]);
        let (db, report) = update_db(&db, &scan, DEFAULT_REGION_SIZE).unwrap();
        assert_eq!(db.entries()[0].reset_value, 0x5);
        assert_eq!(report.modified.len(), 2);
    }

    #[test]
    fn idempotent() {
        let scan = ScanSet::from_candidates(vec![
            cand("cfg_a", 8, Access::Rw, "m"),
            cand("sts_b", 1, Access::Ro, "n"),
        ]);
        let (once, _) = update_db(&RegDb::new(), &scan, DEFAULT_REGION_SIZE).unwrap();
        let (twice, report) = update_db(&once, &scan, DEFAULT_REGION_SIZE).unwrap();
        assert_eq!(once, twice);
        assert!(report.is_empty());
        assert_eq!(report.unchanged_count, 2);
        assert_eq!(report.to_string(), "no changes (2 registers unchanged)\n");
    }

    #[test]
    fn retire_and_reactivate() {
        let db = RegDb::from_entries([
            RegEntry::new("cfg_a", 1, Access::Rw, "m").at(4),
            RegEntry::new("cfg_b", 1, Access::Rw, "m").at(8),
            RegEntry::new("cfg_c", 1, Access::Rw, "other").at(0xc),
        ]);
        let scan = ScanSet {
            modules: ["m".to_string()].into(),
            candidates: vec![cand("cfg_a", 1, Access::Rw, "m"), cand("cfg_d", 1, Access::Rw, "m")],
        };
        let (db, report) = update_db(&db, &scan, DEFAULT_REGION_SIZE).unwrap();
        assert_eq!(report.retired, vec!["cfg_b"]);
        assert_eq!(report.added, vec!["cfg_d"]);
        assert_eq!(report.unchanged_count, 2);
        assert_eq!(db.entry("cfg_b").unwrap().state, EntryState::Retired);
        assert!(db.entry("cfg_c").unwrap().is_active());
        // retired offset 0x8 stays reserved
        assert_eq!(db.entry("cfg_d").unwrap().offset, Some(0x10));

        let back = ScanSet::from_candidates(vec![
            cand("cfg_a", 1, Access::Rw, "m"),
            cand("cfg_b", 2, Access::Rw, "m"),
            cand("cfg_d", 1, Access::Rw, "m"),
        ]);
        let (db, report) = update_db(&db, &back, DEFAULT_REGION_SIZE).unwrap();
        let b = db.entry("cfg_b").unwrap();
        assert!(b.is_active());
        assert_eq!(b.offset, Some(8));
        assert_eq!(b.width_bits, 2);
        assert_eq!(report.modified_names(), ["cfg_b"].into());
    }

    #[test]
    fn retired_access_conflict() {
        let db = RegDb::from_entries([RegEntry::new("x_a", 1, Access::Rw, "m").at(4).retired()]);
        let scan = ScanSet::from_candidates(vec![cand("x_a", 1, Access::Ro, "m")]);
        assert!(matches!(
            update_db(&db, &scan, DEFAULT_REGION_SIZE),
            Err(DbError::Conflict { .. })
        ));
    }

    #[test]
    fn active_access_change_is_an_update() {
        let db = RegDb::from_entries([RegEntry::new("x_a", 1, Access::Rw, "m").at(4)]);
        let scan = ScanSet::from_candidates(vec![cand("x_a", 1, Access::Ro, "m")]);
        let (db, _) = update_db(&db, &scan, DEFAULT_REGION_SIZE).unwrap();
        assert_eq!(db.entries()[0].access, Access::Ro);
    }

    #[test]
    fn duplicate_candidates_rejected() {
        let scan = ScanSet::from_candidates(vec![cand("a", 1, Access::Rw, "m"), cand("a", 1, Access::Rw, "n")]);
        assert_eq!(
            update_db(&RegDb::new(), &scan, 64),
            Err(DbError::DuplicateCandidate("a".into()))
        );
    }

    #[test]
    fn allocation_rules() {
        let db = RegDb::from_entries([
            RegEntry::new("a", 1, Access::Rw, "m").at(4),
            RegEntry::new("b", 1, Access::Rw, "m").at(8),
            RegEntry::new("new", 1, Access::Rw, "m"),
        ]);
        assert_eq!(
            allocate_offsets(&db, 64).unwrap().entry("new").unwrap().offset,
            Some(0xc)
        );

        let db = RegDb::from_entries([
            RegEntry::new("a", 1, Access::Rw, "m").at(4),
            RegEntry::new("r", 1, Access::Rw, "m").at(8).retired(),
            RegEntry::new("c", 1, Access::Rw, "m").at(0xc),
            RegEntry::new("new", 1, Access::Rw, "m"),
        ]);
        assert_eq!(
            allocate_offsets(&db, 64).unwrap().entry("new").unwrap().offset,
            Some(0x10)
        );
    }

    #[test]
    fn hundred_fresh_entries() {
        let db = RegDb::from_entries((0..100).map(|i| RegEntry::new(format!("r{i}"), 1, Access::Rw, "m")));
        let db = allocate_offsets(&db, DEFAULT_REGION_SIZE).unwrap();
        // enumerate expected offsets independently: 4, 8, ..., 0x190
        let mut expected = Vec::new();
        let mut off = 4;
        while off <= 0x190 {
            expected.push(off);
            off += 4;
        }
        let got: Vec<u32> = db.entries().iter().map(|e| e.offset.unwrap()).collect();
        assert_eq!(got, expected);
        assert_eq!(db.entries()[99].name, "r99");
    }

    #[test]
    fn exhaustion() {
        // 16-byte region: ID at 0 plus offsets 4, 8, 0xc
        let db = RegDb::from_entries((0..4).map(|i| RegEntry::new(format!("r{i}"), 1, Access::Rw, "m")));
        assert_eq!(
            allocate_offsets(&db, 16),
            Err(DbError::AddressSpaceExhausted {
                name: "r3".into(),
                region_size: 16
            })
        );
    }

    #[test]
    fn retirement_adds_state_column() {
        let db = RegDb::from_entries([RegEntry::new("a", 1, Access::Rw, "m").at(4)])
            .with_columns(crate::regdb::REQUIRED_COLUMNS.iter().map(|c| c.to_string()).collect());
        let scan = ScanSet {
            modules: ["m".to_string()].into(),
            candidates: vec![],
        };
        let (db, _) = update_db(&db, &scan, 64).unwrap();
        assert_eq!(db.columns().last().map(String::as_str), Some(STATE_COLUMN));
    }
}
