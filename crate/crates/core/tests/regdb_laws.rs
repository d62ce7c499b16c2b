// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, BTreeSet};

use chipkit::regdb::{load_db, save_db, update_db, validate_db, RegDb, ScanSet};
use chipkit::sv_scan::CsrCandidate;
use chipkit::Access;
use proptest::prelude::*;

const NAMES: usize = 16;
const MODULES: [&str; 3] = ["alpha", "beta", "gamma"];
const REGION: u32 = 0x1000;

fn access_of(i: usize) -> Access {
    if i % 3 == 2 {
        Access::Ro
    } else {
        Access::Rw
    }
}

/// One scan: for each name, absent or present with (width, module index).
fn scan_strategy() -> impl Strategy<Value = Vec<Option<(u32, usize)>>> {
    prop::collection::vec(prop::option::of((1u32..=32, 0usize..MODULES.len())), NAMES)
}

fn to_scan(spec: &[Option<(u32, usize)>]) -> ScanSet {
    let candidates = spec
        .iter()
        .enumerate()
        .filter_map(|(i, s)| {
            s.map(|(w, m)| CsrCandidate {
                name: format!("reg_{i}"),
                width_bits: w,
                access: access_of(i),
                origin_module: MODULES[m].to_string(),
                source_line: 1,
            })
        })
        .collect();
    ScanSet {
        modules: MODULES.iter().map(|m| m.to_string()).collect(),
        candidates,
    }
}

fn run_history(scans: &[Vec<Option<(u32, usize)>>]) -> Vec<RegDb> {
    let mut db = RegDb::new();
    let mut history = Vec::new();
    for s in scans {
        db = update_db(&db, &to_scan(s), REGION).expect("update").0;
        history.push(db.clone());
    }
    history
}

/// Database with user-edited free-text and reset columns on top of a scan.
fn edited_db() -> impl Strategy<Value = RegDb> {
    (
        prop::collection::vec(scan_strategy(), 1..4),
        prop::collection::vec(("[ -~]{0,12}|.*[,\"\n].*|\\PC{0,8}", any::<u32>()), NAMES),
    )
        .prop_map(|(scans, edits)| {
            let db = run_history(&scans).pop().unwrap();
            let entries = db
                .entries()
                .iter()
                .cloned()
                .map(|mut e| {
                    let i: usize = e.name[4..].parse().unwrap();
                    e.description = edits[i].0.clone();
                    e.reset_value = edits[i].1 & e.mask();
                    e
                })
                .collect::<Vec<_>>();
            RegDb::from_entries(entries).with_columns(db.columns().to_vec())
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn csv_round_trip(db in edited_db()) {
        prop_assert!(validate_db(&db).is_empty());
        let text = save_db(&db);
        let back = load_db(&text).unwrap();
        prop_assert_eq!(&back, &db);
        prop_assert_eq!(save_db(&back), text);
    }

    #[test]
    fn update_is_idempotent(prefix in prop::collection::vec(scan_strategy(), 0..4), scan in scan_strategy()) {
        let mut history = run_history(&prefix);
        let base = history.pop().unwrap_or_default();
        let scan = to_scan(&scan);
        let (once, _) = update_db(&base, &scan, REGION).unwrap();
        let (twice, report) = update_db(&once, &scan, REGION).unwrap();
        prop_assert_eq!(&twice, &once);
        prop_assert!(report.is_empty(), "second update reported {}", report);
        prop_assert_eq!(save_db(&twice), save_db(&once));
    }

    #[test]
    fn offsets_are_stable(scans in prop::collection::vec(scan_strategy(), 1..8)) {
        let mut first_seen: BTreeMap<String, u32> = BTreeMap::new();
        for db in run_history(&scans) {
            prop_assert!(validate_db(&db).is_empty());
            for e in db.entries() {
                let off = e.offset.unwrap();
                let prev = *first_seen.entry(e.name.clone()).or_insert(off);
                prop_assert_eq!(prev, off, "{} moved", &e.name);
            }
        }
    }

    #[test]
    fn offsets_are_never_reused(scans in prop::collection::vec(scan_strategy(), 1..8)) {
        let mut owner: BTreeMap<u32, String> = BTreeMap::new();
        let mut names_ever: BTreeSet<String> = BTreeSet::new();
        for db in run_history(&scans) {
            for e in db.entries() {
                let off = e.offset.unwrap();
                prop_assert!(off != 0);
                let holder = owner.entry(off).or_insert_with(|| e.name.clone());
                prop_assert_eq!(holder.as_str(), e.name.as_str(), "offset {:#x} reused", off);
                names_ever.insert(e.name.clone());
            }
            // every register ever seen is still in the database
            for n in &names_ever {
                prop_assert!(db.entry(n).is_some(), "{} deleted", n);
            }
        }
    }
}

#[test]
fn retired_reappearing_with_new_access_is_a_conflict() {
    let make = |access| ScanSet {
        modules: ["m".to_string()].into(),
        candidates: vec![CsrCandidate {
            name: "cfg_x".into(),
            width_bits: 4,
            access,
            origin_module: "m".into(),
            source_line: 1,
        }],
    };
    let (db, _) = update_db(&RegDb::new(), &make(Access::Rw), REGION).unwrap();
    let gone = ScanSet {
        modules: ["m".to_string()].into(),
        candidates: vec![],
    };
    let (db, report) = update_db(&db, &gone, REGION).unwrap();
    assert_eq!(report.retired, ["cfg_x"]);
    assert!(update_db(&db, &make(Access::Ro), REGION).is_err());
    let (db, report) = update_db(&db, &make(Access::Rw), REGION).unwrap();
    assert_eq!(db.entry("cfg_x").unwrap().offset, Some(4));
    assert_eq!(report.modified.len(), 1);
}
