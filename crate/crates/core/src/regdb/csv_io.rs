// SPDX-License-Identifier: Apache-2.0

use std::collections::{BTreeMap, HashMap};

use super::{DbError, EntryState, RegDb, RegEntry, REQUIRED_COLUMNS, STATE_COLUMN};

/// Parses database text. The first record is the header; its column order is
/// preserved and unknown columns are carried through verbatim.
pub fn load_db(csv_text: &str) -> Result<RegDb, DbError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(csv_text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| DbError::Parse {
            row: 1,
            message: e.to_string(),
        })?
        .clone();
    let columns: Vec<String> = header.iter().map(str::to_string).collect();
    if columns.len() == 1 && columns[0].is_empty() {
        return Err(DbError::Schema("missing header line".into()));
    }

    let mut index = HashMap::new();
    for (i, c) in columns.iter().enumerate() {
        if index.insert(c.as_str(), i).is_some() {
            return Err(DbError::Schema(format!("column `{c}` appears twice")));
        }
    }
    let missing: Vec<_> = REQUIRED_COLUMNS
        .iter()
        .filter(|c| !index.contains_key(*c))
        .copied()
        .collect();
    if !missing.is_empty() {
        return Err(DbError::Schema(format!(
            "missing required column(s): {}",
            missing.join(", ")
        )));
    }
    let col = |name: &str| index[name];
    let state_col = index.get(STATE_COLUMN).copied();

    let mut entries = Vec::new();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| DbError::Parse {
            row: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let row = record.position().map_or(0, |p| p.line());
        if record.len() != columns.len() {
            return Err(DbError::Parse {
                row,
                message: format!("expected {} fields, found {}", columns.len(), record.len()),
            });
        }
        let field = |name: &str| &record[col(name)];
        let perr = |message: String| DbError::Parse { row, message };

        let name = field("name").trim().to_string();
        if name.is_empty() {
            return Err(perr("empty register name".into()));
        }
        let width_bits = parse_number(field("width")).map_err(|m| perr(format!("width: {m}")))?;
        let access = field("access").trim().parse().map_err(perr)?;
        let reset_value = parse_number(field("reset")).map_err(|m| perr(format!("reset: {m}")))?;
        let offset = match field("offset").trim() {
            "" => None,
            s => Some(parse_number(s).map_err(|m| perr(format!("offset: {m}")))?),
        };
        let state = match state_col.map(|i| record[i].trim()) {
            None | Some("") | Some("active") => EntryState::Active,
            Some("retired") => EntryState::Retired,
            Some(other) => return Err(perr(format!("invalid state `{other}` (expected active or retired)"))),
        };
        let mut extra = BTreeMap::new();
        for (i, c) in columns.iter().enumerate() {
            let c = c.as_str();
            if !REQUIRED_COLUMNS.contains(&c) && c != STATE_COLUMN && !record[i].is_empty() {
                extra.insert(c.to_string(), record[i].to_string());
            }
        }
        entries.push(RegEntry {
            name,
            width_bits,
            access,
            reset_value,
            offset,
            origin_module: field("origin_module").trim().to_string(),
            description: field("description").to_string(),
            state,
            extra,
        });
        rows.push(row);
    }

    let mut by_name: HashMap<&str, u64> = HashMap::new();
    let mut by_offset: HashMap<u32, u64> = HashMap::new();
    for (e, &row) in entries.iter().zip(&rows) {
        if let Some(prev) = by_name.insert(&e.name, row) {
            return Err(DbError::Invariant {
                rows: vec![prev, row],
                message: format!("duplicate register name `{}`", e.name),
            });
        }
        if let Some(off) = e.offset {
            if let Some(prev) = by_offset.insert(off, row) {
                return Err(DbError::Invariant {
                    rows: vec![prev, row],
                    message: format!("duplicate offset {off:#x}"),
                });
            }
        }
    }

    let mut db = RegDb::from_entries(entries).with_columns(columns);
    db.sort();
    Ok(db)
}

/// Renders the canonical form: entries by offset, 0x-prefixed lowercase hex
/// for reset and offset, minimal RFC 4180 quoting, LF line endings.
pub fn save_db(db: &RegDb) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(csv::QuoteStyle::Necessary)
        .from_writer(Vec::new());
    w.write_record(db.columns()).expect("in-memory write");
    for e in db.entries() {
        let row = db.columns().iter().map(|c| match c.as_str() {
            "name" => e.name.clone(),
            "width" => e.width_bits.to_string(),
            "access" => e.access.to_string(),
            "reset" => format!("{:#x}", e.reset_value),
            "offset" => e.offset.map(|o| format!("{o:#x}")).unwrap_or_default(),
            "origin_module" => e.origin_module.clone(),
            "description" => e.description.clone(),
            STATE_COLUMN => e.state.to_string(),
            other => e.extra.get(other).cloned().unwrap_or_default(),
        });
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("input was UTF-8")
}

/// Decimal or `0x`-prefixed hexadecimal.
pub(crate) fn parse_number(s: &str) -> Result<u32, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u32::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|_| format!("invalid number `{s}`"))
}
