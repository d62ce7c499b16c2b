// SPDX-License-Identifier: Apache-2.0

use chipkit::emit::{diag_select_width, DIAG_SELECT_REGISTER};
use chipkit::regdb::{save_db, update_db, RegDb, ScanSet};
use chipkit::sv_scan::CsrCandidate;
use chipkit::Access;

use super::{block_name, csr_placement, load_map, naming, read_db, rtl_paths, scan, DEFAULT_DIAG_PINS};
use crate::args::UpdateArgs;
use crate::fsutil::write_atomic;
use crate::{CliError, Io, ProjectConfig, Status};

pub fn update(cfg: &ProjectConfig, a: &UpdateArgs, io: &mut Io<'_>) -> Result<Status, CliError> {
    let conv = naming(cfg, &a.naming)?;
    let paths = rtl_paths(&a.rtl, cfg)?;
    let db_path =
        a.db.clone()
            .or_else(|| cfg.db_path.clone())
            .ok_or_else(|| CliError::usage("no database given (--db or db_path in config)"))?;
    let map = load_map(cfg, &a.block)?;
    let region_size = csr_placement(cfg, &a.block, map.as_ref())?.size;

    let found = scan(&paths, &conv, io.err)?;
    let rw = found.csr.iter().filter(|c| c.access == Access::Rw).count();
    let _ = writeln!(
        io.out,
        "scanned {} module(s): {} CSR candidate(s) ({rw} RW, {} RO), {} DIAG signal(s)",
        found.modules.len(),
        found.csr.len(),
        found.csr.len() - rw,
        found.diag.len()
    );
    let mut modules = found.modules;
    let mut candidates = found.csr;

    let pins = a.diag_pins.or(cfg.emit.diag_pins).unwrap_or(DEFAULT_DIAG_PINS);
    if !found.diag.is_empty() && pins > 0 {
        let block = block_name(cfg, &a.block)?;
        let width = diag_select_width(found.diag.len(), pins);
        if width > 32 {
            return Err(CliError::data(format!(
                "{} DIAG signals on {pins} pins need a {width}-bit select register",
                found.diag.len()
            )));
        }
        let origin = format!("{block}_diag_mux");
        modules.insert(origin.clone());
        candidates.push(CsrCandidate {
            name: DIAG_SELECT_REGISTER.into(),
            width_bits: width,
            access: Access::Rw,
            origin_module: origin,
            source_line: 0,
        });
    }

    let existing = if db_path.exists() {
        Some(read_db(&db_path)?)
    } else {
        None
    };
    let base = existing.clone().unwrap_or_else(RegDb::new);
    let (next, report) =
        update_db(&base, &ScanSet { modules, candidates }, region_size).map_err(|e| CliError::data(e.to_string()))?;
    let _ = write!(io.out, "{report}");

    let text = save_db(&next);
    let unchanged = existing.is_some() && std::fs::read_to_string(&db_path).is_ok_and(|old| old == text);
    if !unchanged {
        write_atomic(&db_path, text.as_bytes())
            .map_err(|e| CliError::usage(format!("writing {}: {e}", db_path.display())))?;
    }
    Ok(Status::Success)
}
