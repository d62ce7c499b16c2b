// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use chipkit::emit::{render_targets, EmitConfig, EmitError, EmitInputs, PadDb, Target, DIAG_SELECT_REGISTER};
use chipkit::regdb::validate_db;

use super::{block_name, csr_placement, load_map, naming, read_db, read_text, rtl_paths, scan, DEFAULT_DIAG_PINS};
use crate::args::GenerateArgs;
use crate::fsutil::write_atomic;
use crate::{CliError, Io, ProjectConfig, Status};

fn parse_targets(list: &[String]) -> Result<BTreeSet<Target>, CliError> {
    let mut out = BTreeSet::new();
    for t in list.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        if t == "all" {
            out.extend(Target::ALL);
        } else {
            out.insert(t.parse().map_err(CliError::usage)?);
        }
    }
    if out.is_empty() {
        return Err(CliError::usage("empty target list"));
    }
    Ok(out)
}

pub fn generate(cfg: &ProjectConfig, a: &GenerateArgs, io: &mut Io<'_>) -> Result<Status, CliError> {
    let db_path =
        a.db.clone()
            .or_else(|| cfg.db_path.clone())
            .ok_or_else(|| CliError::usage("no database given (--db or db_path in config)"))?;
    let out_dir = a
        .out
        .clone()
        .or_else(|| cfg.out_dir.clone())
        .ok_or_else(|| CliError::usage("no output directory given (--out or out_dir in config)"))?;
    let db = read_db(&db_path)?;
    let problems = validate_db(&db);
    if !problems.is_empty() {
        for p in &problems {
            let _ = writeln!(io.err, "{}: {p}", db_path.display());
        }
        return Err(CliError::data(format!(
            "{} is invalid; nothing generated",
            db_path.display()
        )));
    }

    let map = load_map(cfg, &a.block)?;
    let place = csr_placement(cfg, &a.block, map.as_ref())?;
    let base = place
        .base
        .ok_or_else(|| CliError::usage("CSR base address unknown (--base, [emit] base_address or --map)"))?;
    let mut ecfg = EmitConfig::new(block_name(cfg, &a.block)?, base, place.size);
    if let Some(v) = a.unmapped_value.or(cfg.emit.unmapped_value) {
        ecfg.unmapped_value = v;
    }
    let pads_path = a.pads.clone().or_else(|| cfg.pads_path.clone());
    let rtl = if a.rtl.is_empty() {
        cfg.rtl_paths.clone()
    } else {
        a.rtl.clone()
    };

    ecfg.targets = match a.targets.as_ref() {
        Some(list) => parse_targets(&list.split(',').map(str::to_string).collect::<Vec<_>>())?,
        None => match &cfg.emit.targets {
            Some(list) => parse_targets(list)?,
            None => {
                let mut t: BTreeSet<Target> = [
                    Target::Rtl,
                    Target::Inst,
                    Target::Md,
                    Target::C,
                    Target::Py,
                    Target::Test,
                ]
                .into();
                if map.is_some() {
                    t.insert(Target::Memmap);
                }
                if pads_path.is_some() {
                    t.insert(Target::Pads);
                }
                if !rtl.is_empty() && db.entry(DIAG_SELECT_REGISTER).is_some_and(|e| e.is_active()) {
                    t.insert(Target::Diag);
                }
                t
            }
        },
    };

    let diags = if ecfg.targets.contains(&Target::Diag) {
        let conv = naming(cfg, &a.naming)?;
        scan(&rtl_paths(&a.rtl, cfg)?, &conv, io.err)?.diag
    } else {
        Vec::new()
    };
    let pads = match (ecfg.targets.contains(&Target::Pads), &pads_path) {
        (true, Some(p)) => {
            Some(PadDb::parse_csv(&read_text(p)?).map_err(|e| CliError::usage(format!("{}: {e}", p.display())))?)
        }
        _ => None,
    };

    let inputs = EmitInputs {
        db: Some(&db),
        map: map.as_ref(),
        diags: &diags,
        diag_pins: a.diag_pins.or(cfg.emit.diag_pins).unwrap_or(DEFAULT_DIAG_PINS),
        pads: pads.as_ref(),
    };
    let files = render_targets(&ecfg, &inputs).map_err(|e| match e {
        EmitError::Input(_) => CliError::usage(e.to_string()),
        _ => CliError::data(e.to_string()),
    })?;

    std::fs::create_dir_all(&out_dir).map_err(|e| CliError::usage(format!("{}: {e}", out_dir.display())))?;
    for (name, text) in &files {
        let path = out_dir.join(name);
        write_atomic(&path, text.as_bytes())
            .map_err(|e| CliError::usage(format!("writing {}: {e}", path.display())))?;
        let _ = writeln!(io.out, "wrote {}", path.display());
    }
    Ok(Status::Success)
}
