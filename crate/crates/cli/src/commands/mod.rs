// SPDX-License-Identifier: Apache-2.0

mod generate;
mod lint;
mod sim;
mod update;

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use chipkit::busmodel::{build_soc, FaultConfig, SocModel, SocOptions, SramMode};
use chipkit::memmap::{MemoryMap, Region, RegionKind};
use chipkit::regdb::{load_db, DbError, RegDb, DEFAULT_REGION_SIZE};
use chipkit::sv_scan::{
    extract_csr_candidates, extract_diag_candidates, parse_all, CsrCandidate, DiagCandidate, MatchMode,
    NamingConvention, SourceFile,
};

pub use generate::generate;
pub use lint::lint;
pub use sim::{run_test, sim};
pub use update::update;

use crate::args::{BlockArgs, ModelArgs, NamingArgs};
use crate::fsutil::collect_rtl;
use crate::{CliError, ProjectConfig};

/// DIAG pins assumed when neither flag nor config sets a count; two pins
/// allow relative observation of two signals.
pub(crate) const DEFAULT_DIAG_PINS: u32 = 2;

fn io_error(what: &Path, e: std::io::Error) -> CliError {
    CliError::usage(format!("{}: {e}", what.display()))
}

pub(crate) fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| io_error(path, e))
}

pub(crate) fn naming(cfg: &ProjectConfig, a: &NamingArgs) -> Result<NamingConvention, CliError> {
    let d = NamingConvention::default();
    let pick = |flag: &Option<String>, conf: &Option<String>, default: &str| {
        flag.clone()
            .or_else(|| conf.clone())
            .unwrap_or_else(|| default.to_string())
    };
    let mode: MatchMode = match a.match_mode.as_ref().or(cfg.naming.mode.as_ref()) {
        Some(m) => m.parse().map_err(CliError::usage)?,
        None => d.match_mode(),
    };
    NamingConvention::new(
        pick(&a.control_affix, &cfg.naming.control, d.control_prefix()),
        pick(&a.status_affix, &cfg.naming.status, d.status_prefix()),
        pick(&a.diag_affix, &cfg.naming.diag, d.diag_prefix()),
        mode,
    )
    .map_err(|e| CliError::usage(e.to_string()))
}

pub(crate) fn rtl_paths(flag: &[PathBuf], cfg: &ProjectConfig) -> Result<Vec<PathBuf>, CliError> {
    let paths = if flag.is_empty() {
        cfg.rtl_paths.clone()
    } else {
        flag.to_vec()
    };
    if paths.is_empty() {
        return Err(CliError::usage("no RTL paths given (--rtl or rtl_paths in config)"));
    }
    Ok(paths)
}

pub(crate) struct Scan {
    pub modules: BTreeSet<String>,
    pub csr: Vec<CsrCandidate>,
    pub diag: Vec<DiagCandidate>,
}

/// Parses every RTL file under `paths`, skipping generated files, and
/// extracts CSR and DIAG candidates. Notes and warnings go to `err`.
pub(crate) fn scan(paths: &[PathBuf], conv: &NamingConvention, err: &mut dyn Write) -> Result<Scan, CliError> {
    let files = collect_rtl(paths).map_err(|e| CliError::usage(format!("scanning RTL: {e}")))?;
    let mut sources = Vec::new();
    for f in files {
        let src = SourceFile::read(&f).map_err(|e| io_error(&f, e))?;
        if chipkit::emit::is_generated(src.content()) {
            continue;
        }
        sources.push(src);
    }
    let parsed = parse_all(&sources).map_err(|e| CliError::usage(e.to_string()))?;
    for s in &parsed.skipped {
        let _ = writeln!(err, "{}:{}: note: {}", s.path.display(), s.line, s.message);
    }
    let mut out = Scan {
        modules: BTreeSet::new(),
        csr: Vec::new(),
        diag: Vec::new(),
    };
    for m in &parsed.modules {
        out.modules.insert(m.name.clone());
        let csr = extract_csr_candidates(m, conv);
        let diag = extract_diag_candidates(m, conv);
        for issue in csr.issues.iter().chain(&diag.issues) {
            let _ = writeln!(err, "warning: {issue}");
        }
        out.csr.extend(csr.candidates);
        out.diag.extend(diag.candidates);
    }
    out.diag
        .sort_by(|a, b| (&a.origin_module, &a.name).cmp(&(&b.origin_module, &b.name)));
    Ok(out)
}

pub(crate) fn read_db(path: &Path) -> Result<RegDb, CliError> {
    let text = read_text(path)?;
    load_db(&text).map_err(|e| {
        let msg = format!("{}: {e}", path.display());
        match e {
            DbError::Schema(_) | DbError::Parse { .. } => CliError::usage(msg),
            _ => CliError::data(msg),
        }
    })
}

pub(crate) fn load_map(cfg: &ProjectConfig, b: &BlockArgs) -> Result<Option<MemoryMap>, CliError> {
    match b.map.as_ref().or(cfg.map_path.as_ref()) {
        None => Ok(None),
        Some(p) => MemoryMap::parse(&read_text(p)?)
            .map(Some)
            .map_err(|e| CliError::usage(format!("{}: {e}", p.display()))),
    }
}

/// The CSR region as far as flags, config and memory map pin it down.
pub(crate) struct CsrPlacement {
    pub name: String,
    pub base: Option<u32>,
    pub size: u32,
}

pub(crate) fn csr_placement(
    cfg: &ProjectConfig,
    b: &BlockArgs,
    map: Option<&MemoryMap>,
) -> Result<CsrPlacement, CliError> {
    let name = b.csr_region.clone().or_else(|| cfg.emit.csr_region.clone());
    let base = b.base.or(cfg.emit.base_address);
    let size = b.region_size.or(cfg.emit.region_size);
    let from_map = match (map, &name) {
        (Some(m), Some(n)) => match m.region(n) {
            Some(r) if r.kind == RegionKind::Csr => Some(r.clone()),
            Some(_) => return Err(CliError::data(format!("region `{n}` is not a csr region"))),
            None => return Err(CliError::data(format!("memory map has no region `{n}`"))),
        },
        (Some(m), None) => {
            let csr: Vec<&Region> = m.regions().iter().filter(|r| r.kind == RegionKind::Csr).collect();
            match csr.as_slice() {
                [one] => Some((*one).clone()),
                [] => None,
                _ => {
                    return Err(CliError::usage(
                        "memory map has several csr regions; pick one with --csr-region",
                    ))
                }
            }
        }
        (None, _) => None,
    };
    match from_map {
        Some(r) => {
            if base.is_some_and(|b| b != r.base) || size.is_some_and(|s| s != r.size) {
                return Err(CliError::data(format!(
                    "base/size given for the CSR block disagree with region `{}` in the memory map",
                    r.name
                )));
            }
            Ok(CsrPlacement {
                name: r.name,
                base: Some(r.base),
                size: r.size,
            })
        }
        None => Ok(CsrPlacement {
            name: name.unwrap_or_else(|| "csr".into()),
            base,
            size: size.unwrap_or(DEFAULT_REGION_SIZE),
        }),
    }
}

pub(crate) fn block_name(cfg: &ProjectConfig, b: &BlockArgs) -> Result<String, CliError> {
    b.block
        .clone()
        .or_else(|| cfg.emit.block_name.clone())
        .ok_or_else(|| CliError::usage("no block name given (--block or [emit] block_name)"))
}

/// Builds the bus model. Without a memory map, a single CSR region is
/// synthesized from the block placement.
pub(crate) fn build_model(cfg: &ProjectConfig, a: &ModelArgs) -> Result<SocModel, CliError> {
    let loaded = load_map(cfg, &a.block)?;
    let place = csr_placement(cfg, &a.block, loaded.as_ref())?;
    let map = match loaded {
        Some(m) => m,
        None => {
            let base = place
                .base
                .ok_or_else(|| CliError::usage("no memory map: pass --map, or --base for a lone CSR region"))?;
            MemoryMap::new(vec![Region::new(place.name.clone(), RegionKind::Csr, base, place.size)])
                .map_err(|e| CliError::data(e.to_string()))?
        }
    };

    let specs: Vec<String> = if a.dbs.is_empty() {
        cfg.db_path.iter().map(|p| p.display().to_string()).collect()
    } else {
        a.dbs.clone()
    };
    let mut dbs = Vec::new();
    for spec in specs {
        let (region, path) = match spec.split_once('=') {
            Some((r, p)) => (r.to_string(), PathBuf::from(p)),
            None => (place.name.clone(), PathBuf::from(&spec)),
        };
        dbs.push((region, read_db(&path)?));
    }

    let sram_mode: SramMode = match a.sram_mode.as_ref().or(cfg.sram_mode.as_ref()) {
        Some(m) => m.parse().map_err(CliError::usage)?,
        None => SramMode::StrictX,
    };
    let fault = match &a.fault {
        Some(f) => FaultConfig::parse(f).map_err(CliError::usage)?,
        None => None,
    };
    build_soc(
        &map,
        &dbs,
        SocOptions {
            sram_mode,
            unmapped_value: a.unmapped_value.or(cfg.emit.unmapped_value),
            fault,
        },
    )
    .map_err(|e| CliError::data(e.to_string()))
}
