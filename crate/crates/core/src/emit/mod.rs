// SPDX-License-Identifier: Apache-2.0

//! Renders generated artifacts from a register database. Every emitter is a
//! pure function of its inputs.

mod diag;
mod docs;
mod memmap_header;
mod pads;
mod rtl;
mod selftest;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::busmodel::DEFAULT_UNMAPPED_VALUE;
use crate::memmap::MemoryMap;
use crate::regdb::{validate_db, RegDb, RegEntry};
use crate::sv_scan::DiagCandidate;

pub use diag::{diag_select_width, emit_diag_mux, DIAG_SELECT_REGISTER};
pub use docs::{emit_markdown, emit_sw_views};
pub use memmap_header::emit_memmap_header;
pub use pads::{emit_pad_script, Pad, PadDb, Side};
pub use rtl::{emit_csr_rtl, emit_instantiation_template, BUS_PORTS};
pub use selftest::emit_selftest;

/// First line (after the comment leader) of every generated file.
pub const BANNER_PREFIX: &str = "Generated by chipkit";

pub fn banner(db_hash: Option<u32>) -> String {
    match db_hash {
        Some(h) => format!("{BANNER_PREFIX} from register database 0x{h:08x}. Do not edit."),
        None => format!("{BANNER_PREFIX}. Do not edit."),
    }
}

/// True if `text` starts with a generated-file banner.
pub fn is_generated(text: &str) -> bool {
    text.lines().next().is_some_and(|l| l.contains(BANNER_PREFIX))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Target {
    Rtl,
    Inst,
    Md,
    C,
    Py,
    Test,
    Memmap,
    Diag,
    Pads,
}

impl Target {
    pub const ALL: [Target; 9] = [
        Target::Rtl,
        Target::Inst,
        Target::Md,
        Target::C,
        Target::Py,
        Target::Test,
        Target::Memmap,
        Target::Diag,
        Target::Pads,
    ];

    pub fn file_name(self, block: &str) -> String {
        match self {
            Target::Rtl => format!("{block}_csr.sv"),
            Target::Inst => format!("{block}_csr_inst.sv"),
            Target::Md => format!("{block}_regs.md"),
            Target::C => format!("{block}_regs.h"),
            Target::Py => format!("{block}_regs.py"),
            Target::Test => format!("{block}_selftest.txt"),
            Target::Memmap => "soc_memmap.svh".to_string(),
            Target::Diag => format!("{block}_diag_mux.sv"),
            Target::Pads => "pads_place.tcl".to_string(),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Rtl => "rtl",
            Target::Inst => "inst",
            Target::Md => "md",
            Target::C => "c",
            Target::Py => "py",
            Target::Test => "test",
            Target::Memmap => "memmap",
            Target::Diag => "diag",
            Target::Pads => "pads",
        })
    }
}

impl std::str::FromStr for Target {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Target::ALL
            .into_iter()
            .find(|t| t.to_string() == s)
            .ok_or_else(|| format!("unknown target `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EmitError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("invalid register database: {0}")]
    InvalidDb(String),
    #[error("{0}")]
    Input(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmitConfig {
    pub block_name: String,
    pub base_address: u32,
    pub region_size: u32,
    pub targets: BTreeSet<Target>,
    pub unmapped_value: u32,
}

impl EmitConfig {
    pub fn new(block_name: impl Into<String>, base_address: u32, region_size: u32) -> Self {
        Self {
            block_name: block_name.into(),
            base_address,
            region_size,
            targets: Target::ALL.into_iter().collect(),
            unmapped_value: DEFAULT_UNMAPPED_VALUE,
        }
    }

    pub fn validate(&self) -> Result<(), EmitError> {
        let bad = |m: String| Err(EmitError::Config(m));
        if !crate::regdb::is_identifier(&self.block_name) {
            return bad(format!("block name `{}` is not an identifier", self.block_name));
        }
        if self.region_size < 4 || !self.region_size.is_power_of_two() {
            return bad(format!(
                "region size {:#x} is not a power of two >= 4",
                self.region_size
            ));
        }
        if !self.base_address.is_multiple_of(self.region_size) {
            return bad(format!(
                "base address 0x{:08x} is not a multiple of region size {:#x}",
                self.base_address, self.region_size
            ));
        }
        if self.base_address as u64 + self.region_size as u64 > 1 << 32 {
            return bad("region extends past the 32-bit address space".into());
        }
        Ok(())
    }

    /// Absolute bus address of a register offset.
    pub fn address(&self, offset: u32) -> u32 {
        self.base_address + offset
    }

    pub fn addr_bits(&self) -> u32 {
        self.region_size.trailing_zeros()
    }
}

/// Upper-cased identifier with every non-alphanumeric character replaced
/// by `_`.
pub fn sanitize_upper(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_uppercase()
            } else {
                '_'
            }
        })
        .collect()
}

pub fn hex32(v: u32) -> String {
    format!("0x{v:08x}")
}

/// Checks shared by every database-driven emitter.
pub(crate) fn check_inputs(db: &RegDb, cfg: &EmitConfig) -> Result<(), EmitError> {
    cfg.validate()?;
    let problems = validate_db(db);
    if !problems.is_empty() {
        return Err(EmitError::InvalidDb(
            problems.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
        ));
    }
    let needed = 4 * (db.len() as u64 + 1);
    if (cfg.region_size as u64) < needed {
        return Err(EmitError::Config(format!(
            "region size {:#x} too small for {} registers plus ID (need {needed:#x})",
            cfg.region_size,
            db.len()
        )));
    }
    for e in db.entries() {
        let off = e.offset.expect("validated");
        if off as u64 + 4 > cfg.region_size as u64 {
            return Err(EmitError::Config(format!(
                "`{}` at offset {off:#x} lies outside the {:#x}-byte region",
                e.name, cfg.region_size
            )));
        }
    }
    check_names(db, cfg)
}

/// Rejects register names that would collide with each other or with
/// generated identifiers in any output language.
fn check_names(db: &RegDb, cfg: &EmitConfig) -> Result<(), EmitError> {
    let mut rtl: BTreeMap<String, String> = BTreeMap::new();
    for (p, _) in BUS_PORTS {
        rtl.insert(p.to_string(), "bus port".into());
    }
    for r in rtl::RESERVED {
        rtl.insert(r.to_string(), "generated identifier".into());
    }
    let mut c: BTreeMap<String, String> = BTreeMap::new();
    for m in docs::reserved_macros(&cfg.block_name) {
        c.insert(m, "generated macro".into());
    }
    for e in db.entries() {
        let mut names = vec![e.name.clone()];
        if e.is_active() {
            names.extend(rtl::derived_names(e));
        }
        for n in names {
            if let Some(prev) = rtl.insert(n.clone(), e.name.clone()) {
                return Err(collision(&e.name, &n, &prev));
            }
        }
        for m in docs::entry_macros(&cfg.block_name, e) {
            if let Some(prev) = c.insert(m.clone(), e.name.clone()) {
                return Err(collision(&e.name, &m, &prev));
            }
        }
    }
    Ok(())
}

fn collision(name: &str, generated: &str, other: &str) -> EmitError {
    EmitError::Config(format!(
        "register `{name}` produces `{generated}`, which clashes with {other}"
    ))
}

/// Active entries in offset order.
pub(crate) fn active(db: &RegDb) -> Vec<&RegEntry> {
    let mut v: Vec<&RegEntry> = db.active().collect();
    v.sort_by_key(|e| e.offset);
    v
}

pub(crate) fn retired(db: &RegDb) -> Vec<&RegEntry> {
    let mut v: Vec<&RegEntry> = db.retired().collect();
    v.sort_by_key(|e| e.offset);
    v
}

/// Everything the full set of targets may draw on.
#[derive(Debug, Clone, Default)]
pub struct EmitInputs<'a> {
    pub db: Option<&'a RegDb>,
    pub map: Option<&'a MemoryMap>,
    pub diags: &'a [DiagCandidate],
    pub diag_pins: u32,
    pub pads: Option<&'a PadDb>,
}

/// Renders every requested target to (file name, contents), in target
/// order. Nothing is written; a failure in any target fails the whole set.
pub fn render_targets(cfg: &EmitConfig, inputs: &EmitInputs<'_>) -> Result<Vec<(String, String)>, EmitError> {
    let need_db = || {
        inputs
            .db
            .ok_or_else(|| EmitError::Input("register database required".into()))
    };
    let mut out = Vec::new();
    for &t in &cfg.targets {
        let text = match t {
            Target::Rtl => emit_csr_rtl(need_db()?, cfg)?,
            Target::Inst => emit_instantiation_template(need_db()?, cfg)?,
            Target::Md => emit_markdown(need_db()?, cfg)?,
            Target::C => emit_sw_views(need_db()?, cfg)?.0,
            Target::Py => emit_sw_views(need_db()?, cfg)?.1,
            Target::Test => selftest::render(&emit_selftest(need_db()?, cfg)?, need_db()?.content_hash()),
            Target::Memmap => {
                let map = inputs
                    .map
                    .ok_or_else(|| EmitError::Input("memory map required for memmap".into()))?;
                emit_memmap_header(map)
            }
            Target::Diag => emit_diag_mux(inputs.diags, inputs.diag_pins, need_db()?, cfg)?,
            Target::Pads => {
                let pads = inputs
                    .pads
                    .ok_or_else(|| EmitError::Input("pad list required for pads".into()))?;
                emit_pad_script(pads)
            }
        };
        out.push((t.file_name(&cfg.block_name), text));
    }
    Ok(out)
}
