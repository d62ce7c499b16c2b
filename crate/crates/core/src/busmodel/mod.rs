// SPDX-License-Identifier: Apache-2.0

//! Transaction-level SoC model: a single-layer decoder with a default slave,
//! behavioral CSR blocks built from register databases, and SRAMs that track
//! which words have ever been written.
//!
//! One call is one completed bus transfer. There is no notion of cycles,
//! wait states or arbitration.


use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::memmap::{MemoryMap, RegionKind};
use crate::regdb::{validate_db, RegDb};
use crate::Access;

pub use region_test::{gen_region_test, RegionTestError};

/// Value returned for reads of unmapped offsets inside a CSR region. The
/// generated RTL uses the same constant.
pub const DEFAULT_UNMAPPED_VALUE: u32 = 0xdead_beef;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SramMode {
    /// Never-written words fail to read.
    #[default]
    StrictX,
    /// Never-written words read as a pseudo-random value fixed by
    /// (seed, address).
    RandomSeeded(u64),
}

impl std::str::FromStr for SramMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "strict_x" {
            return Ok(SramMode::StrictX);
        }
        let seed = s
            .strip_prefix("random:")
            .or_else(|| s.strip_prefix("random_seeded:"))
            .ok_or_else(|| format!("unknown SRAM mode `{s}` (expected strict_x or random:<seed>)"))?;
        seed.parse()
            .map(SramMode::RandomSeeded)
            .map_err(|_| format!("invalid seed `{seed}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FaultKind {
    /// Address bit forced low inside the target region (truncated address).
    MaskAddressBit(u8),
    /// Data bit forced low on writes into the target region.
    MaskDataBit(u8),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FaultConfig {
    pub kind: FaultKind,
    pub target_region: String,
}

impl FaultConfig {
    /// Parses `mask_address_bit:<k>:<region>`, `mask_data_bit:<k>:<region>`
    /// or `none`.
    pub fn parse(spec: &str) -> Result<Option<Self>, String> {
        if spec == "none" {
            return Ok(None);
        }
        let mut parts = spec.splitn(3, ':');
        let (Some(kind), Some(bit), Some(region)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(format!("invalid fault `{spec}` (expected <kind>:<bit>:<region>)"));
        };
        let bit: u8 = bit.parse().map_err(|_| format!("invalid bit `{bit}`"))?;
        if bit >= 32 {
            return Err(format!("bit {bit} out of range 0..32"));
        }
        let kind = match kind {
            "mask_address_bit" => FaultKind::MaskAddressBit(bit),
            "mask_data_bit" => FaultKind::MaskDataBit(bit),
            other => return Err(format!("unknown fault kind `{other}`")),
        };
        Ok(Some(FaultConfig {
            kind,
            target_region: region.to_string(),
        }))
    }
}

impl fmt::Display for FaultConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FaultKind::MaskAddressBit(k) => write!(f, "mask_address_bit:{k}:{}", self.target_region),
            FaultKind::MaskDataBit(k) => write!(f, "mask_data_bit:{k}:{}", self.target_region),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BusErrorKind {
    Unmapped,
    Misaligned,
    UninitializedRead,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("{kind:?} access at 0x{address:08x}")]
pub struct BusError {
    pub kind: BusErrorKind,
    pub address: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Stats {
    pub reads: u64,
    pub writes: u64,
    pub errors: u64,
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "reads={} writes={} errors={}", self.reads, self.writes, self.errors)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("CSR region `{0}` has no register database")]
    UnpairedCsrRegion(String),
    #[error("database given for unknown region `{0}`")]
    UnknownRegion(String),
    #[error("region `{0}` is not a CSR region")]
    NotCsrRegion(String),
    #[error("region `{0}` has more than one database")]
    DuplicateDatabase(String),
    #[error("database for region `{region}` is invalid: {problems}")]
    InvalidDatabase { region: String, problems: String },
    #[error("register `{name}` at offset {offset:#x} lies outside region `{region}`")]
    OffsetOutsideRegion { region: String, name: String, offset: u32 },
    #[error("fault target `{0}` must be an existing sram or peripheral region")]
    BadFaultTarget(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UsageError {
    #[error("no region named `{0}`")]
    UnknownRegion(String),
    #[error("region `{0}` is not a CSR region")]
    NotCsrRegion(String),
    #[error("no active register `{0}`")]
    UnknownRegister(String),
    #[error("register `{name}` is {access}")]
    WrongAccess { name: String, access: Access },
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CsrReg {
    name: String,
    access: Access,
    mask: u32,
    reset: u32,
    value: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct CsrBlock {
    id: u32,
    /// Active registers by byte offset.
    regs: BTreeMap<u32, CsrReg>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct SramStore {
    /// Written words by word index; absence means never written.
    words: HashMap<u32, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Backing {
    Csr(CsrBlock),
    Sram(SramStore),
}

/// Everything a transaction can change except the statistics counters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocSnapshot(Vec<Backing>);

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SocOptions {
    pub sram_mode: SramMode,
    pub unmapped_value: Option<u32>,
    pub fault: Option<FaultConfig>,
}

#[derive(Debug, Clone)]
pub struct SocModel {
    map: MemoryMap,
    backings: Vec<Backing>,
    sram_mode: SramMode,
    unmapped_value: u32,
    fault: Option<(usize, FaultKind)>,
    stats: Stats,
}

/// Builds a model whose CSR blocks start at their reset values and whose
/// SRAM words are all unwritten.
pub fn build_soc(map: &MemoryMap, dbs: &[(String, RegDb)], options: SocOptions) -> Result<SocModel, ConfigError> {
    let mut paired: Vec<Option<&RegDb>> = vec![None; map.regions().len()];
    for (region, db) in dbs {
        let idx = map
            .regions()
            .iter()
            .position(|r| &r.name == region)
            .ok_or_else(|| ConfigError::UnknownRegion(region.clone()))?;
        if map.regions()[idx].kind != RegionKind::Csr {
            return Err(ConfigError::NotCsrRegion(region.clone()));
        }
        if paired[idx].replace(db).is_some() {
            return Err(ConfigError::DuplicateDatabase(region.clone()));
        }
    }

    let mut backings = Vec::new();
    for (region, db) in map.regions().iter().zip(paired) {
        let backing = match (region.kind, db) {
            (RegionKind::Csr, None) => return Err(ConfigError::UnpairedCsrRegion(region.name.clone())),
            (RegionKind::Csr, Some(db)) => {
                let problems = validate_db(db);
                if !problems.is_empty() {
                    return Err(ConfigError::InvalidDatabase {
                        region: region.name.clone(),
                        problems: problems.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "),
                    });
                }
                let mut regs = BTreeMap::new();
                for e in db.entries() {
                    let offset = e.offset.expect("validated");
                    if offset as u64 + 4 > region.size as u64 {
                        return Err(ConfigError::OffsetOutsideRegion {
                            region: region.name.clone(),
                            name: e.name.clone(),
                            offset,
                        });
                    }
                    if e.is_active() {
                        regs.insert(
                            offset,
                            CsrReg {
                                name: e.name.clone(),
                                access: e.access,
                                mask: e.mask(),
                                reset: e.reset_value,
                                value: e.reset_value,
                            },
                        );
                    }
                }
                Backing::Csr(CsrBlock {
                    id: db.content_hash(),
                    regs,
                })
            }
            (RegionKind::Sram | RegionKind::Peripheral, _) => Backing::Sram(SramStore::default()),
        };
        backings.push(backing);
    }

    let fault = match options.fault {
        None => None,
        Some(f) => {
            let idx = map
                .regions()
                .iter()
                .position(|r| r.name == f.target_region && r.kind != RegionKind::Csr)
                .ok_or_else(|| ConfigError::BadFaultTarget(f.target_region.clone()))?;
            Some((idx, f.kind))
        }
    };

    Ok(SocModel {
        map: map.clone(),
        backings,
        sram_mode: options.sram_mode,
        unmapped_value: options.unmapped_value.unwrap_or(DEFAULT_UNMAPPED_VALUE),
        fault,
        stats: Stats::default(),
    })
}

impl SocModel {
    pub fn map(&self) -> &MemoryMap {
        &self.map
    }

    pub fn stats(&self) -> Stats {
        self.stats
    }

    pub fn snapshot(&self) -> SocSnapshot {
        SocSnapshot(self.backings.clone())
    }

    fn decode(&self, addr: u32) -> Result<(usize, u32), BusError> {
        if !addr.is_multiple_of(4) {
            return Err(BusError {
                kind: BusErrorKind::Misaligned,
                address: addr,
            });
        }
        let idx = self.map.find(addr).ok_or(BusError {
            kind: BusErrorKind::Unmapped,
            address: addr,
        })?;
        Ok((idx, addr - self.map.regions()[idx].base))
    }

    fn fault_for(&self, idx: usize) -> Option<FaultKind> {
        self.fault.filter(|(i, _)| *i == idx).map(|(_, k)| k)
    }

    fn sram_word_index(&self, idx: usize, offset: u32) -> u32 {
        let offset = match self.fault_for(idx) {
            Some(FaultKind::MaskAddressBit(k)) => offset & !(1u32 << k),
            _ => offset,
        };
        offset / 4
    }

    pub fn bus_read(&mut self, addr: u32) -> Result<u32, BusError> {
        self.stats.reads += 1;
        let r = self.read_inner(addr);
        if r.is_err() {
            self.stats.errors += 1;
        }
        r
    }

    fn read_inner(&self, addr: u32) -> Result<u32, BusError> {
        let (idx, offset) = self.decode(addr)?;
        match &self.backings[idx] {
            Backing::Csr(block) => Ok(if offset == crate::regdb::ID_OFFSET {
                block.id
            } else {
                block.regs.get(&offset).map_or(self.unmapped_value, |r| r.value)
            }),
            Backing::Sram(store) => {
                let word = self.sram_word_index(idx, offset);
                match (store.words.get(&word), self.sram_mode) {
                    (Some(v), _) => Ok(*v),
                    (None, SramMode::StrictX) => Err(BusError {
                        kind: BusErrorKind::UninitializedRead,
                        address: addr,
                    }),
                    (None, SramMode::RandomSeeded(seed)) => {
                        let mut rng = ChaCha8Rng::seed_from_u64(seed);
                        rng.set_stream(addr as u64);
                        Ok(rng.next_u32())
                    }
                }
            }
        }
    }

    pub fn bus_write(&mut self, addr: u32, data: u32) -> Result<(), BusError> {
        self.stats.writes += 1;
        let (idx, offset) = match self.decode(addr) {
            Ok(d) => d,
            Err(e) => {
                self.stats.errors += 1;
                return Err(e);
            }
        };
        let fault = self.fault_for(idx);
        let word = self.sram_word_index(idx, offset);
        match &mut self.backings[idx] {
            Backing::Csr(block) => {
                // ID, RO and unmapped offsets ignore writes
                if let Some(reg) = block.regs.get_mut(&offset) {
                    if reg.access == Access::Rw {
                        reg.value = data & reg.mask;
                    }
                }
            }
            Backing::Sram(store) => {
                let data = match fault {
                    Some(FaultKind::MaskDataBit(j)) => data & !(1u32 << j),
                    _ => data,
                };
                store.words.insert(word, data);
            }
        }
        Ok(())
    }

    fn csr_reg(&mut self, region: &str, name: &str) -> Result<&mut CsrReg, UsageError> {
        let idx = self
            .map
            .regions()
            .iter()
            .position(|r| r.name == region)
            .ok_or_else(|| UsageError::UnknownRegion(region.into()))?;
        let Backing::Csr(block) = &mut self.backings[idx] else {
            return Err(UsageError::NotCsrRegion(region.into()));
        };
        block
            .regs
            .values_mut()
            .find(|r| r.name == name)
            .ok_or_else(|| UsageError::UnknownRegister(name.into()))
    }

    /// Drives the value the design presents on a status (RO) register.
    pub fn set_status(&mut self, region: &str, name: &str, value: u32) -> Result<(), UsageError> {
        let reg = self.csr_reg(region, name)?;
        if reg.access != Access::Ro {
            return Err(UsageError::WrongAccess {
                name: name.into(),
                access: reg.access,
            });
        }
        reg.value = value & reg.mask;
        Ok(())
    }

    /// Observes the value a control (RW) register drives into the design.
    pub fn get_control(&mut self, region: &str, name: &str) -> Result<u32, UsageError> {
        let reg = self.csr_reg(region, name)?;
        if reg.access != Access::Rw {
            return Err(UsageError::WrongAccess {
                name: name.into(),
                access: reg.access,
            });
        }
        Ok(reg.value)
    }

    /// Returns CSRs to their reset values. SRAM contents and statistics
    /// survive.
    pub fn reset(&mut self) {
        for b in &mut self.backings {
            if let Backing::Csr(block) = b {
                for r in block.regs.values_mut() {
                    r.value = r.reset;
                }
            }
        }
    }
}
