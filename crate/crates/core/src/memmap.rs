// SPDX-License-Identifier: Apache-2.0

//! SoC memory map: named, naturally aligned, non-overlapping regions.
//!
//! Text format, one region per line (`#` starts a comment):
//!
//! ```text
//! region csr  csr  0x70000000 0x1000
//! region sram sram 0x20000000 0x10000
//! ```

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RegionKind {
    Csr,
    Sram,
    Peripheral,
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionKind::Csr => "csr",
            RegionKind::Sram => "sram",
            RegionKind::Peripheral => "peripheral",
        })
    }
}

impl std::str::FromStr for RegionKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csr" => Ok(RegionKind::Csr),
            "sram" => Ok(RegionKind::Sram),
            "peripheral" => Ok(RegionKind::Peripheral),
            other => Err(format!(
                "unknown region kind `{other}` (expected csr, sram or peripheral)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Region {
    pub name: String,
    pub kind: RegionKind,
    pub base: u32,
    pub size: u32,
}

impl Region {
    pub fn new(name: impl Into<String>, kind: RegionKind, base: u32, size: u32) -> Self {
        Self {
            name: name.into(),
            kind,
            base,
            size,
        }
    }

    /// One past the last byte.
    pub fn end(&self) -> u64 {
        self.base as u64 + self.size as u64
    }

    pub fn contains(&self, addr: u32) -> bool {
        addr >= self.base && (addr as u64) < self.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("region `{0}`: size must be a power of two of at least 4 bytes")]
    BadSize(String),
    #[error("region `{0}`: base is not a multiple of its size")]
    Misaligned(String),
    #[error("region `{0}` extends past the 32-bit address space")]
    OutOfRange(String),
    #[error("regions `{0}` and `{1}` overlap")]
    Overlap(String, String),
    #[error("region name `{0}` used twice")]
    DuplicateName(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MemoryMap {
    regions: Vec<Region>,
}

impl MemoryMap {
    /// Validates and sorts by base address.
    pub fn new(mut regions: Vec<Region>) -> Result<Self, MapError> {
        for r in &regions {
            if r.size < 4 || !r.size.is_power_of_two() {
                return Err(MapError::BadSize(r.name.clone()));
            }
            if r.base % r.size != 0 {
                return Err(MapError::Misaligned(r.name.clone()));
            }
            if r.end() > 1 << 32 {
                return Err(MapError::OutOfRange(r.name.clone()));
            }
        }
        for (i, a) in regions.iter().enumerate() {
            if regions[..i].iter().any(|b| b.name == a.name) {
                return Err(MapError::DuplicateName(a.name.clone()));
            }
        }
        regions.sort_by_key(|r| r.base);
        for pair in regions.windows(2) {
            if pair[0].end() > pair[1].base as u64 {
                return Err(MapError::Overlap(pair[0].name.clone(), pair[1].name.clone()));
            }
        }
        Ok(Self { regions })
    }

    pub fn parse(text: &str) -> Result<Self, MapError> {
        let mut regions = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |message: String| MapError::Syntax { line, message };
            let fields: Vec<&str> = content.split_whitespace().collect();
            let [kw, name, kind, base, size] = fields.as_slice() else {
                return Err(syntax("expected `region <name> <kind> <base-hex> <size-hex>`".into()));
            };
            if *kw != "region" {
                return Err(syntax(format!("unknown directive `{kw}`")));
            }
            let kind = kind.parse().map_err(syntax)?;
            let base = parse_hex(base).ok_or_else(|| syntax(format!("invalid base `{base}`")))?;
            let size = parse_hex(size).ok_or_else(|| syntax(format!("invalid size `{size}`")))?;
            regions.push(Region::new(*name, kind, base, size));
        }
        Self::new(regions)
    }

    pub fn to_text(&self) -> String {
        self.regions
            .iter()
            .map(|r| format!("region {} {} 0x{:08x} 0x{:x}\n", r.name, r.kind, r.base, r.size))
            .collect()
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn region(&self, name: &str) -> Option<&Region> {
        self.regions.iter().find(|r| r.name == name)
    }

    /// Index into [`Self::regions`] of the region holding `addr`.
    pub fn find(&self, addr: u32) -> Option<usize> {
        let idx = self.regions.partition_point(|r| r.base <= addr);
        idx.checked_sub(1).filter(|&i| self.regions[i].contains(addr))
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }
}

fn parse_hex(s: &str) -> Option<u32> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u32::from_str_radix(&digits.replace('_', ""), 16).ok()
}
