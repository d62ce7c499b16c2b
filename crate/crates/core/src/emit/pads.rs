// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use super::{banner, EmitError};
use crate::regdb::is_identifier;

/// Die edge, in emission order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    N,
    E,
    S,
    W,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::N => "N",
            Side::E => "E",
            Side::S => "S",
            Side::W => "W",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "N" | "n" => Ok(Side::N),
            "E" | "e" => Ok(Side::E),
            "S" | "s" => Ok(Side::S),
            "W" | "w" => Ok(Side::W),
            other => Err(format!("unknown side `{other}` (expected N, E, S or W)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pad {
    pub name: String,
    pub side: Side,
    pub order: u32,
    pub cell: String,
    pub signal: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PadDb {
    pads: Vec<Pad>,
}

impl PadDb {
    pub fn new(pads: Vec<Pad>) -> Result<Self, EmitError> {
        let mut slots = BTreeSet::new();
        for p in &pads {
            if !is_identifier(&p.signal) {
                return Err(EmitError::Input(format!(
                    "pad `{}`: signal `{}` is not an identifier",
                    p.name, p.signal
                )));
            }
            if p.name.is_empty()
                || p.cell.is_empty()
                || p.name.contains(char::is_whitespace)
                || p.cell.contains(char::is_whitespace)
            {
                return Err(EmitError::Input(format!(
                    "pad `{}`: name and cell must be non-empty words",
                    p.name
                )));
            }
            if !slots.insert((p.side, p.order)) {
                return Err(EmitError::Input(format!(
                    "two pads at side {} order {}",
                    p.side, p.order
                )));
            }
        }
        Ok(Self { pads })
    }

    /// CSV with header `name,side,order,cell,signal`.
    pub fn parse_csv(text: &str) -> Result<Self, EmitError> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| EmitError::Input(format!("pad list: {e}")))?
            .iter()
            .map(str::to_string)
            .collect();
        if header != ["name", "side", "order", "cell", "signal"] {
            return Err(EmitError::Input(
                "pad list header must be `name,side,order,cell,signal`".into(),
            ));
        }
        let mut pads = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let row = i + 2;
            let rec = rec.map_err(|e| EmitError::Input(format!("pad list row {row}: {e}")))?;
            let field = |k: usize| rec.get(k).unwrap_or("").to_string();
            pads.push(Pad {
                name: field(0),
                side: field(1)
                    .parse()
                    .map_err(|e| EmitError::Input(format!("pad list row {row}: {e}")))?,
                order: field(2)
                    .parse()
                    .map_err(|_| EmitError::Input(format!("pad list row {row}: invalid order `{}`", field(2))))?,
                cell: field(3),
                signal: field(4),
            });
        }
        Self::new(pads)
    }

    pub fn pads(&self) -> &[Pad] {
        &self.pads
    }
}

pub fn emit_pad_script(pads: &PadDb) -> String {
    let mut sorted: Vec<&Pad> = pads.pads.iter().collect();
    sorted.sort_by_key(|p| (p.side, p.order));
    let mut o = String::new();
    let _ = writeln!(o, "# {}", banner(None));
    let mut side = None;
    for p in sorted {
        if side != Some(p.side) {
            side = Some(p.side);
            let _ = writeln!(o);
            let _ = writeln!(o, "# side {}", p.side);
        }
        let _ = writeln!(
            o,
            "place_pad {} -side {} -order {} -cell {} -signal {}",
            p.name, p.side, p.order, p.cell, p.signal
        );
    }
    o
}
