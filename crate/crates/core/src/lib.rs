// SPDX-License-Identifier: Apache-2.0

//! Register infrastructure toolchain for SoC test chips.
//!
//! * [`sv_scan`] reads SystemVerilog, finds CSR/DIAG signals and lints style.
//! * [`regdb`] owns the CSV register database and its update semantics.
//! * [`emit`] renders RTL, docs, software views and self-tests from it.
//! * [`busmodel`] is a transaction-level model of the interconnect.
//! * [`uart_host`] speaks the line protocol used to drive that model.

pub mod busmodel;
pub mod emit;
pub mod memmap;
pub mod regdb;
pub mod script;
pub mod sv_scan;
pub mod uart_host;

use std::fmt;

/// Software access type of a register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Access {
    /// Control: written by software, drives the design.
    Rw,
    /// Status: driven by the design, read by software.
    Ro,
}

impl fmt::Display for Access {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Access::Rw => "RW",
            Access::Ro => "RO",
        })
    }
}

impl std::str::FromStr for Access {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "RW" | "rw" => Ok(Access::Rw),
            "RO" | "ro" => Ok(Access::Ro),
            other => Err(format!("invalid access `{other}` (expected RW or RO)")),
        }
    }
}
