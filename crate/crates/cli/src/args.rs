// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Register toolchain for SoC test chips: scan RTL into a register
/// database, generate CSR RTL and views from it, and exercise the result
/// on a bus model.
#[derive(Debug, Parser)]
#[command(name = "chipkit", version)]
pub struct Cli {
    /// Project config file (TOML). Defaults to $CHIPKIT_CONFIG, then ./chipkit.toml.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan RTL and merge CSR candidates into the register database.
    Update(UpdateArgs),
    /// Render generated artifacts from the register database.
    Generate(GenerateArgs),
    /// Check RTL against the coding rules.
    Lint(LintArgs),
    /// Serve the host protocol from a bus model on stdin/stdout or TCP.
    Sim(SimArgs),
    /// Run a test script (or a generated region test) against a bus model.
    RunTest(RunTestArgs),
}

pub fn parse_u32(s: &str) -> Result<u32, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(h) => u32::from_str_radix(&h.replace('_', ""), 16),
        None => s.replace('_', "").parse(),
    };
    r.map_err(|_| format!("invalid number `{s}`"))
}

#[derive(Debug, Clone, Default, Args)]
pub struct NamingArgs {
    /// Affix marking control (RW) ports.
    #[arg(long, value_name = "AFFIX")]
    pub control_affix: Option<String>,
    /// Affix marking status (RO) ports.
    #[arg(long, value_name = "AFFIX")]
    pub status_affix: Option<String>,
    /// Affix marking DIAG outputs.
    #[arg(long, value_name = "AFFIX")]
    pub diag_affix: Option<String>,
    /// `prefix` or `postfix`.
    #[arg(long, value_name = "MODE")]
    pub match_mode: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BlockArgs {
    /// Name of the generated CSR block.
    #[arg(long, value_name = "NAME")]
    pub block: Option<String>,
    /// Base address of the CSR region.
    #[arg(long, value_parser = parse_u32, value_name = "ADDR")]
    pub base: Option<u32>,
    /// Size of the CSR region in bytes.
    #[arg(long, value_parser = parse_u32, value_name = "BYTES")]
    pub region_size: Option<u32>,
    /// Memory-map region that hosts the CSR block.
    #[arg(long, value_name = "REGION")]
    pub csr_region: Option<String>,
    /// Memory map file.
    #[arg(long, value_name = "FILE")]
    pub map: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct UpdateArgs {
    /// RTL files or directories to scan.
    #[arg(long = "rtl", value_name = "PATH", num_args = 1..)]
    pub rtl: Vec<PathBuf>,
    /// Register database (created if absent).
    #[arg(long, value_name = "CSV")]
    pub db: Option<PathBuf>,
    /// DIAG pins for the generated mux; 0 disables the select register.
    #[arg(long, value_name = "N")]
    pub diag_pins: Option<u32>,
    #[command(flatten)]
    pub naming: NamingArgs,
    #[command(flatten)]
    pub block: BlockArgs,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Register database.
    #[arg(long, value_name = "CSV")]
    pub db: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Comma-separated targets, or `all`.
    #[arg(long, value_name = "LIST")]
    pub targets: Option<String>,
    /// RTL to scan for DIAG signals.
    #[arg(long = "rtl", value_name = "PATH", num_args = 1..)]
    pub rtl: Vec<PathBuf>,
    /// Pad list (CSV: name,side,order,cell,signal).
    #[arg(long, value_name = "CSV")]
    pub pads: Option<PathBuf>,
    /// Output pins of the DIAG mux.
    #[arg(long, value_name = "N")]
    pub diag_pins: Option<u32>,
    /// Read value of unassigned CSR offsets.
    #[arg(long, value_parser = parse_u32, value_name = "WORD")]
    pub unmapped_value: Option<u32>,
    #[command(flatten)]
    pub naming: NamingArgs,
    #[command(flatten)]
    pub block: BlockArgs,
}

#[derive(Debug, Args)]
pub struct LintArgs {
    /// Files or directories; defaults to the configured RTL paths.
    pub paths: Vec<PathBuf>,
    /// Rule to switch off (repeatable).
    #[arg(long, value_name = "RULE")]
    pub disable: Vec<String>,
    /// Allow raw `always_ff` blocks.
    #[arg(long)]
    pub allow_always_ff: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Register database, as `PATH` for the CSR region or `REGION=PATH`.
    #[arg(long = "db", value_name = "[REGION=]CSV")]
    pub dbs: Vec<String>,
    /// `strict_x` or `random:<seed>`.
    #[arg(long, value_name = "MODE")]
    pub sram_mode: Option<String>,
    /// `mask_address_bit:<k>:<region>`, `mask_data_bit:<k>:<region>` or `none`.
    #[arg(long, value_name = "SPEC")]
    pub fault: Option<String>,
    /// Read value of unassigned CSR offsets.
    #[arg(long, value_parser = parse_u32, value_name = "WORD")]
    pub unmapped_value: Option<u32>,
    #[command(flatten)]
    pub block: BlockArgs,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// Serve on this TCP port (127.0.0.1) instead of stdin/stdout.
    #[arg(long, value_name = "PORT")]
    pub listen: Option<u16>,
    /// Stop after this many TCP sessions.
    #[arg(long, value_name = "N")]
    pub sessions: Option<usize>,
    /// Prompt written before each command.
    #[arg(long, default_value = "")]
    pub prompt: String,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Args)]
pub struct RunTestArgs {
    /// Test script file.
    #[arg(
        long,
        value_name = "FILE",
        conflicts_with = "region_test",
        required_unless_present = "region_test"
    )]
    pub script: Option<PathBuf>,
    /// Generate and run the address/data line test of a memory region.
    #[arg(long, value_name = "REGION")]
    pub region_test: Option<String>,
    /// Run every step instead of stopping at the first failure.
    #[arg(long)]
    pub keep_going: bool,
    #[command(flatten)]
    pub model: ModelArgs,
}
