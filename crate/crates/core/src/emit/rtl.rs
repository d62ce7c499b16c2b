// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use super::{active, banner, check_inputs, hex32, retired, EmitConfig, EmitError};
use crate::regdb::{RegDb, RegEntry, ID_OFFSET};
use crate::Access;

/// Bus slave interface of the generated CSR block, in port order.
/// `csr_addr` is the byte offset into the region.
pub const BUS_PORTS: [(&str, &str); 8] = [
    ("clock", "input"),
    ("reset_n", "input"),
    ("csr_sel", "input"),
    ("csr_write", "input"),
    ("csr_addr", "input"),
    ("csr_wdata", "input"),
    ("csr_rdata", "output"),
    ("csr_ready", "output"),
];

pub(crate) const RESERVED: [&str; 3] = ["DB_HASH", "UNMAPPED", "wr_en"];

pub(crate) fn derived_names(e: &RegEntry) -> Vec<String> {
    match e.access {
        Access::Rw => vec![
            format!("{}_we", e.name),
            format!("{}_d", e.name),
            format!("{}_rd", e.name),
        ],
        Access::Ro => vec![format!("{}_rd", e.name)],
    }
}

fn range(width: u32) -> String {
    if width == 1 {
        String::new()
    } else {
        format!("[{}:0]", width - 1)
    }
}

fn bus_port_width(name: &str, cfg: &EmitConfig) -> u32 {
    match name {
        "csr_addr" => cfg.addr_bits(),
        "csr_wdata" | "csr_rdata" => 32,
        _ => 1,
    }
}

fn offset_literal(cfg: &EmitConfig, offset: u32) -> String {
    let bits = cfg.addr_bits() as usize;
    format!("{bits}'h{offset:0w$x}", w = bits.div_ceil(4))
}

fn describe(cfg: &EmitConfig, e: &RegEntry) -> String {
    let off = e.offset.expect("validated");
    format!(
        "{}: {} (offset {:#05x}), {} bit{}, {}, reset {:#x}",
        e.name,
        hex32(cfg.address(off)),
        off,
        e.width_bits,
        if e.width_bits == 1 { "" } else { "s" },
        e.access,
        e.reset_value
    )
}

/// Synthesizable CSR block. Registers are inferred through the `FF` macro
/// (`FF(d, q, clk, en, rst_n, reset_value)`) from `registers.svh`.
pub fn emit_csr_rtl(db: &RegDb, cfg: &EmitConfig) -> Result<String, EmitError> {
    check_inputs(db, cfg)?;
    let hash = db.content_hash();
    let module = format!("{}_csr", cfg.block_name);
    let regs = active(db);
    let mut o = String::new();

    let _ = writeln!(o, "// {}", banner(Some(hash)));
    let _ = writeln!(o, "//");
    let _ = writeln!(
        o,
        "// Block `{}` at {}, {:#x} bytes.",
        cfg.block_name,
        hex32(cfg.base_address),
        cfg.region_size
    );
    let _ = writeln!(o, "// A read or write completes in the cycle csr_sel is high.");
    let _ = writeln!(o);
    let _ = writeln!(o, "`include \"registers.svh\"");
    let _ = writeln!(o);

    let mut ports: Vec<(String, String, u32)> = BUS_PORTS
        .iter()
        .map(|(n, d)| (n.to_string(), d.to_string(), bus_port_width(n, cfg)))
        .collect();
    for e in &regs {
        let dir = match e.access {
            Access::Rw => "output",
            Access::Ro => "input",
        };
        ports.push((e.name.clone(), dir.into(), e.width_bits));
    }
    let _ = writeln!(o, "module {module} (");
    for (i, (name, dir, width)) in ports.iter().enumerate() {
        let sep = if i + 1 == ports.len() { "" } else { "," };
        let _ = writeln!(o, "  {dir:<6} logic {:<7} {name}{sep}", range(*width));
    }
    let _ = writeln!(o, ");");
    let _ = writeln!(o);
    let _ = writeln!(o, "  localparam logic [31:0] DB_HASH = 32'h{hash:08x};");
    let _ = writeln!(
        o,
        "  localparam logic [31:0] UNMAPPED = 32'h{:08x};",
        cfg.unmapped_value
    );
    let _ = writeln!(o);
    let _ = writeln!(o, "  logic wr_en;");
    let _ = writeln!(o, "  always_comb wr_en = csr_sel & csr_write;");
    let _ = writeln!(o, "  always_comb csr_ready = csr_sel;");
    let _ = writeln!(o);
    let _ = writeln!(
        o,
        "  // ID: {} (offset 0x000), 32 bits, RO, database hash",
        hex32(cfg.address(ID_OFFSET))
    );
    let _ = writeln!(o);

    for e in &regs {
        let n = &e.name;
        let w = e.width_bits;
        let off = offset_literal(cfg, e.offset.expect("validated"));
        let _ = writeln!(o, "  // {}", describe(cfg, e));
        if e.access == Access::Rw {
            let _ = writeln!(o, "  logic {n}_we;");
            let _ = writeln!(o, "  logic {} {n}_d;", range(w));
        }
        let _ = writeln!(o, "  logic [31:0] {n}_rd;");
        if e.access == Access::Rw {
            let _ = writeln!(o, "  always_comb {n}_we = wr_en && (csr_addr == {off});");
            let _ = writeln!(
                o,
                "  always_comb {n}_d = csr_wdata{};",
                if w == 32 { String::new() } else { range(w) }
            );
        }
        if w == 32 {
            let _ = writeln!(o, "  always_comb {n}_rd = {n};");
        } else {
            let _ = writeln!(o, "  always_comb {n}_rd = {{{}'d0, {n}}};", 32 - w);
        }
        if e.access == Access::Rw {
            let _ = writeln!(o, "  `FF({n}_d, {n}, clock, {n}_we, reset_n, {w}'h{:x})", e.reset_value);
        }
        let _ = writeln!(o);
    }

    for e in retired(db) {
        let _ = writeln!(o, "  // retired: {}", describe(cfg, e));
    }
    if db.retired().next().is_some() {
        let _ = writeln!(o);
    }

    let _ = writeln!(o, "  always_comb begin");
    let _ = writeln!(o, "    case (csr_addr)");
    let _ = writeln!(o, "      {}: csr_rdata = DB_HASH;", offset_literal(cfg, ID_OFFSET));
    for e in &regs {
        let _ = writeln!(
            o,
            "      {}: csr_rdata = {}_rd;",
            offset_literal(cfg, e.offset.expect("validated")),
            e.name
        );
    }
    let _ = writeln!(o, "      default: csr_rdata = UNMAPPED;");
    let _ = writeln!(o, "    endcase");
    let _ = writeln!(o, "  end");
    let _ = writeln!(o);
    let _ = writeln!(o, "endmodule");
    Ok(o)
}

pub fn emit_instantiation_template(db: &RegDb, cfg: &EmitConfig) -> Result<String, EmitError> {
    check_inputs(db, cfg)?;
    let names: Vec<&str> = BUS_PORTS
        .iter()
        .map(|(n, _)| *n)
        .chain(active(db).into_iter().map(|e| e.name.as_str()))
        .collect();
    let pad = names.iter().map(|n| n.len()).max().unwrap_or(0);
    let mut o = String::new();
    let _ = writeln!(o, "// {}", banner(Some(db.content_hash())));
    let _ = writeln!(o, "// Paste into the parent module and rename connections as needed.");
    let _ = writeln!(o);
    let _ = writeln!(o, "{0}_csr u_{0}_csr (", cfg.block_name);
    for (i, n) in names.iter().enumerate() {
        let sep = if i + 1 == names.len() { "" } else { "," };
        let _ = writeln!(o, "  .{n:<pad$} ({n}){sep}");
    }
    let _ = writeln!(o, ");");
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sv_scan::{lint, parse_modules, Direction, RuleSet, SourceFile, Width};

    fn cfg() -> EmitConfig {
        EmitConfig::new("myblk", 0x7000_0000, 0x1000)
    }

    #[test]
    fn empty_db_reparses_clean() {
        let text = emit_csr_rtl(&RegDb::new(), &cfg()).unwrap();
        let src = SourceFile::new("myblk_csr.sv", text);
        let parsed = parse_modules(&src).unwrap();
        assert_eq!(parsed.modules.len(), 1);
        assert_eq!(parsed.modules[0].ports.len(), BUS_PORTS.len());
        assert!(lint(&src, &RuleSet::default()).is_empty());
    }

    #[test]
    fn port_per_entry() {
        let db = RegDb::from_entries([
            RegEntry::new("cfg_gain", 8, Access::Rw, "m").at(4),
            RegEntry::new("sts_full", 32, Access::Ro, "m").at(8),
            RegEntry::new("cfg_old", 3, Access::Rw, "m").at(0xc).retired(),
        ]);
        let text = emit_csr_rtl(&db, &cfg()).unwrap();
        let src = SourceFile::new("x.sv", text.clone());
        let m = &parse_modules(&src).unwrap().modules[0];
        let gain = m.port("cfg_gain").unwrap();
        assert_eq!(
            (gain.direction, &gain.width),
            (
                Direction::Output,
                &Width::Range(crate::sv_scan::PackedRange { msb: 7, lsb: 0 })
            )
        );
        assert_eq!(m.port("sts_full").unwrap().direction, Direction::Input);
        assert!(m.port("cfg_old").is_none());
        assert!(text.contains("// retired: cfg_old: 0x7000000c"));
        assert!(text.contains("12'h004: csr_rdata = cfg_gain_rd;"));
        assert!(lint(&src, &RuleSet::default()).is_empty());
    }

    #[test]
    fn template_lists_connections() {
        let db = RegDb::from_entries([
            RegEntry::new("cfg_a", 1, Access::Rw, "m").at(4),
            RegEntry::new("sts_b", 1, Access::Ro, "m").at(8),
        ]);
        let t = emit_instantiation_template(&db, &cfg()).unwrap();
        assert!(t.contains(".cfg_a     (cfg_a),"));
        assert!(t.contains(".sts_b     (sts_b)\n);"));
    }
}
