// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use super::{active, banner, check_inputs, hex32, retired, sanitize_upper, EmitConfig, EmitError};
use crate::regdb::{RegDb, RegEntry, ID_OFFSET};

fn md_cell(s: &str) -> String {
    s.replace('\\', "\\\\").replace('|', "\\|").replace(['\n', '\r'], " ")
}

pub fn emit_markdown(db: &RegDb, cfg: &EmitConfig) -> Result<String, EmitError> {
    check_inputs(db, cfg)?;
    let hash = db.content_hash();
    let mut o = String::new();
    let _ = writeln!(o, "<!-- {} -->", banner(Some(hash)));
    let _ = writeln!(o);
    let _ = writeln!(o, "# {} registers", cfg.block_name);
    let _ = writeln!(o);
    let _ = writeln!(
        o,
        "Base address {}, region size {:#x} bytes. Reads of unassigned offsets return {}.",
        hex32(cfg.base_address),
        cfg.region_size,
        hex32(cfg.unmapped_value)
    );
    let _ = writeln!(o);
    let _ = writeln!(o, "| Name | Address | Width | Access | Reset | Description |");
    let _ = writeln!(o, "|------|---------|-------|--------|-------|-------------|");
    let _ = writeln!(
        o,
        "| ID | {} | 32 | RO | {} | Register database hash |",
        hex32(cfg.address(ID_OFFSET)),
        hex32(hash)
    );
    for e in active(db) {
        let _ = writeln!(
            o,
            "| {} | {} | {} | {} | {:#x} | {} |",
            md_cell(&e.name),
            hex32(cfg.address(e.offset.expect("validated"))),
            e.width_bits,
            e.access,
            e.reset_value,
            md_cell(&e.description)
        );
    }
    let gone = retired(db);
    if !gone.is_empty() {
        let _ = writeln!(o);
        let _ = writeln!(o, "## Retired");
        let _ = writeln!(o);
        let _ = writeln!(
            o,
            "These addresses are reserved and read as {}.",
            hex32(cfg.unmapped_value)
        );
        let _ = writeln!(o);
        let _ = writeln!(o, "| Name | Address | Width | Access | Reset | Description |");
        let _ = writeln!(o, "|------|---------|-------|--------|-------|-------------|");
        for e in gone {
            let _ = writeln!(
                o,
                "| {} | {} | {} | {} | {:#x} | {} |",
                md_cell(&e.name),
                hex32(cfg.address(e.offset.expect("validated"))),
                e.width_bits,
                e.access,
                e.reset_value,
                md_cell(&e.description)
            );
        }
    }
    Ok(o)
}

pub(crate) fn reserved_macros(block: &str) -> Vec<String> {
    let b = sanitize_upper(block);
    ["BASE_ADDR", "REGS_H", "ID_ADDR", "DB_HASH", "UNMAPPED_VALUE"]
        .iter()
        .map(|s| format!("{b}_{s}"))
        .collect()
}

pub(crate) fn entry_macros(block: &str, e: &RegEntry) -> Vec<String> {
    let p = format!("{}_{}", sanitize_upper(block), sanitize_upper(&e.name));
    ["ADDR", "WIDTH", "ACCESS", "RESET"]
        .iter()
        .map(|s| format!("{p}_{s}"))
        .collect()
}

/// C header and Python module describing the register map.
pub fn emit_sw_views(db: &RegDb, cfg: &EmitConfig) -> Result<(String, String), EmitError> {
    check_inputs(db, cfg)?;
    let hash = db.content_hash();
    let b = sanitize_upper(&cfg.block_name);
    let regs = active(db);

    let mut c = String::new();
    let _ = writeln!(c, "/* {} */", banner(Some(hash)));
    let _ = writeln!(c);
    let _ = writeln!(c, "#ifndef {b}_REGS_H");
    let _ = writeln!(c, "#define {b}_REGS_H");
    let _ = writeln!(c);
    let _ = writeln!(c, "#define {b}_BASE_ADDR {}", hex32(cfg.base_address));
    let _ = writeln!(c, "#define {b}_ID_ADDR {}", hex32(cfg.address(ID_OFFSET)));
    let _ = writeln!(c, "#define {b}_DB_HASH {}u", hex32(hash));
    let _ = writeln!(c, "#define {b}_UNMAPPED_VALUE {}u", hex32(cfg.unmapped_value));
    for e in &regs {
        let n = sanitize_upper(&e.name);
        let _ = writeln!(c);
        let _ = writeln!(c, "/* {}: {} bits, {} */", e.name, e.width_bits, e.access);
        let _ = writeln!(
            c,
            "#define {b}_{n}_ADDR {}",
            hex32(cfg.address(e.offset.expect("validated")))
        );
        let _ = writeln!(c, "#define {b}_{n}_WIDTH {}", e.width_bits);
        let _ = writeln!(c, "#define {b}_{n}_ACCESS \"{}\"", e.access);
        let _ = writeln!(c, "#define {b}_{n}_RESET {:#x}u", e.reset_value);
    }
    let gone = retired(db);
    if !gone.is_empty() {
        let _ = writeln!(c);
        for e in gone {
            let _ = writeln!(
                c,
                "/* retired: {} at {} */",
                e.name,
                hex32(cfg.address(e.offset.expect("validated")))
            );
        }
    }
    let _ = writeln!(c);
    let _ = writeln!(c, "#endif /* {b}_REGS_H */");

    let mut py = String::new();
    let _ = writeln!(py, "# {}", banner(Some(hash)));
    let _ = writeln!(py, "\"\"\"Register map of block {}.\"\"\"", cfg.block_name);
    let _ = writeln!(py);
    let _ = writeln!(py, "BLOCK = \"{}\"", cfg.block_name);
    let _ = writeln!(py, "BASE_ADDR = {}", hex32(cfg.base_address));
    let _ = writeln!(py, "DB_HASH = {}", hex32(hash));
    let _ = writeln!(py, "UNMAPPED_VALUE = {}", hex32(cfg.unmapped_value));
    let _ = writeln!(py);
    let _ = writeln!(py, "# name: (address, width, access, reset)");
    let _ = writeln!(py, "REGISTERS = {{");
    let _ = writeln!(
        py,
        "    \"ID\": ({}, 32, \"RO\", {}),",
        hex32(cfg.address(ID_OFFSET)),
        hex32(hash)
    );
    for e in &regs {
        let _ = writeln!(
            py,
            "    \"{}\": ({}, {}, \"{}\", {:#x}),",
            e.name,
            hex32(cfg.address(e.offset.expect("validated"))),
            e.width_bits,
            e.access,
            e.reset_value
        );
    }
    let _ = writeln!(py, "}}");
    Ok((c, py))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Access;

    fn cfg() -> EmitConfig {
        EmitConfig::new("myblk", 0x7000_0000, 0x1000)
    }

    #[test]
    fn markdown_rows() {
        let db = RegDb::from_entries([
            RegEntry::new("cfg_gain", 8, Access::Rw, "m")
                .at(4)
                .with_description("gain | bias"),
            RegEntry::new("cfg_old", 8, Access::Rw, "m").at(8).retired(),
        ]);
        let md = emit_markdown(&db, &cfg()).unwrap();
        assert!(md.contains("| cfg_gain | 0x70000004 | 8 | RW | 0x0 | gain \\| bias |"));
        assert!(md.contains("## Retired"));
        let empty = emit_markdown(&RegDb::new(), &cfg()).unwrap();
        assert_eq!(empty.lines().filter(|l| l.starts_with("| ")).count(), 2);
        assert!(!empty.contains("Retired"));
    }

    #[test]
    fn c_and_py() {
        let db = RegDb::from_entries([
            RegEntry::new("sts_b", 1, Access::Ro, "m").at(8),
            RegEntry::new("cfg_gain", 8, Access::Rw, "m").at(4),
        ]);
        let (c, py) = emit_sw_views(&db, &cfg()).unwrap();
        assert!(c.contains("#define MYBLK_CFG_GAIN_ADDR 0x70000004\n"));
        assert!(c.find("MYBLK_CFG_GAIN_ADDR").unwrap() < c.find("MYBLK_STS_B_ADDR").unwrap());
        assert!(c.starts_with("/* Generated by chipkit"));
        assert!(c.trim_end().ends_with("#endif /* MYBLK_REGS_H */"));
        assert!(py.contains("\"cfg_gain\": (0x70000004, 8, \"RW\", 0x0),"));
        let (c0, _) = emit_sw_views(&RegDb::new(), &cfg()).unwrap();
        assert!(c0.contains("#ifndef MYBLK_REGS_H") && c0.contains("MYBLK_ID_ADDR 0x70000000"));
    }
}
