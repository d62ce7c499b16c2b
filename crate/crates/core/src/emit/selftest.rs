// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use super::{active, banner, check_inputs, EmitConfig, EmitError};
use crate::regdb::{RegDb, ID_OFFSET};
use crate::script::TestScript;
use crate::uart_host::{format_read, Command, RESPONSE_OK};
use crate::Access;

/// Bus-level self-test of the generated CSR block.
///
/// RO registers are expected to hold their reset value, which is what the
/// block presents until the design drives the status input.
pub fn emit_selftest(db: &RegDb, cfg: &EmitConfig) -> Result<TestScript, EmitError> {
    check_inputs(db, cfg)?;
    let mut s = TestScript::new();
    s.push(
        Command::Read(cfg.address(ID_OFFSET)),
        format_read(db.content_hash()),
        "ID register holds the database hash",
    );
    let regs = active(db);
    for e in regs.iter().filter(|e| e.access == Access::Rw) {
        let a = cfg.address(e.offset.expect("validated"));
        let mask = e.mask();
        s.push(
            Command::Read(a),
            format_read(e.reset_value),
            format!("{} reset value", e.name),
        );
        for j in 0..e.width_bits {
            s.push(
                Command::Write(a, 1 << j),
                RESPONSE_OK,
                format!("{} walking one, bit {j}", e.name),
            );
            s.push(Command::Read(a), format_read(1 << j), "");
        }
        s.push(Command::Write(a, mask), RESPONSE_OK, format!("{} all ones", e.name));
        s.push(Command::Read(a), format_read(mask), "");
        s.push(Command::Write(a, 0), RESPONSE_OK, format!("{} zero", e.name));
        s.push(Command::Read(a), format_read(0), "");
    }
    for e in regs.iter().filter(|e| e.access == Access::Ro) {
        let a = cfg.address(e.offset.expect("validated"));
        s.push(
            Command::Read(a),
            format_read(e.reset_value),
            format!("{} initial value", e.name),
        );
        s.push(
            Command::Write(a, !e.reset_value & e.mask()),
            RESPONSE_OK,
            format!("{} ignores writes", e.name),
        );
        s.push(Command::Read(a), format_read(e.reset_value), "");
    }
    let used: BTreeSet<u32> = db.entries().iter().filter_map(|e| e.offset).collect();
    if let Some(free) = (1..cfg.region_size / 4).map(|w| w * 4).find(|o| !used.contains(o)) {
        s.push(
            Command::Read(cfg.address(free)),
            format_read(cfg.unmapped_value),
            "unassigned offset reads the default value",
        );
    }
    Ok(s)
}

/// Script file contents with the generated-file banner.
pub(crate) fn render(script: &TestScript, db_hash: u32) -> String {
    format!("# {}\n{}", banner(Some(db_hash)), script.to_text())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regdb::RegEntry;

    #[test]
    fn walking_ones_mask() {
        let cfg = EmitConfig::new("b", 0x5000_0000, 0x100);
        let db = RegDb::from_entries([RegEntry::new("cfg_a", 4, Access::Rw, "m").at(4)]);
        let s = emit_selftest(&db, &cfg).unwrap();
        let text = s.to_text();
        assert!(text.contains("> W 0x50000004 0x0000000f\n< OK\n> R 0x50000004\n< 0x0000000f\n"));
        assert_eq!(s.steps.last().unwrap().command, Command::Read(0x5000_0008));
    }

    #[test]
    fn empty_db() {
        let cfg = EmitConfig::new("b", 0x5000_0000, 4);
        let s = emit_selftest(&RegDb::new(), &cfg).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.steps[0].command, Command::Read(0x5000_0000));
    }

    #[test]
    fn ro_expects_unchanged() {
        let cfg = EmitConfig::new("b", 0, 0x100);
        let db = RegDb::from_entries([RegEntry::new("sts_a", 8, Access::Ro, "m").at(4).with_reset(0x12)]);
        let s = emit_selftest(&db, &cfg).unwrap();
        assert_eq!(s.steps[2].command, Command::Write(4, 0xed));
        assert_eq!(s.steps[3].expected, "0x00000012");
    }

    #[test]
    fn rendered_text_parses() {
        let cfg = EmitConfig::new("b", 0, 0x100);
        let db = RegDb::from_entries([RegEntry::new("cfg_a", 2, Access::Rw, "m").at(4)]);
        let s = emit_selftest(&db, &cfg).unwrap();
        assert_eq!(
            TestScript::parse(&render(&s, db.content_hash()))
                .unwrap()
                .command_lines(),
            s.command_lines()
        );
    }
}
