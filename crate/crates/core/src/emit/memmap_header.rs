// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use super::{banner, sanitize_upper};
use crate::memmap::MemoryMap;

/// Address decoder parameters: a base/size pair per region plus the count.
pub fn emit_memmap_header(map: &MemoryMap) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "// {}", banner(None));
    let _ = writeln!(o);
    let _ = writeln!(o, "`ifndef SOC_MEMMAP_SVH");
    let _ = writeln!(o, "`define SOC_MEMMAP_SVH");
    let _ = writeln!(o);
    let _ = writeln!(o, "localparam int unsigned SOC_REGION_COUNT = {};", map.regions().len());
    for r in map.regions() {
        let n = sanitize_upper(&r.name);
        let _ = writeln!(o);
        let _ = writeln!(o, "// {} ({})", r.name, r.kind);
        let _ = writeln!(o, "localparam logic [31:0] SOC_{n}_BASE = 32'h{:08x};", r.base);
        let _ = writeln!(o, "localparam logic [31:0] SOC_{n}_SIZE = 32'h{:08x};", r.size);
    }
    let _ = writeln!(o);
    let _ = writeln!(o, "`endif");
    o
}
