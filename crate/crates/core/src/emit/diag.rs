// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use super::{banner, EmitConfig, EmitError};
use crate::regdb::RegDb;
use crate::sv_scan::DiagCandidate;
use crate::Access;

/// Control register holding the per-pin select fields.
pub const DIAG_SELECT_REGISTER: &str = "cfg_diag_sel";

fn select_bits(n_signals: usize) -> u32 {
    if n_signals <= 1 {
        0
    } else {
        usize::BITS - (n_signals - 1).leading_zeros()
    }
}

/// Width of the select register for `n_signals` sources and `n_pins` pins:
/// ceil(log2(n_signals)) bits per pin, never less than 1.
pub fn diag_select_width(n_signals: usize, n_pins: u32) -> u32 {
    (select_bits(n_signals) * n_pins).max(1)
}

fn vec_range(n: usize) -> String {
    if n == 1 {
        String::new()
    } else {
        format!("[{}:0]", n - 1)
    }
}

fn bit(name: &str, n: usize, i: usize) -> String {
    if n == 1 {
        name.to_string()
    } else {
        format!("{name}[{i}]")
    }
}

/// Multiplexes DIAG signals onto `n_pins` outputs. Signal `i` of `diags`
/// drives `sig_in[i]`; select values past the last signal yield 0.
pub fn emit_diag_mux(diags: &[DiagCandidate], n_pins: u32, db: &RegDb, cfg: &EmitConfig) -> Result<String, EmitError> {
    cfg.validate()?;
    if diags.is_empty() {
        return Err(EmitError::Input("no DIAG signals to multiplex".into()));
    }
    if n_pins == 0 {
        return Err(EmitError::Config("at least one DIAG pin is required".into()));
    }
    let n = diags.len();
    let per_pin = select_bits(n);
    let needed = diag_select_width(n, n_pins);
    if needed > 32 {
        return Err(EmitError::Config(format!(
            "{n_pins} pins x {per_pin} select bits exceed one 32-bit register"
        )));
    }
    let sel = db
        .entry(DIAG_SELECT_REGISTER)
        .filter(|e| e.is_active() && e.access == Access::Rw)
        .ok_or_else(|| EmitError::Config(format!("database has no active RW `{DIAG_SELECT_REGISTER}` register")))?;
    if sel.width_bits < needed {
        return Err(EmitError::Config(format!(
            "`{DIAG_SELECT_REGISTER}` is {} bits; {needed} needed",
            sel.width_bits
        )));
    }

    let pins = n_pins as usize;
    let mut o = String::new();
    let _ = writeln!(o, "// {}", banner(Some(db.content_hash())));
    let _ = writeln!(o, "//");
    let _ = writeln!(o, "// sig_in index: signal (origin module)");
    for (i, d) in diags.iter().enumerate() {
        let _ = writeln!(o, "//   {i}: {} ({})", d.name, d.origin_module);
    }
    let _ = writeln!(o);
    let _ = writeln!(o, "module {}_diag_mux (", cfg.block_name);
    let _ = writeln!(
        o,
        "  input  logic {:<7} {DIAG_SELECT_REGISTER},",
        vec_range(sel.width_bits as usize)
    );
    let _ = writeln!(o, "  input  logic {:<7} sig_in,", vec_range(n));
    let _ = writeln!(o, "  output logic {:<7} dbg_pins", vec_range(pins));
    let _ = writeln!(o, ");");
    let _ = writeln!(o);
    for p in 0..pins {
        let out = bit("dbg_pins", pins, p);
        if per_pin == 0 {
            let _ = writeln!(o, "  always_comb {out} = sig_in;");
            continue;
        }
        let lo = p as u32 * per_pin;
        let field = if sel.width_bits == 1 {
            DIAG_SELECT_REGISTER.to_string()
        } else {
            format!("{DIAG_SELECT_REGISTER}[{}:{lo}]", lo + per_pin - 1)
        };
        let _ = writeln!(o, "  // pin {p}: select bits [{}:{lo}]", lo + per_pin - 1);
        let _ = writeln!(o, "  always_comb begin");
        let _ = writeln!(o, "    case ({field})");
        for i in 0..n {
            let _ = writeln!(o, "      {per_pin}'d{i}: {out} = {};", bit("sig_in", n, i));
        }
        let _ = writeln!(o, "      default: {out} = 1'b0;");
        let _ = writeln!(o, "    endcase");
        let _ = writeln!(o, "  end");
        let _ = writeln!(o);
    }
    if per_pin == 0 {
        let _ = writeln!(o);
    }
    let _ = writeln!(o, "endmodule");
    Ok(o)
}
