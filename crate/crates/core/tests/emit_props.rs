// SPDX-License-Identifier: Apache-2.0

use chipkit::busmodel::{build_soc, SocOptions};
use chipkit::emit::{
    diag_select_width, emit_csr_rtl, emit_diag_mux, emit_markdown, emit_selftest, emit_sw_views, render_targets,
    sanitize_upper, EmitConfig, EmitInputs, Target, BUS_PORTS, DIAG_SELECT_REGISTER,
};
use chipkit::memmap::{MemoryMap, Region, RegionKind};
use chipkit::regdb::{RegDb, RegEntry};
use chipkit::sv_scan::{lint, parse_modules, DiagCandidate, RuleSet, SourceFile};
use chipkit::uart_host::{run_script, Command};
use chipkit::Access;
use proptest::prelude::*;

const BASE: u32 = 0x7000_0000;
const SIZE: u32 = 0x1000;

#[derive(Debug, Clone)]
struct EntrySpec {
    rw: bool,
    width: u32,
    reset: u32,
    retired: bool,
}

fn specs(max: usize) -> impl Strategy<Value = Vec<EntrySpec>> {
    prop::collection::vec(
        (any::<bool>(), 1u32..=32, any::<u32>(), prop::bool::weighted(0.2)).prop_map(|(rw, width, reset, retired)| {
            EntrySpec {
                rw,
                width,
                reset,
                retired,
            }
        }),
        0..max,
    )
}

fn entry(i: usize, s: &EntrySpec) -> RegEntry {
    let (name, access) = if s.rw {
        (format!("cfg_r{i}"), Access::Rw)
    } else {
        (format!("sts_r{i}"), Access::Ro)
    };
    let e = RegEntry::new(name, s.width, access, "m").at(4 * (i as u32 + 1));
    let e = e.clone().with_reset(s.reset & e.mask());
    if s.retired {
        e.retired()
    } else {
        e
    }
}

fn db_of(specs: &[EntrySpec]) -> RegDb {
    RegDb::from_entries(specs.iter().enumerate().map(|(i, s)| entry(i, s)))
}

fn cfg() -> EmitConfig {
    EmitConfig::new("blk", BASE, SIZE)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn rendering_is_deterministic(specs in specs(40)) {
        let db = db_of(&specs);
        let map = MemoryMap::new(vec![Region::new("blk", RegionKind::Csr, BASE, SIZE)]).unwrap();
        let mut c = cfg();
        c.targets = Target::ALL.into_iter().filter(|t| !matches!(t, Target::Diag | Target::Pads)).collect();
        let inputs = EmitInputs { db: Some(&db), map: Some(&map), ..Default::default() };
        let a = render_targets(&c, &inputs).unwrap();
        let b = render_targets(&c, &inputs).unwrap();
        prop_assert_eq!(&a, &b);
        // a rebuilt but equal database renders identically
        let rebuilt = db_of(&specs);
        prop_assert_eq!(render_targets(&c, &EmitInputs { db: Some(&rebuilt), ..inputs }).unwrap(), a);
    }

    #[test]
    fn views_agree_on_addresses(specs in specs(40)) {
        let db = db_of(&specs);
        let c = cfg();
        let rtl = emit_csr_rtl(&db, &c).unwrap();
        let md = emit_markdown(&db, &c).unwrap();
        let (hdr, py) = emit_sw_views(&db, &c).unwrap();
        let script = emit_selftest(&db, &c).unwrap();
        for e in db.active() {
            let addr = BASE + e.offset.unwrap();
            let a = format!("0x{addr:08x}");
            prop_assert!(rtl.contains(&format!("// {}: {a} ", e.name)), "rtl {}", &e.name);
            let lit = format!("12'h{:03x}: csr_rdata = {}_rd;", e.offset.unwrap(), e.name);
            prop_assert!(rtl.contains(&lit), "rtl mux {}", &e.name);
            prop_assert!(md.contains(&format!("| {} | {a} | {} |", e.name, e.width_bits)), "md {}", &e.name);
            let def = format!("#define BLK_{}_ADDR {a}\n", sanitize_upper(&e.name));
            prop_assert!(hdr.contains(&def), "c {}", &e.name);
            prop_assert!(py.contains(&format!("\"{}\": ({a}, {},", e.name, e.width_bits)), "py {}", &e.name);
            prop_assert!(script.steps.iter().any(|s| s.command == Command::Read(addr)), "selftest {}", &e.name);
        }
        for e in db.retired() {
            prop_assert!(!rtl.contains(&format!("csr_rdata = {}_rd;", e.name)), "rtl {}", &e.name);
            prop_assert!(!hdr.contains(&format!("BLK_{}_ADDR", sanitize_upper(&e.name))), "c {}", &e.name);
        }
    }

    #[test]
    fn selftest_passes_on_the_model(specs in specs(24)) {
        let db = db_of(&specs);
        let script = emit_selftest(&db, &cfg()).unwrap();
        let map = MemoryMap::new(vec![Region::new("blk", RegionKind::Csr, BASE, SIZE)]).unwrap();
        let mut soc = build_soc(&map, &[("blk".into(), db)], SocOptions::default()).unwrap();
        let report = run_script(&mut soc, &script, false);
        prop_assert!(report.success(), "{}", report);
    }

    #[test]
    fn csr_rtl_reparses_lint_clean(specs in specs(40)) {
        let db = db_of(&specs);
        let src = SourceFile::new("blk_csr.sv", emit_csr_rtl(&db, &cfg()).unwrap());
        let parsed = parse_modules(&src).unwrap();
        prop_assert_eq!(parsed.modules.len(), 1);
        let m = &parsed.modules[0];
        prop_assert_eq!(m.ports.len(), BUS_PORTS.len() + db.active().count());
        for e in db.active() {
            prop_assert_eq!(m.port(&e.name).and_then(|p| p.width_bits()), Some(e.width_bits));
        }
        prop_assert_eq!(lint(&src, &RuleSet::default()), vec![]);
    }

    #[test]
    fn diag_mux_reparses_lint_clean(n in 1usize..40, pins in 1u32..5) {
        let diags: Vec<DiagCandidate> = (0..n)
            .map(|i| DiagCandidate { name: format!("diag_s{i}"), origin_module: "m".into() })
            .collect();
        let width = diag_select_width(n, pins);
        prop_assume!(width <= 32);
        let db = RegDb::from_entries([RegEntry::new(DIAG_SELECT_REGISTER, width, Access::Rw, "chipkit").at(4)]);
        let src = SourceFile::new("blk_diag_mux.sv", emit_diag_mux(&diags, pins, &db, &cfg()).unwrap());
        let parsed = parse_modules(&src).unwrap();
        prop_assert_eq!(parsed.modules.len(), 1);
        let m = &parsed.modules[0];
        prop_assert_eq!(m.port(DIAG_SELECT_REGISTER).and_then(|p| p.width_bits()), Some(width));
        prop_assert_eq!(m.port("sig_in").and_then(|p| p.width_bits()), Some(n as u32));
        prop_assert_eq!(m.port("dbg_pins").and_then(|p| p.width_bits()), Some(pins));
        prop_assert_eq!(lint(&src, &RuleSet::default()), vec![]);
    }

    #[test]
    fn rtl_grows_with_every_active_register(specs in specs(30)) {
        let mut last = 0;
        for n in 0..=specs.len() {
            let active: Vec<EntrySpec> = specs[..n].iter().map(|s| EntrySpec { retired: false, ..s.clone() }).collect();
            let lines = emit_csr_rtl(&db_of(&active), &cfg()).unwrap().lines().count();
            prop_assert!(lines > last || n == 0, "{} entries gave {} lines after {}", n, lines, last);
            last = lines;
        }
    }
}
