// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::Command;

fn project() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/pipeline");
    std::fs::create_dir(dir.path().join("rtl")).unwrap();
    for f in ["chipkit.toml", "soc.map", "pads.csv"] {
        std::fs::copy(src.join(f), dir.path().join(f)).unwrap();
    }
    for f in std::fs::read_dir(src.join("rtl")).unwrap() {
        let f = f.unwrap();
        std::fs::copy(f.path(), dir.path().join("rtl").join(f.file_name())).unwrap();
    }
    dir
}

fn chipkit(dir: &Path, args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_chipkit"))
        .args(args)
        .current_dir(dir)
        .env_remove("CHIPKIT_CONFIG")
        .output()
        .unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn rerunning_update_changes_nothing() {
    let dir = project();
    assert_eq!(chipkit(dir.path(), &["update"]).0, 0);
    let before = std::fs::read(dir.path().join("regs.csv")).unwrap();
    let (code, out, _) = chipkit(dir.path(), &["update"]);
    assert_eq!(code, 0);
    assert!(out.contains("no changes"), "{out}");
    assert_eq!(std::fs::read(dir.path().join("regs.csv")).unwrap(), before);
}

#[test]
fn update_conflict_leaves_database_untouched() {
    let dir = project();
    assert_eq!(chipkit(dir.path(), &["update"]).0, 0);
    let before = std::fs::read(dir.path().join("regs.csv")).unwrap();
    std::fs::write(
        dir.path().join("rtl/copy.sv"),
        "module copy (input logic [7:0] cfg_gain);\nendmodule\n",
    )
    .unwrap();
    let (code, _, err) = chipkit(dir.path(), &["update"]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("cfg_gain"), "{err}");
    assert_eq!(std::fs::read(dir.path().join("regs.csv")).unwrap(), before);
}

#[test]
fn invalid_database_writes_nothing() {
    let dir = project();
    assert_eq!(chipkit(dir.path(), &["update"]).0, 0);
    let csv = std::fs::read_to_string(dir.path().join("regs.csv")).unwrap();
    // give the second register the first one's offset
    let mut rows: Vec<Vec<String>> = csv
        .lines()
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    let col = rows[0].iter().position(|c| c == "offset").unwrap();
    rows[2][col] = rows[1][col].clone();
    let lines: Vec<String> = rows.iter().map(|r| r.join(",")).collect();
    std::fs::write(dir.path().join("regs.csv"), lines.join("\n") + "\n").unwrap();

    let (code, _, err) = chipkit(dir.path(), &["generate"]);
    assert_eq!(code, 3, "{err}");
    assert!(!dir.path().join("gen").exists());
}

#[test]
fn usage_errors_exit_2() {
    let dir = project();
    assert_eq!(chipkit(dir.path(), &["run-test", "--script", "missing.txt"]).0, 2);
    assert_eq!(chipkit(dir.path(), &["generate", "--bogus"]).0, 2);
    assert_eq!(chipkit(dir.path(), &["--config", "absent.toml", "lint", "rtl"]).0, 2);
}

#[test]
fn lint_violation_exits_1() {
    let dir = project();
    assert_eq!(chipkit(dir.path(), &["lint", "rtl"]).0, 0);
    std::fs::write(dir.path().join("rtl/bad.sv"), "module bad;\n  wire w;\nendmodule\n").unwrap();
    let (code, out, _) = chipkit(dir.path(), &["lint", "rtl"]);
    assert_eq!(code, 1);
    assert!(out.contains("W001"), "{out}");
}

#[test]
fn failing_run_test_exits_1() {
    let dir = project();
    assert_eq!(chipkit(dir.path(), &["update"]).0, 0);
    let (code, out, _) = chipkit(
        dir.path(),
        &["run-test", "--region-test", "sram", "--fault", "mask_data_bit:3:sram"],
    );
    assert_eq!(code, 1);
    assert!(out.contains("FAIL"), "{out}");
}
