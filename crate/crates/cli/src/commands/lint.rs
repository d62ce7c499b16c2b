// SPDX-License-Identifier: Apache-2.0

use chipkit::sv_scan::{lint_all, RuleId, RuleSet, SourceFile};

use super::rtl_paths;
use crate::args::LintArgs;
use crate::fsutil::collect_rtl;
use crate::{CliError, Io, ProjectConfig, Status};

pub fn lint(cfg: &ProjectConfig, a: &LintArgs, io: &mut Io<'_>) -> Result<Status, CliError> {
    let paths = rtl_paths(&a.paths, cfg)?;
    let mut rules = RuleSet::default();
    for r in cfg.lint.disabled.iter().chain(&a.disable) {
        let id: RuleId = r.parse().map_err(CliError::usage)?;
        rules.enabled.remove(&id);
    }
    rules.enforce_ff_macro = !a.allow_always_ff && cfg.lint.enforce_ff_macro.unwrap_or(true);

    let files = collect_rtl(&paths).map_err(|e| CliError::usage(format!("collecting RTL: {e}")))?;
    let mut sources = Vec::new();
    for f in &files {
        sources.push(SourceFile::read(f).map_err(|e| CliError::usage(format!("{}: {e}", f.display())))?);
    }
    let violations = lint_all(&sources, &rules);
    for v in &violations {
        let _ = writeln!(io.out, "{v}");
    }
    let _ = writeln!(io.err, "{} violation(s) in {} file(s)", violations.len(), sources.len());
    Ok(if violations.is_empty() {
        Status::Success
    } else {
        Status::CheckFailed
    })
}
