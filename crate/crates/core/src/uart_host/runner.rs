// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use super::protocol::{execute, Command};
use crate::busmodel::SocModel;
use crate::script::TestScript;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    /// Zero-based step index.
    pub index: usize,
    pub command: Command,
    pub expected: String,
    pub actual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TestReport {
    pub total: usize,
    pub executed: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
}

impl TestReport {
    pub fn success(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for TestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for fail in &self.failures {
            writeln!(
                f,
                "FAIL step {}: {} expected `{}` got `{}`",
                fail.index + 1,
                fail.command,
                fail.expected,
                fail.actual
            )?;
        }
        writeln!(
            f,
            "{} passed, {} failed, {} not run ({} total)",
            self.passed,
            self.failures.len(),
            self.total - self.executed,
            self.total
        )
    }
}

/// Replays a script, comparing each response with the expected line.
pub fn run_script(soc: &mut SocModel, script: &TestScript, stop_on_first_failure: bool) -> TestReport {
    let mut report = TestReport {
        total: script.len(),
        ..Default::default()
    };
    for (index, step) in script.steps.iter().enumerate() {
        let actual = execute(soc, step.command);
        report.executed += 1;
        if actual == step.expected {
            report.passed += 1;
        } else {
            report.failures.push(Failure {
                index,
                command: step.command,
                expected: step.expected.clone(),
                actual,
            });
            if stop_on_first_failure {
                break;
            }
        }
    }
    report
}
