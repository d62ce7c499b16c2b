// SPDX-License-Identifier: Apache-2.0

//! Command-line front end: `chipkit update | generate | lint | sim | run-test`.
//!
//! Exit codes: 0 success, 1 check failures (lint findings, failing test
//! steps), 2 I/O, usage or parse errors, 3 data or validation errors.

pub mod args;
mod commands;
pub mod config;
mod fsutil;

use std::io::{BufRead, Write};

pub use args::Cli;
pub use commands::{generate, lint, run_test, sim, update};
pub use config::ProjectConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success = 0,
    CheckFailed = 1,
    Usage = 2,
    Data = 3,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub status: Status,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            status: Status::Usage,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self {
            status: Status::Data,
            message: message.into(),
        }
    }
}

/// Streams a command talks to. `input` is only read by `sim`.
pub struct Io<'a> {
    pub input: &'a mut dyn BufRead,
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli, io: &mut Io<'_>) -> u8 {
    let result = ProjectConfig::discover(cli.config.as_deref())
        .map_err(|e| CliError::usage(e.to_string()))
        .and_then(|cfg| match cli.command {
            args::Command::Update(a) => update(&cfg, &a, io),
            args::Command::Generate(a) => generate(&cfg, &a, io),
            args::Command::Lint(a) => lint(&cfg, &a, io),
            args::Command::Sim(a) => sim(&cfg, &a, io),
            args::Command::RunTest(a) => run_test(&cfg, &a, io),
        });
    match result {
        Ok(status) => status as u8,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            e.status as u8
        }
    }
}
