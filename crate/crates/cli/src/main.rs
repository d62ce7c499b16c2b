// SPDX-License-Identifier: Apache-2.0

use std::io;
use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = chipkit_cli::Cli::parse();
    let stdin = io::stdin();
    let mut input = stdin.lock();
    let mut out = io::stdout();
    let mut err = io::stderr();
    let mut streams = chipkit_cli::Io {
        input: &mut input,
        out: &mut out,
        err: &mut err,
    };
    ExitCode::from(chipkit_cli::run(cli, &mut streams))
}
