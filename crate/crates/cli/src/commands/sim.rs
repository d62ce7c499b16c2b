// SPDX-License-Identifier: Apache-2.0

use std::net::TcpListener;

use chipkit::busmodel::gen_region_test;
use chipkit::script::TestScript;
use chipkit::uart_host::{run_script, serve, serve_tcp, ServeOptions, TcpOptions};

use super::{build_model, read_text};
use crate::args::{RunTestArgs, SimArgs};
use crate::{CliError, Io, ProjectConfig, Status};

pub fn sim(cfg: &ProjectConfig, a: &SimArgs, io: &mut Io<'_>) -> Result<Status, CliError> {
    let mut soc = build_model(cfg, &a.model)?;
    let opts = ServeOptions {
        prompt: a.prompt.clone(),
        record: false,
    };
    match a.listen.or(cfg.listen_port) {
        Some(port) => {
            let listener = TcpListener::bind(("127.0.0.1", port))
                .map_err(|e| CliError::usage(format!("cannot listen on port {port}: {e}")))?;
            if let Ok(addr) = listener.local_addr() {
                let _ = writeln!(io.err, "listening on {addr}");
            }
            let tcp = TcpOptions {
                serve: opts,
                max_sessions: a.sessions,
            };
            let sessions = serve_tcp(&mut soc, listener, &tcp).map_err(|e| CliError::usage(e.to_string()))?;
            let _ = writeln!(io.err, "{} session(s); {}", sessions.len(), soc.stats());
        }
        None => {
            let summary =
                serve(&mut soc, &mut *io.input, &mut *io.out, &opts).map_err(|e| CliError::usage(e.to_string()))?;
            let _ = writeln!(io.err, "{} response(s); {}", summary.responses, soc.stats());
        }
    }
    Ok(Status::Success)
}

pub fn run_test(cfg: &ProjectConfig, a: &RunTestArgs, io: &mut Io<'_>) -> Result<Status, CliError> {
    let mut soc = build_model(cfg, &a.model)?;
    let script = match (&a.script, &a.region_test) {
        (Some(path), _) => {
            TestScript::parse(&read_text(path)?).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?
        }
        (None, Some(region)) => gen_region_test(soc.map(), region).map_err(|e| CliError::data(e.to_string()))?,
        (None, None) => return Err(CliError::usage("pass --script or --region-test")),
    };
    let report = run_script(&mut soc, &script, !a.keep_going);
    let _ = write!(io.out, "{report}");
    Ok(if report.success() {
        Status::Success
    } else {
        Status::CheckFailed
    })
}
