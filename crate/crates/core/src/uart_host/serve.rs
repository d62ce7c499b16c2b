// SPDX-License-Identifier: Apache-2.0

use std::io::{self, BufRead, BufReader, Write};
use std::net::{TcpListener, TcpStream};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{mpsc, Arc};
use std::thread;
use std::time::Duration;

use super::protocol::{respond, Command};
use crate::busmodel::SocModel;

/// Sent to a client that connects while another session is open.
pub const BUSY_RESPONSE: &str = "ERR BUSY";

#[derive(Debug, Clone, Default)]
pub struct ServeOptions {
    /// Written before each command is read. Empty means no prompt.
    pub prompt: String,
    /// Keep every (line, response) pair in the summary.
    pub record: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SessionSummary {
    pub lines: usize,
    pub responses: usize,
    pub parse_errors: usize,
    pub quit: bool,
    pub transcript: Vec<(String, String)>,
}

/// Serves one session until `Q` or end of input.
pub fn serve<R: BufRead, W: Write>(
    soc: &mut SocModel,
    mut input: R,
    mut output: W,
    opts: &ServeOptions,
) -> io::Result<SessionSummary> {
    let mut summary = SessionSummary::default();
    let mut buf = Vec::new();
    loop {
        if !opts.prompt.is_empty() {
            output.write_all(opts.prompt.as_bytes())?;
            output.flush()?;
        }
        buf.clear();
        if input.read_until(b'\n', &mut buf)? == 0 {
            break;
        }
        summary.lines += 1;
        let line = String::from_utf8_lossy(&buf);
        let line = line.trim_end_matches(['\n', '\r']);
        let Some((cmd, response)) = respond(soc, line) else {
            continue;
        };
        writeln!(output, "{response}")?;
        output.flush()?;
        summary.responses += 1;
        if cmd.is_none() {
            summary.parse_errors += 1;
        }
        if opts.record {
            summary.transcript.push((line.to_string(), response));
        }
        if cmd == Some(Command::Quit) {
            summary.quit = true;
            break;
        }
    }
    Ok(summary)
}

#[derive(Debug, Clone, Default)]
pub struct TcpOptions {
    pub serve: ServeOptions,
    /// Stop after this many completed sessions; `None` serves forever.
    pub max_sessions: Option<usize>,
}

/// Serves sessions one at a time over TCP. Connections arriving while a
/// session is open receive [`BUSY_RESPONSE`] and are closed.
pub fn serve_tcp(soc: &mut SocModel, listener: TcpListener, opts: &TcpOptions) -> io::Result<Vec<SessionSummary>> {
    listener.set_nonblocking(true)?;
    let busy = Arc::new(AtomicBool::new(false));
    let stop = Arc::new(AtomicBool::new(false));
    let (tx, rx) = mpsc::channel::<TcpStream>();

    let acceptor = {
        let busy = Arc::clone(&busy);
        let stop = Arc::clone(&stop);
        thread::spawn(move || -> io::Result<()> {
            while !stop.load(Ordering::SeqCst) {
                match listener.accept() {
                    Ok((mut stream, _)) => {
                        stream.set_nonblocking(false)?;
                        if busy
                            .compare_exchange(false, true, Ordering::SeqCst, Ordering::SeqCst)
                            .is_ok()
                        {
                            if tx.send(stream).is_err() {
                                break;
                            }
                        } else {
                            let _ = writeln!(stream, "{BUSY_RESPONSE}");
                        }
                    }
                    Err(e) if e.kind() == io::ErrorKind::WouldBlock => thread::sleep(Duration::from_millis(5)),
                    Err(e) => return Err(e),
                }
            }
            Ok(())
        })
    };

    let mut sessions = Vec::new();
    let result = loop {
        if opts.max_sessions.is_some_and(|m| sessions.len() >= m) {
            break Ok(());
        }
        let stream = match rx.recv() {
            Ok(s) => s,
            Err(_) => break Ok(()),
        };
        let reader = match stream.try_clone() {
            Ok(r) => BufReader::new(r),
            Err(e) => break Err(e),
        };
        let outcome = serve(soc, reader, &stream, &opts.serve);
        busy.store(false, Ordering::SeqCst);
        match outcome {
            Ok(s) => sessions.push(s),
            // a dropped client ends its own session only
            Err(e) if matches!(e.kind(), io::ErrorKind::BrokenPipe | io::ErrorKind::ConnectionReset) => {
                sessions.push(SessionSummary::default())
            }
            Err(e) => break Err(e),
        }
    };
    stop.store(true, Ordering::SeqCst);
    drop(rx);
    let accepted = acceptor.join().unwrap_or(Ok(()));
    result.and(accepted).map(|_| sessions)
}
