// SPDX-License-Identifier: Apache-2.0

//! Line-oriented host protocol over a byte stream, served from a [`SocModel`].
//!
//! [`SocModel`]: crate::busmodel::SocModel

mod protocol;
mod runner;
mod serve;

pub use protocol::{
    execute, format_bus_error, format_parse_error, format_read, parse_command, respond, Command, ParseError, HELP_TEXT,
    RESPONSE_OK,
};
pub use runner::{run_script, Failure, TestReport};
pub use serve::{serve, serve_tcp, ServeOptions, SessionSummary, TcpOptions, BUSY_RESPONSE};
