// SPDX-License-Identifier: Apache-2.0

//! SystemVerilog scanning: module/port extraction, CSR and DIAG candidate
//! selection by naming convention, and coding-guideline lint.

mod candidates;
mod lexer;
mod lint;
mod parser;
mod source;
mod types;

pub use candidates::{
    extract_csr_candidates, extract_diag_candidates, CandidateIssue, CandidateIssueKind, ConventionError, CsrCandidate,
    DiagCandidate, Extraction, MatchMode, NamingConvention,
};
pub use lint::{lint, lint_all, LintViolation, RuleId, RuleSet};
pub use parser::{parse_all, parse_modules};
pub use source::SourceFile;
pub use types::*;
