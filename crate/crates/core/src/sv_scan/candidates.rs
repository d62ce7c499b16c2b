// SPDX-License-Identifier: Apache-2.0

//! Naming-convention driven selection of CSR and DIAG signals.

use std::fmt;
use std::path::PathBuf;

use super::types::{Direction, ModuleDecl, Port};
use crate::Access;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchMode {
    #[default]
    Prefix,
    Postfix,
}

impl std::str::FromStr for MatchMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prefix" => Ok(MatchMode::Prefix),
            "postfix" | "suffix" => Ok(MatchMode::Postfix),
            other => Err(format!("unknown match mode `{other}` (expected prefix or postfix)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid naming convention: {0}")]
pub struct ConventionError(String);

/// Affixes that mark control, status and diagnostic ports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamingConvention {
    control: String,
    status: String,
    diag: String,
    mode: MatchMode,
}

impl Default for NamingConvention {
    fn default() -> Self {
        Self {
            control: "cfg_".into(),
            status: "sts_".into(),
            diag: "diag_".into(),
            mode: MatchMode::Prefix,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Control,
    Status,
    Diag,
}

impl NamingConvention {
    pub fn new(
        control: impl Into<String>,
        status: impl Into<String>,
        diag: impl Into<String>,
        mode: MatchMode,
    ) -> Result<Self, ConventionError> {
        let conv = Self {
            control: control.into(),
            status: status.into(),
            diag: diag.into(),
            mode,
        };
        let affixes = [&conv.control, &conv.status, &conv.diag];
        if affixes.iter().any(|a| a.is_empty()) {
            return Err(ConventionError("affixes must be non-empty".into()));
        }
        if conv.control == conv.status || conv.control == conv.diag || conv.status == conv.diag {
            return Err(ConventionError("affixes must be pairwise distinct".into()));
        }
        Ok(conv)
    }

    pub fn control_prefix(&self) -> &str {
        &self.control
    }

    pub fn status_prefix(&self) -> &str {
        &self.status
    }

    pub fn diag_prefix(&self) -> &str {
        &self.diag
    }

    pub fn match_mode(&self) -> MatchMode {
        self.mode
    }

    fn matches(&self, name: &str, affix: &str) -> bool {
        name.len() > affix.len()
            && match self.mode {
                MatchMode::Prefix => name.starts_with(affix),
                MatchMode::Postfix => name.ends_with(affix),
            }
    }

    /// All roles whose affix `name` carries.
    fn roles(&self, name: &str) -> Vec<Role> {
        [
            (Role::Control, &self.control),
            (Role::Status, &self.status),
            (Role::Diag, &self.diag),
        ]
        .into_iter()
        .filter(|(_, affix)| self.matches(name, affix))
        .map(|(r, _)| r)
        .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CsrCandidate {
    pub name: String,
    pub width_bits: u32,
    pub access: Access,
    pub origin_module: String,
    pub source_line: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiagCandidate {
    pub name: String,
    pub origin_module: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CandidateIssueKind {
    WidthExceeded { width_bits: u32, limit: u32 },
    DirectionMismatch { direction: Direction },
    UnresolvedWidth,
    AmbiguousAffix,
}

/// A matching port that was not turned into a candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateIssue {
    pub kind: CandidateIssueKind,
    pub module: String,
    pub port: String,
    pub path: PathBuf,
    pub line: u32,
}

impl fmt::Display for CandidateIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {}.{}: ",
            self.path.display(),
            self.line,
            self.module,
            self.port
        )?;
        match &self.kind {
            CandidateIssueKind::WidthExceeded { width_bits, limit } => {
                write!(f, "width {width_bits} exceeds the {limit}-bit limit")
            }
            CandidateIssueKind::DirectionMismatch { direction } => {
                write!(f, "naming convention does not allow an {direction} port")
            }
            CandidateIssueKind::UnresolvedWidth => f.write_str("width is not a literal range"),
            CandidateIssueKind::AmbiguousAffix => f.write_str("name matches more than one naming convention"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extraction<T> {
    pub candidates: Vec<T>,
    pub issues: Vec<CandidateIssue>,
}

impl<T> Default for Extraction<T> {
    fn default() -> Self {
        Self {
            candidates: Vec::new(),
            issues: Vec::new(),
        }
    }
}

fn issue(m: &ModuleDecl, p: &Port, kind: CandidateIssueKind) -> CandidateIssue {
    CandidateIssue {
        kind,
        module: m.name.clone(),
        port: p.name.clone(),
        path: m.path.clone(),
        line: p.line,
    }
}

/// Control inputs become RW candidates and status outputs RO candidates,
/// in port declaration order.
pub fn extract_csr_candidates(m: &ModuleDecl, conv: &NamingConvention) -> Extraction<CsrCandidate> {
    let mut out = Extraction::default();
    for p in &m.ports {
        let roles = conv.roles(&p.name);
        let access = match roles.as_slice() {
            [Role::Control] => Access::Rw,
            [Role::Status] => Access::Ro,
            [] | [Role::Diag] => continue,
            _ => {
                out.issues.push(issue(m, p, CandidateIssueKind::AmbiguousAffix));
                continue;
            }
        };
        let expected = match access {
            Access::Rw => Direction::Input,
            Access::Ro => Direction::Output,
        };
        if p.direction != expected {
            out.issues.push(issue(
                m,
                p,
                CandidateIssueKind::DirectionMismatch { direction: p.direction },
            ));
            continue;
        }
        let Some(width_bits) = p.width_bits() else {
            out.issues.push(issue(m, p, CandidateIssueKind::UnresolvedWidth));
            continue;
        };
        if width_bits > 32 {
            out.issues
                .push(issue(m, p, CandidateIssueKind::WidthExceeded { width_bits, limit: 32 }));
            continue;
        }
        out.candidates.push(CsrCandidate {
            name: p.name.clone(),
            width_bits,
            access,
            origin_module: m.name.clone(),
            source_line: p.line,
        });
    }
    out
}

/// Single-bit outputs carrying the diag affix, in declaration order.
pub fn extract_diag_candidates(m: &ModuleDecl, conv: &NamingConvention) -> Extraction<DiagCandidate> {
    let mut out = Extraction::default();
    for p in &m.ports {
        // ambiguous names are reported by extract_csr_candidates
        if conv.roles(&p.name) != [Role::Diag] {
            continue;
        }
        if p.direction != Direction::Output {
            out.issues.push(issue(
                m,
                p,
                CandidateIssueKind::DirectionMismatch { direction: p.direction },
            ));
            continue;
        }
        match p.width_bits() {
            Some(1) => out.candidates.push(DiagCandidate {
                name: p.name.clone(),
                origin_module: m.name.clone(),
            }),
            Some(w) => out.issues.push(issue(
                m,
                p,
                CandidateIssueKind::WidthExceeded {
                    width_bits: w,
                    limit: 1,
                },
            )),
            None => out.issues.push(issue(m, p, CandidateIssueKind::UnresolvedWidth)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sv_scan::{parse_modules, SourceFile};

    fn module(src: &str) -> ModuleDecl {
        parse_modules(&SourceFile::new("m.sv", src)).unwrap().modules.remove(0)
    }

    #[test]
    fn convention_validation() {
        assert!(NamingConvention::new("", "s_", "d_", MatchMode::Prefix).is_err());
        assert!(NamingConvention::new("x_", "x_", "d_", MatchMode::Prefix).is_err());
        assert!(NamingConvention::new("c_", "s_", "d_", MatchMode::Postfix).is_ok());
    }

    #[test]
    fn csr_rules() {
        let m = module(
            "module dsp_core (
               input  logic [7:0]  cfg_gain,
               output logic        sts_done,
               input  logic [39:0] cfg_wide,
               output logic        cfg_wrong_way,
               input  logic        sts_wrong_way,
               input  logic        clk
             ); endmodule",
        );
        let ex = extract_csr_candidates(&m, &NamingConvention::default());
        let got: Vec<_> = ex
            .candidates
            .iter()
            .map(|c| (c.name.as_str(), c.width_bits, c.access))
            .collect();
        assert_eq!(got, vec![("cfg_gain", 8, Access::Rw), ("sts_done", 1, Access::Ro)]);
        assert_eq!(ex.candidates[0].origin_module, "dsp_core");
        assert_eq!(ex.candidates[0].source_line, 2);
        let kinds: Vec<_> = ex.issues.iter().map(|i| (i.port.as_str(), i.kind.clone())).collect();
        assert_eq!(
            kinds,
            vec![
                (
                    "cfg_wide",
                    CandidateIssueKind::WidthExceeded {
                        width_bits: 40,
                        limit: 32
                    }
                ),
                (
                    "cfg_wrong_way",
                    CandidateIssueKind::DirectionMismatch {
                        direction: Direction::Output
                    }
                ),
                (
                    "sts_wrong_way",
                    CandidateIssueKind::DirectionMismatch {
                        direction: Direction::Input
                    }
                ),
            ]
        );
        assert_eq!(ex.issues[0].line, 4);
    }

    #[test]
    fn postfix_mode() {
        let m = module("module x (input logic [3:0] gain_c, output logic done_s, output logic idle_d); endmodule");
        let conv = NamingConvention::new("_c", "_s", "_d", MatchMode::Postfix).unwrap();
        let names: Vec<_> = extract_csr_candidates(&m, &conv)
            .candidates
            .into_iter()
            .map(|c| c.name)
            .collect();
        assert_eq!(names, vec!["gain_c", "done_s"]);
        assert_eq!(extract_diag_candidates(&m, &conv).candidates.len(), 1);
    }

    #[test]
    fn parameterized_ports_are_not_candidates() {
        let m = module("module p (input logic [W-1:0] cfg_p); endmodule");
        let ex = extract_csr_candidates(&m, &NamingConvention::default());
        assert!(ex.candidates.is_empty());
        assert_eq!(ex.issues[0].kind, CandidateIssueKind::UnresolvedWidth);
    }

    #[test]
    fn diag_rules() {
        let m = module(
            "module f (
               output logic diag_fsm_idle,
               input  logic clk,
               output logic [3:0] q,
               output logic diag_b,
               output logic [1:0] diag_wide,
               input  logic cfg_en,
               output logic diag_a
             ); endmodule",
        );
        let ex = extract_diag_candidates(&m, &NamingConvention::default());
        let names: Vec<_> = ex.candidates.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(names, vec!["diag_fsm_idle", "diag_b", "diag_a"]);
        assert_eq!(ex.issues.len(), 1);
        assert_eq!(
            ex.issues[0].kind,
            CandidateIssueKind::WidthExceeded {
                width_bits: 2,
                limit: 1
            }
        );

        let none = module("module g (input logic a, output logic b); endmodule");
        assert!(extract_diag_candidates(&none, &NamingConvention::default())
            .candidates
            .is_empty());
    }

    #[test]
    fn ambiguous_affix() {
        let conv = NamingConvention::new("c_", "c_s_", "d_", MatchMode::Prefix).unwrap();
        let m = module("module a (input logic c_s_x); endmodule");
        let ex = extract_csr_candidates(&m, &conv);
        assert!(ex.candidates.is_empty());
        assert_eq!(ex.issues[0].kind, CandidateIssueKind::AmbiguousAffix);
    }
}
