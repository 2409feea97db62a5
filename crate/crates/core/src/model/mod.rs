//! Role hierarchy model: identifiers, the immutable [`RoleGraph`], the RHF
//! text format and structural validation.
//!
//! Dominance is supplied as the direct strict relation. The graph computes
//! its reflexive-transitive closure once at construction; every role
//! dominates itself, so a role's dominated set is never empty. A role's
//! effective permissions are the union of direct grants over its dominated
//! set.

mod bitset;
mod graph;
mod ids;
mod rhf;
mod validate;

pub use bitset::BitSet;
pub use graph::{PermissionRequest, RoleGraph, RoleGraphBuilder};
pub use ids::{PermissionId, RoleId};
pub use rhf::{check_hierarchy, parse_hierarchy, CheckOutcome};
pub use validate::{validate, Issue, Severity, ValidationReport};

use thiserror::Error;

fn at(line: &Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{}duplicate {what} `{id}`", at(.line))]
    DuplicateDeclaration {
        line: Option<usize>,
        what: &'static str,
        id: String,
    },
    #[error("{}undeclared {what} `{id}`", at(.line))]
    UnknownReference {
        line: Option<usize>,
        what: &'static str,
        id: String,
    },
    #[error("dominance cycle: {}", .path.join(" -> "))]
    Cycle { path: Vec<String> },
    #[error("invalid identifier `{0}` (expected [A-Za-z0-9_.-]+)")]
    InvalidId(String),
    #[error("unknown role `{0}`")]
    UnknownRole(String),
    #[error("unknown permission `{0}`")]
    UnknownPermission(String),
    #[error("permission request is empty")]
    EmptyRequest,
    #[error("no role grants all requested permissions")]
    NoCandidate,
}

impl HierarchyError {
    /// Stable machine-readable code, used in validation reports and HTTP bodies.
    pub fn code(&self) -> &'static str {
        match self {
            Self::Syntax { .. } => "SYNTAX",
            Self::DuplicateDeclaration { .. } => "DUPLICATE_DECLARATION",
            Self::UnknownReference { .. } => "UNKNOWN_REFERENCE",
            Self::Cycle { .. } => "CYCLE",
            Self::InvalidId(_) => "INVALID_ID",
            Self::UnknownRole(_) => "UNKNOWN_ROLE",
            Self::UnknownPermission(_) => "UNKNOWN_PERMISSION",
            Self::EmptyRequest => "EMPTY_REQUEST",
            Self::NoCandidate => "NO_CANDIDATE",
        }
    }

    pub(crate) fn with_line(self, line: usize) -> Self {
        match self {
            Self::DuplicateDeclaration { what, id, .. } => Self::DuplicateDeclaration {
                line: Some(line),
                what,
                id,
            },
            Self::UnknownReference { what, id, .. } => Self::UnknownReference {
                line: Some(line),
                what,
                id,
            },
            Self::InvalidId(id) => Self::Syntax {
                line,
                message: format!("invalid identifier `{id}` (expected [A-Za-z0-9_.-]+)"),
            },
            other => other,
        }
    }
}
