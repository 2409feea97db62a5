use serde::{Deserialize, Serialize};

use super::{HierarchyError, RoleGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub location: Option<String>,
}

impl Issue {
    pub fn warning(code: &str, message: String, location: String) -> Self {
        Self {
            severity: Severity::Warning,
            code: code.to_string(),
            message,
            location: Some(location),
        }
    }

    pub fn from_error(err: &HierarchyError) -> Self {
        let location = match err {
            HierarchyError::Syntax { line, .. } => Some(*line),
            HierarchyError::DuplicateDeclaration { line, .. }
            | HierarchyError::UnknownReference { line, .. } => *line,
            _ => None,
        };
        Self {
            severity: Severity::Error,
            code: err.code().to_string(),
            message: err.to_string(),
            location: location.map(|l| format!("line {l}")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn from_issues(issues: Vec<Issue>) -> Self {
        Self {
            ok: issues.iter().all(|i| i.severity != Severity::Error),
            issues,
        }
    }

    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Issue> {
        self.issues
            .iter()
            .filter(|i| i.severity == Severity::Warning)
    }
}

/// Advisory checks on an already well-formed graph. Structural violations
/// cannot reach here (the builder refuses them), so every issue is a warning.
pub fn validate(graph: &RoleGraph) -> ValidationReport {
    let mut issues = Vec::new();
    for (i, role) in graph.roles().iter().enumerate() {
        if graph.effective_bits(i).is_empty() {
            issues.push(Issue::warning(
                "EMPTY_ROLE",
                format!("role `{role}` has no permissions"),
                format!("role {role}"),
            ));
        }
    }
    for (j, perm) in graph.permissions().iter().enumerate() {
        if !graph.is_granted_anywhere(j) {
            issues.push(Issue::warning(
                "UNUSED_PERMISSION",
                format!("permission `{perm}` is granted to no role"),
                format!("permission {perm}"),
            ));
        }
    }
    ValidationReport::from_issues(issues)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_hierarchy;

    #[test]
    fn clean_graph_has_no_issues() {
        let g = parse_hierarchy(
            "permission p1\npermission p2\npermission p3\nrole a\nrole b\nrole c\n\
             grant a p1\ngrant b p2\ngrant c p3\ndominates a b\n",
        )
        .unwrap();
        assert_eq!(
            validate(&g),
            ValidationReport {
                ok: true,
                issues: vec![]
            }
        );
    }

    #[test]
    fn unused_permission_is_a_warning() {
        let g = parse_hierarchy("permission p1\npermission p9\nrole a\ngrant a p1\n").unwrap();
        let report = validate(&g);
        assert!(report.ok);
        assert_eq!(report.issues.len(), 1);
        assert_eq!(report.issues[0].code, "UNUSED_PERMISSION");
        assert_eq!(report.issues[0].severity, Severity::Warning);
    }

    #[test]
    fn empty_role_is_a_warning() {
        let g = parse_hierarchy("permission p1\nrole a\nrole idle\ngrant a p1\n").unwrap();
        let report = validate(&g);
        assert!(report.ok);
        assert_eq!(report.warnings().count(), 1);
        assert_eq!(report.issues[0].code, "EMPTY_ROLE");
    }

    #[test]
    fn diamond_is_fine() {
        let g = parse_hierarchy(
            "permission p\nrole top\nrole l\nrole r\nrole bot\ngrant bot p\n\
             dominates top l\ndominates top r\ndominates l bot\ndominates r bot\n",
        )
        .unwrap();
        let report = validate(&g);
        assert!(report.ok);
        assert!(report.issues.is_empty());
    }
}
