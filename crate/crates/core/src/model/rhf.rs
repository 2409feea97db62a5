//! RHF, the line-based role hierarchy format.
//!
//! ```text
//! # comment
//! permission <id>
//! role <id>
//! grant <role-id> <perm-id>
//! dominates <senior-id> <junior-id>
//! danger <perm-id>
//! ```
//!
//! Names must be declared before use and may be declared once. The canonical
//! serializer writes the five directive classes in the order above, each
//! sorted lexicographically.

use std::fmt::Write as _;

use super::validate::{validate, Issue, ValidationReport};
use super::{HierarchyError, RoleGraph, RoleGraphBuilder};

/// Parses and builds in one step, failing on the first problem.
pub fn parse_hierarchy(text: &str) -> Result<RoleGraph, HierarchyError> {
    let mut builder = RoleGraphBuilder::new();
    for (line, directive) in lines(text) {
        apply(&mut builder, line, directive?)?;
    }
    builder.build()
}

/// Result of [`check_hierarchy`]: the graph when the text is loadable, and a
/// report with every error and warning found.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub graph: Option<RoleGraph>,
    pub report: ValidationReport,
}

/// Like [`parse_hierarchy`] but keeps going after errors so the report lists
/// all of them. Warnings from [`validate`] are appended when the graph builds.
pub fn check_hierarchy(text: &str) -> CheckOutcome {
    let mut builder = RoleGraphBuilder::new();
    let mut issues = Vec::new();
    for (line, directive) in lines(text) {
        if let Err(e) = directive.and_then(|d| apply(&mut builder, line, d)) {
            issues.push(Issue::from_error(&e));
        }
    }
    if !issues.is_empty() {
        return CheckOutcome {
            graph: None,
            report: ValidationReport::from_issues(issues),
        };
    }
    match builder.build() {
        Ok(graph) => {
            let report = validate(&graph);
            CheckOutcome {
                graph: Some(graph),
                report,
            }
        }
        Err(e) => CheckOutcome {
            graph: None,
            report: ValidationReport::from_issues(vec![Issue::from_error(&e)]),
        },
    }
}

enum Directive<'a> {
    Permission(&'a str),
    Role(&'a str),
    Grant(&'a str, &'a str),
    Dominates(&'a str, &'a str),
    Danger(&'a str),
}

fn lines(text: &str) -> impl Iterator<Item = (usize, Result<Directive<'_>, HierarchyError>)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = i + 1;
        let content = raw.split_once('#').map_or(raw, |(before, _)| before);
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            None
        } else {
            Some((line, directive(line, &tokens)))
        }
    })
}

fn directive<'a>(line: usize, tokens: &[&'a str]) -> Result<Directive<'a>, HierarchyError> {
    let syntax = |message: String| HierarchyError::Syntax { line, message };
    let (keyword, args) = (tokens[0], &tokens[1..]);
    let want = match keyword {
        "permission" | "role" | "danger" => 1,
        "grant" | "dominates" => 2,
        other => return Err(syntax(format!("unknown directive `{other}`"))),
    };
    if args.len() != want {
        return Err(syntax(format!(
            "`{keyword}` takes {want} argument{}, found {}",
            if want == 1 { "" } else { "s" },
            args.len()
        )));
    }
    Ok(match keyword {
        "permission" => Directive::Permission(args[0]),
        "role" => Directive::Role(args[0]),
        "danger" => Directive::Danger(args[0]),
        "grant" => Directive::Grant(args[0], args[1]),
        _ => Directive::Dominates(args[0], args[1]),
    })
}

fn apply(b: &mut RoleGraphBuilder, line: usize, d: Directive<'_>) -> Result<(), HierarchyError> {
    let result = match d {
        Directive::Permission(p) => b.permission(p),
        Directive::Role(r) => b.role(r),
        Directive::Grant(r, p) => b.grant(r, p),
        Directive::Dominates(s, j) => b.dominates(s, j),
        Directive::Danger(p) => b.danger(p),
    };
    result.map(|_| ()).map_err(|e| e.with_line(line))
}

impl RoleGraph {
    /// Canonical RHF text; `parse_hierarchy(&g.to_rhf()) == Ok(g)`.
    pub fn to_rhf(&self) -> String {
        let mut out = String::new();
        for p in self.permissions() {
            writeln!(out, "permission {p}").unwrap();
        }
        for r in self.roles() {
            writeln!(out, "role {r}").unwrap();
        }
        for (r, p) in self.grant_pairs() {
            writeln!(out, "grant {r} {p}").unwrap();
        }
        for (s, j) in self.dominance_edges() {
            writeln!(out, "dominates {s} {j}").unwrap();
        }
        for p in self.danger_permissions() {
            writeln!(out, "danger {p}").unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Severity;

    const H1: &str = "\
# reference hierarchy
permission p1
permission p2
permission p3
permission p4
role r1
role r2
role r3
grant r1 p1
grant r1 p2
grant r2 p1
grant r2 p2
grant r2 p3
grant r2 p4
grant r3 p3
dominates r1 r3   # r1 reaches p3 through r3
";

    #[test]
    fn two_roles_one_grant_one_edge() {
        let g = parse_hierarchy("role r1\nrole r2\npermission p1\ngrant r1 p1\ndominates r1 r2\n")
            .unwrap();
        assert_eq!(g.role_count(), 2);
        assert_eq!(g.permission_count(), 1);
        assert_eq!(g.grant_pairs().count(), 1);
        assert_eq!(g.dominance_edges().count(), 1);
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err =
            parse_hierarchy("role r1\nrole r2\ndominates r1 r2\ndominates r2 r1\n").unwrap_err();
        assert!(matches!(err, HierarchyError::Cycle { .. }), "{err}");
    }

    #[test]
    fn undeclared_permission_in_grant() {
        let err = parse_hierarchy("role r1\ngrant r1 pX\n").unwrap_err();
        assert_eq!(
            err,
            HierarchyError::UnknownReference {
                line: Some(2),
                what: "permission",
                id: "pX".into()
            }
        );
        assert_eq!(err.to_string(), "line 2: undeclared permission `pX`");
    }

    #[test]
    fn use_before_declaration_is_unknown_reference() {
        let err = parse_hierarchy("grant r1 p1\nrole r1\npermission p1\n").unwrap_err();
        assert!(matches!(
            err,
            HierarchyError::UnknownReference { line: Some(1), .. }
        ));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        for (text, line) in [
            ("role r1\nrol r2\n", 2),
            ("role\n", 1),
            ("\n\nrole a b\n", 3),
            ("permission p$1\n", 1),
        ] {
            match parse_hierarchy(text) {
                Err(HierarchyError::Syntax { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn duplicates_are_errors() {
        for text in [
            "role r1\nrole r1\n",
            "permission p\npermission p\n",
            "role r\npermission p\ngrant r p\ngrant r p\n",
            "permission p\ndanger p\ndanger p\n",
        ] {
            assert!(
                matches!(
                    parse_hierarchy(text),
                    Err(HierarchyError::DuplicateDeclaration { .. })
                ),
                "{text:?}"
            );
        }
    }

    #[test]
    fn canonical_output_is_sorted_by_class() {
        let g = parse_hierarchy(H1).unwrap();
        let text = g.to_rhf();
        let first_words: Vec<&str> = text.lines().map(|l| l.split(' ').next().unwrap()).collect();
        let mut sorted = first_words.clone();
        let rank = |w: &str| {
            ["permission", "role", "grant", "dominates", "danger"]
                .iter()
                .position(|k| *k == w)
                .unwrap()
        };
        sorted.sort_by_key(|w| rank(w));
        assert_eq!(first_words, sorted);
        assert_eq!(parse_hierarchy(&text).unwrap(), g);
        assert!(text.contains("dominates r1 r3\n"));
    }

    #[test]
    fn check_collects_every_error() {
        let outcome = check_hierarchy("role r1\nrole r1\ngrant r1 p1\nbogus\n");
        assert!(outcome.graph.is_none());
        assert!(!outcome.report.ok);
        let codes: Vec<&str> = outcome
            .report
            .issues
            .iter()
            .map(|i| i.code.as_str())
            .collect();
        assert_eq!(
            codes,
            ["DUPLICATE_DECLARATION", "UNKNOWN_REFERENCE", "SYNTAX"]
        );
        assert_eq!(outcome.report.issues[2].location.as_deref(), Some("line 4"));
    }

    #[test]
    fn check_reports_cycles_and_warnings() {
        let cyclic = check_hierarchy("role a\nrole b\ndominates a b\ndominates b a\n");
        assert!(!cyclic.report.ok);
        assert_eq!(cyclic.report.issues[0].code, "CYCLE");

        let fine = check_hierarchy("permission p\npermission unused\nrole a\ngrant a p\n");
        assert!(fine.graph.is_some());
        assert!(fine.report.ok);
        assert_eq!(fine.report.issues[0].severity, Severity::Warning);
    }
}
