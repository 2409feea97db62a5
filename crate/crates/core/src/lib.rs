//! Role selection for user authorization in a hierarchical RBAC policy.
//!
//! Given a role hierarchy and the permissions a user needs, every role that
//! covers the request is ranked by an analytic-hierarchy-process score that
//! favors roles leaking fewer surplus permissions and dominating fewer
//! subordinate roles. The ranking is decision support: the administrator
//! makes the final call.
//!
//! ```
//! use rbac_ahp::{parse_hierarchy, rank_roles, AuthorizationQuery, PermissionRequest};
//!
//! let graph = parse_hierarchy(
//!     "permission p1\npermission p2\npermission p3\npermission p4\n\
//!      role r1\nrole r2\nrole r3\n\
//!      grant r1 p1\ngrant r1 p2\ngrant r3 p3\n\
//!      grant r2 p1\ngrant r2 p2\ngrant r2 p3\ngrant r2 p4\n\
//!      dominates r1 r3\n",
//! )?;
//! let query = AuthorizationQuery::new(PermissionRequest::parse(&["p1", "p2"])?).with_s(2.0);
//! let ranking = rank_roles(&graph, &query)?;
//! assert_eq!(ranking.selected.as_str(), "r2");
//! assert!((ranking.scores[0].probability - 5.0 / 9.0).abs() < 1e-12);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```
//!
//! Modules:
//!
//! * [`model`]: role graph, closures, the RHF file format and validation;
//! * [`ahp`]: pairwise comparison matrices and weight vectors;
//! * [`authorizer`]: candidate scoring, ranking and sensitivity sweeps;
//! * [`cli`] and [`service`]: command-line and HTTP front ends.

pub mod ahp;
pub mod authorizer;
pub mod cli;
pub mod model;
pub mod service;

pub use authorizer::{
    authorize, rank_roles, sensitivity_sweep, AuthorizationQuery, AuthorizeError,
    ExtendedCriterion, Mode, RankingResult, RoleScore, SweepResult,
};
pub use model::{
    check_hierarchy, parse_hierarchy, validate, HierarchyError, PermissionId, PermissionRequest,
    RoleGraph, RoleId,
};
