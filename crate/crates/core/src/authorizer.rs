//! Role selection for a requested permission set.
//!
//! Candidates are the roles whose effective permissions cover the request.
//! Each is scored on two leakage channels:
//!
//! * `dp`: permissions the role carries beyond the request;
//! * `dr`: roles it dominates, itself included (so `dr >= 1`).
//!
//! Both are costs. Their normalized reciprocals are combined with criteria
//! weights `1/(1+s)` and `s/(1+s)`, where `s` says how many times more often
//! surplus permissions leak than subordinate roles do. A candidate with
//! `dp == 0` fits the request exactly and is selected without scoring.
//!
//! Optional criteria (availability, integrity, manager cost) append more
//! columns to the same scheme.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ahp::{self, AhpError, CriterionSpec, Orientation, ScoreVector};
use crate::model::{HierarchyError, PermissionId, PermissionRequest, RoleGraph, RoleId};

pub const EXTRA_PERMISSIONS: &str = "extra-permissions";
pub const SUBORDINATE_ROLES: &str = "subordinate-roles";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AuthorizeError {
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error(transparent)]
    Ahp(#[from] AhpError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("role `{0}` does not include every requested permission")]
    CandidateNotSuperset(String),
    #[error("unknown criterion `{0}`")]
    UnknownCriterion(String),
    #[error("invalid sweep grid: {0}")]
    InvalidGrid(String),
}

impl AuthorizeError {
    pub fn code(&self) -> &'static str {
        match self {
            Self::Hierarchy(e) => e.code(),
            Self::Ahp(_) => "AHP",
            Self::InvalidParameter(_) => "INVALID_PARAMETER",
            Self::CandidateNotSuperset(_) => "CANDIDATE_NOT_SUPERSET",
            Self::UnknownCriterion(_) => "UNKNOWN_CRITERION",
            Self::InvalidGrid(_) => "INVALID_GRID",
        }
    }
}

/// Opt-in criteria beyond the two leakage channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtendedCriterion {
    /// Effective permission count; more is better.
    Availability,
    /// Effective danger permissions plus one; fewer is better.
    Integrity,
    /// `(dm + 1)^α · λ^α` with `dm` direct juniors; lower is better.
    ManagerCost,
}

impl ExtendedCriterion {
    pub const ALL: [ExtendedCriterion; 3] =
        [Self::Availability, Self::Integrity, Self::ManagerCost];

    pub fn id(self) -> &'static str {
        match self {
            Self::Availability => "availability",
            Self::Integrity => "integrity",
            Self::ManagerCost => "manager-cost",
        }
    }

    pub fn orientation(self) -> Orientation {
        match self {
            Self::Availability => Orientation::Benefit,
            Self::Integrity | Self::ManagerCost => Orientation::Cost,
        }
    }
}

impl fmt::Display for ExtendedCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ExtendedCriterion {
    type Err = AuthorizeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| AuthorizeError::UnknownCriterion(s.to_string()))
    }
}

/// An enabled extended criterion with its entry in the first row of the
/// criteria matrix (preference of the surplus-permission criterion over it).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtendedCriterionSpec {
    pub id: ExtendedCriterion,
    #[serde(default = "one")]
    pub first_row_preference: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuthorizationQuery {
    pub required: PermissionRequest,
    /// How much more a dominated role counts than a surplus permission.
    pub s: f64,
    pub extended: Vec<ExtendedCriterionSpec>,
    pub alpha: f64,
    pub lambda: f64,
}

impl AuthorizationQuery {
    pub fn new(required: PermissionRequest) -> Self {
        Self {
            required,
            s: 1.0,
            extended: Vec::new(),
            alpha: 1.0,
            lambda: 1.0,
        }
    }

    pub fn with_s(mut self, s: f64) -> Self {
        self.s = s;
        self
    }

    pub fn with_criterion(mut self, id: ExtendedCriterion, first_row_preference: f64) -> Self {
        self.extended.push(ExtendedCriterionSpec {
            id,
            first_row_preference,
        });
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    /// The full criteria list: surplus permissions (preference 1), subordinate
    /// roles (preference `1/s`), then the enabled extended criteria.
    pub fn criteria(&self) -> Vec<CriterionSpec> {
        let mut specs = vec![
            CriterionSpec::new(EXTRA_PERMISSIONS, Orientation::Cost, 1.0),
            CriterionSpec::new(SUBORDINATE_ROLES, Orientation::Cost, 1.0 / self.s),
        ];
        specs.extend(
            self.extended
                .iter()
                .map(|c| CriterionSpec::new(c.id.id(), c.id.orientation(), c.first_row_preference)),
        );
        specs
    }

    pub fn check(&self) -> Result<(), AuthorizeError> {
        let bad = |msg: String| Err(AuthorizeError::InvalidParameter(msg));
        if !(self.s.is_finite() && self.s > 0.0) {
            return bad(format!("s must be positive, got {}", self.s));
        }
        if !(self.lambda.is_finite() && self.lambda > 0.0) {
            return bad(format!("lambda must be positive, got {}", self.lambda));
        }
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return bad(format!("alpha must be non-negative, got {}", self.alpha));
        }
        for (i, c) in self.extended.iter().enumerate() {
            if self.extended[..i].iter().any(|d| d.id == c.id) {
                return bad(format!("criterion `{}` given twice", c.id));
            }
            if !(c.first_row_preference.is_finite() && c.first_row_preference > 0.0) {
                return bad(format!(
                    "criterion `{}` preference must be positive, got {}",
                    c.id, c.first_row_preference
                ));
            }
        }
        Ok(())
    }

    fn echo(&self) -> QueryEcho {
        QueryEcho {
            required: self.required.required().iter().cloned().collect(),
            s: self.s,
            criteria: self.criteria(),
            alpha: self.alpha,
            lambda: self.lambda,
        }
    }
}

/// The query as it was evaluated, with the criteria list fully resolved.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryEcho {
    pub required: Vec<PermissionId>,
    pub s: f64,
    pub criteria: Vec<CriterionSpec>,
    pub alpha: f64,
    pub lambda: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    ExactMatch,
    Ranked,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::ExactMatch => "exact-match",
            Mode::Ranked => "ranked",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RoleScore {
    pub role: RoleId,
    pub dp: usize,
    pub dr: usize,
    /// Raw values of the enabled extended criteria.
    pub extended: BTreeMap<String, f64>,
    /// This role's weight under each criterion (empty for an exact match).
    pub per_criterion_weight: BTreeMap<String, f64>,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankingResult {
    pub mode: Mode,
    /// Non-increasing probability; ties go to smaller `dp`, then smaller
    /// `dr`, then the lexicographically smaller role.
    pub scores: Vec<RoleScore>,
    pub selected: RoleId,
    pub parameters: QueryEcho,
}

impl RankingResult {
    pub fn order(&self) -> Vec<RoleId> {
        self.scores.iter().map(|s| s.role.clone()).collect()
    }
}

fn candidate_indices(
    graph: &RoleGraph,
    candidates: &[RoleId],
) -> Result<Vec<usize>, AuthorizeError> {
    candidates
        .iter()
        .map(|r| graph.role_index(r.as_str()).map_err(AuthorizeError::from))
        .collect()
}

/// Surplus permissions per candidate: `|effective(r) \ PU|`.
pub fn compute_dp(
    graph: &RoleGraph,
    candidates: &[RoleId],
    request: &PermissionRequest,
) -> Result<Vec<usize>, AuthorizeError> {
    let wanted = request.to_bits(graph)?;
    candidates
        .iter()
        .zip(candidate_indices(graph, candidates)?)
        .map(|(role, i)| {
            let eff = graph.effective_bits(i);
            if !wanted.is_subset(eff) {
                return Err(AuthorizeError::CandidateNotSuperset(role.to_string()));
            }
            Ok(eff.count() - request.len())
        })
        .collect()
}

/// Dominated roles per candidate, the role itself included.
pub fn compute_dr(graph: &RoleGraph, candidates: &[RoleId]) -> Result<Vec<usize>, AuthorizeError> {
    Ok(candidate_indices(graph, candidates)?
        .into_iter()
        .map(|i| graph.dominated_count(i))
        .collect())
}

/// Raw per-candidate values of an extended criterion, already strictly
/// positive. `alpha` and `lambda` only matter for manager cost.
pub fn extended_scores(
    graph: &RoleGraph,
    candidates: &[RoleId],
    criterion: ExtendedCriterion,
    alpha: f64,
    lambda: f64,
) -> Result<ScoreVector, AuthorizeError> {
    let idx = candidate_indices(graph, candidates)?;
    let values: Vec<f64> = match criterion {
        ExtendedCriterion::Availability => idx
            .iter()
            .map(|&i| graph.effective_bits(i).count() as f64)
            .collect(),
        ExtendedCriterion::Integrity => idx
            .iter()
            .map(|&i| {
                (graph
                    .effective_bits(i)
                    .intersection_count(graph.danger_bits())
                    + 1) as f64
            })
            .collect(),
        ExtendedCriterion::ManagerCost => idx
            .iter()
            .map(|&i| ((graph.junior_count(i) + 1) as f64).powf(alpha) * lambda.powf(alpha))
            .collect(),
    };
    Ok(ScoreVector::new(values)?)
}

/// Runs the selection algorithm and returns every candidate with its score.
pub fn rank_roles(
    graph: &RoleGraph,
    query: &AuthorizationQuery,
) -> Result<RankingResult, AuthorizeError> {
    query.check()?;
    let candidates = graph.candidate_roles(&query.required)?;
    let dp = compute_dp(graph, &candidates, &query.required)?;
    let dr = compute_dr(graph, &candidates)?;

    let mut extended_raw = Vec::with_capacity(query.extended.len());
    for c in &query.extended {
        let v = extended_scores(graph, &candidates, c.id, query.alpha, query.lambda)?;
        extended_raw.push((c.id, v));
    }
    let extended_of = |i: usize| -> BTreeMap<String, f64> {
        extended_raw
            .iter()
            .map(|(c, v)| (c.id().to_string(), v.values()[i]))
            .collect()
    };

    // Exact fit: among dp == 0 candidates prefer fewer dominated roles; the
    // candidate list is already in role order, so min_by_key keeps the first.
    if let Some(i) = (0..candidates.len())
        .filter(|&i| dp[i] == 0)
        .min_by_key(|&i| dr[i])
    {
        return Ok(RankingResult {
            mode: Mode::ExactMatch,
            scores: vec![RoleScore {
                role: candidates[i].clone(),
                dp: 0,
                dr: dr[i],
                extended: extended_of(i),
                per_criterion_weight: BTreeMap::new(),
                probability: 1.0,
            }],
            selected: candidates[i].clone(),
            parameters: query.echo(),
        });
    }

    let specs = query.criteria();
    let mut alternatives = vec![
        ahp::weights_from_scores(&ScoreVector::from_counts(&dp)?, Orientation::Cost)?,
        ahp::weights_from_scores(&ScoreVector::from_counts(&dr)?, Orientation::Cost)?,
    ];
    for (c, v) in &extended_raw {
        alternatives.push(ahp::weights_from_scores(v, c.orientation())?);
    }
    let criteria = ahp::criteria_weights(&specs)?;
    let probability = ahp::combine(&criteria, &alternatives)?;

    let mut scores: Vec<RoleScore> = candidates
        .iter()
        .enumerate()
        .map(|(i, role)| RoleScore {
            role: role.clone(),
            dp: dp[i],
            dr: dr[i],
            extended: extended_of(i),
            per_criterion_weight: specs
                .iter()
                .zip(&alternatives)
                .map(|(s, w)| (s.id.clone(), w[i]))
                .collect(),
            probability: probability[i],
        })
        .collect();
    scores.sort_by(|a, b| {
        b.probability
            .total_cmp(&a.probability)
            .then(a.dp.cmp(&b.dp))
            .then(a.dr.cmp(&b.dr))
            .then_with(|| a.role.cmp(&b.role))
    });

    Ok(RankingResult {
        mode: Mode::Ranked,
        selected: scores[0].role.clone(),
        scores,
        parameters: query.echo(),
    })
}

/// The recommended role: the head of [`rank_roles`].
pub fn authorize(graph: &RoleGraph, query: &AuthorizationQuery) -> Result<RoleId, AuthorizeError> {
    rank_roles(graph, query).map(|r| r.selected)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridScale {
    #[default]
    Linear,
    Log,
}

impl FromStr for GridScale {
    type Err = AuthorizeError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(Self::Linear),
            "log" => Ok(Self::Log),
            other => Err(AuthorizeError::InvalidGrid(format!(
                "unknown scale `{other}`"
            ))),
        }
    }
}

/// `steps` values of `s` from `min` to `max` inclusive.
pub fn s_grid(
    min: f64,
    max: f64,
    steps: usize,
    scale: GridScale,
) -> Result<Vec<f64>, AuthorizeError> {
    if !(min.is_finite() && min > 0.0) {
        return Err(AuthorizeError::InvalidGrid(format!(
            "sMin must be positive, got {min}"
        )));
    }
    if !(max.is_finite() && min < max) {
        return Err(AuthorizeError::InvalidGrid(format!(
            "need sMin < sMax, got {min} and {max}"
        )));
    }
    if steps < 2 {
        return Err(AuthorizeError::InvalidGrid(format!(
            "need at least 2 steps, got {steps}"
        )));
    }
    let last = (steps - 1) as f64;
    let grid: Vec<f64> = (0..steps)
        .map(|i| {
            let t = i as f64 / last;
            match (i, scale) {
                (0, _) => min,
                (i, _) if i == steps - 1 => max,
                (_, GridScale::Linear) => min + (max - min) * t,
                (_, GridScale::Log) => (min.ln() + (max.ln() - min.ln()) * t).exp(),
            }
        })
        .collect();
    check_grid(&grid)?;
    Ok(grid)
}

fn check_grid(grid: &[f64]) -> Result<(), AuthorizeError> {
    if grid.is_empty() {
        return Err(AuthorizeError::InvalidGrid("empty grid".into()));
    }
    if let Some(s) = grid.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(AuthorizeError::InvalidGrid(format!(
            "s values must be positive, got {s}"
        )));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(AuthorizeError::InvalidGrid(
            "grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Adjacent grid points whose full role orderings differ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChangePoint {
    pub s_before: f64,
    pub s_after: f64,
    pub order_before: Vec<RoleId>,
    pub order_after: Vec<RoleId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepResult {
    pub grid: Vec<f64>,
    pub rankings: Vec<RankingResult>,
    pub change_points: Vec<ChangePoint>,
}

/// Re-ranks `base` at every `s` in `grid`; everything except `s` is held fixed.
pub fn sensitivity_sweep(
    graph: &RoleGraph,
    base: &AuthorizationQuery,
    grid: &[f64],
) -> Result<SweepResult, AuthorizeError> {
    check_grid(grid)?;
    let rankings = grid
        .iter()
        .map(|&s| rank_roles(graph, &base.clone().with_s(s)))
        .collect::<Result<Vec<_>, _>>()?;
    let change_points = grid
        .windows(2)
        .zip(rankings.windows(2))
        .filter_map(|(s, r)| {
            let (before, after) = (r[0].order(), r[1].order());
            (before != after).then(|| ChangePoint {
                s_before: s[0],
                s_after: s[1],
                order_before: before,
                order_after: after,
            })
        })
        .collect();
    Ok(SweepResult {
        grid: grid.to_vec(),
        rankings,
        change_points,
    })
}
