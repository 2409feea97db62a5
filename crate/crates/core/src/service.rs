//! HTTP API over a single, atomically replaceable hierarchy snapshot.
//!
//! | method | path         | body                         |
//! |--------|--------------|------------------------------|
//! | PUT    | `/hierarchy` | RHF text                     |
//! | GET    | `/roles`     |                              |
//! | POST   | `/authorize` | [`AuthorizeRequest`] JSON    |
//! | POST   | `/sweep`     | [`SweepRequest`] JSON        |
//! | GET    | `/health`    |                              |
//!
//! Everything else falls through to the admin UI's static files.
//!
//! Readers load the current `Arc<HierarchySnapshot>` once per request and
//! never observe a partially replaced hierarchy. Writers serialize on a
//! mutex and publish with a single pointer swap.

use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::time::{SystemTime, UNIX_EPOCH};

use arc_swap::ArcSwapOption;
use axum::extract::State;
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

use crate::authorizer::{
    rank_roles, s_grid, sensitivity_sweep, AuthorizationQuery, AuthorizeError,
    ExtendedCriterionSpec, GridScale, RankingResult, SweepResult,
};
use crate::model::{
    check_hierarchy, HierarchyError, PermissionId, PermissionRequest, RoleGraph, RoleId,
    ValidationReport,
};

#[derive(Debug)]
pub struct HierarchySnapshot {
    pub graph: RoleGraph,
    pub version: u64,
    /// Milliseconds since the Unix epoch.
    pub loaded_at: u64,
}

#[derive(Debug, Default)]
pub struct SnapshotStore {
    current: ArcSwapOption<HierarchySnapshot>,
    writer: Mutex<()>,
}

impl SnapshotStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn current(&self) -> Option<Arc<HierarchySnapshot>> {
        self.current.load_full()
    }

    pub fn version(&self) -> Option<u64> {
        self.current.load().as_ref().map(|s| s.version)
    }

    /// Parses `text` and, if it is loadable, publishes it under the next
    /// version. The previous snapshot stays in place on failure.
    pub fn replace(&self, text: &str) -> Result<(u64, ValidationReport), ValidationReport> {
        let outcome = check_hierarchy(text);
        let graph = match outcome.graph {
            Some(g) if outcome.report.ok => g,
            _ => return Err(outcome.report),
        };
        Ok((self.install(graph), outcome.report))
    }

    /// Publishes an already built graph; returns its version.
    pub fn install(&self, graph: RoleGraph) -> u64 {
        let _guard = self.writer.lock().unwrap_or_else(|e| e.into_inner());
        let version = self.version().map_or(1, |v| v + 1);
        let loaded_at = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_millis() as u64);
        self.current.store(Some(Arc::new(HierarchySnapshot {
            graph,
            version,
            loaded_at,
        })));
        version
    }
}

/// Body of `POST /authorize`.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AuthorizeRequest {
    #[serde(alias = "required")]
    pub require: Vec<String>,
    #[serde(default = "one")]
    pub s: f64,
    #[serde(default)]
    pub criteria: Vec<ExtendedCriterionSpec>,
    #[serde(default = "one")]
    pub alpha: f64,
    #[serde(default = "one")]
    pub lambda: f64,
}

/// Body of `POST /sweep`: an [`AuthorizeRequest`] (its `s` ignored) plus grid bounds.
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepRequest {
    #[serde(flatten)]
    pub query: AuthorizeRequest,
    pub s_min: f64,
    pub s_max: f64,
    pub steps: usize,
    #[serde(default)]
    pub scale: GridScale,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RankingResponse {
    #[serde(flatten)]
    pub ranking: RankingResult,
    pub version: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepResponse {
    #[serde(flatten)]
    pub sweep: SweepResult,
    pub version: u64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RoleSummary {
    pub id: RoleId,
    pub direct_permissions: usize,
    pub effective_permissions: usize,
    pub dr: usize,
    pub dm: usize,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RolesResponse {
    pub version: u64,
    pub roles: Vec<RoleSummary>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct HierarchyResponse {
    pub version: Option<u64>,
    pub report: ValidationReport,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: ErrorBody,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        Self {
            status,
            body: ErrorBody {
                error: code.to_string(),
                message: message.into(),
            },
        }
    }

    fn no_hierarchy() -> Self {
        Self::new(StatusCode::CONFLICT, "NO_HIERARCHY", "no hierarchy loaded")
    }

    fn malformed(err: impl std::fmt::Display) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "MALFORMED_BODY", err.to_string())
    }
}

impl From<AuthorizeError> for ApiError {
    fn from(e: AuthorizeError) -> Self {
        let status = match &e {
            AuthorizeError::Hierarchy(
                HierarchyError::NoCandidate
                | HierarchyError::UnknownPermission(_)
                | HierarchyError::InvalidId(_),
            ) => StatusCode::UNPROCESSABLE_ENTITY,
            AuthorizeError::Hierarchy(_)
            | AuthorizeError::InvalidParameter(_)
            | AuthorizeError::InvalidGrid(_)
            | AuthorizeError::UnknownCriterion(_) => StatusCode::BAD_REQUEST,
            AuthorizeError::Ahp(_) | AuthorizeError::CandidateNotSuperset(_) => {
                StatusCode::INTERNAL_SERVER_ERROR
            }
        };
        Self::new(status, e.code(), e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

type AppState = Arc<SnapshotStore>;

impl AuthorizeRequest {
    fn to_query(&self) -> Result<AuthorizationQuery, ApiError> {
        if self.require.is_empty() {
            let e = HierarchyError::EmptyRequest;
            return Err(ApiError::new(
                StatusCode::BAD_REQUEST,
                e.code(),
                e.to_string(),
            ));
        }
        // A malformed id can never be declared, so it is reported as unknown.
        let ids = self
            .require
            .iter()
            .map(|p| {
                PermissionId::new(p.as_str())
                    .map_err(|_| HierarchyError::UnknownPermission(p.clone()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(AuthorizeError::from)?;
        let mut query =
            AuthorizationQuery::new(PermissionRequest::new(ids).map_err(AuthorizeError::from)?)
                .with_s(self.s)
                .with_alpha(self.alpha)
                .with_lambda(self.lambda);
        query.extended = self.criteria.clone();
        Ok(query)
    }
}

fn snapshot(state: &AppState) -> Result<Arc<HierarchySnapshot>, ApiError> {
    state.current().ok_or_else(ApiError::no_hierarchy)
}

async fn put_hierarchy(State(state): State<AppState>, body: String) -> Response {
    match state.replace(&body) {
        Ok((version, report)) => Json(HierarchyResponse {
            version: Some(version),
            report,
        })
        .into_response(),
        Err(report) => (
            StatusCode::BAD_REQUEST,
            Json(HierarchyResponse {
                version: state.version(),
                report,
            }),
        )
            .into_response(),
    }
}

async fn get_roles(State(state): State<AppState>) -> Result<Json<RolesResponse>, ApiError> {
    let snap = snapshot(&state)?;
    let g = &snap.graph;
    let roles = g
        .roles()
        .iter()
        .enumerate()
        .map(|(i, id)| RoleSummary {
            id: id.clone(),
            direct_permissions: g.direct_grant_count(i),
            effective_permissions: g.effective_bits(i).count(),
            dr: g.dominated_count(i),
            dm: g.junior_count(i),
        })
        .collect();
    Ok(Json(RolesResponse {
        version: snap.version,
        roles,
    }))
}

async fn post_authorize(
    State(state): State<AppState>,
    body: String,
) -> Result<Json<RankingResponse>, ApiError> {
    let request: AuthorizeRequest = serde_json::from_str(&body).map_err(ApiError::malformed)?;
    let snap = snapshot(&state)?;
    let query = request.to_query()?;
    let ranking = rank_roles(&snap.graph, &query)?;
    Ok(Json(RankingResponse {
        ranking,
        version: snap.version,
    }))
}

async fn post_sweep(
    State(state): State<AppState>,
    body: String,
) -> Result<Json<SweepResponse>, ApiError> {
    let request: SweepRequest = serde_json::from_str(&body).map_err(ApiError::malformed)?;
    let grid = s_grid(request.s_min, request.s_max, request.steps, request.scale)?;
    let snap = snapshot(&state)?;
    let query = request.query.to_query()?;
    let sweep = sensitivity_sweep(&snap.graph, &query, &grid)?;
    Ok(Json(SweepResponse {
        sweep,
        version: snap.version,
    }))
}

async fn health(State(state): State<AppState>) -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok", "version": state.version() }))
}

const PLACEHOLDER_UI: &str = "<!doctype html>\n<html><head><title>rbac-ahp</title></head>\n\
<body><h1>rbac-ahp</h1><p>The admin console is not bundled with this server. \
Start it with <code>--ui-dir</code> pointing at the built console assets.</p>\n\
<p>API: PUT /hierarchy, GET /roles, POST /authorize, POST /sweep, GET /health</p></body></html>\n";

/// The API router. Static assets under `ui_dir` are served for every other
/// path; without one, `/` returns a short placeholder page.
pub fn router(state: AppState, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/hierarchy", put(put_hierarchy))
        .route("/roles", get(get_roles))
        .route("/authorize", post(post_authorize))
        .route("/sweep", post(post_sweep))
        .route("/health", get(health))
        .with_state(state);
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.route("/", get(|| async { Html(PLACEHOLDER_UI) })),
    }
}

/// Serves until the listener fails.
pub async fn serve(
    listener: tokio::net::TcpListener,
    state: AppState,
    ui_dir: Option<PathBuf>,
) -> std::io::Result<()> {
    axum::serve(listener, router(state, ui_dir)).await
}
