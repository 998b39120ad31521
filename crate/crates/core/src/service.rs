//! HTTP annotation sessions over the interactive loop.
//!
//! Routes:
//!
//! - `POST /sessions` with a [`SessionSpec`] body creates a session.
//! - `GET /sessions/{id}/batch` returns the samples waiting for labels.
//! - `POST /sessions/{id}/labels` takes `{"labels": [{"sample_id": 3, "label": 1}]}`.
//!   Labels accumulate until the batch is complete, then the loop advances.
//! - `GET /sessions/{id}/status` returns a [`Status`] snapshot.
//! - `GET /samples/{id}/image?session_id=...` returns the sample's PNG when the
//!   dataset has an image directory and an SVG rendering of its features otherwise.
//!
//! Anything else falls through to the static UI directory, if one is configured.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query as QueryParams, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;
use tracing::info;
use uuid::Uuid;

use crate::data::{Dataset, SplitSpec};
use crate::engine::{
    write_trace, CealConfig, Engine, IterationReport, Query, QueryKind, SimulatedOracle,
};
use crate::harness::{DatasetSpec, ExperimentSpec, Variant};
use crate::{Error, SampleId};

/// Body of `POST /sessions`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SessionSpec {
    pub dataset: DatasetSpec,
    pub split: SplitSpec,
    pub ceal: CealConfig,
    pub variant: Variant,
    pub seed: u64,
    pub normalize: bool,
    /// Label the stratified starting set from ground truth instead of asking.
    pub preload_init: bool,
    /// Directory that receives `trace-<variant>-<seed>.jsonl` after every batch.
    pub output: Option<PathBuf>,
}

impl Default for SessionSpec {
    fn default() -> Self {
        Self {
            dataset: DatasetSpec::default(),
            split: SplitSpec::default(),
            ceal: CealConfig::default(),
            variant: Variant::CealEn,
            seed: 0,
            normalize: true,
            preload_init: true,
            output: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Training,
    AwaitingLabels,
    Finished,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Created {
    pub session_id: Uuid,
    pub phase: Phase,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchItem {
    pub sample_id: SampleId,
    pub image: String,
    /// `None` for the initial batch, which is not chosen by score.
    pub score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatchKind {
    Initialization,
    Annotation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Batch {
    pub session_id: Uuid,
    pub iteration: usize,
    pub kind: BatchKind,
    pub items: Vec<BatchItem>,
    /// Ids of this batch already labeled by earlier submissions.
    pub labeled: Vec<SampleId>,
    pub class_count: usize,
    pub class_names: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelEntry {
    pub sample_id: SampleId,
    pub label: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelSubmission {
    pub labels: Vec<LabelEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ack {
    pub session_id: Uuid,
    pub accepted: usize,
    /// Ids of the batch still missing a label; empty once the batch was applied.
    pub remaining: usize,
    pub phase: Phase,
    pub iteration: usize,
}

/// Progress snapshot. The flat metrics copy the latest report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Status {
    pub session_id: Uuid,
    pub variant: Variant,
    pub phase: Phase,
    pub iteration: usize,
    pub pct_labeled: f64,
    pub test_accuracy: Option<f64>,
    pub pseudo_count: usize,
    pub pseudo_error_rate: f64,
    pub delta: f64,
    pub annotations_cumulative: usize,
    pub pending: usize,
    pub pool_size: usize,
    pub history: Vec<IterationReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
}

/// Failure of a request, rendered as `{"error": ...}`.
#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }

    fn not_found(what: impl Into<String>) -> Self {
        Self::new(StatusCode::NOT_FOUND, what)
    }

    fn conflict(what: impl Into<String>) -> Self {
        Self::new(StatusCode::CONFLICT, what)
    }

    fn bad_request(what: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, what)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Io(_) | Error::Checkpoint(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        Self::new(status, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        Self::new(e.status(), e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(ErrorBody {
                error: self.message,
            }),
        )
            .into_response()
    }
}

type ApiResult<T> = std::result::Result<T, ApiError>;

/// What request handlers read; replaced wholesale after every engine change.
#[derive(Debug, Clone)]
struct View {
    phase: Phase,
    query: Option<Query>,
    received: BTreeMap<SampleId, usize>,
    reports: Vec<IterationReport>,
    delta: f64,
}

struct Session {
    id: Uuid,
    variant: Variant,
    seed: u64,
    output: Option<PathBuf>,
    pool: Dataset,
    engine: Mutex<Engine>,
    view: RwLock<View>,
}

impl Session {
    fn view(&self) -> View {
        self.view.read().expect("view lock").clone()
    }

    fn snapshot(engine: &Engine) -> crate::Result<View> {
        let query = engine.pending()?;
        let phase = if query.is_some() {
            Phase::AwaitingLabels
        } else {
            Phase::Finished
        };
        Ok(View {
            phase,
            query,
            received: BTreeMap::new(),
            reports: engine.reports().to_vec(),
            delta: engine.current_delta(),
        })
    }

    /// Applies a complete batch. Runs on a blocking thread.
    fn apply(&self, labels: BTreeMap<SampleId, usize>) -> crate::Result<()> {
        let mut engine = self.engine.lock().expect("engine lock");
        let outcome = engine.submit(&labels).map(|_| ()).and_then(|()| {
            let view = Self::snapshot(&engine)?;
            self.flush_trace(&view.reports)?;
            Ok(view)
        });
        let mut view = self.view.write().expect("view lock");
        match outcome {
            Ok(next) => {
                *view = next;
                Ok(())
            }
            Err(e) => {
                view.phase = Phase::AwaitingLabels;
                Err(e)
            }
        }
    }

    fn flush_trace(&self, reports: &[IterationReport]) -> crate::Result<()> {
        let Some(dir) = &self.output else {
            return Ok(());
        };
        fs::create_dir_all(dir)?;
        let path = dir.join(format!("trace-{}-{}.jsonl", self.variant, self.seed));
        let mut buf = Vec::new();
        write_trace(reports, &mut buf)?;
        fs::write(path, buf)?;
        Ok(())
    }
}

/// Shared server state: every live session.
#[derive(Clone, Default)]
pub struct AppState {
    sessions: Arc<RwLock<HashMap<Uuid, Arc<Session>>>>,
}

impl AppState {
    pub fn new() -> Self {
        Self::default()
    }

    fn session(&self, id: &str) -> ApiResult<Arc<Session>> {
        let id =
            Uuid::parse_str(id).map_err(|_| ApiError::not_found(format!("no session {id}")))?;
        self.sessions
            .read()
            .expect("sessions lock")
            .get(&id)
            .cloned()
            .ok_or_else(|| ApiError::not_found(format!("no session {id}")))
    }
}

/// Builds the session and runs the preloaded initialization, if requested.
fn build_session(spec: SessionSpec) -> crate::Result<Session> {
    let experiment = ExperimentSpec {
        dataset: spec.dataset.clone(),
        split: spec.split,
        normalize: spec.normalize,
        ..ExperimentSpec::default()
    };
    let dataset = experiment.dataset.load()?;
    let (pool, test) = experiment.prepare(&dataset, spec.seed)?;
    let config = spec.variant.configure(&spec.ceal, spec.seed);
    let init_fraction = spec.variant.init_fraction(spec.split.init_fraction);
    let mut engine = Engine::new(pool.clone(), test, config, init_fraction)?;
    if spec.preload_init {
        engine.step(&mut SimulatedOracle::new(&pool))?;
    }
    let view = Session::snapshot(&engine)?;
    let session = Session {
        id: Uuid::new_v4(),
        variant: spec.variant,
        seed: spec.seed,
        output: spec.output,
        pool,
        engine: Mutex::new(engine),
        view: RwLock::new(view),
    };
    session.flush_trace(&session.view().reports)?;
    Ok(session)
}

async fn create_session(
    State(state): State<AppState>,
    body: std::result::Result<Json<SessionSpec>, JsonRejection>,
) -> ApiResult<Json<Created>> {
    let Json(spec) = body?;
    let session = tokio::task::spawn_blocking(move || build_session(spec))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    let created = Created {
        session_id: session.id,
        phase: session.view().phase,
    };
    info!(session = %session.id, variant = %session.variant, "session created");
    state
        .sessions
        .write()
        .expect("sessions lock")
        .insert(session.id, Arc::new(session));
    Ok(Json(created))
}

async fn get_batch(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<Batch>> {
    let session = state.session(&id)?;
    let view = session.view();
    let query = match (&view.phase, &view.query) {
        (Phase::AwaitingLabels, Some(q)) => q,
        (phase, _) => {
            return Err(ApiError::conflict(format!(
                "session is {}, no batch is waiting",
                phase_name(*phase)
            )))
        }
    };
    let items = query
        .sample_ids
        .iter()
        .zip(&query.scores)
        .map(|(&sample_id, &score)| BatchItem {
            sample_id,
            image: format!("/samples/{sample_id}/image?session_id={}", session.id),
            score: score.is_finite().then_some(score),
        })
        .collect();
    let class_count = session.pool.class_count();
    let class_names = session
        .pool
        .class_names
        .clone()
        .unwrap_or_else(|| (0..class_count).map(|c| c.to_string()).collect());
    Ok(Json(Batch {
        session_id: session.id,
        iteration: query.iteration,
        kind: match query.kind {
            QueryKind::Initialization => BatchKind::Initialization,
            QueryKind::Annotation => BatchKind::Annotation,
        },
        items,
        labeled: view.received.keys().copied().collect(),
        class_count,
        class_names,
    }))
}

fn phase_name(phase: Phase) -> &'static str {
    match phase {
        Phase::Training => "training",
        Phase::AwaitingLabels => "awaiting_labels",
        Phase::Finished => "finished",
    }
}

async fn submit_labels(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: std::result::Result<Json<LabelSubmission>, JsonRejection>,
) -> ApiResult<Json<Ack>> {
    let session = state.session(&id)?;
    let Json(submission) = body?;
    let class_count = session.pool.class_count();

    let complete = {
        let mut view = session.view.write().expect("view lock");
        let pending: BTreeSet<SampleId> = match (&view.phase, &view.query) {
            (Phase::AwaitingLabels, Some(q)) => q.sample_ids.iter().copied().collect(),
            (phase, _) => {
                return Err(ApiError::conflict(format!(
                    "session is {}, no batch is waiting",
                    phase_name(*phase)
                )))
            }
        };
        let mut seen = BTreeSet::new();
        for entry in &submission.labels {
            if !pending.contains(&entry.sample_id) {
                return Err(ApiError::bad_request(format!(
                    "sample {} is not in the pending batch",
                    entry.sample_id
                )));
            }
            if view.received.contains_key(&entry.sample_id) || !seen.insert(entry.sample_id) {
                return Err(ApiError::bad_request(format!(
                    "sample {} is already labeled",
                    entry.sample_id
                )));
            }
            if entry.label >= class_count {
                return Err(ApiError::bad_request(format!(
                    "label {} out of range for {class_count} classes",
                    entry.label
                )));
            }
        }
        for entry in &submission.labels {
            view.received.insert(entry.sample_id, entry.label);
        }
        if view.received.len() == pending.len() {
            view.phase = Phase::Training;
            Some(view.received.clone())
        } else {
            None
        }
    };

    if let Some(labels) = complete {
        let worker = Arc::clone(&session);
        tokio::task::spawn_blocking(move || worker.apply(labels))
            .await
            .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    }

    let view = session.view();
    let remaining = view
        .query
        .as_ref()
        .map_or(0, |q| q.sample_ids.len() - view.received.len());
    Ok(Json(Ack {
        session_id: session.id,
        accepted: submission.labels.len(),
        remaining,
        phase: view.phase,
        iteration: view.reports.last().map_or(0, |r| r.iteration),
    }))
}

async fn get_status(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> ApiResult<Json<Status>> {
    let session = state.session(&id)?;
    let view = session.view();
    let last = view.reports.last();
    Ok(Json(Status {
        session_id: session.id,
        variant: session.variant,
        phase: view.phase,
        iteration: last.map_or(0, |r| r.iteration),
        pct_labeled: last.map_or(0.0, |r| r.pct_labeled),
        test_accuracy: last.map(|r| r.test_accuracy),
        pseudo_count: last.map_or(0, |r| r.pseudo_count),
        pseudo_error_rate: last.map_or(0.0, |r| r.pseudo_error_rate),
        delta: view.delta,
        annotations_cumulative: last.map_or(0, |r| r.annotations_cumulative),
        pending: view.query.as_ref().map_or(0, |q| q.sample_ids.len()),
        pool_size: session.pool.len(),
        history: view.reports,
    }))
}

#[derive(Debug, Deserialize)]
struct ImageParams {
    session_id: String,
}

async fn get_image(
    State(state): State<AppState>,
    Path(sample_id): Path<SampleId>,
    params: std::result::Result<QueryParams<ImageParams>, axum::extract::rejection::QueryRejection>,
) -> ApiResult<Response> {
    let QueryParams(params) =
        params.map_err(|_| ApiError::bad_request("session_id query parameter is required"))?;
    let session = state.session(&params.session_id)?;
    let sample = session
        .pool
        .sample(sample_id)
        .ok_or_else(|| ApiError::not_found(format!("no sample {sample_id}")))?;
    if let Some(path) = session.pool.image_path(sample_id) {
        let bytes = tokio::fs::read(path)
            .await
            .map_err(|e| ApiError::from(Error::from(e)))?;
        return Ok(([(header::CONTENT_TYPE, "image/png")], bytes).into_response());
    }
    let svg = feature_svg(&sample.features);
    Ok(([(header::CONTENT_TYPE, "image/svg+xml")], svg).into_response())
}

/// Bar chart of a feature vector, bars scaled to the largest magnitude.
pub fn feature_svg(features: &[f64]) -> String {
    const WIDTH: f64 = 240.0;
    const HEIGHT: f64 = 120.0;
    let n = features.len().max(1);
    let bar = WIDTH / n as f64;
    let scale = features.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    let mid = HEIGHT / 2.0;

    let mut svg = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = write!(
        svg,
        r##"<rect width="{WIDTH}" height="{HEIGHT}" fill="#fafafa"/><line x1="0" y1="{mid}" x2="{WIDTH}" y2="{mid}" stroke="#999"/>"##
    );
    for (i, &v) in features.iter().enumerate() {
        let h = (v / scale) * (mid - 4.0);
        let (y, h, fill) = if h >= 0.0 {
            (mid - h, h, "#3b6ea5")
        } else {
            (mid, -h, "#c0504d")
        };
        let _ = write!(
            svg,
            r#"<rect x="{:.2}" y="{y:.2}" width="{:.2}" height="{h:.2}" fill="{fill}"/>"#,
            i as f64 * bar + 1.0,
            (bar - 2.0).max(1.0)
        );
    }
    svg.push_str("</svg>");
    svg
}

/// The API router, with `ui_dir` served for every other path when given.
pub fn router(state: AppState, ui_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}/batch", get(get_batch))
        .route("/sessions/{id}/labels", post(submit_labels))
        .route("/sessions/{id}/status", get(get_status))
        .route("/samples/{id}/image", get(get_image))
        .with_state(state);
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api,
    }
}

/// Serves until the process is stopped.
pub async fn serve(port: u16, ui_dir: Option<PathBuf>) -> crate::Result<()> {
    let addr = SocketAddr::from(([0, 0, 0, 0], port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    info!(%addr, "listening");
    axum::serve(listener, router(AppState::new(), ui_dir)).await?;
    Ok(())
}
