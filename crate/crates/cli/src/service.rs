//! HTTP API over the file store.
//!
//! Operations on one trainee run under that trainee's lock, and every mutation reaches the
//! log on disk before the response is sent.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use coach_core::engine::{Clock, EventBody, SystemClock};
use coach_core::schedule::DayView;
use coach_core::{
    Answer, AssessmentReport, Coach, CoachConfig, CoachError, Command, DailyReport, FirstWeekChoiceSet,
    Phase, Proposal, Revision, StaircaseModel, WeekSchedule, WeeklyGoal,
};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::net::TcpListener;

use crate::store::FileStore;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub listen: SocketAddr,
    pub data_dir: PathBuf,
    pub coach: CoachConfig,
}

#[derive(Clone)]
pub struct AppState {
    inner: Arc<Inner>,
}

struct Inner {
    store: FileStore,
    config: CoachConfig,
    clock: Arc<dyn Clock>,
    trainees: RwLock<HashMap<String, Arc<Mutex<Coach>>>>,
    /// Held while allocating ids and writing the index.
    registry: Mutex<()>,
}

impl AppState {
    /// Opens the data directory and replays every trainee found in its index.
    pub fn open(data_dir: impl Into<PathBuf>, config: CoachConfig, clock: Arc<dyn Clock>) -> coach_core::Result<Self> {
        let store = FileStore::open(data_dir)?;
        let trainees = store
            .load_all(clock.clone())?
            .into_iter()
            .map(|c| (c.trainee_id().to_string(), Arc::new(Mutex::new(c))))
            .collect();
        Ok(AppState {
            inner: Arc::new(Inner {
                store,
                config,
                clock,
                trainees: RwLock::new(trainees),
                registry: Mutex::new(()),
            }),
        })
    }

    fn trainee(&self, id: &str) -> Result<Arc<Mutex<Coach>>, ApiError> {
        let map = self.inner.trainees.read().map_err(|_| ApiError::Poisoned)?;
        map.get(id).cloned().ok_or_else(|| ApiError::NotFound(id.to_string()))
    }

    /// Runs `f` with the trainee locked.
    fn with<T>(&self, id: &str, f: impl FnOnce(&FileStore, &mut Coach) -> Result<T, ApiError>) -> Result<T, ApiError> {
        let handle = self.trainee(id)?;
        let mut coach = handle.lock().map_err(|_| ApiError::Poisoned)?;
        f(&self.inner.store, &mut coach)
    }

    fn create(&self, name: Option<String>) -> Result<String, ApiError> {
        let _guard = self.inner.registry.lock().map_err(|_| ApiError::Poisoned)?;
        let index = self.inner.store.index()?;
        let mut n = index.len() + 1;
        let id = loop {
            let id = format!("t{n:04}");
            if !index.contains_key(&id) {
                break id;
            }
            n += 1;
        };
        let coach = Coach::new(id.clone(), name, self.inner.config, self.inner.clock.clone())?;
        self.inner.store.create(&coach)?;
        self.inner
            .trainees
            .write()
            .map_err(|_| ApiError::Poisoned)?
            .insert(id.clone(), Arc::new(Mutex::new(coach)));
        Ok(id)
    }
}

#[derive(Debug)]
pub enum ApiError {
    NotFound(String),
    Coach(CoachError),
    BadBody(String),
    Poisoned,
}

impl From<CoachError> for ApiError {
    fn from(e: CoachError) -> Self {
        ApiError::Coach(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, message) = match self {
            ApiError::NotFound(id) => (StatusCode::NOT_FOUND, format!("unknown trainee `{id}`")),
            ApiError::BadBody(m) => (StatusCode::BAD_REQUEST, m),
            ApiError::Poisoned => (StatusCode::INTERNAL_SERVER_ERROR, "trainee lock poisoned".into()),
            ApiError::Coach(e) => {
                let status = match &e {
                    CoachError::WrongPhase { .. }
                    | CoachError::DuplicateReport(_)
                    | CoachError::WeekNotPlanned
                    | CoachError::NoPendingProposal => StatusCode::CONFLICT,
                    CoachError::InvalidInput(_)
                    | CoachError::DegenerateModel(_)
                    | CoachError::ChoiceNotOffered(_)
                    | CoachError::DayOutOfRange(_)
                    | CoachError::RestDay(_)
                    | CoachError::WrongWeek { .. }
                    | CoachError::NoFeasibleGoal(_)
                    | CoachError::UnknownProfile(_) => StatusCode::UNPROCESSABLE_ENTITY,
                    _ => StatusCode::INTERNAL_SERVER_ERROR,
                };
                (status, e.to_string())
            }
        };
        (status, Json(json!({ "error": message }))).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Debug, Default, Deserialize)]
struct CreateTrainee {
    #[serde(default)]
    name: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Created {
    pub trainee_id: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct GoalChosen {
    pub model: StaircaseModel,
    pub week_schedule: WeekSchedule,
    pub projected_weeks: u32,
    pub phase: Phase,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Progress {
    pub done_count: u32,
    pub frequency: u32,
    pub goal_volume: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleView {
    pub trainee_id: String,
    pub phase: Phase,
    pub week_index: u32,
    pub week_closed: bool,
    pub today: u8,
    pub days: Vec<DayView>,
    pub progress: Progress,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pending_proposal: Option<Proposal>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryWeek {
    pub week_index: u32,
    pub goal: WeeklyGoal,
    pub goal_volume: f64,
    pub performed_volume: f64,
    pub capability: f64,
    pub done_count: u32,
    pub scheduled: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_rpe: Option<f64>,
    pub revision: Revision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct History {
    pub trainee_id: String,
    pub phase: Phase,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projected_weeks: Option<u32>,
    pub weeks: Vec<HistoryWeek>,
    /// Goal volume of every closed week, oldest first.
    pub trajectory: Vec<f64>,
}

#[derive(Debug, Deserialize)]
struct Respond {
    answer: Answer,
}

#[derive(Debug, Deserialize)]
struct ScheduleQuery {
    today: Option<u8>,
}

pub fn router(state: AppState) -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/trainees", post(create_trainee))
        .route("/trainees/{id}/assessment", post(assessment))
        .route("/trainees/{id}/goal-choice", post(goal_choice))
        .route("/trainees/{id}/schedule", get(schedule))
        .route("/trainees/{id}/reports", post(report))
        .route("/trainees/{id}/close-week", post(close_week))
        .route("/trainees/{id}/proposal-response", post(proposal_response))
        .route("/trainees/{id}/history", get(history))
        .with_state(state)
}

/// Binds `config.listen` and serves until ctrl-c.
pub async fn run(config: ServiceConfig) -> anyhow::Result<()> {
    let state = AppState::open(&config.data_dir, config.coach, Arc::new(SystemClock))?;
    let listener = TcpListener::bind(config.listen)
        .await
        .map_err(|e| anyhow::anyhow!("cannot listen on {}: {e}", config.listen))?;
    println!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

async fn health() -> Json<serde_json::Value> {
    Json(json!({ "status": "ok" }))
}

async fn create_trainee(State(app): State<AppState>, body: Bytes) -> Result<(StatusCode, Json<Created>), ApiError> {
    let req: CreateTrainee = if body.iter().all(u8::is_ascii_whitespace) {
        CreateTrainee::default()
    } else {
        serde_json::from_slice(&body).map_err(|e| ApiError::BadBody(e.to_string()))?
    };
    let trainee_id = app.create(req.name)?;
    Ok((StatusCode::CREATED, Json(Created { trainee_id })))
}

async fn assessment(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Json(report): Json<AssessmentReport>,
) -> ApiResult<FirstWeekChoiceSet> {
    app.with(&id, |store, coach| {
        store.execute(coach, &Command::Assess(report))?;
        Ok(Json(coach.state().choices.clone().ok_or(CoachError::WeekNotPlanned)?))
    })
}

async fn goal_choice(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Json(goal): Json<WeeklyGoal>,
) -> ApiResult<GoalChosen> {
    app.with(&id, |store, coach| {
        store.execute(coach, &Command::ChooseGoal(goal))?;
        let s = coach.state();
        Ok(Json(GoalChosen {
            model: s.model.ok_or(CoachError::WeekNotPlanned)?,
            week_schedule: s.current_week.clone().ok_or(CoachError::WeekNotPlanned)?,
            projected_weeks: s.projected_weeks.unwrap_or_default(),
            phase: s.phase,
        }))
    })
}

/// Days elapsed since the current week was planned, clamped to the week.
fn default_today(coach: &Coach, now: chrono::DateTime<chrono::Utc>) -> u8 {
    let planned = coach
        .events()
        .iter()
        .rev()
        .find(|e| matches!(e.body, EventBody::WeekPlanned { .. }))
        .map(|e| e.ts);
    planned.map_or(0, |ts| (now - ts).num_days().clamp(0, 6) as u8)
}

pub fn schedule_view(coach: &Coach, today: u8) -> coach_core::Result<ScheduleView> {
    let s = coach.state();
    let week = s.current_week.as_ref().ok_or(CoachError::WeekNotPlanned)?;
    Ok(ScheduleView {
        trainee_id: s.trainee_id.clone(),
        phase: s.phase,
        week_index: week.week_index,
        week_closed: s.week_closed,
        today,
        days: s.rolling_view(today)?,
        progress: Progress {
            done_count: week.done_count(),
            frequency: week.goal.frequency,
            goal_volume: week.goal.volume().0,
        },
        pending_proposal: s.pending_proposal,
    })
}

async fn schedule(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<ScheduleQuery>,
) -> ApiResult<ScheduleView> {
    let now = app.inner.clock.now();
    app.with(&id, |_, coach| {
        let today = q.today.unwrap_or_else(|| default_today(coach, now));
        Ok(Json(schedule_view(coach, today)?))
    })
}

async fn report(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Json(report): Json<DailyReport>,
) -> ApiResult<WeekSchedule> {
    app.with(&id, |store, coach| {
        store.execute(coach, &Command::Report(report))?;
        Ok(Json(coach.state().current_week.clone().ok_or(CoachError::WeekNotPlanned)?))
    })
}

async fn close_week(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<Proposal> {
    app.with(&id, |store, coach| {
        store.execute(coach, &Command::CloseWeek)?;
        Ok(Json(coach.state().last_proposal.ok_or(CoachError::NoPendingProposal)?))
    })
}

async fn proposal_response(
    State(app): State<AppState>,
    Path(id): Path<String>,
    Json(req): Json<Respond>,
) -> ApiResult<WeekSchedule> {
    app.with(&id, |store, coach| {
        store.execute(coach, &Command::Respond(req.answer))?;
        Ok(Json(coach.state().current_week.clone().ok_or(CoachError::WeekNotPlanned)?))
    })
}

pub fn history_of(coach: &Coach) -> History {
    let s = coach.state();
    let weeks: Vec<HistoryWeek> = s
        .history
        .iter()
        .map(|w| HistoryWeek {
            week_index: w.week_index,
            goal: w.goal,
            goal_volume: w.goal.volume().0,
            performed_volume: w.performed_volume(),
            capability: w.capability.0,
            done_count: w.summary.done_count,
            scheduled: w.summary.scheduled,
            mean_rpe: w.summary.mean_rpe,
            revision: w.revision,
        })
        .collect();
    History {
        trainee_id: s.trainee_id.clone(),
        phase: s.phase,
        projected_weeks: s.projected_weeks,
        trajectory: weeks.iter().map(|w| w.goal_volume).collect(),
        weeks,
    }
}

async fn history(State(app): State<AppState>, Path(id): Path<String>) -> ApiResult<History> {
    app.with(&id, |_, coach| Ok(Json(history_of(coach))))
}
