//! JSON-over-HTTP access to rankings and sensitivity results.
//!
//! The dataset is immutable once loaded. Until it is, every endpoint answers
//! 503. Scenario results do not depend on weights and are computed once at
//! load time; rankings and main effects are computed per request.

use std::collections::BTreeMap;
use std::net::SocketAddr;
use std::sync::{Arc, OnceLock};

use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tower_http::cors::CorsLayer;

use crate::error::Error;
use crate::gsa::{Estimator, MainEffects};
use crate::model::{CriterionSpec, PerformanceMatrix, RankingResult, WeightVector};
use crate::pipeline::{self, Pooling};
use crate::rankcompare::kendall_tau_distance;
use crate::scenario::{scenario_panel, CriterionDistribution, ScenarioPanel};
use crate::topsis;

/// Everything the endpoints read, fixed at load time.
#[derive(Debug)]
pub struct Dataset {
    pub criteria: Vec<CriterionSpec>,
    pub matrices: BTreeMap<i32, PerformanceMatrix>,
    pub families: BTreeMap<String, String>,
    pub default_weights: WeightVector,
    pub default_rankings: BTreeMap<i32, RankingResult>,
    pub scenarios: ScenarioPanel,
}

impl Dataset {
    pub fn new(
        criteria: Vec<CriterionSpec>,
        matrices: BTreeMap<i32, PerformanceMatrix>,
        families: BTreeMap<String, String>,
    ) -> crate::Result<Self> {
        let default_weights = pipeline::resolve_weights(&criteria, None)?;
        let default_rankings = pipeline::rank_years(&matrices, &default_weights)?;
        let scenarios = scenario_panel(&matrices)?;
        Ok(Self {
            criteria,
            matrices,
            families,
            default_weights,
            default_rankings,
            scenarios,
        })
    }
}

#[derive(Debug, Default)]
pub struct AppState {
    dataset: OnceLock<Dataset>,
}

impl AppState {
    pub fn empty() -> Arc<Self> {
        Arc::new(Self::default())
    }

    pub fn loaded(dataset: Dataset) -> Arc<Self> {
        let state = Self::default();
        state.dataset.set(dataset).expect("fresh state");
        Arc::new(state)
    }

    /// Installs the dataset; later calls are ignored and return `false`.
    pub fn load(&self, dataset: Dataset) -> bool {
        self.dataset.set(dataset).is_ok()
    }

    fn get(&self) -> Result<&Dataset, ApiError> {
        self.dataset.get().ok_or(ApiError(
            StatusCode::SERVICE_UNAVAILABLE,
            "dataset not loaded yet".into(),
        ))
    }
}

#[derive(Debug)]
struct ApiError(StatusCode, String);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Validation(_)
            | Error::NonPositiveWeight { .. }
            | Error::WeightCount { .. }
            | Error::WeightList(_)
            | Error::WeightSum { .. }
            | Error::TooFewPoints { .. }
            | Error::TooFewCriteria { .. }
            | Error::ZeroOutputVariance
            | Error::UnknownCriterion(_)
            | Error::IndexOutOfRange { .. } => StatusCode::BAD_REQUEST,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError(status, e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.0, Json(json!({ "error": self.1 }))).into_response()
    }
}

fn unknown_year(year: i32) -> ApiError {
    ApiError(StatusCode::NOT_FOUND, format!("year {year} is not in the window"))
}

type Shared = State<Arc<AppState>>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/meta", get(meta))
        .route("/api/rank", post(rank))
        .route("/api/scenarios", get(scenarios))
        .route("/api/scenarios/summary", get(scenario_summary))
        .route("/api/gsa", post(gsa))
        .layer(CorsLayer::permissive())
        .with_state(state)
}

/// Binds `addr`, runs `load` on a blocking thread and serves until the
/// process is stopped. Requests made before loading finishes get 503.
pub async fn serve(
    addr: SocketAddr,
    load: impl FnOnce() -> crate::Result<Dataset> + Send + 'static,
) -> std::io::Result<()> {
    let state = AppState::empty();
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    let loader_state = state.clone();
    tokio::task::spawn_blocking(move || match load() {
        Ok(ds) => {
            log::info!("dataset loaded: years {:?}", ds.matrices.keys().collect::<Vec<_>>());
            loader_state.load(ds);
        }
        Err(e) => log::error!("dataset failed to load: {e}"),
    });
    axum::serve(listener, router(state)).await
}

#[derive(Serialize)]
struct Meta<'a> {
    years: Vec<i32>,
    criteria: &'a [CriterionSpec],
    programs: Vec<&'a str>,
    families: Vec<&'a str>,
    program_families: &'a BTreeMap<String, String>,
    program_counts: BTreeMap<i32, usize>,
}

async fn meta(State(state): Shared) -> Result<Response, ApiError> {
    let ds = state.get()?;
    let mut programs: Vec<&str> = ds
        .matrices
        .values()
        .flat_map(|m| m.alternatives().iter().map(String::as_str))
        .collect();
    programs.sort_unstable();
    programs.dedup();
    let mut families: Vec<&str> = programs
        .iter()
        .filter_map(|p| ds.families.get(*p).map(String::as_str))
        .collect();
    families.sort_unstable();
    families.dedup();
    Ok(Json(Meta {
        years: ds.matrices.keys().copied().collect(),
        criteria: &ds.criteria,
        programs,
        families,
        program_families: &ds.families,
        program_counts: ds.matrices.iter().map(|(y, m)| (*y, m.m())).collect(),
    })
    .into_response())
}

#[derive(Debug, Deserialize)]
pub struct RankRequest {
    pub year: i32,
    /// Defaults to the criteria's relative weights.
    pub relative_weights: Option<Vec<f64>>,
}

#[derive(Debug, Serialize)]
pub struct RankResponse {
    pub year: i32,
    pub weights: WeightVector,
    pub ranking: RankingResult,
    /// Kendall-tau distance to the ranking under the default weights.
    pub distance_to_default: f64,
}

async fn rank(State(state): Shared, Json(req): Json<RankRequest>) -> Result<Response, ApiError> {
    let ds = state.get()?;
    let matrix = ds.matrices.get(&req.year).ok_or_else(|| unknown_year(req.year))?;
    let weights = pipeline::resolve_weights(&ds.criteria, req.relative_weights.as_deref())?;
    let ranking = topsis::rank(matrix, &weights)?;
    let distance_to_default =
        kendall_tau_distance(&ranking.order(), &ds.default_rankings[&req.year].order())?;
    Ok(Json(RankResponse {
        year: req.year,
        weights,
        ranking,
        distance_to_default,
    })
    .into_response())
}

#[derive(Debug, Deserialize)]
struct YearQuery {
    year: i32,
}

async fn scenarios(State(state): Shared, Query(q): Query<YearQuery>) -> Result<Response, ApiError> {
    let ds = state.get()?;
    let results = ds.scenarios.per_year.get(&q.year).ok_or_else(|| unknown_year(q.year))?;
    Ok(Json(json!({ "year": q.year, "results": results })).into_response())
}

async fn scenario_summary(State(state): Shared) -> Result<Response, ApiError> {
    let ds = state.get()?;
    let criteria: &[CriterionDistribution] = &ds.scenarios.criteria;
    Ok(Json(json!({ "criteria": criteria })).into_response())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorName {
    #[default]
    Binned,
    Smoother,
}

#[derive(Debug, Deserialize)]
pub struct GsaRequest {
    pub relative_weights: Option<Vec<f64>>,
    #[serde(default)]
    pub estimator: EstimatorName,
    /// Bin count for the binned estimator.
    pub bins: Option<usize>,
    #[serde(default = "default_true")]
    pub pooled: bool,
    /// Restrict to one year.
    pub year: Option<i32>,
    /// Also evaluate least/most weighted schemes for `focus`.
    #[serde(default)]
    pub compare: bool,
    pub focus: Option<String>,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Serialize)]
pub struct GsaScheme {
    pub scheme: String,
    pub effects: MainEffects,
    /// Sum of the clamped estimates; main effects need not add up to one.
    pub eta_sq_sum: f64,
}

async fn gsa(State(state): Shared, Json(req): Json<GsaRequest>) -> Result<Response, ApiError> {
    let ds = state.get()?;
    let estimator = match (req.estimator, req.bins) {
        (EstimatorName::Binned, bins) => Estimator::Binned { bins },
        (EstimatorName::Smoother, None) => Estimator::StateSpaceSmoother,
        (EstimatorName::Smoother, Some(_)) => {
            return Err(ApiError(
                StatusCode::BAD_REQUEST,
                "bins only applies to the binned estimator".into(),
            ))
        }
    };
    let matrices = match req.year {
        Some(y) => {
            let m = ds.matrices.get(&y).ok_or_else(|| unknown_year(y))?;
            BTreeMap::from([(y, m.clone())])
        }
        None => ds.matrices.clone(),
    };
    let given = pipeline::resolve_weights(&ds.criteria, req.relative_weights.as_deref())?;
    let focus = match (req.compare, &req.focus) {
        (false, _) => None,
        (true, Some(f)) => Some(f.as_str()),
        (true, None) => {
            return Err(ApiError(
                StatusCode::BAD_REQUEST,
                "compare needs a focus criterion".into(),
            ))
        }
    };
    let schemes = pipeline::schemes(&ds.criteria, given, focus)?;
    let pooling = if req.pooled {
        Pooling::Pooled
    } else {
        Pooling::PerYear
    };
    let results = tokio::task::spawn_blocking(move || {
        pipeline::gsa(&matrices, &schemes, estimator, pooling)
    })
    .await
    .map_err(|e| ApiError(StatusCode::INTERNAL_SERVER_ERROR, e.to_string()))??;
    let results: Vec<GsaScheme> = results
        .into_iter()
        .map(|(scheme, effects)| GsaScheme {
            scheme,
            eta_sq_sum: effects.eta_sq.iter().sum(),
            effects,
        })
        .collect();
    Ok(Json(json!({ "results": results })).into_response())
}
