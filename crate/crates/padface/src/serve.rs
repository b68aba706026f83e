//! HTTP API for interactive clients.
//!
//! - `GET /health` → `{"ok":true}`
//! - `GET /grid` → the grid in canonical grid JSON
//! - `GET /pose?p=&a=&mode=&strict=` → `{"units":[...],"values":[...]}`
//! - `POST /compile?fps=&mode=&format=&lenient=` with the annotation as the
//!   body → exactly the bytes `padface compile` writes for the same input
//!
//! Errors are `400` with `{"error":{"kind","message","line","col"}}`. The
//! server holds only the immutable grid, lexicon and policy it started with.
//! `/pose` clamps out-of-range values unless `strict=true`, since pointer
//! input routinely overshoots a pad's edge.

use std::collections::BTreeMap;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use padface_core::{
    pa_to_pose, ControlUnit, Diagnostic, Fixed6, MappingMode, PleasureArousal, Strictness,
};

use crate::compile::{compile, Assets, CompileOptions};
use crate::curves::CurveFormat;
use crate::diagnostics::{error_body, error_value};

type Params = Query<BTreeMap<String, String>>;

struct AppState {
    assets: Assets,
    grid_json: String,
}

pub fn router(assets: Assets) -> Router {
    let state = Arc::new(AppState {
        grid_json: crate::grid_file::save_grid(&assets.grid),
        assets,
    });
    Router::new()
        .route("/health", get(health))
        .route("/grid", get(grid))
        .route("/pose", get(pose))
        .route("/compile", post(compile_handler))
        .with_state(state)
        .layer(axum::middleware::map_response(allow_any_origin))
}

async fn allow_any_origin(mut response: Response) -> Response {
    response.headers_mut().insert(
        header::ACCESS_CONTROL_ALLOW_ORIGIN,
        HeaderValue::from_static("*"),
    );
    response
}

fn body(content_type: &'static str, text: String) -> Response {
    ([(header::CONTENT_TYPE, content_type)], text).into_response()
}

/// A `400` response carrying an `{"error": ...}` body.
struct ApiError(serde_json::Value);

impl ApiError {
    fn query(message: String) -> ApiError {
        ApiError(error_value("InvalidQuery", &message, None))
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let mut text = self.0.to_string();
        text.push('\n');
        (
            StatusCode::BAD_REQUEST,
            [(header::CONTENT_TYPE, "application/json")],
            text,
        )
            .into_response()
    }
}

async fn health() -> Response {
    body("application/json", "{\"ok\":true}\n".to_string())
}

async fn grid(State(state): State<Arc<AppState>>) -> Response {
    body("application/json", state.grid_json.clone())
}

fn number(params: &BTreeMap<String, String>, key: &str) -> Result<Option<f64>, ApiError> {
    match params.get(key) {
        None => Ok(None),
        Some(text) => text
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .map(Some)
            .ok_or_else(|| ApiError::query(format!("`{key}` must be a number, got `{text}`"))),
    }
}

fn flag(params: &BTreeMap<String, String>, key: &str) -> Result<Option<bool>, ApiError> {
    match params.get(key).map(String::as_str) {
        None => Ok(None),
        Some("true" | "1") => Ok(Some(true)),
        Some("false" | "0") => Ok(Some(false)),
        Some(other) => Err(ApiError::query(format!(
            "`{key}` must be true or false, got `{other}`"
        ))),
    }
}

fn mode(params: &BTreeMap<String, String>) -> Result<MappingMode, ApiError> {
    match params.get("mode") {
        None => Ok(MappingMode::default()),
        Some(name) => MappingMode::from_name(name)
            .ok_or_else(|| ApiError::query(format!("unknown mode `{name}`"))),
    }
}

async fn pose(
    State(state): State<Arc<AppState>>,
    Query(params): Params,
) -> Result<Response, ApiError> {
    let p = number(&params, "p")?.ok_or_else(|| ApiError::query("missing `p`".into()))?;
    let a = number(&params, "a")?.ok_or_else(|| ApiError::query("missing `a`".into()))?;
    let mode = mode(&params)?;
    let strictness = if flag(&params, "strict")?.unwrap_or(false) {
        Strictness::Strict
    } else {
        Strictness::Lenient
    };
    let (pa, _) = PleasureArousal::resolve(p, a, strictness)
        .map_err(|e| ApiError(error_value("RangeError", &e.to_string(), None)))?;
    let vector = pa_to_pose(pa, &state.assets.grid, mode);

    let units: Vec<String> = ControlUnit::ALL
        .iter()
        .map(|u| format!("\"{}\"", u.name()))
        .collect();
    let values: Vec<String> = vector
        .values()
        .iter()
        .map(|v| Fixed6(*v).to_string())
        .collect();
    Ok(body(
        "application/json",
        format!(
            "{{\"units\":[{}],\"values\":[{}]}}\n",
            units.join(","),
            values.join(",")
        ),
    ))
}

async fn compile_handler(
    State(state): State<Arc<AppState>>,
    Query(params): Params,
    text: Bytes,
) -> Result<Response, ApiError> {
    let format = match params.get("format") {
        None => CurveFormat::default(),
        Some(name) => CurveFormat::from_name(name)
            .ok_or_else(|| ApiError::query(format!("unknown format `{name}`")))?,
    };
    let options = CompileOptions {
        fps: number(&params, "fps")?,
        mode: mode(&params)?,
        format,
        strictness: if flag(&params, "lenient")?.unwrap_or(false) {
            Strictness::Lenient
        } else {
            Strictness::Strict
        },
    };
    let text = std::str::from_utf8(&text).map_err(|_| {
        let d = Diagnostic::error("SyntaxError", "body is not valid UTF-8".into(), None);
        ApiError(error_body(&d))
    })?;
    let compiled = compile(text, &state.assets, &options)
        .map_err(|failure| ApiError(error_body(failure.first_error())))?;
    Ok(body(options.format.content_type(), compiled.output))
}
