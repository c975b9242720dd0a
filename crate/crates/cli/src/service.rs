//! Stateless JSON-over-HTTP facade. Every request carries the whole
//! arrangement; nothing is kept between requests.

use std::collections::HashMap;

use axum::extract::Query;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use mbc_core::json::{canonical, graph_to_json};
use mbc_core::moves::{verify, MoveError, MovePoint, MoveSpec};
use mbc_core::{build_graph, validate_with, Arrangement, Axis, ValidateOptions};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::render::render_svg;

fn json_response(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error(status: StatusCode, message: impl Into<String>) -> Response {
    json_response(status, canonical(&json!({"error": message.into()})))
}

fn parse(body: &str) -> Result<Arrangement, Response> {
    Arrangement::from_json(body).map_err(|e| error(StatusCode::BAD_REQUEST, e.to_string()))
}

/// 422 with the validation report when the arrangement is invalid.
fn require_valid(arr: &Arrangement) -> Result<(), Response> {
    let report = mbc_core::validate(arr);
    if report.valid {
        Ok(())
    } else {
        let body = canonical(&serde_json::to_value(&report).unwrap_or(Value::Null));
        Err(json_response(StatusCode::UNPROCESSABLE_ENTITY, body))
    }
}

fn move_status(e: &MoveError) -> StatusCode {
    match e {
        MoveError::InvalidArrangement(_) => StatusCode::UNPROCESSABLE_ENTITY,
        MoveError::UnknownCircle(_) | MoveError::UnknownCase(_) => StatusCode::BAD_REQUEST,
        _ => StatusCode::CONFLICT,
    }
}

async fn validate_handler(Query(q): Query<HashMap<String, String>>, body: String) -> Response {
    let arr = match parse(&body) {
        Ok(a) => a,
        Err(r) => return r,
    };
    let lenient = q.get("lenient").is_some_and(|v| v == "true" || v == "1");
    let report = validate_with(&arr, ValidateOptions { lenient });
    json_response(StatusCode::OK, canonical(&serde_json::to_value(&report).unwrap_or(Value::Null)))
}

async fn graph_handler(Query(q): Query<HashMap<String, String>>, body: String) -> Response {
    let axis: Axis = match q.get("axis").map(String::as_str).unwrap_or("x").parse() {
        Ok(a) => a,
        Err(e) => return error(StatusCode::BAD_REQUEST, e),
    };
    let arr = match parse(&body) {
        Ok(a) => a,
        Err(r) => return r,
    };
    if let Err(r) = require_valid(&arr) {
        return r;
    }
    match build_graph(&arr, axis) {
        Ok(g) => json_response(StatusCode::OK, graph_to_json(&g)),
        Err(e) => error(StatusCode::UNPROCESSABLE_ENTITY, e.to_string()),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MoveRequest {
    arrangement: Value,
    #[serde(rename = "move")]
    mv: MoveSpec,
    /// Accepted for clients that pick one axis; reports always carry both.
    #[serde(default)]
    #[allow(dead_code)]
    axis: Option<String>,
}

fn run_move(body: &str) -> Result<(Arrangement, mbc_core::moves::MoveReport), Response> {
    let req: MoveRequest = serde_json::from_str(body).map_err(|e| error(StatusCode::BAD_REQUEST, e.to_string()))?;
    let arr = parse(&req.arrangement.to_string())?;
    require_valid(&arr)?;
    let p = MovePoint::resolve(&arr, &req.mv.circle, req.mv.angle).map_err(|e| error(move_status(&e), e.to_string()))?;
    let rep = verify(&arr, &p, req.mv.radius).map_err(|e| error(move_status(&e), e.to_string()))?;
    Ok((arr, rep))
}

async fn preview_handler(body: String) -> Response {
    match run_move(&body) {
        Ok((_, rep)) => {
            let svg = render_svg(&rep.arrangement);
            let body = json!({
                "proposed": rep.arrangement.circles.last().map(|c| json!({
                    "id": c.id, "cx": c.center.x, "cy": c.center.y, "r": c.radius,
                })),
                "report": rep.to_json_value(),
                "render": svg,
            });
            json_response(StatusCode::OK, canonical(&body))
        }
        Err(r) => r,
    }
}

async fn commit_handler(body: String) -> Response {
    match run_move(&body) {
        Ok((_, rep)) => json_response(StatusCode::OK, rep.arrangement.to_json()),
        Err(r) => r,
    }
}

fn svg_response(arr: &Arrangement) -> Response {
    (StatusCode::OK, [(header::CONTENT_TYPE, "image/svg+xml")], render_svg(arr)).into_response()
}

/// GET takes the arrangement URL-encoded in `arrangement`.
async fn render_get(Query(q): Query<HashMap<String, String>>) -> Response {
    let Some(text) = q.get("arrangement") else {
        return error(StatusCode::BAD_REQUEST, "missing arrangement parameter");
    };
    match parse(text) {
        Ok(arr) => svg_response(&arr),
        Err(r) => r,
    }
}

async fn render_post(body: String) -> Response {
    match parse(&body) {
        Ok(arr) => svg_response(&arr),
        Err(r) => r,
    }
}

pub fn router() -> Router {
    Router::new()
        .route("/api/validate", post(validate_handler))
        .route("/api/graph", post(graph_handler))
        .route("/api/move/preview", post(preview_handler))
        .route("/api/move/commit", post(commit_handler))
        .route("/api/render", get(render_get).post(render_post))
}

pub async fn serve(host: &str, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router()).await
}
