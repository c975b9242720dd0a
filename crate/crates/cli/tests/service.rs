use std::path::PathBuf;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn data(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    std::fs::read_to_string(p).unwrap()
}

async fn call(method: &str, uri: &str, body: String) -> (StatusCode, String, String) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body))
        .unwrap();
    let resp = mbc_cli::service::router().oneshot(req).await.unwrap();
    let status = resp.status();
    let ctype = resp
        .headers()
        .get("content-type")
        .map(|v| v.to_str().unwrap().to_owned())
        .unwrap_or_default();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, ctype, String::from_utf8(bytes.to_vec()).unwrap())
}

fn move_body(arr: &str, circle: &str, angle: f64, radius: Option<f64>) -> String {
    let arr: Value = serde_json::from_str(arr).unwrap();
    json!({"arrangement": arr, "move": {"circle": circle, "angle": angle, "radius": radius}}).to_string()
}

#[tokio::test]
async fn validate_endpoint() {
    let (s, _, body) = call("POST", "/api/validate", data("disk.json")).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(body, r#"{"valid":true}"#);
    let (s, _, _) = call("POST", "/api/validate", "{not json".into()).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, _, body) = call("POST", "/api/validate", data("tangent.json")).await;
    assert_eq!(s, StatusCode::OK);
    let v: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(v["violations"][0]["clause"], "transversal");
}

#[tokio::test]
async fn graph_endpoint_matches_core() {
    let (s, ctype, body) = call("POST", "/api/graph?axis=x", data("annulus.json")).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(ctype, "application/json");
    let arr = mbc_core::Arrangement::from_json(&data("annulus.json")).unwrap();
    let g = mbc_core::build_graph(&arr, mbc_core::Axis::X).unwrap();
    assert_eq!(body, mbc_core::json::graph_to_json(&g));
    assert_eq!(g.vertices.len(), 4);
    let (s, _, body) = call("POST", "/api/graph?axis=x", data("disk.json")).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(serde_json::from_str::<Value>(&body).unwrap()["edges"].as_array().unwrap().len(), 1);
    let (s, _, _) = call("POST", "/api/graph?axis=x", data("tangent.json")).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, _, _) = call("POST", "/api/graph?axis=q", data("disk.json")).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn preview_and_commit() {
    let body = move_body(&data("disk.json"), "c0", 0.0, None);
    let (s, _, text) = call("POST", "/api/move/preview", body.clone()).await;
    assert_eq!(s, StatusCode::OK);
    let v: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["report"]["axes"][0]["case"], "2.2.1");
    assert_eq!(v["report"]["verdict"], "ok");
    assert!(v["render"].as_str().unwrap().contains("<svg"));
    assert_eq!(v["proposed"]["id"], "c1");

    let (s, _, text) = call("POST", "/api/move/commit", body).await;
    assert_eq!(s, StatusCode::OK);
    let arr = mbc_core::Arrangement::from_json(&text).unwrap();
    assert_eq!(arr.circles.len(), 2);
}

#[tokio::test]
async fn move_errors() {
    let (s, _, _) = call("POST", "/api/move/preview", move_body(&data("disk.json"), "c0", 0.0, Some(5.0))).await;
    assert_eq!(s, StatusCode::CONFLICT);
    let (s, _, _) = call("POST", "/api/move/commit", move_body(&data("tangent.json"), "c0", 0.0, None)).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    let (s, _, _) = call("POST", "/api/move/preview", "{\"move\": 1}".into()).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, _, _) = call("POST", "/api/move/preview", move_body(&data("disk.json"), "c9", 0.0, None)).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn render_endpoint() {
    let q: String = data("lens.json")
        .trim()
        .bytes()
        .map(|b| match b {
            b'A'..=b'Z' | b'a'..=b'z' | b'0'..=b'9' | b'-' | b'_' | b'.' => (b as char).to_string(),
            _ => format!("%{b:02X}"),
        })
        .collect();
    let (s, ctype, body) = call("GET", &format!("/api/render?arrangement={q}"), String::new()).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(ctype, "image/svg+xml");
    assert!(body.contains("<svg"));
    let (s, _, _) = call("GET", "/api/render", String::new()).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn preview_matches_cli_verify() {
    let (s, _, text) = call("POST", "/api/move/preview", move_body(&data("annulus.json"), "c1", 0.0, None)).await;
    assert_eq!(s, StatusCode::OK);
    let served: Value = serde_json::from_str(&text).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let (arr, moves) = (dir.path().join("a.json"), dir.path().join("m.json"));
    std::fs::write(&arr, data("annulus.json")).unwrap();
    std::fs::write(&moves, r#"{"moves":[{"circle":"c1","angle":0.0}]}"#).unwrap();
    let mut out = Vec::new();
    let code = mbc_cli::run(
        ["mbc", "verify", arr.to_str().unwrap(), "--moves", moves.to_str().unwrap()],
        &mut out,
        &mut Vec::new(),
    );
    assert_eq!(code, 0);
    let cli: Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(cli["steps"][0], served["report"]);
}

#[tokio::test]
async fn replay_is_stateless() {
    let body = move_body(&data("annulus.json"), "c0", 1.0, None);
    let first = call("POST", "/api/move/preview", body.clone()).await;
    let _ = call("POST", "/api/move/commit", move_body(&data("disk.json"), "c0", 0.0, None)).await;
    let again = call("POST", "/api/move/preview", body).await;
    assert_eq!(first, again);
}
