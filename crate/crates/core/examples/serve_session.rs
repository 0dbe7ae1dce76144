// A mutation session against the HTTP service, driven in-process.

use axum::body::Body;
use axum::http::Request;
use clusterlab::serve::{router, AppState, ServeConfig};
use http_body_util::BodyExt;
use tower::ServiceExt;

async fn call(app: &axum::Router, method: &str, uri: &str, body: &str) -> Result<(u16, serde_json::Value), Box<dyn std::error::Error>> {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))?;
    let resp = app.clone().oneshot(req).await?;
    let status = resp.status().as_u16();
    let bytes = resp.into_body().collect().await?.to_bytes();
    let json = if bytes.is_empty() { serde_json::Value::Null } else { serde_json::from_slice(&bytes)? };
    Ok((status, json))
}

async fn session() -> Result<(), Box<dyn std::error::Error>> {
    let app = router(AppState::new(&ServeConfig::default()));
    let (_, created) = call(&app, "POST", "/session", r#"{"family":"rank2","a":1}"#).await?;
    let id = created["id"].as_str().unwrap_or_default().to_string();
    for k in [1, 2, 1] {
        let (_, v) = call(&app, "POST", &format!("/session/{id}/mutate"), &format!("{{\"k\":{k}}}")).await?;
        println!("mutate {k}: new variable {}, cluster {}", v["new_variable"], v["variables"]);
    }
    let (_, v) = call(&app, "POST", &format!("/session/{id}/undo"), "").await?;
    println!("undo: cluster {}, history {}", v["variables"], v["history"]);

    let (_, created) = call(&app, "POST", "/session", r#"{"family":"unitriangular","n":3}"#).await?;
    let id = created["id"].as_str().unwrap_or_default().to_string();
    let (status, body) = call(&app, "POST", &format!("/session/{id}/mutate"), r#"{"k":6}"#).await?;
    println!("frozen vertex: {status} {}", body["error"]);
    Ok(())
}

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let rt = tokio::runtime::Builder::new_current_thread().enable_all().build()?;
    rt.block_on(session())
}

#[allow(dead_code)]
fn main() {
    run().unwrap();
}
