//! Mutation sessions over HTTP must show exactly what the library computes.

use axum::body::Body;
use axum::http::{Request, StatusCode};
use clusterlab::builders::{build_rank2, build_unitriangular_seed};
use clusterlab::serve::{router, AppState, ServeConfig, SessionView};
use clusterlab::Seed;
use http_body_util::BodyExt;
use tower::ServiceExt;

async fn send(app: &axum::Router, method: &str, uri: &str, body: &str) -> (StatusCode, Vec<u8>) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    (status, resp.into_body().collect().await.unwrap().to_bytes().to_vec())
}

async fn create(app: &axum::Router, body: &str) -> String {
    let (status, bytes) = send(app, "POST", "/session", body).await;
    assert_eq!(status, StatusCode::CREATED);
    let v: serde_json::Value = serde_json::from_slice(&bytes).unwrap();
    v["id"].as_str().unwrap().to_string()
}

fn shown(seed: &Seed) -> Vec<String> {
    seed.vars().iter().map(|v| v.to_string()).collect()
}

#[tokio::test]
async fn click_sequence_matches_library() {
    let app = router(AppState::new(&ServeConfig::default()));
    let id = create(&app, r#"{"family":"rank2","a":1}"#).await;

    let mut history = vec![build_rank2(1).unwrap()];
    for (action, k) in [("mutate", 1), ("mutate", 2), ("undo", 0), ("mutate", 2)] {
        let (status, bytes) = if action == "mutate" {
            history.push(history.last().unwrap().mutate(k - 1).unwrap());
            send(&app, "POST", &format!("/session/{id}/mutate"), &format!("{{\"k\":{k}}}")).await
        } else {
            history.pop();
            send(&app, "POST", &format!("/session/{id}/undo"), "").await
        };
        assert_eq!(status, StatusCode::OK, "{action} {k}");
        let view: SessionView = serde_json::from_slice(&bytes).unwrap();
        let expected = history.last().unwrap();
        assert_eq!(view.variables, shown(expected), "after {action} {k}");
        assert_eq!(Seed::from_json(&view.seed).unwrap(), *expected);
        assert_eq!(view.history, history.len() - 1, "undoable steps");
    }
}

#[tokio::test]
async fn frozen_vertices_reject_mutation() {
    let app = router(AppState::new(&ServeConfig::default()));
    let id = create(&app, r#"{"family":"unitriangular","n":3}"#).await;
    let (_, bytes) = send(&app, "GET", &format!("/session/{id}"), "").await;
    let view: SessionView = serde_json::from_slice(&bytes).unwrap();
    let seed = build_unitriangular_seed(3).unwrap().seed;
    assert_eq!(view.variables, shown(&seed));
    for v in 0..seed.n() {
        let frozen = seed.quiver().is_frozen(v);
        assert_eq!(view.frozen[v], frozen);
        let (status, _) = send(&app, "POST", &format!("/session/{id}/mutate"), &format!("{{\"k\":{}}}", v + 1)).await;
        let expected = if frozen { StatusCode::CONFLICT } else { StatusCode::OK };
        assert_eq!(status, expected, "vertex {}", v + 1);
        if !frozen {
            send(&app, "POST", &format!("/session/{id}/undo"), "").await;
        }
    }
}
