//! Runs an annotation session through the HTTP API in-process: creates a
//! session, fetches each batch, answers it, and polls status. Pass `--serve`
//! to start the real server on port 8080 instead.
//!
//! ```bash
//! cargo run -p ceal --example annotation_server
//! cargo run -p ceal --example annotation_server -- --serve
//! ```

use axum::body::Body;
use axum::http::{header, Request};
use axum::Router;
use ceal::harness::ExperimentSpec;
use ceal::service::{router, serve, AppState};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> Value {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header(header::CONTENT_TYPE, "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .expect("valid request");
    let resp = app.clone().oneshot(req).await.expect("infallible");
    let bytes = resp.into_body().collect().await.expect("body").to_bytes();
    serde_json::from_slice(&bytes).unwrap_or(Value::Null)
}

#[tokio::main]
async fn main() -> ceal::Result<()> {
    if std::env::args().any(|a| a == "--serve") {
        tracing_subscriber::fmt::init();
        return serve(8080, None).await;
    }

    let app = router(AppState::new(), None);
    let spec = json!({
        "dataset": {"kind": "synthetic", "classes": 3, "per_class": 100, "dim": 6},
        "ceal": {"k": 20},
        "variant": "CEAL_EN",
    });
    let created = call(&app, "POST", "/sessions", Some(spec)).await;
    let id = created["session_id"]
        .as_str()
        .expect("session id")
        .to_string();
    println!("session {id}: {}", created["phase"]);

    // the client knows the truth only because the data is synthetic
    let truth_spec = ExperimentSpec::from_toml(
        "[dataset]\nkind = \"synthetic\"\nclasses = 3\nper_class = 100\ndim = 6",
    )?;
    let (pool, _) = truth_spec.prepare(&truth_spec.dataset.load()?, 0)?;

    loop {
        let batch = call(&app, "GET", &format!("/sessions/{id}/batch"), None).await;
        let Some(items) = batch["items"].as_array() else {
            break;
        };
        let labels: Vec<Value> = items
            .iter()
            .map(|item| {
                let sample_id = item["sample_id"].as_u64().expect("id") as usize;
                json!({"sample_id": sample_id, "label": pool.samples()[sample_id].label})
            })
            .collect();
        call(
            &app,
            "POST",
            &format!("/sessions/{id}/labels"),
            Some(json!({ "labels": labels })),
        )
        .await;
        let status = call(&app, "GET", &format!("/sessions/{id}/status"), None).await;
        println!(
            "iteration {:>2}  labeled {:>5.1}%  acc {:.3}  pseudo {:>3}  delta {:.4}  {}",
            status["iteration"],
            100.0 * status["pct_labeled"].as_f64().unwrap_or(0.0),
            status["test_accuracy"].as_f64().unwrap_or(f64::NAN),
            status["pseudo_count"],
            status["delta"].as_f64().unwrap_or(f64::NAN),
            status["phase"]
        );
    }
    Ok(())
}
