use std::collections::BTreeMap;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use vetrank::fixture::{adversarial_panel, AdversarialConfig, OPPOSING_CRITERION};
use vetrank::gsa::Estimator;
use vetrank::ingestion::default_criteria;
use vetrank::pipeline::{self, Pooling};
use vetrank::service::{router, AppState, Dataset};

fn dataset() -> Dataset {
    let panel = adversarial_panel(&AdversarialConfig::default());
    let families: BTreeMap<String, String> = panel[&2012]
        .alternatives()
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), format!("FAM{}", i % 4)))
        .collect();
    Dataset::new(default_criteria(), panel, families).unwrap()
}

async fn call(app: axum::Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let res = app.oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    (status, serde_json::from_slice(&bytes).unwrap_or(Value::Null))
}

#[tokio::test]
async fn unloaded_is_unavailable() {
    let app = router(AppState::empty());
    for (m, uri, body) in [
        ("GET", "/api/meta", None),
        ("GET", "/api/scenarios/summary", None),
        ("POST", "/api/rank", Some(json!({"year": 2012}))),
    ] {
        assert_eq!(call(app.clone(), m, uri, body).await.0, StatusCode::SERVICE_UNAVAILABLE);
    }
}

#[tokio::test]
async fn meta_lists_window_and_criteria() {
    let app = router(AppState::loaded(dataset()));
    let (status, v) = call(app, "GET", "/api/meta", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(v["years"], json!([2012, 2013, 2014, 2015, 2016]));
    let crits = v["criteria"].as_array().unwrap();
    assert_eq!(crits.len(), 8);
    let dirs: Vec<&str> = crits.iter().map(|c| c["direction"].as_str().unwrap()).collect();
    assert_eq!(dirs, ["cost", "cost", "benefit", "cost", "cost", "cost", "cost", "cost"]);
    assert_eq!(v["program_counts"]["2014"], 40);
    assert_eq!(v["families"].as_array().unwrap().len(), 4);
}

#[tokio::test]
async fn rank_defaults_and_scale_invariance() {
    let app = router(AppState::loaded(dataset()));
    let (s, a) = call(
        app.clone(),
        "POST",
        "/api/rank",
        Some(json!({"year": 2013, "relative_weights": [4, 2.5, 1, 1, 3, 2, 1, 1]})),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(a["distance_to_default"], 0.0);
    let (_, b) = call(
        app.clone(),
        "POST",
        "/api/rank",
        Some(json!({"year": 2013, "relative_weights": [8, 5, 2, 2, 6, 4, 2, 2]})),
    )
    .await;
    assert_eq!(a, b);
    let (_, d) = call(app, "POST", "/api/rank", Some(json!({"year": 2013}))).await;
    assert_eq!(a, d);
}

#[tokio::test]
async fn rank_diverges_under_extreme_weight() {
    let app = router(AppState::loaded(dataset()));
    let mut w = vec![1.0; 8];
    w[OPPOSING_CRITERION] = 50.0;
    let (_, v) = call(app, "POST", "/api/rank", Some(json!({"year": 2014, "relative_weights": w}))).await;
    assert!(v["distance_to_default"].as_f64().unwrap() > 0.0);
}

#[tokio::test]
async fn rank_errors() {
    let app = router(AppState::loaded(dataset()));
    let cases = [
        (json!({"year": 1999}), StatusCode::NOT_FOUND),
        (json!({"year": 2013, "relative_weights": [1, 2]}), StatusCode::BAD_REQUEST),
        (json!({"year": 2013, "relative_weights": [1, 1, 1, 1, 1, 1, 1, 0]}), StatusCode::BAD_REQUEST),
        (json!({"year": 2013, "relative_weights": [1, 1, 1, 1, 1, 1, 1, -2]}), StatusCode::BAD_REQUEST),
    ];
    for (body, expected) in cases {
        let (s, v) = call(app.clone(), "POST", "/api/rank", Some(body.clone())).await;
        assert_eq!(s, expected, "{body}");
        assert!(v["error"].is_string());
    }
}

#[tokio::test]
async fn scenarios_match_library() {
    let ds = dataset();
    let expected = ds.scenarios.clone();
    let app = router(AppState::loaded(ds));
    let (s, v) = call(app.clone(), "GET", "/api/scenarios?year=2015", None).await;
    assert_eq!(s, StatusCode::OK);
    let results = v["results"].as_array().unwrap();
    for (r, e) in results.iter().zip(&expected.per_year[&2015]) {
        assert_eq!(r["criterion_id"], e.criterion_id.as_str());
        assert_eq!(r["distance"].as_f64().unwrap(), e.distance);
    }
    let (_, v) = call(app.clone(), "GET", "/api/scenarios/summary", None).await;
    let medians: Vec<f64> = v["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["summary"]["median"].as_f64().unwrap())
        .collect();
    let top = medians.iter().copied().fold(f64::MIN, f64::max);
    assert_eq!(medians[OPPOSING_CRITERION], top);
    assert_eq!(call(app, "GET", "/api/scenarios?year=1999", None).await.0, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn gsa_matches_library_and_reports_samples() {
    let app = router(AppState::loaded(dataset()));
    let (s, v) = call(
        app.clone(),
        "POST",
        "/api/gsa",
        Some(json!({"estimator": "smoother", "compare": true, "focus": "C2"})),
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    let results = v["results"].as_array().unwrap();
    let names: Vec<&str> = results.iter().map(|r| r["scheme"].as_str().unwrap()).collect();
    assert_eq!(names, ["least_C2", "most_C2", "given"]);

    let panel = adversarial_panel(&AdversarialConfig::default());
    let crits = default_criteria();
    let schemes = pipeline::schemes(&crits, pipeline::resolve_weights(&crits, None).unwrap(), Some("C2")).unwrap();
    let lib = pipeline::gsa(&panel, &schemes, Estimator::StateSpaceSmoother, Pooling::Pooled).unwrap();
    for (r, (_, fx)) in results.iter().zip(&lib) {
        let got: Vec<f64> = r["effects"]["eta_sq"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
        assert_eq!(got, fx.eta_sq);
    }
    assert_eq!(results[2]["effects"]["diagnostics"][0]["samples"], 200);

    let (s, v) = call(app.clone(), "POST", "/api/gsa", Some(json!({"pooled": false}))).await;
    assert_eq!(s, StatusCode::OK);
    let results = v["results"].as_array().unwrap();
    assert_eq!(results.len(), 5);
    assert_eq!(results[0]["scheme"], "given@2012");
    assert_eq!(results[0]["effects"]["diagnostics"][0]["samples"], 40);
}

#[tokio::test]
async fn gsa_misuse_is_bad_request() {
    let app = router(AppState::loaded(dataset()));
    for body in [
        json!({"estimator": "binned", "bins": 150}),
        json!({"estimator": "smoother", "bins": 4}),
        json!({"compare": true}),
        json!({"compare": true, "focus": "C99"}),
    ] {
        let (s, _) = call(app.clone(), "POST", "/api/gsa", Some(body.clone())).await;
        assert_eq!(s, StatusCode::BAD_REQUEST, "{body}");
    }
    let (s, _) = call(app, "POST", "/api/gsa", Some(json!({"year": 1999}))).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn cors_headers_present() {
    let app = router(AppState::loaded(dataset()));
    let res = app
        .oneshot(
            Request::builder()
                .uri("/api/meta")
                .header("origin", "http://localhost:5173")
                .body(Body::empty())
                .unwrap(),
        )
        .await
        .unwrap();
    assert!(res.headers().contains_key("access-control-allow-origin"));
}
