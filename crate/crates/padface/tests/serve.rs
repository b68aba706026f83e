use std::path::Path;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use padface::compile::Assets;
use padface::serve::router;
use padface_core::Corner;
use tower::ServiceExt;

struct Reply {
    status: StatusCode,
    content_type: String,
    cors: Option<String>,
    body: String,
}

async fn send(request: Request<Body>) -> Reply {
    let response = router(Assets::default()).oneshot(request).await.unwrap();
    let status = response.status();
    let header = |name: &str| {
        response
            .headers()
            .get(name)
            .map(|v| v.to_str().unwrap().to_string())
    };
    let content_type = header("content-type").unwrap_or_default();
    let cors = header("access-control-allow-origin");
    let bytes = axum::body::to_bytes(response.into_body(), usize::MAX)
        .await
        .unwrap();
    Reply {
        status,
        content_type,
        cors,
        body: String::from_utf8(bytes.to_vec()).unwrap(),
    }
}

async fn get(uri: &str) -> Reply {
    send(Request::get(uri).body(Body::empty()).unwrap()).await
}

async fn post(uri: &str, body: &str) -> Reply {
    send(
        Request::post(uri)
            .body(Body::from(body.to_string()))
            .unwrap(),
    )
    .await
}

fn values(body: &str) -> Vec<f64> {
    let v: serde_json::Value = serde_json::from_str(body).unwrap();
    v["values"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect()
}

fn corpus(name: &str) -> String {
    std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR"))
            .join("corpus")
            .join(name),
    )
    .unwrap()
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = padface::cli::run(
        std::iter::once("padface").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap())
}

#[tokio::test]
async fn health_and_grid() {
    let r = get("/health").await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.body.trim(), r#"{"ok":true}"#);
    assert_eq!(r.cors.as_deref(), Some("*"));

    let r = get("/grid").await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.body, padface::DEFAULT_GRID_JSON);
}

#[tokio::test]
async fn pose_at_center_is_neutral() {
    let r = get("/pose?p=0&a=0").await;
    assert_eq!(r.status, StatusCode::OK);
    assert!(r.content_type.starts_with("application/json"));
    let v: serde_json::Value = serde_json::from_str(&r.body).unwrap();
    assert_eq!(v["units"].as_array().unwrap().len(), 20);
    assert!(values(&r.body).iter().all(|x| *x == 0.0));
    assert!(r.body.contains("0.000000"));
}

#[tokio::test]
async fn pose_at_every_corner_reproduces_the_grid() {
    let grid = padface::default_grid();
    for corner in Corner::ALL {
        for mode in ["continuous", "discrete"] {
            let r = get(&format!(
                "/pose?p={}&a={}&mode={mode}",
                corner.p(),
                corner.a()
            ))
            .await;
            assert_eq!(r.status, StatusCode::OK);
            assert_eq!(
                values(&r.body),
                grid.pose(corner).values().to_vec(),
                "{corner} {mode}"
            );
        }
    }
}

#[tokio::test]
async fn pose_clamps_unless_strict() {
    let clamped = get("/pose?p=1.5&a=1").await;
    assert_eq!(clamped.status, StatusCode::OK);
    assert_eq!(clamped.body, get("/pose?p=1&a=1").await.body);

    let r = get("/pose?p=1.5&a=1&strict=true").await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    let v: serde_json::Value = serde_json::from_str(&r.body).unwrap();
    assert_eq!(v["error"]["kind"], "RangeError");

    for uri in ["/pose?p=0", "/pose?p=x&a=0", "/pose?p=0&a=0&mode=fuzzy"] {
        let r = get(uri).await;
        assert_eq!(r.status, StatusCode::BAD_REQUEST, "{uri}");
        let v: serde_json::Value = serde_json::from_str(&r.body).unwrap();
        assert_eq!(v["error"]["kind"], "InvalidQuery");
    }
}

#[tokio::test]
async fn compile_matches_the_cli_byte_for_byte() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    for name in [
        "greeting.nms",
        "repeat_request.nms",
        "apology.nms",
        "wait.nms",
        "farewell.nms",
    ] {
        let path = dir.join(name);
        let path = path.to_str().unwrap();
        for (query, flags) in [
            ("", vec![]),
            ("?format=csv", vec!["--format", "csv"]),
            (
                "?mode=discrete&fps=12",
                vec!["--mode", "discrete", "--fps", "12"],
            ),
        ] {
            let r = post(&format!("/compile{query}"), &corpus(name)).await;
            assert_eq!(r.status, StatusCode::OK, "{name}{query}: {}", r.body);
            let mut args = vec!["compile", path];
            args.extend(flags);
            let (code, stdout) = cli(&args);
            assert_eq!(code, 0);
            assert_eq!(r.body, stdout, "{name}{query}");
        }
    }
}

#[tokio::test]
async fn compile_errors_mirror_cli_diagnostics() {
    let r = post("/compile", &corpus("overlap_error.nms")).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    let v: serde_json::Value = serde_json::from_str(&r.body).unwrap();
    assert_eq!(v["error"]["kind"], "OverlapError");
    assert_eq!(v["error"]["line"], 4);
    assert_eq!(v["error"]["col"], 1);

    let r = post("/compile", "duration 1\nemotion 0 1 p=2 a=0\n").await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    let r = post("/compile?lenient=true", "duration 1\nemotion 0 1 p=2 a=0\n").await;
    assert_eq!(r.status, StatusCode::OK);

    let r = post("/compile?format=xml", "duration 1\n").await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    let r = post("/compile?fps=-1", "duration 1\n").await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn identical_requests_give_identical_bodies() {
    let a = post("/compile?format=csv", &corpus("wait.nms")).await;
    let b = post("/compile?format=csv", &corpus("wait.nms")).await;
    assert_eq!(a.body, b.body);
    assert!(a.content_type.starts_with("text/csv"));
    assert_eq!(
        get("/pose?p=0.3&a=-0.7").await.body,
        get("/pose?p=0.3&a=-0.7").await.body
    );
}
