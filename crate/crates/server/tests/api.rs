use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use ods_server::{router, ServerConfig};
use opendatasheets::inference::{infer_resource, InferenceConfig};
use opendatasheets::model::{parse_datasheet, serialize_datasheet, to_canonical_json};
use opendatasheets::policy::parse_policy;
use opendatasheets::validation::validate_datasheet;
use serde_json::{json, Value};
use tower::ServiceExt;

const BOUNDARY: &str = "X-ODS-TEST-BOUNDARY";
const TWELVE: &[u8] = b"a,b\n1,2\n3,4\n";

fn fixture(name: &str) -> String {
    ods_testkit::fixtures::read_fixture(name)
}

fn app() -> Router {
    router(ServerConfig::default())
}

struct Reply {
    status: StatusCode,
    content_type: Option<String>,
    headers: axum::http::HeaderMap,
    body: Vec<u8>,
}

impl Reply {
    fn text(&self) -> &str {
        std::str::from_utf8(&self.body).unwrap()
    }

    fn json(&self) -> Value {
        serde_json::from_slice(&self.body).unwrap()
    }
}

async fn send(app: Router, req: Request<Body>) -> Reply {
    let res = app.oneshot(req).await.unwrap();
    let status = res.status();
    let headers = res.headers().clone();
    let content_type = headers.get(header::CONTENT_TYPE).map(|v| v.to_str().unwrap().to_string());
    let body = res.into_body().collect().await.unwrap().to_bytes().to_vec();
    Reply { status, content_type, headers, body }
}

fn get(uri: &str) -> Request<Body> {
    Request::get(uri).body(Body::empty()).unwrap()
}

fn post_json(uri: &str, body: impl Into<String>) -> Request<Body> {
    Request::post(uri)
        .header(header::CONTENT_TYPE, "application/json")
        .body(Body::from(body.into()))
        .unwrap()
}

fn multipart(field: &str, file_name: &str, content: &[u8]) -> Request<Body> {
    let mut body = format!(
        "--{BOUNDARY}\r\nContent-Disposition: form-data; name=\"{field}\"; filename=\"{file_name}\"\r\n\
         Content-Type: application/octet-stream\r\n\r\n"
    )
    .into_bytes();
    body.extend_from_slice(content);
    body.extend_from_slice(format!("\r\n--{BOUNDARY}--\r\n").as_bytes());
    Request::post("/api/v1/infer")
        .header(header::CONTENT_TYPE, format!("multipart/form-data; boundary={BOUNDARY}"))
        .body(Body::from(body))
        .unwrap()
}

#[tokio::test]
async fn template_defaults_and_rejects_bad_slug() {
    let r = send(app(), get("/api/v1/template?name=air-quality&title=Air%20Quality")).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.content_type.as_deref(), Some("application/json; charset=utf-8"));
    let d = parse_datasheet(r.text()).unwrap();
    assert_eq!((d.name.as_str(), d.title.as_str()), ("air-quality", "Air Quality"));
    assert_eq!(r.text(), serialize_datasheet(&d));

    let r = send(app(), get("/api/v1/template")).await;
    assert_eq!(r.json()["name"], "untitled-dataset");

    let r = send(app(), get("/api/v1/template?name=Bad%20Name")).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(r.json()["code"], "invalid-slug");
}

#[tokio::test]
async fn infer_matches_library_byte_for_byte() {
    let r = send(app(), multipart("file", "data.csv", TWELVE)).await;
    assert_eq!(r.status, StatusCode::OK);
    let expected = infer_resource("data.csv", TWELVE, &InferenceConfig::default()).unwrap().resource;
    assert_eq!(r.text(), to_canonical_json(&expected));
    assert_eq!(r.json()["bytes"], 12);
}

#[tokio::test]
async fn infer_rejects_oversize_and_missing_field() {
    let small = ServerConfig {
        inference: InferenceConfig { max_bytes: 8, ..Default::default() },
        ..Default::default()
    };
    let r = send(router(small), multipart("file", "data.csv", TWELVE)).await;
    assert_eq!(r.status, StatusCode::PAYLOAD_TOO_LARGE);
    assert_eq!(r.json()["code"], "payload-too-large");

    let tiny_body = ServerConfig {
        inference: InferenceConfig { max_bytes: 8, ..Default::default() },
        ..Default::default()
    };
    let big = vec![b'a'; 200 * 1024];
    let r = send(router(tiny_body), multipart("file", "big.csv", &big)).await;
    assert_eq!(r.status, StatusCode::PAYLOAD_TOO_LARGE);

    let r = send(app(), multipart("other", "data.csv", TWELVE)).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(r.json()["code"], "missing-file");
}

#[tokio::test]
async fn validate_reports_and_parse_errors() {
    let listing = fixture("package-sample.json");
    let r = send(app(), post_json("/api/v1/validate", listing.clone())).await;
    assert_eq!(r.status, StatusCode::OK);
    let expected = validate_datasheet(&parse_datasheet(&listing).unwrap());
    assert_eq!(r.text(), to_canonical_json(&expected));

    let invalid = json!({"name": "x", "created": "2020-13-45"}).to_string();
    let r = send(app(), post_json("/api/v1/validate", invalid)).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json()["valid"], false);

    let r = send(app(), post_json("/api/v1/validate", r#"{"name": 3}"#)).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    let body = r.json();
    assert_eq!(body["code"], "wrong-kind");
    assert_eq!(body["issues"][0]["pointer"], "/name");

    let r = send(app(), post_json("/api/v1/validate", "{")).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(r.json()["code"], "malformed-json");
}

#[tokio::test]
async fn evaluate_with_request_and_server_policies() {
    let policy: Value = serde_json::from_str(&fixture("require-consent.policy.json")).unwrap();
    let rai_sample: Value = serde_json::from_str(&fixture("rai-sample.json")).unwrap();
    let package_sample: Value = serde_json::from_str(&fixture("package-sample.json")).unwrap();

    let body = json!({"datasheet": rai_sample, "policy": policy}).to_string();
    let r = send(app(), post_json("/api/v1/evaluate", body)).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json()["decision"], "accept");

    let body = json!({"datasheet": package_sample}).to_string();
    let r = send(app(), post_json("/api/v1/evaluate", body.clone())).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(r.json()["code"], "no-policy");

    let with_policy = ServerConfig {
        policy: Some(parse_policy(&fixture("require-consent.policy.json")).unwrap()),
        ..Default::default()
    };
    let r = send(router(with_policy), post_json("/api/v1/evaluate", body)).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json()["decision"], "review");

    let body = json!({"datasheet": {"name": 1}, "policy": policy}).to_string();
    let r = send(app(), post_json("/api/v1/evaluate", body)).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(r.json()["issues"][0]["pointer"], "/datasheet/name");
}

#[tokio::test]
async fn unknown_routes_are_json_404() {
    for req in [get("/api/v1/nothing"), get("/api/v1/validate"), post_json("/api/v1/template", "{}")] {
        let r = send(app(), req).await;
        assert_eq!(r.status, StatusCode::NOT_FOUND);
        assert_eq!(r.json()["code"], "not-found");
    }
    let r = send(app(), get("/")).await;
    assert_eq!(r.status, StatusCode::OK);
    assert!(r.content_type.as_deref().unwrap().starts_with("text/html"));
}

#[tokio::test]
async fn serves_assets_with_media_types() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<!doctype html><p>wizard</p>").unwrap();
    std::fs::write(dir.path().join("app.js"), "console.log(1)").unwrap();
    let config = || ServerConfig { assets: Some(dir.path().to_path_buf()), ..Default::default() };

    let r = send(router(config()), get("/")).await;
    assert_eq!(r.status, StatusCode::OK);
    assert!(r.content_type.as_deref().unwrap().starts_with("text/html"));
    assert!(r.text().contains("wizard"));

    let r = send(router(config()), get("/app.js")).await;
    assert!(r.content_type.as_deref().unwrap().contains("javascript"));

    let r = send(router(config()), get("/missing.css")).await;
    assert_eq!(r.status, StatusCode::NOT_FOUND);
    assert_eq!(r.json()["code"], "not-found");

    let r = send(router(config()), get("/api/v1/template")).await;
    assert_eq!(r.status, StatusCode::OK);
}

#[tokio::test]
async fn cors_allows_only_local_origins() {
    let preflight = |origin: &str| {
        Request::builder()
            .method("OPTIONS")
            .uri("/api/v1/validate")
            .header(header::ORIGIN, origin)
            .header(header::ACCESS_CONTROL_REQUEST_METHOD, "POST")
            .body(Body::empty())
            .unwrap()
    };
    let r = send(app(), preflight("http://localhost:5173")).await;
    assert_eq!(r.headers.get(header::ACCESS_CONTROL_ALLOW_ORIGIN).unwrap(), "http://localhost:5173");
    let r = send(app(), preflight("https://example.org")).await;
    assert!(r.headers.get(header::ACCESS_CONTROL_ALLOW_ORIGIN).is_none());
}

#[tokio::test]
async fn requests_are_independent() {
    let app = app();
    let first = send(app.clone(), multipart("file", "data.csv", TWELVE)).await;
    let _ = send(app.clone(), multipart("file", "other.tsv", b"x\ty\n1\t2\n")).await;
    let again = send(app.clone(), multipart("file", "data.csv", TWELVE)).await;
    assert_eq!(first.body, again.body);

    let files: Vec<(String, Vec<u8>)> = (0..16)
        .map(|i| (format!("t{i}.csv"), format!("k,v\n{i},{}\n", i * 3).into_bytes()))
        .collect();
    let mut serial = Vec::new();
    for (name, bytes) in &files {
        serial.push(send(app.clone(), multipart("file", name, bytes)).await.body);
    }
    let handles: Vec<_> = files
        .iter()
        .cloned()
        .map(|(name, bytes)| {
            let app = app.clone();
            tokio::spawn(async move { send(app, multipart("file", &name, &bytes)).await.body })
        })
        .collect();
    for (handle, expected) in handles.into_iter().zip(serial) {
        assert_eq!(handle.await.unwrap(), expected);
    }
}

#[tokio::test]
async fn empty_policy_accepts() {
    let package_sample: Value = serde_json::from_str(&fixture("package-sample.json")).unwrap();
    let body = json!({"datasheet": package_sample, "policy": {"name": "empty", "rules": []}}).to_string();
    let r = send(app(), post_json("/api/v1/evaluate", body)).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json(), json!({"decision": "accept", "ruleResults": []}));
}

#[tokio::test]
async fn empty_object_cites_missing_name() {
    let r = send(app(), post_json("/api/v1/validate", "{}")).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    let body = r.json();
    assert_eq!(body["code"], "missing-key");
    assert!(body["message"].as_str().unwrap().contains("name"));
}
